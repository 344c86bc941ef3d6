pub mod cache;
pub mod classes;
pub mod cohomology;
pub mod equivariance;
pub mod error;
pub mod exterior;
pub mod linalg;
pub mod model;
pub mod partitions;
pub mod perm;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use exterior::{Generator, Monomial, MultiVector};
pub use model::{KrizModel, ModelId};
pub use rational::Rational;
pub use cache::DiskCache;
pub use classes::{ClassName, NamedClass};
pub use cohomology::{GrothHodgePoly, HodgePoly, Polynomial, Space};
pub use equivariance::{IrrepMultiplicities, WeightDecomposition};
pub use partitions::{Mark, MarkedPartition};
pub use verify::{Check, Suite, VerificationReport};
