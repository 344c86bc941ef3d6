use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("vector of length {found} where {expected} was expected")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("derivation has no image for generator {0}")]
    MissingImage(String),

    #[error("unsupported number of points n = {n} (supported: 1..={max})")]
    UnsupportedPointCount { n: usize, max: usize },

    #[error("{what} is not available for model {model}")]
    UnsupportedModel { model: String, what: String },

    #[error("resource guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("negative multiplicity {value} for V_{k}: input is not SL2-stable")]
    NegativeMultiplicity { k: usize, value: i64 },

    #[error("subspace is not spanned by weight-homogeneous vectors")]
    NotWeightSplit,

    #[error("class {name} is undefined for n = {n}")]
    ClassUndefined { name: String, n: usize },

    #[error("class {name} is not a cocycle")]
    NotCocycle { name: String },

    #[error("monomial {0} is not in normal form")]
    NotNormalForm(String),

    #[error("subcomplex is not closed under the differential at ({p}, {q})")]
    NotSubcomplex { p: usize, q: usize },

    #[error("invariant dimension {kernel} disagrees with the Reynolds trace average {trace} at ({p}, {q})")]
    ReynoldsMismatch { p: usize, q: usize, kernel: usize, trace: String },

    #[error("no candidate exponent reproduces the cohomology for n = {0}")]
    NoMatchingExponent(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),
}
