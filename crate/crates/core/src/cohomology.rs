//! Cohomology of `A`, `B` and their invariant subcomplexes, slice by slice,
//! and the Betti, Hodge and Grothendieck-ring Hodge polynomials assembled
//! from it, together with their closed forms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::equivariance::{generators, permutation_matrix, restrict_map, weight_decomposition_of, IrrepMultiplicities, WeightDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{reduce, Echelon, SparseMatrix, SparseVec, SubspaceBasis};
use crate::model::{KrizModel, ModelId};

/// Cohomology of one bidegree, as subspaces of `A^{p,q}`.
#[derive(Clone, Debug)]
pub struct CohomologySlice {
    pub model: ModelId,
    pub p: usize,
    pub q: usize,
    pub dim: usize,
    pub cocycles: SubspaceBasis,
    pub coboundary_space: SubspaceBasis,
    /// Cocycles reduced modulo coboundaries, independent modulo them.
    pub representatives: Vec<SparseVec>,
}

impl CohomologySlice {
    pub fn is_coboundary(&self, v: &SparseVec) -> bool {
        self.coboundary_space.contains(v)
    }

    pub fn is_cocycle(&self, v: &SparseVec) -> bool {
        self.cocycles.contains(v)
    }

    /// Weight dimensions of the cohomology (cocycles minus coboundaries).
    pub fn weights(&self, model: &KrizModel) -> Result<WeightDecomposition> {
        let basis = model.basis(self.p, self.q);
        let z = weight_decomposition_of(&basis, &self.cocycles)?;
        let b = weight_decomposition_of(&basis, &self.coboundary_space)?;
        let dims = z.dims.iter().map(|(&a, &d)| (a, d - b.get(a)));
        Ok(WeightDecomposition::from_dims(dims))
    }

    pub fn irreps(&self, model: &KrizModel) -> Result<IrrepMultiplicities> {
        self.weights(model)?.irrep_multiplicities()
    }
}

/// `H^{p,q}` of the subcomplex `which` (one of `A`, `B`, `D`, `UA`, `UB`).
pub fn cohomology_slice(model: &KrizModel, which: ModelId, p: usize, q: usize) -> Result<CohomologySlice> {
    let ambient = model.basis(p, q).dim();
    let space = model.subspace(which, p, q)?;
    let cocycles = if q == 0 || space.dim() == 0 {
        (*space).clone()
    } else {
        let target = model.subspace(which, p + 2, q - 1)?;
        let d = model.differential_matrix(p, q);
        let restricted = restrict_map(&d, &space, &target).ok_or(Error::NotSubcomplex { p, q })?;
        let kernel = reduce(&restricted).kernel;
        let lifted: Vec<SparseVec> = kernel.vectors().iter().map(|c| space.combine(c)).collect();
        SubspaceBasis::from_vectors(ambient, lifted)?
    };
    let coboundary_space = if p >= 2 && q + 1 < model.n() {
        let source = model.subspace(which, p - 2, q + 1)?;
        let d = model.differential_matrix(p - 2, q + 1);
        let images: Vec<SparseVec> = source
            .vectors()
            .par_iter()
            .map(|v| d.mul_vec(v).expect("dimensions agree"))
            .collect();
        SubspaceBasis::from_vectors(ambient, images)?
    } else {
        SubspaceBasis::zero(ambient)
    };
    let mut ech = Echelon::new();
    for b in coboundary_space.vectors() {
        ech.insert(b.clone());
    }
    let mut representatives = Vec::new();
    for z in cocycles.vectors() {
        let r = coboundary_space.reduce(z);
        if ech.insert(r.clone()) {
            representatives.push(r);
        }
    }
    let dim = cocycles.dim() - coboundary_space.dim();
    debug_assert_eq!(dim, representatives.len());
    Ok(CohomologySlice {
        model: which,
        p,
        q,
        dim,
        cocycles,
        coboundary_space,
        representatives,
    })
}

/// All slices of `H(which)`.
pub fn cohomology(model: &KrizModel, which: ModelId) -> Result<BTreeMap<(usize, usize), CohomologySlice>> {
    model
        .bidegrees()
        .into_par_iter()
        .map(|(p, q)| cohomology_slice(model, which, p, q).map(|s| ((p, q), s)))
        .collect()
}

/// Dimension of the `S_n`-fixed part of `H^{p,q}(A)`.
pub fn invariant_cohomology_dim(model: &KrizModel, p: usize, q: usize) -> Result<usize> {
    let slice = cohomology_slice(model, ModelId::A, p, q)?;
    let ambient = model.basis(p, q).dim();
    let mats: Vec<SparseMatrix> = generators(model.n()).iter().map(|g| permutation_matrix(model, g, p, q)).collect();
    // Cocycles z with σz - z a coboundary for every generator σ.
    let residuals: Vec<SparseVec> = slice
        .cocycles
        .vectors()
        .iter()
        .map(|z| {
            let mut entries = Vec::new();
            for (k, m) in mats.iter().enumerate() {
                let moved = m.mul_vec(z).expect("dimensions").sub(z);
                let r = slice.coboundary_space.reduce(&moved);
                entries.extend(r.iter().map(|(i, c)| (k * ambient + i, c.clone())));
            }
            SparseVec::from_entries(entries)
        })
        .collect();
    let relations = SparseMatrix::from_columns(ambient * mats.len().max(1), residuals)?;
    let fixed = reduce(&relations).kernel.dim();
    Ok(fixed - slice.coboundary_space.dim())
}

/// The four spaces whose cohomology is modelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Conf,
    UConf,
    M,
    UM,
}

impl Space {
    pub fn model(&self) -> ModelId {
        match self {
            Space::Conf => ModelId::A,
            Space::UConf => ModelId::UA,
            Space::M => ModelId::B,
            Space::UM => ModelId::UB,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Space::Conf => "conf",
            Space::UConf => "uconf",
            Space::M => "m",
            Space::UM => "um",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conf" => Ok(Space::Conf),
            "uconf" => Ok(Space::UConf),
            "m" => Ok(Space::M),
            "um" => Ok(Space::UM),
            _ => Err(Error::Parse(format!("unknown space '{s}'"))),
        }
    }
}

/// A polynomial in `t` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    pub coeffs: BTreeMap<usize, i64>,
}

impl Polynomial {
    pub fn from_coeffs<I: IntoIterator<Item = (usize, i64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Polynomial { coeffs }
    }

    pub fn coeff(&self, e: usize) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficients `c_0, …, c_deg`.
    pub fn to_vec(&self) -> Vec<i64> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(
            self.coeffs
                .iter()
                .flat_map(|(&a, &ca)| other.coeffs.iter().map(move |(&b, &cb)| (a + b, ca * cb))),
        )
    }
}

fn monomial_text(c: i64, first: bool, body: &str) -> String {
    let sign = match (first, c < 0) {
        (true, true) => "-".to_string(),
        (true, false) => String::new(),
        (false, true) => " - ".to_string(),
        (false, false) => " + ".to_string(),
    };
    let abs = c.unsigned_abs();
    if body.is_empty() {
        format!("{sign}{abs}")
    } else if abs == 1 {
        format!("{sign}{body}")
    } else {
        format!("{sign}{abs}{body}")
    }
}

fn power(var: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&e, &c)) in self.coeffs.iter().enumerate() {
            write!(f, "{}", monomial_text(c, k == 0, &power("t", e)))?;
        }
        Ok(())
    }
}

/// A polynomial in `u` (degree) and `v` (weight).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgePoly {
    /// `(degree, weight) ↦ coefficient`.
    pub coeffs: BTreeMap<(usize, usize), i64>,
}

impl HodgePoly {
    pub fn from_coeffs<I: IntoIterator<Item = ((usize, usize), i64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        HodgePoly { coeffs }
    }

    pub fn coeff(&self, degree: usize, weight: usize) -> i64 {
        self.coeffs.get(&(degree, weight)).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &HodgePoly) -> HodgePoly {
        HodgePoly::from_coeffs(self.coeffs.iter().flat_map(|(&(a, b), &c)| {
            other
                .coeffs
                .iter()
                .map(move |(&(x, y), &d)| ((a + x, b + y), c * d))
        }))
    }

    /// Specialization `v = 1`.
    pub fn betti(&self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|(&(i, _), &c)| (i, c)))
    }
}

impl fmt::Display for HodgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (&(i, w), &c)) in self.coeffs.iter().enumerate() {
            let body = format!("{}{}", power("u", i), power("v", w));
            write!(f, "{}", monomial_text(c, k == 0, &body))?;
        }
        Ok(())
    }
}

/// Hodge polynomial with coefficients in the representation ring of `SL2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrothHodgePoly {
    pub coeffs: BTreeMap<(usize, usize), IrrepMultiplicities>,
}

impl GrothHodgePoly {
    pub fn from_terms<I: IntoIterator<Item = ((usize, usize), IrrepMultiplicities)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<(usize, usize), IrrepMultiplicities> = BTreeMap::new();
        for (e, m) in terms {
            let entry = coeffs.entry(e).or_default();
            *entry = entry.add(&m);
        }
        coeffs.retain(|_, m| !m.is_zero());
        GrothHodgePoly { coeffs }
    }

    pub fn get(&self, degree: usize, weight: usize) -> IrrepMultiplicities {
        self.coeffs.get(&(degree, weight)).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &GrothHodgePoly) -> GrothHodgePoly {
        GrothHodgePoly::from_terms(self.coeffs.iter().flat_map(|(&(a, b), m)| {
            other
                .coeffs
                .iter()
                .map(move |(&(x, y), k)| ((a + x, b + y), m.tensor(k)))
        }))
    }

    /// Forget the representations, keeping dimensions.
    pub fn dimensions(&self) -> HodgePoly {
        HodgePoly::from_coeffs(self.coeffs.iter().map(|(&e, m)| (e, m.dim() as i64)))
    }
}

impl fmt::Display for GrothHodgePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&(i, w), m)| {
                let body = format!("{}{}", power("u", i), power("v", w));
                let rep = if m.mult.len() > 1 { format!("({m})") } else { m.to_string() };
                if body.is_empty() {
                    rep
                } else {
                    format!("{rep} {body}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Hodge polynomial of the cohomology of `space`; a class of bidegree
/// `(p, q)` has degree `p + q` and weight `p + 2q`.
pub fn hodge_polynomial(model: &KrizModel, space: Space) -> Result<HodgePoly> {
    let slices = cohomology(model, space.model())?;
    Ok(HodgePoly::from_coeffs(
        slices
            .values()
            .map(|s| ((s.p + s.q, s.p + 2 * s.q), s.dim as i64)),
    ))
}

pub fn betti_polynomial(model: &KrizModel, space: Space) -> Result<Polynomial> {
    Ok(hodge_polynomial(model, space)?.betti())
}

/// Hodge polynomial with the `SL2` content of each piece.
pub fn groth_hodge_polynomial(model: &KrizModel, space: Space) -> Result<GrothHodgePoly> {
    let slices = cohomology(model, space.model())?;
    let terms = slices
        .values()
        .filter(|s| s.dim > 0)
        .map(|s| Ok(((s.p + s.q, s.p + 2 * s.q), s.irreps(model)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GrothHodgePoly::from_terms(terms))
}

/// `T(u, v) = (1 + u^3 v^4) / (1 - u^2 v^3)^2` truncated at `u`-degree `n`.
pub fn truncated_series(n: usize) -> HodgePoly {
    let mut terms = Vec::new();
    for k in 0.. {
        if 2 * k > n {
            break;
        }
        terms.push(((2 * k, 3 * k), (k + 1) as i64));
        if 2 * k + 3 <= n {
            terms.push(((2 * k + 3, 3 * k + 4), (k + 1) as i64));
        }
    }
    HodgePoly::from_coeffs(terms)
}

/// The closed forms for the unordered spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub betti: Polynomial,
    pub hodge: HodgePoly,
    pub groth: GrothHodgePoly,
}

fn irrep(k: usize) -> IrrepMultiplicities {
    IrrepMultiplicities::from_pairs([(k, 1)])
}

/// `Σ_{i=0}^{⌊(n-1)/2⌋} V_i u^{2i}v^{3i} + Σ_{i=1}^{⌊n/2⌋-1} V_{i-1} u^{2i+1}v^{3i+1}`.
pub fn um_groth_closed_form(n: usize) -> GrothHodgePoly {
    let mut terms = Vec::new();
    for i in 0..=(n.saturating_sub(1)) / 2 {
        terms.push(((2 * i, 3 * i), irrep(i)));
    }
    for i in 1..(n / 2) {
        terms.push(((2 * i + 1, 3 * i + 1), irrep(i - 1)));
    }
    GrothHodgePoly::from_terms(terms)
}

/// The factor `V_0 + V_1 uv + V_0 u^2v^2` (cohomology of the curve).
pub fn curve_groth() -> GrothHodgePoly {
    GrothHodgePoly::from_terms([((0, 0), irrep(0)), ((1, 1), irrep(1)), ((2, 2), irrep(0))])
}

pub fn closed_form(space: Space, n: usize) -> Result<ClosedForm> {
    if n == 0 {
        return Err(Error::UnsupportedPointCount { n, max: crate::exterior::MAX_POINTS });
    }
    let t = truncated_series(n - 1);
    let curve = HodgePoly::from_coeffs([((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]);
    let (hodge, groth) = match space {
        Space::UM => (t, um_groth_closed_form(n)),
        Space::UConf => (curve.mul(&t), curve_groth().mul(&um_groth_closed_form(n))),
        other => {
            return Err(Error::UnsupportedModel {
                model: other.to_string(),
                what: "closed form".into(),
            })
        }
    };
    Ok(ClosedForm {
        betti: hodge.betti(),
        hodge,
        groth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_coefficients() {
        let t = truncated_series(10);
        assert_eq!(t.coeff(0, 0), 1);
        assert_eq!(t.coeff(2, 3), 2);
        assert_eq!(t.coeff(3, 4), 1);
        assert_eq!(t.coeff(4, 6), 3);
        assert_eq!(t.coeff(5, 7), 2);
        assert_eq!(truncated_series(3).betti().to_vec(), vec![1, 0, 2, 1]);
    }

    #[test]
    fn closed_form_betti_examples() {
        assert_eq!(closed_form(Space::UConf, 2).unwrap().betti.to_string(), "1 + 2t + t^2");
        assert_eq!(
            closed_form(Space::UConf, 3).unwrap().betti.to_string(),
            "1 + 2t + 3t^2 + 4t^3 + 2t^4"
        );
        assert_eq!(closed_form(Space::UM, 4).unwrap().betti.to_string(), "1 + 2t^2 + t^3");
        let g = closed_form(Space::UM, 5).unwrap().groth;
        assert_eq!(g.get(4, 6), irrep(2));
        let g = closed_form(Space::UM, 6).unwrap().groth;
        assert_eq!(g.get(4, 6), irrep(2));
        assert_eq!(g.get(5, 7), irrep(1));
        assert!(closed_form(Space::Conf, 3).is_err());
        assert_eq!(closed_form(Space::UConf, 4).unwrap().groth.dimensions(), closed_form(Space::UConf, 4).unwrap().hodge);
    }

    #[test]
    fn small_cohomology() {
        let m = KrizModel::new(2).unwrap();
        assert_eq!(betti_polynomial(&m, Space::UConf).unwrap().to_vec(), vec![1, 2, 1]);
        assert_eq!(betti_polynomial(&m, Space::Conf).unwrap().to_vec(), vec![1, 4, 5, 2]);
        for n in 2..=4 {
            let m = KrizModel::new(n).unwrap();
            let cf = closed_form(Space::UConf, n).unwrap();
            assert_eq!(hodge_polynomial(&m, Space::UConf).unwrap(), cf.hodge);
            assert_eq!(groth_hodge_polynomial(&m, Space::UConf).unwrap(), cf.groth);
            assert_eq!(groth_hodge_polynomial(&m, Space::UM).unwrap(), um_groth_closed_form(n));
        }
    }

    #[test]
    fn representatives_are_cocycles_independent_mod_coboundaries() {
        let m = KrizModel::new(3).unwrap();
        for (p, q) in m.bidegrees() {
            let s = cohomology_slice(&m, ModelId::A, p, q).unwrap();
            assert_eq!(s.representatives.len(), s.dim);
            for r in &s.representatives {
                assert!(s.is_cocycle(r));
                assert!(!s.is_coboundary(r));
            }
        }
    }

    #[test]
    fn transfer_small() {
        for n in 2..=3 {
            let m = KrizModel::new(n).unwrap();
            for (p, q) in m.bidegrees() {
                let direct = cohomology_slice(&m, ModelId::UA, p, q).unwrap().dim;
                assert_eq!(invariant_cohomology_dim(&m, p, q).unwrap(), direct);
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(Polynomial::from_coeffs([(0, 1), (2, -3)]).to_string(), "1 - 3t^2");
        assert_eq!(HodgePoly::from_coeffs([((0, 0), 1), ((1, 1), 2)]).to_string(), "1 + 2uv");
        assert_eq!(curve_groth().to_string(), "V0 + V1 uv + V0 u^2v^2");
    }
}
