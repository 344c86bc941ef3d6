//! The actions of `S_n` and of `sl2` on the model: permutation matrices,
//! invariant subspaces, torus weights, irreducible multiplicities and the
//! maps `π_a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::{mul_sign, pair_from_index, pair_index, xy_mask, Derivation};
use crate::linalg::{reduce, subspace_intersection, SparseMatrix, SparseVec, SubspaceBasis};
use crate::model::{BidegreeBasis, KrizModel, ModelId};
use crate::perm::{class_size, factorial, partitions, Permutation};
use crate::rational::Rational;

/// Image of a monomial under `x_i ↦ x_{σ(i)}`, `y_i ↦ y_{σ(i)}`,
/// `ω_{i,j} ↦ ω_{σ(i),σ(j)}`, with its sign.
pub fn permute_monomial(n: usize, sigma: &Permutation, m: u64) -> (i64, u64) {
    let mut acc = 0u64;
    let mut negative = false;
    let mut rest = m;
    while rest != 0 {
        let bit = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let target = if bit < 2 * n {
            2 * (sigma.apply(bit / 2 + 1) - 1) + bit % 2
        } else {
            let (i, j) = pair_from_index(n, bit - 2 * n);
            let (a, b) = (sigma.apply(i), sigma.apply(j));
            2 * n + pair_index(n, a.min(b), a.max(b))
        };
        let t = 1u64 << target;
        negative ^= mul_sign(acc, t).expect("permutations are injective on generators");
        acc |= t;
    }
    (if negative { -1 } else { 1 }, acc)
}

/// Matrix of `σ` on `A^{p,q}` in the canonical basis.
pub fn permutation_matrix(model: &KrizModel, sigma: &Permutation, p: usize, q: usize) -> SparseMatrix {
    let n = model.n();
    assert_eq!(sigma.degree(), n, "permutation degree must equal the number of points");
    model.matrix_of((p, q), (p, q), |m| {
        let (s, t) = permute_monomial(n, sigma, m);
        vec![(t, s)]
    })
}

/// Matrix of a linear map restricted to subspaces, in the coordinates of
/// their echelon bases; `None` if the image of `source` leaves `target`.
pub fn restrict_map(matrix: &SparseMatrix, source: &SubspaceBasis, target: &SubspaceBasis) -> Option<SparseMatrix> {
    let columns = source
        .vectors()
        .par_iter()
        .map(|v| {
            let image = matrix.mul_vec(v).expect("dimensions agree");
            let coords = target.coordinates_unchecked(&image);
            if target.combine(&coords) != image {
                return None;
            }
            Some(coords)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(SparseMatrix::from_columns(target.dim(), columns).expect("coordinates within target"))
}

/// Component sizes and marks of a basis element, sorted. Marks are encoded
/// as `0 = 1`, `1 = x`, `2 = y`, `3 = xy`; the multiset is preserved by `S_n`.
fn marked_type(n: usize, basis: &BidegreeBasis, k: usize) -> Vec<(usize, u8)> {
    let element = &basis.elements()[k];
    let reps = element.forest.representatives_of(n);
    let bits = element.monomial.0 & xy_mask(n);
    let mut out: Vec<(usize, u8)> = (1..=n)
        .filter(|&r| reps[r] == r)
        .map(|r| {
            let size = (1..=n).filter(|&v| reps[v] == r).count();
            let mark = (bits >> (2 * (r - 1)) & 3) as u8;
            (size, mark)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Basis indices of `A^{p,q}` grouped into `S_n`-stable blocks.
pub fn stable_blocks(model: &KrizModel, p: usize, q: usize) -> Vec<Vec<usize>> {
    let basis = model.basis(p, q);
    let mut blocks: BTreeMap<Vec<(usize, u8)>, Vec<usize>> = BTreeMap::new();
    for k in 0..basis.dim() {
        blocks.entry(marked_type(model.n(), &basis, k)).or_default().push(k);
    }
    blocks.into_values().collect()
}

/// Generators `(1 2)` and `(1 2 … n)` of `S_n` (none for `n = 1`).
pub fn generators(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return Vec::new();
    }
    vec![Permutation::transposition(n, 1, 2), Permutation::long_cycle(n)]
}

/// Invariant subspace of `A^{p,q}` (for `UA`) or `B^{p,q}` (for `UB`).
pub(crate) fn build_invariants(model: &KrizModel, which: ModelId, p: usize, q: usize) -> Result<SubspaceBasis> {
    let space = match which {
        ModelId::UA => invariants_of_a(model, p, q),
        ModelId::UB => {
            let ua = model.subspace(ModelId::UA, p, q)?;
            let b = model.subspace(ModelId::B, p, q)?;
            subspace_intersection(&ua, &b)?
        }
        other => {
            return Err(Error::UnsupportedModel {
                model: other.to_string(),
                what: "invariant subspace".into(),
            })
        }
    };
    let average = reynolds_average(model, which.base(), p, q)?;
    if average != Rational::from_integer(space.dim() as i64) {
        return Err(Error::ReynoldsMismatch {
            p,
            q,
            kernel: space.dim(),
            trace: average.to_string(),
        });
    }
    Ok(space)
}

fn invariants_of_a(model: &KrizModel, p: usize, q: usize) -> SubspaceBasis {
    let dim = model.basis(p, q).dim();
    let mats: Vec<SparseMatrix> = generators(model.n())
        .iter()
        .map(|g| permutation_matrix(model, g, p, q))
        .collect();
    let blocks = stable_blocks(model, p, q);
    let vectors: Vec<SparseVec> = blocks
        .par_iter()
        .flat_map_iter(|block| {
            let local: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &k)| (k, i)).collect();
            let mut rows: Vec<SparseVec> = Vec::new();
            for m in &mats {
                let mut by_row: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
                for (i, &k) in block.iter().enumerate() {
                    for (r, c) in m.column(k).iter() {
                        let lr = *local.get(&r).expect("blocks are stable under S_n");
                        by_row.entry(lr).or_default().push((i, c.clone()));
                    }
                    by_row.entry(i).or_default().push((i, -Rational::one()));
                }
                rows.extend(by_row.into_values().map(SparseVec::from_entries));
            }
            let stacked = SparseMatrix::from_rows(block.len(), rows).expect("local indices");
            let kernel = reduce(&stacked).kernel;
            kernel
                .vectors()
                .iter()
                .map(|v| v.remap(|i| Some(block[i])))
                .collect::<Vec<_>>()
        })
        .collect();
    SubspaceBasis::from_vectors(dim, vectors).expect("indices within slice")
}

/// `(1/n!) Σ_σ trace(σ)` on `A^{p,q}` or `B^{p,q}`, one permutation per
/// conjugacy class weighted by the class size.
pub fn reynolds_average(model: &KrizModel, base: ModelId, p: usize, q: usize) -> Result<Rational> {
    let n = model.n();
    let space = match base {
        ModelId::A => None,
        ModelId::B => Some(model.subspace(ModelId::B, p, q)?),
        other => {
            return Err(Error::UnsupportedModel {
                model: other.to_string(),
                what: "Reynolds average".into(),
            })
        }
    };
    let basis = model.basis(p, q);
    let mut total = Rational::zero();
    for cycle_type in partitions(n) {
        let sigma = Permutation::with_cycle_type(&cycle_type);
        let trace = match &space {
            None => {
                let mut t = 0i64;
                for k in 0..basis.dim() {
                    let (s, m) = permute_monomial(n, &sigma, basis.monomial(k).0);
                    for (u, c) in model.normal_form_monomial(m) {
                        if u == basis.monomial(k).0 {
                            t += s * c;
                        }
                    }
                }
                Rational::from_integer(t)
            }
            Some(b) => {
                let mat = permutation_matrix(model, &sigma, p, q);
                b.vectors()
                    .iter()
                    .map(|v| {
                        let pivot = v.leading().expect("nonzero").0;
                        mat.mul_vec(v).expect("dimensions").get(pivot).cloned().unwrap_or_default()
                    })
                    .sum()
            }
        };
        total += trace * Rational::from_big_integer(class_size(&cycle_type).into());
    }
    Ok(total / Rational::from_big_integer(factorial(n).into()))
}

/// An invariant slice and its inclusion into the base slice.
#[derive(Clone, Debug)]
pub struct InvariantSlice {
    pub model: ModelId,
    pub p: usize,
    pub q: usize,
    pub inclusion: Arc<SubspaceBasis>,
}

impl InvariantSlice {
    pub fn dim(&self) -> usize {
        self.inclusion.dim()
    }
}

/// `UA^{p,q}` (`base = A`) or `UB^{p,q}` (`base = B`).
pub fn invariant_slice(model: &KrizModel, base: ModelId, p: usize, q: usize) -> Result<InvariantSlice> {
    let which = match base {
        ModelId::A | ModelId::UA => ModelId::UA,
        ModelId::B | ModelId::UB => ModelId::UB,
        other => {
            return Err(Error::UnsupportedModel {
                model: other.to_string(),
                what: "invariant slice".into(),
            })
        }
    };
    Ok(InvariantSlice {
        model: which.base(),
        p,
        q,
        inclusion: model.subspace(which, p, q)?,
    })
}

/// Dimensions of the torus weight spaces of an `sl2`-stable space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub dims: BTreeMap<i64, usize>,
}

impl WeightDecomposition {
    pub fn from_dims<I: IntoIterator<Item = (i64, usize)>>(dims: I) -> Self {
        WeightDecomposition {
            dims: dims.into_iter().filter(|&(_, d)| d > 0).collect(),
        }
    }

    pub fn get(&self, a: i64) -> usize {
        self.dims.get(&a).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.dims.iter().all(|(&a, &d)| self.get(-a) == d)
    }

    /// All weights congruent to `p` mod 2 and of absolute value at most `p`.
    pub fn is_supported_in(&self, p: usize) -> bool {
        self.dims
            .keys()
            .all(|&a| a.unsigned_abs() as usize <= p && (a - p as i64).rem_euclid(2) == 0)
    }

    /// `m_k = n_k - n_{k+2}`; a negative value is an error.
    pub fn irrep_multiplicities(&self) -> Result<IrrepMultiplicities> {
        let top = self.dims.keys().map(|a| a.unsigned_abs()).max().unwrap_or(0) as i64;
        let mut mult = BTreeMap::new();
        for k in 0..=top {
            let m = self.get(k) as i64 - self.get(k + 2) as i64;
            if m < 0 {
                return Err(Error::NegativeMultiplicity { k: k as usize, value: m });
            }
            if m > 0 {
                mult.insert(k as usize, m as usize);
            }
        }
        let result = IrrepMultiplicities { mult };
        if result.dim() != self.total() {
            return Err(Error::NegativeMultiplicity { k: 0, value: result.dim() as i64 - self.total() as i64 });
        }
        Ok(result)
    }
}

/// Multiplicities of the irreducible representations `V_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrrepMultiplicities {
    pub mult: BTreeMap<usize, usize>,
}

impl IrrepMultiplicities {
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Self {
        let mut mult = BTreeMap::new();
        for (k, m) in pairs {
            if m > 0 {
                *mult.entry(k).or_insert(0) += m;
            }
        }
        IrrepMultiplicities { mult }
    }

    pub fn get(&self, k: usize) -> usize {
        self.mult.get(&k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    /// `Σ m_k (k + 1)`.
    pub fn dim(&self) -> usize {
        self.mult.iter().map(|(k, m)| (k + 1) * m).sum()
    }

    pub fn add(&self, other: &IrrepMultiplicities) -> IrrepMultiplicities {
        IrrepMultiplicities::from_pairs(self.mult.iter().chain(other.mult.iter()).map(|(&k, &m)| (k, m)))
    }

    /// Clebsch–Gordan: `V_a ⊗ V_b = V_{a+b} ⊕ V_{a+b-2} ⊕ … ⊕ V_{|a-b|}`.
    pub fn tensor(&self, other: &IrrepMultiplicities) -> IrrepMultiplicities {
        let mut pairs = Vec::new();
        for (&a, &ma) in &self.mult {
            for (&b, &mb) in &other.mult {
                let lo = a.abs_diff(b);
                for k in (lo..=a + b).step_by(2) {
                    pairs.push((k, ma * mb));
                }
            }
        }
        IrrepMultiplicities::from_pairs(pairs)
    }
}

impl fmt::Display for IrrepMultiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .mult
            .iter()
            .rev()
            .map(|(k, m)| if *m == 1 { format!("V{k}") } else { format!("{m}V{k}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Weight decomposition of a subspace of `A^{p,q}`. The echelon basis of a
/// torus-stable subspace consists of weight vectors; anything else is
/// reported as not weight-split.
pub fn weight_decomposition_of(basis: &BidegreeBasis, space: &SubspaceBasis) -> Result<WeightDecomposition> {
    let weights = basis.weights();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for v in space.vectors() {
        let mut it = v.indices().map(|k| weights[k]);
        let w = it.next().expect("nonzero basis vector");
        if it.any(|u| u != w) {
            return Err(Error::NotWeightSplit);
        }
        *dims.entry(w).or_insert(0) += 1;
    }
    Ok(WeightDecomposition { dims })
}

/// Weight decomposition of the slice `model^{p,q}`.
pub fn weight_decomposition(model: &KrizModel, which: ModelId, p: usize, q: usize) -> Result<WeightDecomposition> {
    let basis = model.basis(p, q);
    if which == ModelId::A {
        let mut dims = BTreeMap::new();
        for w in basis.weights() {
            *dims.entry(w).or_insert(0) += 1;
        }
        return Ok(WeightDecomposition { dims });
    }
    weight_decomposition_of(&basis, &*model.subspace(which, p, q)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Operator {
    E,
    F,
    H,
}

/// `e: y_i ↦ x_i`, `f: x_i ↦ y_i`, `h: x_i ↦ x_i, y_i ↦ -y_i`, all zero on `ω`.
pub fn sl2_operator(n: usize, which: Sl2Operator) -> Derivation {
    match which {
        Sl2Operator::E => Derivation::sl2_e(n),
        Sl2Operator::F => Derivation::sl2_f(n),
        Sl2Operator::H => Derivation::sl2_h(n),
    }
}

/// The operator applied to a monomial of `Λ`.
pub fn sl2_on_monomial(n: usize, which: Sl2Operator, m: u64) -> Vec<(u64, i64)> {
    let xy = m & xy_mask(n);
    if which == Sl2Operator::H {
        let xs = (xy & 0x5555_5555_5555_5555).count_ones() as i64;
        let ys = (xy & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i64;
        return if xs == ys { Vec::new() } else { vec![(m, xs - ys)] };
    }
    let mut out = Vec::new();
    let mut rest = xy;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        rest &= rest - 1;
        let is_x = bit.is_multiple_of(2);
        let target = match (which, is_x) {
            (Sl2Operator::F, true) => bit + 1,
            (Sl2Operator::E, false) => bit - 1,
            _ => continue,
        };
        let without = m & !(1u64 << bit);
        let t = 1u64 << target;
        if without & t != 0 {
            continue;
        }
        // x_i and y_i are adjacent in the generator order: no sign.
        out.push((without | t, 1));
    }
    out
}

/// Matrix of `e`, `f` or `h` on `A^{p,q}` (weight-changing, bidegree-preserving).
pub fn sl2_matrix(model: &KrizModel, which: Sl2Operator, p: usize, q: usize) -> SparseMatrix {
    let n = model.n();
    model.matrix_of((p, q), (p, q), |m| sl2_on_monomial(n, which, m))
}

/// Report on the injectivity of `π_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiReport {
    pub p: usize,
    pub q: usize,
    pub a: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl PiReport {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }
}

/// Image of a monomial under `Y = [[1, 0], [1, 1]]`: `x_i ↦ x_i + y_i`,
/// `y_i ↦ y_i`.
fn lower_triangular_on_monomial(n: usize, m: u64) -> Vec<(u64, i64)> {
    let xy = m & xy_mask(n);
    let xs: Vec<u32> = (0..2 * n as u32).filter(|b| b % 2 == 0 && xy >> b & 1 == 1).collect();
    let mut out = Vec::new();
    for subset in 0u32..(1 << xs.len()) {
        let mut acc = 0u64;
        let mut negative = false;
        let mut ok = true;
        let mut rest = m;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            let target = match xs.iter().position(|&b| b == bit) {
                Some(k) if subset >> k & 1 == 1 => bit + 1,
                _ => bit,
            };
            let t = 1u64 << target;
            match mul_sign(acc, t) {
                Some(neg) => {
                    negative ^= neg;
                    acc |= t;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push((acc, if negative { -1 } else { 1 }));
        }
    }
    out
}

/// `π_a: v ↦ p_a(Y·v)` from the weight-`(a+2)` part of `A^{p,q}` to the
/// weight-`a` part, with `p_a` the coordinate projection.
pub fn pi_a_injectivity(model: &KrizModel, p: usize, q: usize, a: i64) -> PiReport {
    let n = model.n();
    let basis = model.basis(p, q);
    let weights = basis.weights();
    let source: Vec<usize> = (0..basis.dim()).filter(|&k| weights[k] == a + 2).collect();
    let target: Vec<usize> = (0..basis.dim()).filter(|&k| weights[k] == a).collect();
    let mut report = PiReport {
        p,
        q,
        a,
        source_dim: source.len(),
        target_dim: target.len(),
        rank: 0,
    };
    if source.is_empty() {
        return report;
    }
    let full = model.matrix_of((p, q), (p, q), |m| lower_triangular_on_monomial(n, m));
    let local: HashMap<usize, usize> = target.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let columns: Vec<SparseVec> = source
        .iter()
        .map(|&k| {
            SparseVec::from_entries(
                full.column(k)
                    .iter()
                    .filter_map(|(r, c)| local.get(&r).map(|&i| (i, c.clone()))),
            )
        })
        .collect();
    let matrix = SparseMatrix::from_columns(target.len(), columns).expect("local indices");
    report.rank = reduce(&matrix.transpose()).rank;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{apply_derivation, substitute, MultiVector, Substitution};
    use proptest::prelude::*;

    #[test]
    fn permutation_examples() {
        let m = KrizModel::new(2).unwrap();
        let t = Permutation::transposition(2, 1, 2);
        let mat = permutation_matrix(&m, &t, 0, 1);
        assert_eq!(mat, SparseMatrix::identity(1));
        let m3 = KrizModel::new(3).unwrap();
        for (p, q) in m3.bidegrees() {
            let id = permutation_matrix(&m3, &Permutation::identity(3), p, q);
            assert_eq!(id, SparseMatrix::identity(m3.basis(p, q).dim()));
        }
    }

    #[test]
    fn permutation_matches_substitution() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        for sigma in Permutation::all(n) {
            let s = Substitution::permutation(n, &sigma);
            for (p, q) in m.bidegrees() {
                let mat = permutation_matrix(&m, &sigma, p, q);
                let basis = m.basis(p, q);
                for k in 0..basis.dim() {
                    let v = basis.to_multivector(&SparseVec::unit(k));
                    let image = substitute(&v, &s).unwrap();
                    assert_eq!(&m.coordinates(&image, p, q).unwrap(), mat.column(k));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn group_law(s in 0usize..24, t in 0usize..24, slice in 0usize..40) {
            let n = 4;
            let m = KrizModel::new(n).unwrap();
            let bidegrees = m.bidegrees();
            let (p, q) = bidegrees[slice % bidegrees.len()];
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            let (a, b) = (&perms[s], &perms[t]);
            let lhs = permutation_matrix(&m, &a.compose(b), p, q);
            let rhs = permutation_matrix(&m, a, p, q).mul(&permutation_matrix(&m, b, p, q)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn small_invariants() {
        let m = KrizModel::new(2).unwrap();
        assert_eq!(invariant_slice(&m, ModelId::A, 0, 1).unwrap().dim(), 1);
        assert_eq!(invariant_slice(&m, ModelId::A, 2, 0).unwrap().dim(), 2);
        for n in 2..=4 {
            let m = KrizModel::new(n).unwrap();
            for (p, q) in m.bidegrees() {
                let ua = m.dim(ModelId::UA, p, q).unwrap();
                let ub = m.dim(ModelId::UB, p, q).unwrap();
                if q > p + 1 {
                    assert_eq!((ua, ub), (0, 0));
                }
                assert_eq!(Rational::from_integer(ub as i64), reynolds_average(&m, ModelId::B, p, q).unwrap());
            }
        }
    }

    #[test]
    fn invariants_are_fixed() {
        let n = 4;
        let m = KrizModel::new(n).unwrap();
        for (p, q) in m.bidegrees() {
            let space = m.subspace(ModelId::UA, p, q).unwrap();
            for sigma in Permutation::all(n) {
                let mat = permutation_matrix(&m, &sigma, p, q);
                for v in space.vectors() {
                    assert_eq!(&mat.mul_vec(v).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn blocks_have_induced_sizes() {
        let m = KrizModel::new(4).unwrap();
        let total: usize = stable_blocks(&m, 2, 1).iter().map(Vec::len).sum();
        assert_eq!(total, m.basis(2, 1).dim());
    }

    #[test]
    fn weight_examples() {
        let m = KrizModel::new(2).unwrap();
        let w = weight_decomposition(&m, ModelId::A, 1, 0).unwrap();
        assert_eq!(w, WeightDecomposition::from_dims([(1, 2), (-1, 2)]));
        let mult = WeightDecomposition::from_dims([(1, 1), (-1, 1)]).irrep_multiplicities().unwrap();
        assert_eq!(mult, IrrepMultiplicities::from_pairs([(1, 1)]));
        let mult = WeightDecomposition::from_dims([(2, 1), (0, 2), (-2, 1)]).irrep_multiplicities().unwrap();
        assert_eq!(mult, IrrepMultiplicities::from_pairs([(2, 1), (0, 1)]));
        assert!(matches!(
            WeightDecomposition::from_dims([(2, 2), (0, 1), (-2, 2)]).irrep_multiplicities(),
            Err(Error::NegativeMultiplicity { .. })
        ));
        let mixed = SubspaceBasis::from_vectors(4, vec![SparseVec::from_entries([(0, Rational::one()), (1, Rational::one())])]).unwrap();
        assert!(matches!(weight_decomposition_of(&m.basis(1, 0), &mixed), Err(Error::NotWeightSplit)));
    }

    #[test]
    fn full_slices_have_symmetric_weights() {
        for n in 1..=4 {
            let m = KrizModel::new(n).unwrap();
            for (p, q) in m.bidegrees() {
                for which in [ModelId::A, ModelId::B, ModelId::UA, ModelId::UB] {
                    let w = weight_decomposition(&m, which, p, q).unwrap();
                    assert!(w.is_symmetric() && w.is_supported_in(p));
                    w.irrep_multiplicities().unwrap();
                }
            }
        }
    }

    #[test]
    fn h_on_generators_and_sl2_matrices_match_derivations() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        for which in [Sl2Operator::E, Sl2Operator::F, Sl2Operator::H] {
            let der = sl2_operator(n, which);
            for (p, q) in m.bidegrees() {
                let mat = sl2_matrix(&m, which, p, q);
                let basis = m.basis(p, q);
                for k in 0..basis.dim() {
                    let v = basis.to_multivector(&SparseVec::unit(k));
                    let image = apply_derivation(&der, &v).unwrap();
                    assert_eq!(&m.coordinates(&image, p, q).unwrap(), mat.column(k));
                }
            }
        }
        let h = sl2_operator(n, Sl2Operator::H);
        assert_eq!(apply_derivation(&h, &MultiVector::x(n, 1)).unwrap(), MultiVector::x(n, 1));
    }

    #[test]
    fn sl2_relations_and_commutation_with_d() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        let two = Rational::from_integer(2);
        for (p, q) in m.bidegrees() {
            let e = sl2_matrix(&m, Sl2Operator::E, p, q);
            let f = sl2_matrix(&m, Sl2Operator::F, p, q);
            let h = sl2_matrix(&m, Sl2Operator::H, p, q);
            let he = h.mul(&e).unwrap().sub(&e.mul(&h).unwrap()).unwrap();
            assert_eq!(he, e.scaled(&two));
            let hf = h.mul(&f).unwrap().sub(&f.mul(&h).unwrap()).unwrap();
            assert_eq!(hf, f.scaled(&-two.clone()));
            let ef = e.mul(&f).unwrap().sub(&f.mul(&e).unwrap()).unwrap();
            assert_eq!(ef, h);
            if q >= 1 {
                let d = m.differential_matrix(p, q);
                for which in [Sl2Operator::E, Sl2Operator::F, Sl2Operator::H] {
                    let src = sl2_matrix(&m, which, p, q);
                    let tgt = sl2_matrix(&m, which, p + 2, q - 1);
                    assert_eq!(tgt.mul(&d).unwrap(), d.mul(&src).unwrap());
                }
            }
        }
    }

    #[test]
    fn pi_a_small() {
        let m = KrizModel::new(3).unwrap();
        for (p, q) in m.bidegrees() {
            for a in 0..=(p as i64 + 1) {
                let r = pi_a_injectivity(&m, p, q, a);
                assert!(r.injective(), "{r:?}");
                if a > p as i64 {
                    assert_eq!(r.source_dim, 0);
                }
            }
        }
    }

    #[test]
    fn lower_triangular_matches_substitution() {
        let n = 2;
        let s = Substitution::sl2(n, [[1, 0], [1, 1]]);
        let m = KrizModel::new(n).unwrap();
        for (p, q) in m.bidegrees() {
            let basis = m.basis(p, q);
            for k in 0..basis.dim() {
                let v = basis.to_multivector(&SparseVec::unit(k));
                let direct = substitute(&v, &s).unwrap();
                let fast = MultiVector::from_terms(
                    n,
                    lower_triangular_on_monomial(n, basis.monomial(k).0)
                        .into_iter()
                        .map(|(t, c)| (crate::exterior::Monomial(t), Rational::from_integer(c))),
                );
                assert_eq!(direct, fast);
            }
        }
    }
}
