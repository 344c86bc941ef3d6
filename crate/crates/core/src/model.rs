//! The bigraded algebra `A = Λ / (relations)` with its differential, the
//! subalgebras `B` (generated by `x_i - x_j`, `y_i - y_j`, `ω_{i,j}`) and `D`
//! (generated by `Σ x_i`, `Σ y_i`), canonical bases and normal forms.
//!
//! The basis of `A^{p,q}` is indexed by nbc forests with `q` edges (no
//! broken circuit for the lexicographic edge order) together with a set of
//! `p` letters `x_r`, `y_r`, `r` ranging over minimal vertices of the forest
//! components.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use dashmap::DashMap;
use itertools::Itertools;
use rayon::prelude::*;

use crate::cache::{CacheKey, DiskCache};
use crate::error::{Error, Result};
use crate::exterior::{
    check_points, mul_sign, pair_count, pair_from_index, pair_index, xy_mask, Generator, Monomial,
    MultiVector, WordMap,
};
use crate::linalg::{SparseMatrix, SparseVec, SubspaceBasis};
use crate::rational::Rational;

/// Which algebra (or invariant subalgebra) a slice belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    A,
    B,
    D,
    UA,
    UB,
}

impl ModelId {
    pub fn name(&self) -> &'static str {
        match self {
            ModelId::A => "A",
            ModelId::B => "B",
            ModelId::D => "D",
            ModelId::UA => "UA",
            ModelId::UB => "UB",
        }
    }

    /// The non-invariant algebra underlying `UA`/`UB`.
    pub fn base(&self) -> ModelId {
        match self {
            ModelId::UA => ModelId::A,
            ModelId::UB => ModelId::B,
            m => *m,
        }
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, ModelId::UA | ModelId::UB)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(ModelId::A),
            "B" => Ok(ModelId::B),
            "D" => Ok(ModelId::D),
            "UA" => Ok(ModelId::UA),
            "UB" => Ok(ModelId::UB),
            _ => Err(Error::Parse(format!("unknown model '{s}'"))),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Unsigned Stirling number of the first kind `c(n, k)`.
pub fn stirling_first(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for m in 0..n {
        let mut next = vec![0u128; row.len() + 1];
        for (j, &c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] += c * m as u128;
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// A forest on `1..=n` whose edges contain no broken circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NbcForest {
    edges: Vec<(usize, usize)>,
}

impl NbcForest {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Bitmask over pair indices.
    pub fn mask(&self, n: usize) -> u64 {
        self.edges
            .iter()
            .fold(0, |m, &(i, j)| m | 1u64 << pair_index(n, i, j))
    }

    /// `rep[i]` is the minimal vertex of the component of `i` (index 0 unused).
    pub fn representatives_of(&self, n: usize) -> Vec<usize> {
        component_reps(n, self.mask(n))
    }

    /// Minimal vertices of the components, ascending.
    pub fn representatives(&self, n: usize) -> Vec<usize> {
        let reps = self.representatives_of(n);
        (1..=n).filter(|&i| reps[i] == i).collect()
    }
}

impl fmt::Display for NbcForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.edges.iter().map(|(i, j)| format!("({i},{j})")).join(",")
        )
    }
}

/// Minimal vertex of each component of the graph with the given edge mask.
fn component_reps(n: usize, edge_mask: u64) -> Vec<usize> {
    let mut rep: Vec<usize> = (0..=n).collect();
    fn find(rep: &mut [usize], mut i: usize) -> usize {
        while rep[i] != i {
            rep[i] = rep[rep[i]];
            i = rep[i];
        }
        i
    }
    let mut rest = edge_mask;
    while rest != 0 {
        let (i, j) = pair_from_index(n, rest.trailing_zeros() as usize);
        rest &= rest - 1;
        let (a, b) = (find(&mut rep, i), find(&mut rep, j));
        if a != b {
            rep[a.max(b)] = a.min(b);
        }
    }
    (0..=n).map(|i| find(&mut rep, i)).collect()
}

/// All nbc forests with `q` edges, sorted by their edge lists.
///
/// With the lexicographic edge order a forest is nbc exactly when the larger
/// endpoints of its edges are pairwise distinct.
pub fn enumerate_nbc_forests(n: usize, q: usize) -> Vec<NbcForest> {
    if n == 0 || q >= n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for tops in (2..=n).combinations(q) {
        let choices = tops.iter().map(|&j| 1..j).multi_cartesian_product();
        if q == 0 {
            out.push(NbcForest { edges: Vec::new() });
            continue;
        }
        for lows in choices {
            let mut edges: Vec<(usize, usize)> =
                lows.into_iter().zip(tops.iter().copied()).collect();
            edges.sort_unstable();
            out.push(NbcForest { edges });
        }
    }
    out.sort();
    out
}

/// One canonical basis element of `A^{p,q}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub forest: NbcForest,
    pub exterior: Vec<Generator>,
    pub monomial: Monomial,
}

/// The canonical basis of `A^{p,q}`.
#[derive(Clone, Debug)]
pub struct BidegreeBasis {
    n: usize,
    p: usize,
    q: usize,
    elements: Vec<BasisElement>,
    index: WordMap<usize>,
}

impl PartialEq for BidegreeBasis {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.p, self.q) == (other.n, other.p, other.q) && self.elements == other.elements
    }
}

impl BidegreeBasis {
    fn build(n: usize, p: usize, q: usize) -> Self {
        let mut elements = Vec::new();
        for forest in enumerate_nbc_forests(n, q) {
            let letters: Vec<Generator> = forest
                .representatives(n)
                .into_iter()
                .flat_map(|r| [Generator::X(r), Generator::Y(r)])
                .collect();
            let omega = forest.mask(n) << (2 * n);
            for exterior in letters.into_iter().combinations(p) {
                let bits = exterior.iter().fold(omega, |m, g| m | 1u64 << g.bit(n));
                elements.push(BasisElement {
                    forest: forest.clone(),
                    exterior,
                    monomial: Monomial(bits),
                });
            }
        }
        BidegreeBasis::from_elements(n, p, q, elements)
    }

    fn from_elements(n: usize, p: usize, q: usize, elements: Vec<BasisElement>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.monomial.0, k))
            .collect();
        BidegreeBasis {
            n,
            p,
            q,
            elements,
            index,
        }
    }

    /// Rebuilds a basis from its monomials, checking they are canonical.
    pub fn from_monomials(n: usize, p: usize, q: usize, monomials: &[Monomial]) -> Result<Self> {
        let expected = BidegreeBasis::build(n, p, q);
        let found: Vec<Monomial> = monomials.to_vec();
        let canonical: Vec<Monomial> = expected.elements.iter().map(|e| e.monomial).collect();
        if found != canonical {
            return Err(Error::NotNormalForm(format!(
                "stored basis of A^{{{p},{q}}} for n = {n} differs from the canonical one"
            )));
        }
        Ok(expected)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn monomial(&self, k: usize) -> Monomial {
        self.elements[k].monomial
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.index.get(&m.0).copied()
    }

    /// The element of `Λ` with the given coordinates.
    pub fn to_multivector(&self, coords: &SparseVec) -> MultiVector {
        MultiVector::from_terms(
            self.n,
            coords
                .iter()
                .map(|(k, c)| (self.elements[k].monomial, c.clone())),
        )
    }

    /// Torus weight of each basis element.
    pub fn weights(&self) -> Vec<i64> {
        self.elements
            .iter()
            .map(|e| e.monomial.weight(self.n))
            .collect()
    }
}

type Straightened = Arc<Vec<(u64, i64)>>;

/// The algebra `A` for a fixed number of points, with memoized normal forms,
/// bases, subspaces and differentials.
pub struct KrizModel {
    n: usize,
    straighten_memo: DashMap<u64, Straightened>,
    bases: DashMap<(usize, usize), Arc<BidegreeBasis>>,
    pub(crate) subspaces: DashMap<(ModelId, usize, usize), Arc<SubspaceBasis>>,
    differentials: DashMap<(usize, usize), Arc<SparseMatrix>>,
    disk: Option<DiskCache>,
}

impl fmt::Debug for KrizModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KrizModel").field("n", &self.n).finish()
    }
}

impl KrizModel {
    pub fn new(n: usize) -> Result<Self> {
        check_points(n)?;
        Ok(KrizModel {
            n,
            straighten_memo: DashMap::new(),
            bases: DashMap::new(),
            subspaces: DashMap::new(),
            differentials: DashMap::new(),
            disk: None,
        })
    }

    /// Persist differentials and subspaces under `cache`.
    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.disk = Some(cache);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest `p` with a possibly nonzero `A^{p,q}`.
    pub fn max_p(&self, q: usize) -> usize {
        if q >= self.n {
            0
        } else {
            2 * (self.n - q)
        }
    }

    /// All `(p, q)` with `A^{p,q}` possibly nonzero.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|q| (0..=self.max_p(q)).map(move |p| (p, q)))
            .collect()
    }

    /// The canonical basis of `A^{p,q}`.
    pub fn basis(&self, p: usize, q: usize) -> Arc<BidegreeBasis> {
        if let Some(b) = self.bases.get(&(p, q)) {
            return b.clone();
        }
        let built = Arc::new(BidegreeBasis::build(self.n, p, q));
        self.bases.entry((p, q)).or_insert(built).clone()
    }

    /// Closed-form dimension of `A^{p,q}` (or `B^{p,q}`).
    pub fn formula_dim(&self, model: ModelId, p: usize, q: usize) -> u128 {
        let n = self.n;
        if q >= n {
            return 0;
        }
        let k = n - q;
        match model {
            ModelId::A => stirling_first(n, k) * binomial(2 * k, p),
            ModelId::B => stirling_first(n, k) * binomial(2 * k - 2, p),
            ModelId::D => u128::from(q == 0 && p <= 2) * binomial(2, p),
            _ => 0,
        }
    }

    /// Rewrites an `ω`-monomial (mask over pair indices) as a combination of
    /// nbc forests using the three-term relation.
    fn straighten(&self, w: u64) -> Straightened {
        if let Some(r) = self.straighten_memo.get(&w) {
            return r.clone();
        }
        let result = match self.find_broken(w) {
            None => Arc::new(vec![(w, 1)]),
            Some((a, b, c)) => {
                let n = self.n;
                let ac = 1u64 << pair_index(n, a, c);
                let bc = 1u64 << pair_index(n, b, c);
                let ab = 1u64 << pair_index(n, a, b);
                let rest = w & !(ac | bc);
                // w = ± ω_ac ω_bc R and ω_ac ω_bc = ω_ab ω_bc - ω_ab ω_ac.
                let outer: i64 = if mul_sign(ac | bc, rest).expect("disjoint") { -1 } else { 1 };
                let mut acc: WordMap<i64> = WordMap::default();
                for (pair, sign) in [(ab | bc, outer), (ab | ac, -outer)] {
                    let Some(neg) = mul_sign(pair, rest) else { continue };
                    let s = if neg { -sign } else { sign };
                    for &(f, c) in self.straighten(pair | rest).iter() {
                        *acc.entry(f).or_insert(0) += s * c;
                    }
                }
                let mut terms: Vec<(u64, i64)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
                terms.sort_unstable();
                Arc::new(terms)
            }
        };
        self.straighten_memo.entry(w).or_insert(result).clone()
    }

    /// Two edges `(a, c)`, `(b, c)` with `a < b < c`, if any.
    fn find_broken(&self, w: u64) -> Option<(usize, usize, usize)> {
        let mut low_for_top = [0usize; 64];
        let mut rest = w;
        while rest != 0 {
            let (i, j) = pair_from_index(self.n, rest.trailing_zeros() as usize);
            rest &= rest - 1;
            if low_for_top[j] != 0 {
                return Some((low_for_top[j], i, j));
            }
            low_for_top[j] = i;
        }
        None
    }

    /// Normal form of a monomial of `Λ` as canonical basis monomials with
    /// integer coefficients.
    pub fn normal_form_monomial(&self, m: u64) -> Vec<(u64, i64)> {
        let n = self.n;
        let xy = m & xy_mask(n);
        let w = m >> (2 * n);
        let mut out = Vec::new();
        for &(forest, c) in self.straighten(w).iter() {
            let reps = component_reps(n, forest);
            let mut acc = 0u64;
            let mut negative = false;
            let mut ok = true;
            let mut rest = xy;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let vertex = bit / 2 + 1;
                let target = 1u64 << (2 * (reps[vertex] - 1) + bit % 2);
                match mul_sign(acc, target) {
                    Some(neg) => {
                        negative ^= neg;
                        acc |= target;
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                out.push((acc | forest << (2 * n), if negative { -c } else { c }));
            }
        }
        out
    }

    fn check_ambient(&self, v: &MultiVector) -> Result<()> {
        if v.n() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: v.n(),
            });
        }
        Ok(())
    }

    /// Coordinates of the class of `v` in the canonical basis of `A^{p,q}`,
    /// where `(p, q)` is the bidegree of `v` (zero maps to the empty vector).
    pub fn normal_form(&self, v: &MultiVector) -> Result<SparseVec> {
        self.check_ambient(v)?;
        match v.require_bidegree()? {
            None => Ok(SparseVec::new()),
            Some((p, q)) => self.coordinates(v, p, q),
        }
    }

    /// Like [`normal_form`](Self::normal_form) with a prescribed bidegree.
    pub fn coordinates(&self, v: &MultiVector, p: usize, q: usize) -> Result<SparseVec> {
        self.check_ambient(v)?;
        let basis = self.basis(p, q);
        let mut entries: Vec<(usize, Rational)> = Vec::new();
        for (m, c) in v.terms() {
            if m.bidegree(self.n) != (p, q) {
                return Err(Error::Inhomogeneous(format!(
                    "term {} is not of bidegree ({p}, {q})",
                    m.display(self.n)
                )));
            }
            for (t, e) in self.normal_form_monomial(m.0) {
                let k = basis.index_of(Monomial(t)).expect("normal form lies in the basis");
                entries.push((k, c * &Rational::from_integer(e)));
            }
        }
        Ok(SparseVec::from_entries(entries))
    }

    /// The element of `Λ` given by coordinates in `A^{p,q}`.
    pub fn element(&self, p: usize, q: usize, coords: &SparseVec) -> MultiVector {
        self.basis(p, q).to_multivector(coords)
    }

    /// Matrix of a linear map `A^{source} → A^{target}` induced by a map on
    /// monomials of `Λ` with integer coefficients.
    pub fn matrix_of<F>(&self, source: (usize, usize), target: (usize, usize), image: F) -> SparseMatrix
    where
        F: Fn(u64) -> Vec<(u64, i64)> + Sync,
    {
        let src = self.basis(source.0, source.1);
        let tgt = self.basis(target.0, target.1);
        let columns: Vec<SparseVec> = (0..src.dim())
            .into_par_iter()
            .map(|k| {
                let mut acc: WordMap<i64> = WordMap::default();
                for (m, c) in image(src.monomial(k).0) {
                    for (t, e) in self.normal_form_monomial(m) {
                        *acc.entry(t).or_insert(0) += c * e;
                    }
                }
                SparseVec::from_entries(acc.into_iter().filter(|&(_, c)| c != 0).map(|(t, c)| {
                    let row = tgt
                        .index_of(Monomial(t))
                        .expect("image lies in the target slice");
                    (row, Rational::from_integer(c))
                }))
            })
            .collect();
        SparseMatrix::from_columns(tgt.dim(), columns).expect("rows within target dimension")
    }

    /// `d` applied to a monomial of `Λ`, as monomials of `Λ`.
    pub fn differential_of_monomial(&self, m: u64) -> Vec<(u64, i64)> {
        let n = self.n;
        let mut out = Vec::new();
        let mut rest = m >> (2 * n);
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let bit = 1u64 << (2 * n + k);
            let position = (m & (bit - 1)).count_ones();
            let sign: i64 = if position.is_multiple_of(2) { 1 } else { -1 };
            let remainder = m & !bit;
            let (i, j) = pair_from_index(n, k);
            let xs = [(Generator::X(i), 1i64), (Generator::X(j), -1)];
            let ys = [(Generator::Y(i), 1i64), (Generator::Y(j), -1)];
            for (gx, cx) in xs {
                for (gy, cy) in ys {
                    let (bx, by) = (1u64 << gx.bit(n), 1u64 << gy.bit(n));
                    let inner = if mul_sign(bx, by).expect("distinct") { -1 } else { 1 };
                    let Some(neg) = mul_sign(bx | by, remainder) else { continue };
                    let outer = if neg { -1 } else { 1 };
                    out.push((bx | by | remainder, sign * cx * cy * inner * outer));
                }
            }
        }
        out
    }

    /// Matrix of `d: A^{p,q} → A^{p+2,q-1}` (zero matrix with no rows when
    /// `q = 0`).
    pub fn differential_matrix(&self, p: usize, q: usize) -> Arc<SparseMatrix> {
        if let Some(d) = self.differentials.get(&(p, q)) {
            return d.clone();
        }
        let key = CacheKey::new("differential", ModelId::A, self.n, p, q);
        let cached = self.disk.as_ref().and_then(|c| c.load_matrix(&key));
        let matrix = match cached {
            Some(m) => m,
            None => {
                let m = if q == 0 {
                    SparseMatrix::zeros(self.basis(p + 2, 0).dim(), self.basis(p, 0).dim())
                } else {
                    self.matrix_of((p, q), (p + 2, q - 1), |m| self.differential_of_monomial(m))
                };
                if let Some(c) = &self.disk {
                    c.store_matrix(&key, &m);
                }
                m
            }
        };
        self.differentials
            .entry((p, q))
            .or_insert(Arc::new(matrix))
            .clone()
    }

    /// The slice `model^{p,q}` as a subspace of `A^{p,q}`.
    pub fn subspace(&self, model: ModelId, p: usize, q: usize) -> Result<Arc<SubspaceBasis>> {
        if let Some(s) = self.subspaces.get(&(model, p, q)) {
            return Ok(s.clone());
        }
        let key = CacheKey::new("subspace", model, self.n, p, q);
        let dim = self.basis(p, q).dim();
        let cached = match model {
            ModelId::A | ModelId::D => None,
            _ => self.disk.as_ref().and_then(|c| c.load_subspace(&key, dim)),
        };
        let space = match cached {
            Some(s) => s,
            None => {
                let s = match model {
                    ModelId::A => SubspaceBasis::full(dim),
                    ModelId::B => self.build_b(p, q)?,
                    ModelId::D => self.build_d(p, q)?,
                    ModelId::UA | ModelId::UB => crate::equivariance::build_invariants(self, model, p, q)?,
                };
                if matches!(model, ModelId::B | ModelId::UA | ModelId::UB) {
                    if let Some(c) = &self.disk {
                        c.store_subspace(&key, &s);
                    }
                }
                s
            }
        };
        Ok(self
            .subspaces
            .entry((model, p, q))
            .or_insert(Arc::new(space))
            .clone())
    }

    pub fn dim(&self, model: ModelId, p: usize, q: usize) -> Result<usize> {
        Ok(self.subspace(model, p, q)?.dim())
    }

    /// `B^{p,q}`: for each nbc forest with components represented by
    /// `r_1 < … < r_k`, the normal forms of the products of `p` of the
    /// elements `x_{r_1} - x_{r_j}`, `y_{r_1} - y_{r_j}` with `ω_F`.
    fn build_b(&self, p: usize, q: usize) -> Result<SubspaceBasis> {
        let n = self.n;
        let basis = self.basis(p, q);
        let forests = enumerate_nbc_forests(n, q);
        let vectors: Vec<SparseVec> = forests
            .par_iter()
            .map(|forest| -> Result<Vec<SparseVec>> {
                let reps = forest.representatives(n);
                let omega = MultiVector::monomial(n, Monomial(forest.mask(n) << (2 * n)), Rational::one());
                let mut differences = Vec::new();
                for &r in &reps[1..] {
                    differences.push(MultiVector::x(n, reps[0]).sub(&MultiVector::x(n, r))?);
                    differences.push(MultiVector::y(n, reps[0]).sub(&MultiVector::y(n, r))?);
                }
                let mut out = Vec::new();
                for chosen in differences.iter().combinations(p) {
                    let mut product = MultiVector::one(n);
                    for f in chosen {
                        product = product.mul(f)?;
                    }
                    out.push(self.coordinates(&product.mul(&omega)?, p, q)?);
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        SubspaceBasis::from_vectors(basis.dim(), vectors)
    }

    fn build_d(&self, p: usize, q: usize) -> Result<SubspaceBasis> {
        let dim = self.basis(p, q).dim();
        if q != 0 || p > 2 {
            return SubspaceBasis::from_vectors(dim, Vec::new());
        }
        let n = self.n;
        let gamma = gamma(n);
        let gammabar = gammabar(n);
        let elements = match p {
            0 => vec![MultiVector::one(n)],
            1 => vec![gamma, gammabar],
            _ => vec![gamma.mul(&gammabar)?],
        };
        let vectors = elements
            .iter()
            .map(|e| self.coordinates(e, p, 0))
            .collect::<Result<Vec<_>>>()?;
        SubspaceBasis::from_vectors(dim, vectors)
    }
}

pub fn gamma(n: usize) -> MultiVector {
    MultiVector::from_terms(
        n,
        (1..=n).map(|i| (Monomial(1u64 << Generator::X(i).bit(n)), Rational::one())),
    )
}

pub fn gammabar(n: usize) -> MultiVector {
    MultiVector::from_terms(
        n,
        (1..=n).map(|i| (Monomial(1u64 << Generator::Y(i).bit(n)), Rational::one())),
    )
}

/// Upper bound on the free slice handled by [`oracle_quotient_dim`].
pub const ORACLE_FREE_LIMIT: u128 = 1_000_000;

/// Dimension of `A^{p,q}` computed without the nbc basis: the free slice
/// `Λ^{p,q}` modulo every product of a defining relation with a monomial.
///
/// The relations respect the partition of vertices into components of the
/// `ω`-edge graph and the number of `x` and `y` letters on each component,
/// so the rank is computed block by block.
pub fn oracle_quotient_dim(n: usize, p: usize, q: usize) -> Result<usize> {
    check_points(n)?;
    let pairs = pair_count(n);
    let free = binomial(2 * n, p) * binomial(pairs, q);
    if free > ORACLE_FREE_LIMIT {
        return Err(Error::GuardExceeded(format!(
            "free slice of bidegree ({p}, {q}) for n = {n} has {free} monomials (limit {ORACLE_FREE_LIMIT})"
        )));
    }
    let xy_bits: Vec<u64> = (0..2 * n).map(|b| 1u64 << b).collect();
    let w_bits: Vec<u64> = (0..pairs).map(|k| 1u64 << (2 * n + k)).collect();
    let monomials = |a: usize, b: usize| -> Vec<u64> {
        let mut out = Vec::new();
        for xs in xy_bits.iter().combinations(a) {
            let x = xs.into_iter().fold(0, |m, b| m | b);
            for ws in w_bits.iter().combinations(b) {
                out.push(ws.into_iter().fold(x, |m, b| m | b));
            }
        }
        out
    };

    let block_key = |m: u64| -> Vec<(u64, u32, u32)> {
        let reps = component_reps(n, m >> (2 * n));
        let mut key: Vec<(u64, u32, u32)> = Vec::new();
        for r in 1..=n {
            if reps[r] != r {
                continue;
            }
            let mut verts = 0u64;
            let (mut xs, mut ys) = (0, 0);
            for v in 1..=n {
                if reps[v] == r {
                    verts |= 1 << v;
                    xs += (m >> (2 * (v - 1)) & 1) as u32;
                    ys += (m >> (2 * (v - 1) + 1) & 1) as u32;
                }
            }
            key.push((verts, xs, ys));
        }
        key
    };

    // Relation generators as signed words.
    let mut relations: Vec<Vec<(u64, i64)>> = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let w = 1u64 << Generator::W(i, j).bit(n);
            for (gi, gj) in [(Generator::X(i), Generator::X(j)), (Generator::Y(i), Generator::Y(j))] {
                relations.push(vec![(1u64 << gi.bit(n) | w, 1), (1u64 << gj.bit(n) | w, -1)]);
            }
        }
    }
    let linear_relations = relations.len();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                // ω_ij ω_jk - ω_ij ω_ik + ω_jk ω_ik, where ω_jk ω_ik = -ω_ik ω_jk.
                let (ij, ik, jk) = (
                    1u64 << Generator::W(i, j).bit(n),
                    1u64 << Generator::W(i, k).bit(n),
                    1u64 << Generator::W(j, k).bit(n),
                );
                relations.push(vec![(ij | jk, 1), (ij | ik, -1), (ik | jk, -1)]);
            }
        }
    }

    let mut blocks: std::collections::HashMap<Vec<(u64, u32, u32)>, (Vec<u64>, Vec<Vec<(u64, i64)>>)> =
        std::collections::HashMap::new();
    for m in monomials(p, q) {
        blocks.entry(block_key(m)).or_default().0.push(m);
    }
    let multipliers_linear = if p >= 1 && q >= 1 { monomials(p - 1, q - 1) } else { Vec::new() };
    let multipliers_quadratic = if q >= 2 { monomials(p, q - 2) } else { Vec::new() };
    for (r, relation) in relations.iter().enumerate() {
        let multipliers = if r < linear_relations {
            &multipliers_linear
        } else {
            &multipliers_quadratic
        };
        for &mult in multipliers {
            let mut product: Vec<(u64, i64)> = Vec::new();
            for &(t, c) in relation {
                if let Some(neg) = mul_sign(t, mult) {
                    product.push((t | mult, if neg { -c } else { c }));
                }
            }
            if product.is_empty() {
                continue;
            }
            let key = block_key(product[0].0);
            debug_assert!(product.iter().all(|&(t, _)| block_key(t) == key));
            blocks
                .get_mut(&key)
                .expect("relation products lie in the free slice")
                .1
                .push(product);
        }
    }

    let dims: Vec<usize> = blocks
        .into_par_iter()
        .map(|(_, (members, rels))| {
            let index: WordMap<usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
            let vectors: Vec<SparseVec> = rels
                .into_iter()
                .map(|r| {
                    SparseVec::from_entries(
                        r.into_iter()
                            .map(|(t, c)| (index[&t], Rational::from_integer(c))),
                    )
                })
                .collect();
            let span = SubspaceBasis::from_vectors(members.len(), vectors).expect("indices in range");
            members.len() - span.dim()
        })
        .collect();
    Ok(dims.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn small_forest_lists() {
        let f = enumerate_nbc_forests(2, 1);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].edges(), &[(1, 2)]);
        let f = enumerate_nbc_forests(3, 2);
        assert_eq!(
            f.iter().map(|f| f.edges().to_vec()).collect::<Vec<_>>(),
            vec![vec![(1, 2), (1, 3)], vec![(1, 2), (2, 3)]]
        );
        assert_eq!(enumerate_nbc_forests(4, 2).len(), 11);
        assert!(enumerate_nbc_forests(3, 3).is_empty());
        assert_eq!(enumerate_nbc_forests(3, 0).len(), 1);
    }

    /// Independent nbc test: a forest contains a broken circuit iff some edge
    /// outside it closes a cycle in which it is the least edge.
    fn has_broken_circuit(n: usize, edges: &[(usize, usize)]) -> bool {
        let adjacent = |a: usize, b: usize| edges.contains(&(a.min(b), a.max(b)));
        let path = |from: usize, to: usize| -> Option<Vec<(usize, usize)>> {
            let mut stack = vec![(from, 0usize, Vec::new())];
            while let Some((v, parent, trail)) = stack.pop() {
                if v == to {
                    return Some(trail);
                }
                for w in 1..=n {
                    if w != parent && adjacent(v, w) {
                        let mut t = trail.clone();
                        t.push((v.min(w), v.max(w)));
                        stack.push((w, v, t));
                    }
                }
            }
            None
        };
        for a in 1..=n {
            for b in a + 1..=n {
                if adjacent(a, b) {
                    continue;
                }
                if let Some(p) = path(a, b) {
                    if p.iter().all(|&e| (a, b) < e) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
        let mut rep: Vec<usize> = (0..=n).collect();
        for &(i, j) in edges {
            let (mut a, mut b) = (i, j);
            while rep[a] != a {
                a = rep[a];
            }
            while rep[b] != b {
                b = rep[b];
            }
            if a == b {
                return false;
            }
            rep[a] = b;
        }
        true
    }

    #[test]
    fn nbc_forests_match_broken_circuit_definition() {
        for n in 1..=5 {
            let all: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
            for q in 0..n {
                let mut brute: Vec<Vec<(usize, usize)>> = all
                    .iter()
                    .copied()
                    .combinations(q)
                    .filter(|s| is_forest(n, s) && !has_broken_circuit(n, s))
                    .collect();
                brute.sort();
                let fast: Vec<Vec<(usize, usize)>> =
                    enumerate_nbc_forests(n, q).into_iter().map(|f| f.edges).collect();
                assert_eq!(fast, brute, "n = {n}, q = {q}");
                assert_eq!(fast.len() as u128, stirling_first(n, n - q));
            }
        }
    }

    #[test]
    fn stirling_and_binomial() {
        assert_eq!(stirling_first(4, 2), 11);
        assert_eq!(stirling_first(5, 3), 35);
        assert_eq!(stirling_first(0, 0), 1);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn small_bases() {
        let m = KrizModel::new(2).unwrap();
        let b = m.basis(1, 1);
        assert_eq!(b.dim(), 2);
        assert_eq!(
            b.elements()
                .iter()
                .map(|e| e.monomial.display(2))
                .collect::<Vec<_>>(),
            vec!["x1*w1,2", "y1*w1,2"]
        );
        assert_eq!(m.basis(2, 1).dim(), 1);
        assert_eq!(m.basis(2, 1).monomial(0).display(2), "x1*y1*w1,2");
        for n in 1..=6 {
            let m = KrizModel::new(n).unwrap();
            for (p, qq) in m.bidegrees() {
                assert_eq!(m.basis(p, qq).dim() as u128, m.formula_dim(ModelId::A, p, qq));
            }
        }
    }

    #[test]
    fn three_term_straightening() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        let v = MultiVector::omega(n, 1, 3).mul(&MultiVector::omega(n, 2, 3)).unwrap();
        let coords = m.normal_form(&v).unwrap();
        let basis = m.basis(0, 2);
        let expected = m
            .coordinates(
                &MultiVector::omega(n, 1, 2)
                    .mul(&MultiVector::omega(n, 2, 3))
                    .unwrap()
                    .sub(&MultiVector::omega(n, 1, 2).mul(&MultiVector::omega(n, 1, 3)).unwrap())
                    .unwrap(),
                0,
                2,
            )
            .unwrap();
        assert_eq!(coords, expected);
        // {(1,2),(1,3)} comes first.
        assert_eq!(coords.get(0), Some(&q(-1)));
        assert_eq!(coords.get(1), Some(&q(1)));
        assert_eq!(basis.dim(), 2);
        // The product around a triangle vanishes.
        let triangle = v.mul(&MultiVector::omega(n, 1, 2)).unwrap();
        assert!(m.coordinates(&triangle, 0, 3).unwrap().is_zero());
    }

    #[test]
    fn collapse_to_representative() {
        let n = 2;
        let m = KrizModel::new(n).unwrap();
        let v = MultiVector::x(n, 2).mul(&MultiVector::omega(n, 1, 2)).unwrap();
        let w = MultiVector::x(n, 1).mul(&MultiVector::omega(n, 1, 2)).unwrap();
        assert_eq!(m.normal_form(&v).unwrap(), m.normal_form(&w).unwrap());
        let killed = MultiVector::x(n, 1)
            .mul(&MultiVector::x(n, 2))
            .unwrap()
            .mul(&MultiVector::omega(n, 1, 2))
            .unwrap();
        assert!(m.normal_form(&killed).unwrap().is_zero());
    }

    #[test]
    fn normal_form_rejects_mixed_bidegrees() {
        let m = KrizModel::new(2).unwrap();
        let v = MultiVector::x(2, 1).add(&MultiVector::omega(2, 1, 2)).unwrap();
        assert!(matches!(m.normal_form(&v), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn normal_form_is_idempotent_on_basis() {
        let m = KrizModel::new(4).unwrap();
        for (p, qq) in m.bidegrees() {
            let basis = m.basis(p, qq);
            for k in 0..basis.dim() {
                let v = basis.to_multivector(&SparseVec::unit(k));
                assert_eq!(m.normal_form(&v).unwrap(), SparseVec::unit(k));
            }
        }
    }

    #[test]
    fn differential_examples() {
        let m = KrizModel::new(2).unwrap();
        let d = m.differential_matrix(0, 1);
        assert_eq!((d.rows(), d.cols()), (6, 1));
        let expected = m
            .normal_form(
                &MultiVector::x(2, 1)
                    .sub(&MultiVector::x(2, 2))
                    .unwrap()
                    .mul(&MultiVector::y(2, 1).sub(&MultiVector::y(2, 2)).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(d.column(0), &expected);
        assert!(m.differential_matrix(3, 0).is_zero());
    }

    #[test]
    fn differential_agrees_with_generic_derivation() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        let d = crate::exterior::Derivation::differential(n);
        for (p, qq) in m.bidegrees() {
            if qq == 0 {
                continue;
            }
            let mat = m.differential_matrix(p, qq);
            let basis = m.basis(p, qq);
            for k in 0..basis.dim() {
                let v = basis.to_multivector(&SparseVec::unit(k));
                let dv = crate::exterior::apply_derivation(&d, &v).unwrap();
                assert_eq!(&m.coordinates(&dv, p + 2, qq - 1).unwrap(), mat.column(k));
            }
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for n in 2..=4 {
            let m = KrizModel::new(n).unwrap();
            for (p, qq) in m.bidegrees() {
                if qq < 2 {
                    continue;
                }
                let dd = m
                    .differential_matrix(p + 2, qq - 1)
                    .mul(&m.differential_matrix(p, qq))
                    .unwrap();
                assert!(dd.is_zero(), "n = {n}, ({p}, {qq})");
            }
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_quotient_dim(2, 1, 1).unwrap(), 2);
        assert_eq!(oracle_quotient_dim(2, 2, 1).unwrap(), 1);
        assert_eq!(oracle_quotient_dim(3, 0, 2).unwrap(), 2);
        assert_eq!(oracle_quotient_dim(2, 4, 1).unwrap(), 0);
        assert!(matches!(
            oracle_quotient_dim(9, 9, 6),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn oracle_matches_basis_small() {
        for n in 1..=4 {
            let m = KrizModel::new(n).unwrap();
            for qq in 0..=n {
                for p in 0..=2 * n {
                    assert_eq!(
                        oracle_quotient_dim(n, p, qq).unwrap(),
                        m.basis(p, qq).dim(),
                        "n = {n}, ({p}, {qq})"
                    );
                }
            }
        }
    }

    #[test]
    fn b_and_d_dimensions() {
        for n in 1..=5 {
            let m = KrizModel::new(n).unwrap();
            for (p, qq) in m.bidegrees() {
                let b = m.dim(ModelId::B, p, qq).unwrap() as u128;
                assert_eq!(b, m.formula_dim(ModelId::B, p, qq));
                let split: usize = (0..=2.min(p))
                    .map(|j| binomial(2, j) as usize * m.dim(ModelId::B, p - j, qq).unwrap())
                    .sum();
                assert_eq!(split, m.basis(p, qq).dim());
            }
            assert_eq!(m.dim(ModelId::D, 1, 0).unwrap(), 2);
            assert_eq!(m.dim(ModelId::D, 2, 0).unwrap(), 1);
            assert_eq!(m.dim(ModelId::D, 3, 0).unwrap(), 0);
        }
    }

    #[test]
    fn b_from_full_spanning_set() {
        // Span of all products of differences and ω-monomials, straight from
        // the definition of the subalgebra.
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        let mut gens = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                gens.push(MultiVector::x(n, i).sub(&MultiVector::x(n, j)).unwrap());
                gens.push(MultiVector::y(n, i).sub(&MultiVector::y(n, j)).unwrap());
            }
        }
        let omegas: Vec<MultiVector> = (1..=n)
            .tuple_combinations()
            .map(|(i, j)| MultiVector::omega(n, i, j))
            .collect();
        for (p, qq) in m.bidegrees() {
            let mut vectors = Vec::new();
            for us in gens.iter().combinations(p) {
                for ws in omegas.iter().combinations(qq) {
                    let mut prod = MultiVector::one(n);
                    for f in us.iter().chain(ws.iter()) {
                        prod = prod.mul(f).unwrap();
                    }
                    vectors.push(m.coordinates(&prod, p, qq).unwrap());
                }
            }
            let span = SubspaceBasis::from_vectors(m.basis(p, qq).dim(), vectors).unwrap();
            assert_eq!(&span, m.subspace(ModelId::B, p, qq).unwrap().as_ref(), "({p}, {qq})");
        }
    }

    #[test]
    fn relations_are_d_stable() {
        let n = 3;
        let m = KrizModel::new(n).unwrap();
        let d = crate::exterior::Derivation::differential(n);
        let w = |i, j| MultiVector::omega(n, i, j);
        let rel1 = MultiVector::x(n, 1).sub(&MultiVector::x(n, 2)).unwrap().mul(&w(1, 2)).unwrap();
        let rel2 = MultiVector::y(n, 2).sub(&MultiVector::y(n, 3)).unwrap().mul(&w(2, 3)).unwrap();
        let rel3 = w(1, 2)
            .mul(&w(2, 3))
            .unwrap()
            .sub(&w(1, 2).mul(&w(1, 3)).unwrap())
            .unwrap()
            .add(&w(2, 3).mul(&w(1, 3)).unwrap())
            .unwrap();
        for r in [rel1, rel2, rel3] {
            assert!(m.normal_form(&r).unwrap().is_zero());
            let dr = crate::exterior::apply_derivation(&d, &r).unwrap();
            assert!(m.normal_form(&dr).unwrap().is_zero());
        }
    }
}
