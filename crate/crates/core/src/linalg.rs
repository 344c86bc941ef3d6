//! Exact sparse linear algebra over the rationals.
//!
//! Everything here is immutable once built: reductions return fresh values.
//! Subspaces are always stored in reduced row echelon form, which is unique,
//! so two computations of the same subspace compare equal regardless of the
//! order in which their spanning vectors were processed.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec {
            entries: vec![(index, Rational::one())],
        }
    }

    /// Sums duplicate indices and drops zeros; input order is irrelevant.
    pub fn from_entries<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut raw: Vec<(usize, Rational)> = entries.into_iter().collect();
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec { entries: out }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.entries.iter().map(|(i, v)| (*i, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scaled(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, -v)).collect(),
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&-Rational::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Rational {
        let mut acc = Rational::zero();
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        while let (Some((i, x)), Some((j, y))) = (a.peek(), b.peek()) {
            if i < j {
                a.next();
            } else if j < i {
                b.next();
            } else {
                acc += &(x * y);
                a.next();
                b.next();
            }
        }
        acc
    }

    /// Keeps only the entries whose index satisfies `keep`, re-indexed by `map`.
    pub fn remap<F>(&self, mut map: F) -> SparseVec
    where
        F: FnMut(usize) -> Option<usize>,
    {
        SparseVec::from_entries(
            self.entries
                .iter()
                .filter_map(|(i, v)| map(*i).map(|j| (j, v.clone()))),
        )
    }

    fn normalized(mut self) -> SparseVec {
        if let Some((_, lead)) = self.entries.first() {
            if !lead.is_one() {
                let inv = lead.recip();
                for (_, v) in &mut self.entries {
                    *v *= &inv;
                }
            }
        }
        self
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(coeffs: &[Rational], vectors: &[SparseVec]) -> SparseVec {
    SparseVec::from_entries(
        coeffs
            .iter()
            .zip(vectors)
            .filter(|(c, _)| !c.is_zero())
            .flat_map(|(c, v)| v.iter().map(move |(i, x)| (i, x * c))),
    )
}

/// Sparse matrix over the rationals, stored by rows with a lazily built
/// column view.
#[derive(Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_data: Vec<SparseVec>,
    col_data: OnceLock<Vec<SparseVec>>,
}

impl Clone for SparseMatrix {
    fn clone(&self) -> Self {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            row_data: self.row_data.clone(),
            col_data: OnceLock::new(),
        }
    }
}

impl PartialEq for SparseMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.row_data == other.row_data
    }
}

impl Eq for SparseMatrix {}

fn check_indices(v: &SparseVec, bound: usize) -> Result<()> {
    match v.max_index() {
        Some(m) if m >= bound => Err(Error::DimensionMismatch {
            expected: bound,
            found: m + 1,
        }),
        _ => Ok(()),
    }
}

fn transpose_vectors(vectors: &[SparseVec], len: usize) -> Vec<SparseVec> {
    let mut out: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); len];
    for (i, v) in vectors.iter().enumerate() {
        for (j, x) in v.iter() {
            out[j].push((i, x.clone()));
        }
    }
    out.into_iter().map(|entries| SparseVec { entries }).collect()
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_data: vec![SparseVec::new(); rows],
            col_data: OnceLock::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            row_data: (0..n).map(SparseVec::unit).collect(),
            col_data: OnceLock::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            check_indices(r, cols)?;
        }
        Ok(SparseMatrix {
            rows: rows.len(),
            cols,
            row_data: rows,
            col_data: OnceLock::new(),
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Result<Self> {
        for c in &columns {
            check_indices(c, rows)?;
        }
        let cols = columns.len();
        let row_data = transpose_vectors(&columns, rows);
        let col_data = OnceLock::new();
        let _ = col_data.set(columns);
        Ok(SparseMatrix {
            rows,
            cols,
            row_data,
            col_data,
        })
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut buckets: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows {
                return Err(Error::DimensionMismatch { expected: rows, found: r + 1 });
            }
            if c >= cols {
                return Err(Error::DimensionMismatch { expected: cols, found: c + 1 });
            }
            buckets[r].push((c, v));
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_data: buckets.into_iter().map(SparseVec::from_entries).collect(),
            col_data: OnceLock::new(),
        })
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
        }
        SparseMatrix::from_rows(cols, rows.iter().map(|r| SparseVec::from_dense(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.row_data.iter().all(SparseVec::is_zero)
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.row_data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.row_data
    }

    pub fn column_vectors(&self) -> &[SparseVec] {
        self.col_data
            .get_or_init(|| transpose_vectors(&self.row_data, self.cols))
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.column_vectors()[j]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.row_data[r].get(c).cloned().unwrap_or_default()
    }

    /// `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.row_data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, c, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            row_data: self.column_vectors().to_vec(),
            col_data: OnceLock::new(),
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> Result<SparseVec> {
        check_indices(v, self.cols)?;
        let cols = self.column_vectors();
        Ok(SparseVec::from_entries(
            v.iter()
                .flat_map(|(j, x)| cols[j].iter().map(move |(i, y)| (i, y * x))),
        ))
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let rows = self
            .row_data
            .iter()
            .map(|row| {
                SparseVec::from_entries(row.iter().flat_map(|(k, a)| {
                    other.row_data[k].iter().map(move |(j, b)| (j, a * b))
                }))
            })
            .collect();
        SparseMatrix::from_rows(other.cols, rows)
    }

    fn zip_rows(&self, other: &SparseMatrix, c: &Rational) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let rows = self
            .row_data
            .iter()
            .zip(&other.row_data)
            .map(|(a, b)| a.add_scaled(c, b))
            .collect();
        SparseMatrix::from_rows(self.cols, rows)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.zip_rows(other, &Rational::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.zip_rows(other, &-Rational::one())
    }

    pub fn scaled(&self, c: &Rational) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            row_data: self.row_data.iter().map(|r| r.scaled(c)).collect(),
            col_data: OnceLock::new(),
        }
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let cols = blocks.first().map_or(0, |m| m.cols);
        let mut rows = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: b.cols });
            }
            rows.extend(b.row_data.iter().cloned());
        }
        SparseMatrix::from_rows(cols, rows)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .filter_map(|i| self.row_data[i].get(i))
            .sum()
    }
}

/// Incremental forward elimination. Each stored row has leading entry 1 at
/// a column no other stored row leads with.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` until its leading column is not a pivot column.
    pub fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((lead, coef)) = v.leading() {
            match self.rows.get(&lead) {
                Some(p) => {
                    let c = -coef;
                    v = v.add_scaled(&c, p);
                }
                None => break,
            }
        }
        v
    }

    /// Inserts `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce_leading(v);
        match v.leading() {
            Some((lead, _)) => {
                self.rows.insert(lead, v.normalized());
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        // A leading entry outside the pivot columns can never cancel.
        self.reduce_leading(v.clone()).is_zero()
    }

    /// Back-substitutes into reduced row echelon form.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (pivot, row) in self.rows.into_iter().rev() {
            let hits: Vec<(usize, Rational)> = row
                .iter()
                .filter(|(c, _)| *c != pivot && done.contains_key(c))
                .map(|(c, v)| (c, v.clone()))
                .collect();
            let reduced = if hits.is_empty() {
                row
            } else {
                SparseVec::from_entries(row.iter().map(|(c, v)| (c, v.clone())).chain(
                    hits.iter().flat_map(|(c, coef)| {
                        done[c].iter().map(move |(j, x)| (j, -(x * coef)))
                    }),
                ))
            };
            done.insert(pivot, reduced);
        }
        done.into_values().collect()
    }
}

/// A subspace of `Q^ambient`, stored as its reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    ambient: usize,
    vectors: Vec<SparseVec>,
    pivot_pos: HashMap<usize, usize>,
}

impl PartialEq for SubspaceBasis {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vectors == other.vectors
    }
}

impl Eq for SubspaceBasis {}

impl SubspaceBasis {
    fn from_rref(ambient: usize, vectors: Vec<SparseVec>) -> Self {
        let pivot_pos = vectors
            .iter()
            .enumerate()
            .map(|(k, v)| (v.leading().expect("nonzero rref row").0, k))
            .collect();
        SubspaceBasis {
            ambient,
            vectors,
            pivot_pos,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        SubspaceBasis::from_rref(ambient, Vec::new())
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceBasis::from_rref(ambient, (0..ambient).map(SparseVec::unit).collect())
    }

    /// Echelon basis of the span of `vectors`; sparsest vectors are
    /// eliminated first, which does not affect the (unique) result.
    pub fn from_vectors(ambient: usize, vectors: Vec<SparseVec>) -> Result<Self> {
        for v in &vectors {
            check_indices(v, ambient)?;
        }
        let mut order: Vec<SparseVec> = vectors;
        order.sort_by_key(SparseVec::nnz);
        let mut ech = Echelon::new();
        for v in order {
            ech.insert(v);
        }
        Ok(SubspaceBasis::from_rref(ambient, ech.into_rref()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vectors
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.vectors.iter().map(|v| v.leading().expect("nonzero").0)
    }

    /// Residual of `v` modulo the subspace; linear in `v`, zero iff `v`
    /// lies in the subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, &Rational)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_pos.get(&c).map(|&k| (k, x)))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        SparseVec::from_entries(v.iter().map(|(c, x)| (c, x.clone())).chain(
            hits.into_iter().flat_map(|(k, coef)| {
                self.vectors[k].iter().map(move |(j, y)| (j, -(y * coef)))
            }),
        ))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.vectors
                .iter()
                .map(|b| v.get(b.leading().expect("nonzero").0).cloned().unwrap_or_default())
                .collect(),
        )
    }

    /// Coordinates without the membership check; only meaningful when the
    /// caller already knows `v` lies in the span.
    pub fn coordinates_unchecked(&self, v: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            v.iter()
                .filter_map(|(c, x)| self.pivot_pos.get(&c).map(|&k| (k, x.clone()))),
        )
    }

    /// Embeds a coordinate vector back into the ambient space.
    pub fn combine(&self, coords: &SparseVec) -> SparseVec {
        SparseVec::from_entries(
            coords
                .iter()
                .flat_map(|(k, c)| self.vectors[k].iter().map(move |(j, x)| (j, x * c))),
        )
    }

    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        SubspaceBasis::from_vectors(self.ambient, all)
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.ambient == other.ambient && self.vectors.iter().all(|v| other.contains(v))
    }
}

/// Result of [`reduce`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    pub row_space: SubspaceBasis,
    pub kernel: SubspaceBasis,
}

/// Rank, row space and kernel of a matrix.
pub fn reduce(matrix: &SparseMatrix) -> Reduction {
    let row_space = SubspaceBasis::from_vectors(matrix.cols(), matrix.row_vectors().to_vec())
        .expect("matrix rows are within bounds");
    let kernel = kernel_of_rref(&row_space);
    Reduction {
        rank: row_space.dim(),
        row_space,
        kernel,
    }
}

fn kernel_of_rref(rref: &SubspaceBasis) -> SubspaceBasis {
    let n = rref.ambient_dim();
    let mut by_column: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut is_pivot = vec![false; n];
    for row in rref.vectors() {
        let (pivot, _) = row.leading().expect("nonzero");
        is_pivot[pivot] = true;
        for (c, v) in row.iter().skip(1) {
            by_column[c].push((pivot, -v));
        }
    }
    let vectors: Vec<SparseVec> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut entries = std::mem::take(&mut by_column[f]);
            entries.push((f, Rational::one()));
            SparseVec::from_entries(entries)
        })
        .collect();
    SubspaceBasis::from_vectors(n, vectors).expect("kernel vectors are within bounds")
}

/// `ambient_dim - rank(gens)` for dense generator vectors.
pub fn quotient_dim(ambient_dim: usize, subspace_gens: &[Vec<Rational>]) -> Result<usize> {
    for g in subspace_gens {
        if g.len() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: g.len(),
            });
        }
    }
    quotient_dim_sparse(
        ambient_dim,
        subspace_gens.iter().map(|g| SparseVec::from_dense(g)).collect(),
    )
}

pub fn quotient_dim_sparse(ambient_dim: usize, subspace_gens: Vec<SparseVec>) -> Result<usize> {
    let span = SubspaceBasis::from_vectors(ambient_dim, subspace_gens)?;
    Ok(ambient_dim - span.dim())
}

/// Basis of `a ∩ b`.
pub fn subspace_intersection(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<SubspaceBasis> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch {
            left: a.ambient,
            right: b.ambient,
        });
    }
    let (small, large) = if a.dim() <= b.dim() { (a, b) } else { (b, a) };
    if small.dim() == 0 {
        return Ok(SubspaceBasis::zero(a.ambient));
    }
    // Combinations of `small`'s basis whose residual modulo `large` vanishes.
    let residuals: Vec<SparseVec> = small.vectors.iter().map(|v| large.reduce(v)).collect();
    let relations = SparseMatrix::from_columns(a.ambient, residuals)?;
    let kernel = reduce(&relations).kernel;
    let vectors = kernel
        .vectors()
        .iter()
        .map(|c| small.combine(c))
        .collect();
    SubspaceBasis::from_vectors(a.ambient, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_dense(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn sv(values: &[i64]) -> SparseVec {
        SparseVec::from_dense(&values.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn empty_matrix() {
        let r = reduce(&SparseMatrix::zeros(0, 0));
        assert_eq!(r.rank, 0);
        assert_eq!(r.row_space.dim(), 0);
        assert_eq!(r.kernel.dim(), 0);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let r = reduce(&SparseMatrix::identity(3));
        assert_eq!(r.rank, 3);
        assert_eq!(r.kernel.dim(), 0);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = dense(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let r = reduce(&m);
        assert_eq!(r.rank, 2);
        assert_eq!(r.kernel.dim(), 2);
        for k in r.kernel.vectors() {
            assert!(m.mul_vec(k).unwrap().is_zero());
        }
    }

    #[test]
    fn rref_is_reduced() {
        let m = dense(&[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2]]);
        let r = reduce(&m);
        let pivots: Vec<usize> = r.row_space.pivots().collect();
        assert_eq!(pivots, vec![0, 1]);
        for (k, v) in r.row_space.vectors().iter().enumerate() {
            assert!(v.leading().unwrap().1.is_one());
            for (l, p) in pivots.iter().enumerate() {
                if l != k {
                    assert!(v.get(*p).is_none());
                }
            }
        }
    }

    #[test]
    fn quotient_dims() {
        assert_eq!(quotient_dim(5, &[]).unwrap(), 5);
        let e1 = vec![q(1), q(0), q(0)];
        let e12 = vec![q(1), q(1), q(0)];
        assert_eq!(quotient_dim(3, &[e1, e12]).unwrap(), 1);
        assert!(matches!(
            quotient_dim(3, &[vec![q(1)]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersections() {
        let a = SubspaceBasis::from_vectors(3, vec![sv(&[1, 1, 0])]).unwrap();
        let b = SubspaceBasis::from_vectors(3, vec![sv(&[1, 0, 0]), sv(&[0, 1, 0])]).unwrap();
        assert_eq!(subspace_intersection(&a, &b).unwrap(), a);
        assert_eq!(subspace_intersection(&b, &b).unwrap(), b);
        let c = SubspaceBasis::from_vectors(3, vec![sv(&[0, 0, 1])]).unwrap();
        assert_eq!(subspace_intersection(&b, &c).unwrap().dim(), 0);
        let d = SubspaceBasis::zero(4);
        assert!(matches!(
            subspace_intersection(&a, &d),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn coordinates_round_trip() {
        let s = SubspaceBasis::from_vectors(4, vec![sv(&[1, 2, 0, 1]), sv(&[0, 1, 1, 1])]).unwrap();
        let v = sv(&[2, 7, 3, 5]);
        let c = s.coordinates(&v).unwrap();
        assert_eq!(combine(&c, s.vectors()), v);
        assert!(s.coordinates(&sv(&[0, 0, 0, 1])).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = dense(&refs);
            let r = reduce(&m);
            prop_assert_eq!(r.rank, reduce(&m.transpose()).rank);
            prop_assert_eq!(r.rank + r.kernel.dim(), m.cols());
            for k in r.kernel.vectors() {
                prop_assert!(m.mul_vec(k).unwrap().is_zero());
            }
        }

        #[test]
        fn row_order_does_not_matter(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let mut rev = refs.clone();
            rev.reverse();
            prop_assert_eq!(reduce(&dense(&refs)).row_space, reduce(&dense(&rev)).row_space);
        }

        #[test]
        fn grassmann_formula(a in small_matrix(), b in small_matrix()) {
            let width = a[0].len().min(b[0].len());
            let cut = |m: &Vec<Vec<i64>>| -> Vec<SparseVec> {
                m.iter().map(|r| sv(&r[..width])).collect()
            };
            let sa = SubspaceBasis::from_vectors(width, cut(&a)).unwrap();
            let sb = SubspaceBasis::from_vectors(width, cut(&b)).unwrap();
            let meet = subspace_intersection(&sa, &sb).unwrap();
            let join = sa.sum(&sb).unwrap();
            prop_assert_eq!(sa.dim() + sb.dim(), join.dim() + meet.dim());
            prop_assert!(meet.is_subspace_of(&sa));
            prop_assert!(meet.is_subspace_of(&sb));
        }
    }
}
