//! Marked partitions of `n`: partitions whose blocks carry a mark in
//! `{1, x, y, xy}`, the orders of their stabilizer-type groups `Z_{L,H}`
//! and the triviality of the character `ξ`. Summing induced dimensions
//! recovers the dimension of every slice of `A`, and counting trivial
//! characters recovers the dimension of its invariants.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::perm::{factorial, partitions};

/// Largest `n` for which `n!` fits in a `u128`.
pub const MAX_FACTORIAL_N: usize = 34;

/// A block mark, ordered `1 ≺ x ≺ y ≺ xy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    One,
    X,
    Y,
    XY,
}

impl Mark {
    pub const ALL: [Mark; 4] = [Mark::One, Mark::X, Mark::Y, Mark::XY];

    pub fn degree(&self) -> usize {
        match self {
            Mark::One => 0,
            Mark::X | Mark::Y => 1,
            Mark::XY => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mark::One => "1",
            Mark::X => "x",
            Mark::Y => "y",
            Mark::XY => "xy",
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPartition {
    pub lambda: Vec<usize>,
    pub marks: Vec<Mark>,
}

/// Orders of `C_L` (product of the parts), `N_{L,H}` (product of factorials
/// of the multiplicities of equal marked blocks) and `Z_{L,H}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizerInfo {
    pub c_order: u128,
    pub n_order: u128,
    pub z_order: u128,
}

impl MarkedPartition {
    /// Checks that parts are weakly decreasing and that marks are weakly
    /// decreasing along equal parts.
    pub fn new(lambda: Vec<usize>, marks: Vec<Mark>) -> Result<Self> {
        let bad = |why: &str| Err(Error::Parse(format!("invalid marked partition: {why}")));
        if lambda.len() != marks.len() {
            return bad("parts and marks differ in length");
        }
        if lambda.contains(&0) {
            return bad("zero part");
        }
        for i in 1..lambda.len() {
            if lambda[i] > lambda[i - 1] {
                return bad("parts not weakly decreasing");
            }
            if lambda[i] == lambda[i - 1] && marks[i] > marks[i - 1] {
                return bad("marks not weakly decreasing on equal parts");
            }
        }
        Ok(MarkedPartition { lambda, marks })
    }

    pub fn n(&self) -> usize {
        self.lambda.iter().sum()
    }

    /// `|L| = n - (number of parts)`.
    pub fn size_l(&self) -> usize {
        self.n() - self.lambda.len()
    }

    /// `|H|`: total degree of the marks.
    pub fn size_h(&self) -> usize {
        self.marks.iter().map(Mark::degree).sum()
    }

    /// `‖H‖ = #x - #y`.
    pub fn norm_h(&self) -> i64 {
        let count = |m: Mark| self.marks.iter().filter(|&&h| h == m).count() as i64;
        count(Mark::X) - count(Mark::Y)
    }

    /// Classes of equal marked blocks with their multiplicities.
    fn block_classes(&self) -> BTreeMap<(usize, Mark), usize> {
        let mut classes = BTreeMap::new();
        for (&l, &h) in self.lambda.iter().zip(&self.marks) {
            *classes.entry((l, h)).or_insert(0) += 1;
        }
        classes
    }

    pub fn stabilizer(&self) -> Result<StabilizerInfo> {
        if self.n() > MAX_FACTORIAL_N {
            return Err(Error::GuardExceeded(format!(
                "group orders for n = {} exceed 128-bit integers (limit n = {MAX_FACTORIAL_N})",
                self.n()
            )));
        }
        let c_order: u128 = self.lambda.iter().map(|&l| l as u128).product();
        let n_order: u128 = self.block_classes().values().map(|&m| factorial(m)).product();
        Ok(StabilizerInfo {
            c_order,
            n_order,
            z_order: c_order * n_order,
        })
    }

    /// Dimension `n! / |Z_{L,H}|` of the induced representation.
    pub fn induced_dim(&self) -> Result<u128> {
        let s = self.stabilizer()?;
        Ok(factorial(self.n()) / s.z_order)
    }

    /// Whether `ξ` is trivial: every part is 1 or 2, and every marked block
    /// occurring more than once has `λ + deg(h)` odd.
    pub fn xi_is_trivial(&self) -> bool {
        self.lambda.iter().all(|&l| l <= 2)
            && self
                .block_classes()
                .iter()
                .all(|(&(l, h), &m)| m < 2 || (l + h.degree()) % 2 == 1)
    }
}

impl fmt::Display for MarkedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "L=({}) H=({})",
            self.lambda.iter().join(","),
            self.marks.iter().join(",")
        )
    }
}

/// All marked partitions of `n` with `|L| = q` and `|H| = p`, ordered by
/// partition (largest parts first) and then by marks.
pub fn enumerate_marked(n: usize, p: usize, q: usize) -> Vec<MarkedPartition> {
    if n == 0 {
        return if p == 0 && q == 0 {
            vec![MarkedPartition { lambda: Vec::new(), marks: Vec::new() }]
        } else {
            Vec::new()
        };
    }
    if q >= n {
        return Vec::new();
    }
    let parts = n - q;
    let mut out = Vec::new();
    for lambda in partitions(n).into_iter().filter(|l| l.len() == parts) {
        let groups: Vec<(usize, usize)> = lambda
            .iter()
            .chunk_by(|&&l| l)
            .into_iter()
            .map(|(l, g)| (l, g.count()))
            .collect();
        let options: Vec<Vec<Vec<Mark>>> = groups
            .iter()
            .map(|&(_, mult)| {
                Mark::ALL
                    .iter()
                    .copied()
                    .combinations_with_replacement(mult)
                    .map(|mut c| {
                        c.sort_unstable_by(|a, b| b.cmp(a));
                        c
                    })
                    .collect()
            })
            .collect();
        for choice in options.iter().map(|o| o.iter()).multi_cartesian_product() {
            let marks: Vec<Mark> = choice.into_iter().flatten().copied().collect();
            if marks.iter().map(Mark::degree).sum::<usize>() == p {
                out.push(MarkedPartition {
                    lambda: lambda.clone(),
                    marks,
                });
            }
        }
    }
    out.sort_by(|a, b| b.lambda.cmp(&a.lambda).then_with(|| b.marks.cmp(&a.marks)));
    out
}

/// `Σ n!/|Z_{L,H}|` over the marked partitions of the slice.
pub fn slice_dimension_oracle(n: usize, p: usize, q: usize) -> Result<u128> {
    enumerate_marked(n, p, q).iter().map(MarkedPartition::induced_dim).sum()
}

/// Number of marked partitions of the slice with trivial `ξ`.
pub fn invariant_dimension_oracle(n: usize, p: usize, q: usize) -> usize {
    enumerate_marked(n, p, q).iter().filter(|m| m.xi_is_trivial()).count()
}

/// `Σ n!/|Z_{L,H}|` restricted to `‖H‖ = a`.
pub fn weight_dimension_oracle(n: usize, p: usize, q: usize, a: i64) -> Result<u128> {
    enumerate_marked(n, p, q)
        .iter()
        .filter(|m| m.norm_h() == a)
        .map(MarkedPartition::induced_dim)
        .sum()
}
