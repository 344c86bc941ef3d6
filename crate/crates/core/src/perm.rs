//! Permutations of `{1, …, n}`.

use std::fmt;

use itertools::Itertools;

/// A permutation stored as its images, `images[i] = σ(i + 1) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// From one-based images; `None` unless they form a permutation.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return None;
            }
            seen[i - 1] = true;
            out.push(i - 1);
        }
        Some(Permutation { images: out })
    }

    /// The transposition of the one-based points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }

    /// The cycle `(1 2 … n)`.
    pub fn long_cycle(n: usize) -> Self {
        Permutation {
            images: (0..n).map(|i| (i + 1) % n).collect(),
        }
    }

    /// Product of disjoint cycles of the given lengths on consecutive points.
    pub fn with_cycle_type(cycle_type: &[usize]) -> Self {
        let n = cycle_type.iter().sum();
        let mut images = vec![0; n];
        let mut start = 0;
        for &len in cycle_type {
            for k in 0..len {
                images[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for one-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(i, j)| i == *j).count()
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        let even_cycles = self.cycle_type().iter().filter(|&&l| l % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `{1, …, n}` in lexicographic order of images.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (0..n)
            .permutations(n)
            .map(|images| Permutation { images })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().map(|i| i + 1).join(" "))
    }
}

/// Integer partitions of `n`, weakly decreasing parts, in reverse
/// lexicographic order (`[n]` first).
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Size of the conjugacy class of `S_n` with the given cycle type.
pub fn class_size(cycle_type: &[usize]) -> u128 {
    let n: usize = cycle_type.iter().sum();
    let mut centralizer: u128 = 1;
    for (len, group) in &cycle_type.iter().chunk_by(|&&l| l) {
        let m = group.count();
        centralizer *= (len as u128).pow(m as u32) * factorial(m);
    }
    factorial(n) / centralizer
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes_sum_to_factorial() {
        for n in 1..=7 {
            let total: u128 = partitions(n).iter().map(|c| class_size(c)).sum();
            assert_eq!(total, factorial(n));
        }
    }

    #[test]
    fn cycle_type_representatives() {
        for ct in partitions(6) {
            assert_eq!(Permutation::with_cycle_type(&ct).cycle_type(), ct);
        }
    }

    #[test]
    fn group_laws() {
        let perms: Vec<_> = Permutation::all(4).collect();
        assert_eq!(perms.len(), 24);
        for a in &perms {
            assert_eq!(a.compose(&a.inverse()), Permutation::identity(4));
            for b in &perms {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
            }
        }
        let t = Permutation::transposition(4, 1, 2);
        assert_eq!(t.apply(1), 2);
        assert_eq!(t.sign(), -1);
        assert_eq!(Permutation::long_cycle(4).apply(4), 1);
        assert_eq!(Permutation::from_images(&[2, 3, 1]).unwrap().apply(3), 1);
        assert!(Permutation::from_images(&[1, 1]).is_none());
    }
}
