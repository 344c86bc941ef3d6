//! The free graded-commutative algebra Λ on odd generators `x_i`, `y_i`
//! (bidegree `(1, 0)`) and `ω_{i,j}` (bidegree `(0, 1)`).
//!
//! Generators are totally ordered as
//! `x_1 < y_1 < x_2 < y_2 < … < x_n < y_n < ω_{1,2} < ω_{1,3} < … < ω_{n-1,n}`
//! and a monomial is the bitmask of its generators in that order. Every sign
//! in the crate comes from sorting words into this order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::rational::Rational;

/// Largest supported number of points: `2n + n(n-1)/2` bits must fit a `u64`.
pub const MAX_POINTS: usize = 9;

pub(crate) fn check_points(n: usize) -> Result<()> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::UnsupportedPointCount { n, max: MAX_POINTS });
    }
    Ok(())
}

/// Multiplicative hasher for `u64` keys in hot loops.
#[derive(Default, Clone, Copy)]
pub(crate) struct WordHasher(u64);

impl Hasher for WordHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }
    fn write_u64(&mut self, i: u64) {
        self.0 = (self.0 ^ i).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29);
    }
    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }
}

pub(crate) type WordMap<V> = HashMap<u64, V, BuildHasherDefault<WordHasher>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    X,
    Y,
    W,
}

/// A generator of Λ. `W(i, j)` is kept with `i < j`; `ω_{j,i}` means `ω_{i,j}`
/// with no sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    Y(usize),
    W(usize, usize),
}

impl Generator {
    pub fn omega(i: usize, j: usize) -> Generator {
        assert!(i != j, "ω_{{{i},{i}}} does not exist");
        Generator::W(i.min(j), i.max(j))
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            Generator::X(_) => GeneratorKind::X,
            Generator::Y(_) => GeneratorKind::Y,
            Generator::W(..) => GeneratorKind::W,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let ok = match *self {
            Generator::X(i) | Generator::Y(i) => (1..=n).contains(&i),
            Generator::W(i, j) => i >= 1 && i < j && j <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("generator {self} out of range for n = {n}")))
        }
    }

    /// Bit position in the canonical order for `n` points.
    pub fn bit(&self, n: usize) -> u32 {
        match *self {
            Generator::X(i) => (2 * (i - 1)) as u32,
            Generator::Y(i) => (2 * (i - 1) + 1) as u32,
            Generator::W(i, j) => (2 * n + pair_index(n, i, j)) as u32,
        }
    }

    pub fn from_bit(n: usize, bit: u32) -> Generator {
        let b = bit as usize;
        if b < 2 * n {
            if b.is_multiple_of(2) {
                Generator::X(b / 2 + 1)
            } else {
                Generator::Y(b / 2 + 1)
            }
        } else {
            let (i, j) = pair_from_index(n, b - 2 * n);
            Generator::W(i, j)
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "x{i}"),
            Generator::Y(i) => write!(f, "y{i}"),
            Generator::W(i, j) => write!(f, "w{i},{j}"),
        }
    }
}

/// Lexicographic index of the pair `i < j` among all pairs of `1..=n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

pub fn pair_from_index(n: usize, mut k: usize) -> (usize, usize) {
    for i in 1..n {
        let row = n - i;
        if k < row {
            return (i, i + 1 + k);
        }
        k -= row;
    }
    panic!("pair index out of range")
}

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Mask of the `x`/`y` bits.
pub fn xy_mask(n: usize) -> u64 {
    (1u64 << (2 * n)) - 1
}

/// Sign of bringing the concatenation `a·b` into canonical order, or `None`
/// when a generator repeats. `Some(true)` means the sign is negative.
#[inline]
pub fn mul_sign(a: u64, b: u64) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut parity = 0u32;
    let mut rest = b;
    while rest != 0 {
        let t = rest.trailing_zeros();
        parity ^= (a >> t).count_ones() & 1;
        rest &= rest - 1;
    }
    Some(parity == 1)
}

/// A square-free monomial, as a bitmask over the canonical generator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, n: usize, g: Generator) -> bool {
        self.0 >> g.bit(n) & 1 == 1
    }

    /// `(p, q)`: number of `x`/`y` letters and of `ω` letters.
    pub fn bidegree(&self, n: usize) -> (usize, usize) {
        let xy = self.0 & xy_mask(n);
        (xy.count_ones() as usize, (self.0 >> (2 * n)).count_ones() as usize)
    }

    /// Torus weight: number of `x` letters minus number of `y` letters.
    pub fn weight(&self, n: usize) -> i64 {
        let xy = self.0 & xy_mask(n);
        let xs = (xy & 0x5555_5555_5555_5555).count_ones() as i64;
        let ys = (xy & 0xAAAA_AAAA_AAAA_AAAA).count_ones() as i64;
        xs - ys
    }

    /// The generators in canonical order.
    pub fn generators(&self, n: usize) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.len());
        let mut rest = self.0;
        while rest != 0 {
            out.push(Generator::from_bit(n, rest.trailing_zeros()));
            rest &= rest - 1;
        }
        out
    }

    /// Canonical form of a word of generators: `(sign, monomial)`, or `None`
    /// if a generator repeats.
    pub fn from_word(n: usize, word: &[Generator]) -> Option<(i64, Monomial)> {
        let mut acc = 0u64;
        let mut negative = false;
        for g in word {
            let b = 1u64 << g.bit(n);
            negative ^= mul_sign(acc, b)?;
            acc |= b;
        }
        Some((if negative { -1 } else { 1 }, Monomial(acc)))
    }

    pub fn mul(&self, other: &Monomial) -> Option<(i64, Monomial)> {
        let neg = mul_sign(self.0, other.0)?;
        Some((if neg { -1 } else { 1 }, Monomial(self.0 | other.0)))
    }

    /// The `ω` edges, in canonical order.
    pub fn edges(&self, n: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut rest = self.0 >> (2 * n);
        while rest != 0 {
            out.push(pair_from_index(n, rest.trailing_zeros() as usize));
            rest &= rest - 1;
        }
        out
    }

    pub fn display(&self, n: usize) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        self.generators(n)
            .iter()
            .map(Generator::to_string)
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A finite linear combination of monomials of Λ over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

pub(crate) fn accumulate<I>(n: usize, terms: I) -> MultiVector
where
    I: IntoIterator<Item = (u64, Rational)>,
{
    let mut acc: WordMap<Rational> = WordMap::default();
    for (m, c) in terms {
        match acc.get_mut(&m) {
            Some(v) => *v += &c,
            None => {
                acc.insert(m, c);
            }
        }
    }
    MultiVector {
        n,
        terms: acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (Monomial(m), c))
            .collect(),
    }
}

impl MultiVector {
    pub fn zero(n: usize) -> Self {
        MultiVector {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        MultiVector::monomial(n, Monomial::ONE, Rational::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiVector { n, terms }
    }

    pub fn generator(n: usize, g: Generator) -> Self {
        MultiVector::monomial(n, Monomial(1u64 << g.bit(n)), Rational::one())
    }

    pub fn x(n: usize, i: usize) -> Self {
        MultiVector::generator(n, Generator::X(i))
    }

    pub fn y(n: usize, i: usize) -> Self {
        MultiVector::generator(n, Generator::Y(i))
    }

    pub fn omega(n: usize, i: usize, j: usize) -> Self {
        MultiVector::generator(n, Generator::omega(i, j))
    }

    /// The product of a word of generators, with its Koszul sign.
    pub fn word(n: usize, word: &[Generator]) -> Self {
        match Monomial::from_word(n, word) {
            Some((s, m)) => MultiVector::monomial(n, m, Rational::from_integer(s)),
            None => MultiVector::zero(n),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        accumulate(n, terms.into_iter().map(|(m, c)| (m.0, c)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn check_same(&self, other: &MultiVector) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add_scaled(&Rational::one(), other)
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add_scaled(&-Rational::one(), other)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &MultiVector) -> Result<MultiVector> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for (m, v) in &other.terms {
            let add = v * c;
            let entry = terms.entry(*m).or_default();
            *entry += &add;
            if entry.is_zero() {
                terms.remove(m);
            }
        }
        Ok(MultiVector { n: self.n, terms })
    }

    pub fn scaled(&self, c: &Rational) -> MultiVector {
        if c.is_zero() {
            return MultiVector::zero(self.n);
        }
        MultiVector {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiVector) -> Result<MultiVector> {
        self.check_same(other)?;
        Ok(accumulate(
            self.n,
            self.terms.iter().flat_map(|(a, ca)| {
                other.terms.iter().filter_map(move |(b, cb)| {
                    mul_sign(a.0, b.0).map(|neg| {
                        let c = ca * cb;
                        (a.0 | b.0, if neg { -c } else { c })
                    })
                })
            }),
        ))
    }

    pub fn pow(&self, k: usize) -> Result<MultiVector> {
        let mut acc = MultiVector::one(self.n);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Common bidegree of all terms; `None` for zero or mixed elements.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self.terms.keys().map(|m| m.bidegree(self.n));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn require_bidegree(&self) -> Result<Option<(usize, usize)>> {
        if self.is_zero() {
            return Ok(None);
        }
        self.bidegree()
            .map(Some)
            .ok_or_else(|| Error::Inhomogeneous(self.to_string()))
    }

    /// Common weight of all terms; `None` for zero or mixed elements.
    pub fn weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.weight(self.n));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Total degree parity of a homogeneous element (`p + q`).
    pub fn degree(&self) -> Option<usize> {
        self.bidegree().map(|(p, q)| p + q)
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if c.is_negative() { (true, -c) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", m.display(self.n))?;
            } else {
                write!(f, "{abs}*{}", m.display(self.n))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A derivation of Λ determined by its values on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    n: usize,
    parity: Parity,
    images: Vec<Option<MultiVector>>,
}

impl Derivation {
    pub fn new(n: usize, parity: Parity) -> Self {
        let bits = 2 * n + pair_count(n);
        Derivation {
            n,
            parity,
            images: vec![None; bits],
        }
    }

    pub fn set(&mut self, g: Generator, image: MultiVector) -> &mut Self {
        assert_eq!(image.n(), self.n);
        self.images[g.bit(self.n) as usize] = Some(image);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn image(&self, g: Generator) -> Option<&MultiVector> {
        self.images[g.bit(self.n) as usize].as_ref()
    }

    /// The differential: `d x_i = d y_i = 0`, `d ω_{i,j} = (x_i - x_j)(y_i - y_j)`.
    pub fn differential(n: usize) -> Derivation {
        let mut d = Derivation::new(n, Parity::Odd);
        for i in 1..=n {
            d.set(Generator::X(i), MultiVector::zero(n));
            d.set(Generator::Y(i), MultiVector::zero(n));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let u = MultiVector::x(n, i).sub(&MultiVector::x(n, j)).unwrap();
                let v = MultiVector::y(n, i).sub(&MultiVector::y(n, j)).unwrap();
                d.set(Generator::W(i, j), u.mul(&v).unwrap());
            }
        }
        d
    }

    fn sl2(n: usize, x_image: impl Fn(usize) -> MultiVector, y_image: impl Fn(usize) -> MultiVector) -> Derivation {
        let mut d = Derivation::new(n, Parity::Even);
        for i in 1..=n {
            d.set(Generator::X(i), x_image(i));
            d.set(Generator::Y(i), y_image(i));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                d.set(Generator::W(i, j), MultiVector::zero(n));
            }
        }
        d
    }

    /// Raising operator: `y_i ↦ x_i`, `x_i ↦ 0`.
    pub fn sl2_e(n: usize) -> Derivation {
        Derivation::sl2(n, |_| MultiVector::zero(n), |i| MultiVector::x(n, i))
    }

    /// Lowering operator: `x_i ↦ y_i`, `y_i ↦ 0`.
    pub fn sl2_f(n: usize) -> Derivation {
        Derivation::sl2(n, |i| MultiVector::y(n, i), |_| MultiVector::zero(n))
    }

    /// `h = [e, f]`: `x_i ↦ x_i`, `y_i ↦ -y_i`.
    pub fn sl2_h(n: usize) -> Derivation {
        Derivation::sl2(
            n,
            |i| MultiVector::x(n, i),
            |i| MultiVector::y(n, i).scaled(&-Rational::one()),
        )
    }

    pub fn apply_monomial(&self, m: Monomial) -> Result<MultiVector> {
        let n = self.n;
        let mut out: Vec<(u64, Rational)> = Vec::new();
        let mut rest = m.0;
        let mut position = 0usize;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            let image = self.images[bit as usize]
                .as_ref()
                .ok_or_else(|| Error::MissingImage(Generator::from_bit(n, bit).to_string()))?;
            let left = m.0 & ((1u64 << bit) - 1);
            let right = m.0 & !((1u64 << bit) | ((1u64 << bit) - 1));
            let outer_negative = self.parity == Parity::Odd && position % 2 == 1;
            position += 1;
            for (t, c) in image.terms() {
                let Some(s1) = mul_sign(left, t.0) else { continue };
                let Some(s2) = mul_sign(left | t.0, right) else { continue };
                let neg = s1 ^ s2 ^ outer_negative;
                out.push((left | t.0 | right, if neg { -c } else { c.clone() }));
            }
        }
        Ok(accumulate(n, out))
    }
}

/// Applies a derivation with the parity-correct Leibniz rule.
pub fn apply_derivation(d: &Derivation, v: &MultiVector) -> Result<MultiVector> {
    if d.n != v.n {
        return Err(Error::AmbientMismatch { left: d.n, right: v.n });
    }
    let mut acc: Vec<(u64, Rational)> = Vec::new();
    for (m, c) in v.terms() {
        for (t, e) in d.apply_monomial(*m)?.terms() {
            acc.push((t.0, e * c));
        }
    }
    Ok(accumulate(v.n, acc))
}

/// An algebra endomorphism of Λ given on generators; generators without an
/// explicit image are fixed.
#[derive(Clone, Debug)]
pub struct Substitution {
    n: usize,
    images: Vec<Option<MultiVector>>,
}

impl Substitution {
    pub fn identity(n: usize) -> Self {
        Substitution {
            n,
            images: vec![None; 2 * n + pair_count(n)],
        }
    }

    /// Fails unless `image` is homogeneous of the bidegree of `g`.
    pub fn set(&mut self, g: Generator, image: MultiVector) -> Result<&mut Self> {
        g.validate(self.n)?;
        if image.n() != self.n {
            return Err(Error::AmbientMismatch { left: self.n, right: image.n() });
        }
        let expected = match g.kind() {
            GeneratorKind::W => (0, 1),
            _ => (1, 0),
        };
        if !image.is_zero() && image.bidegree() != Some(expected) {
            return Err(Error::Inhomogeneous(format!("image of {g}: {image}")));
        }
        self.images[g.bit(self.n) as usize] = Some(image);
        Ok(self)
    }

    /// `x_i ↦ x_{σ(i)}`, `y_i ↦ y_{σ(i)}`, `ω_{i,j} ↦ ω_{σ(i),σ(j)}`.
    pub fn permutation(n: usize, sigma: &Permutation) -> Self {
        assert_eq!(sigma.degree(), n);
        let mut s = Substitution::identity(n);
        for i in 1..=n {
            let j = sigma.apply(i);
            s.images[Generator::X(i).bit(n) as usize] = Some(MultiVector::x(n, j));
            s.images[Generator::Y(i).bit(n) as usize] = Some(MultiVector::y(n, j));
        }
        for i in 1..=n {
            for j in i + 1..=n {
                s.images[Generator::W(i, j).bit(n) as usize] =
                    Some(MultiVector::omega(n, sigma.apply(i), sigma.apply(j)));
            }
        }
        s
    }

    /// The action of the matrix `[[a, b], [c, d]]`:
    /// `x_i ↦ a x_i + c y_i`, `y_i ↦ b x_i + d y_i`, `ω` fixed.
    pub fn sl2(n: usize, matrix: [[i64; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = matrix;
        let mut s = Substitution::identity(n);
        for i in 1..=n {
            let (x, y) = (MultiVector::x(n, i), MultiVector::y(n, i));
            let xi = x.scaled(&a.into()).add(&y.scaled(&c.into())).unwrap();
            let yi = x.scaled(&b.into()).add(&y.scaled(&d.into())).unwrap();
            s.images[Generator::X(i).bit(n) as usize] = Some(xi);
            s.images[Generator::Y(i).bit(n) as usize] = Some(yi);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_monomial(&self, m: Monomial) -> MultiVector {
        let n = self.n;
        let mut acc = MultiVector::one(n);
        let mut rest = m.0;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            rest &= rest - 1;
            let image = match &self.images[bit as usize] {
                Some(v) => v.clone(),
                None => MultiVector::monomial(n, Monomial(1u64 << bit), Rational::one()),
            };
            acc = acc.mul(&image).expect("same ambient");
            if acc.is_zero() {
                break;
            }
        }
        acc
    }
}

/// The algebra-homomorphism extension of `images` applied to `v`.
pub fn substitute(v: &MultiVector, images: &Substitution) -> Result<MultiVector> {
    if v.n != images.n {
        return Err(Error::AmbientMismatch { left: v.n, right: images.n });
    }
    let mut acc: Vec<(u64, Rational)> = Vec::new();
    for (m, c) in v.terms() {
        for (t, e) in images.apply_monomial(*m).terms() {
            acc.push((t.0, e * c));
        }
    }
    Ok(accumulate(v.n, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn pair_indexing_round_trips() {
        for n in 2..=MAX_POINTS {
            let mut k = 0;
            for i in 1..=n {
                for j in i + 1..=n {
                    assert_eq!(pair_index(n, i, j), k);
                    assert_eq!(pair_from_index(n, k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, pair_count(n));
        }
        assert!(2 * MAX_POINTS + pair_count(MAX_POINTS) <= 64);
    }

    #[test]
    fn squares_vanish_and_transpositions_flip() {
        let n = 3;
        let x1 = MultiVector::x(n, 1);
        let x2 = MultiVector::x(n, 2);
        assert!(x1.mul(&x1).unwrap().is_zero());
        assert_eq!(x2.mul(&x1).unwrap(), x1.mul(&x2).unwrap().scaled(&q(-1)));
    }

    #[test]
    fn expansion_of_du_dv() {
        let n = 2;
        let u = MultiVector::x(n, 1).sub(&MultiVector::x(n, 2)).unwrap();
        let v = MultiVector::y(n, 1).sub(&MultiVector::y(n, 2)).unwrap();
        let prod = u.mul(&v).unwrap();
        let w = |a: Generator, b: Generator| MultiVector::word(n, &[a, b]);
        use Generator::*;
        let expected = w(X(1), Y(1))
            .sub(&w(X(1), Y(2)))
            .unwrap()
            .sub(&w(X(2), Y(1)))
            .unwrap()
            .add(&w(X(2), Y(2)))
            .unwrap();
        assert_eq!(prod, expected);
        // x2*y1 sorts to -y1*x2.
        assert_eq!(prod.coefficient(&Monomial(0b0110)), q(1));
    }

    #[test]
    fn differential_on_generators() {
        let n = 2;
        let d = Derivation::differential(n);
        assert!(apply_derivation(&d, &MultiVector::x(n, 1)).unwrap().is_zero());
        assert!(apply_derivation(&d, &MultiVector::y(n, 2)).unwrap().is_zero());
        let u = MultiVector::x(n, 1).sub(&MultiVector::x(n, 2)).unwrap();
        let v = MultiVector::y(n, 1).sub(&MultiVector::y(n, 2)).unwrap();
        assert_eq!(
            apply_derivation(&d, &MultiVector::omega(n, 1, 2)).unwrap(),
            u.mul(&v).unwrap()
        );
    }

    #[test]
    fn missing_image_is_reported() {
        let d = Derivation::new(2, Parity::Even);
        assert!(matches!(
            apply_derivation(&d, &MultiVector::x(2, 1)),
            Err(Error::MissingImage(_))
        ));
    }

    #[test]
    fn h_on_generators() {
        let n = 2;
        let h = Derivation::sl2_h(n);
        assert_eq!(apply_derivation(&h, &MultiVector::x(n, 1)).unwrap(), MultiVector::x(n, 1));
        assert_eq!(
            apply_derivation(&h, &MultiVector::y(n, 1)).unwrap(),
            MultiVector::y(n, 1).scaled(&q(-1))
        );
    }

    #[test]
    fn substitution_examples() {
        let n = 2;
        let w = MultiVector::omega(n, 1, 2);
        let id = Substitution::identity(n);
        assert_eq!(substitute(&w, &id).unwrap(), w);
        let swap = Substitution::permutation(n, &Permutation::transposition(n, 1, 2));
        assert_eq!(substitute(&w, &swap).unwrap(), w);
        let rot = Substitution::sl2(n, [[0, -1], [1, 0]]);
        assert_eq!(substitute(&MultiVector::x(n, 1), &rot).unwrap(), MultiVector::y(n, 1));
        assert_eq!(
            substitute(&MultiVector::y(n, 1), &rot).unwrap(),
            MultiVector::x(n, 1).scaled(&q(-1))
        );
        let mut bad = Substitution::identity(n);
        assert!(matches!(
            bad.set(Generator::X(1), MultiVector::omega(n, 1, 2)),
            Err(Error::Inhomogeneous(_))
        ));
    }

    #[test]
    fn ambient_mismatch() {
        assert!(matches!(
            MultiVector::x(2, 1).mul(&MultiVector::x(3, 1)),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    fn random_element(n: usize, max_terms: usize) -> impl Strategy<Value = MultiVector> {
        let bits = 2 * n + pair_count(n);
        proptest::collection::vec(
            (proptest::collection::btree_set(0..bits as u32, 0..4), -3i64..4),
            1..max_terms,
        )
        .prop_map(move |terms| {
            MultiVector::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(set, c)| (Monomial(set.iter().fold(0, |m, b| m | 1u64 << b)), q(c))),
            )
        })
    }

    fn homogeneous(n: usize, len: usize) -> impl Strategy<Value = MultiVector> {
        let bits = 2 * n + pair_count(n);
        proptest::collection::vec(
            (proptest::sample::subsequence((0..bits as u32).collect::<Vec<_>>(), len), -3i64..4),
            1..4,
        )
        .prop_map(move |terms| {
            MultiVector::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(set, c)| (Monomial(set.iter().fold(0, |m, b| m | 1u64 << b)), q(c))),
            )
        })
    }

    fn pair_of_homogeneous(
        n: usize,
    ) -> impl Strategy<Value = (usize, usize, MultiVector, MultiVector)> {
        (0usize..4, 0usize..4).prop_flat_map(move |(a, b)| {
            (Just(a), Just(b), homogeneous(n, a), homogeneous(n, b))
        })
    }

    fn sign_of(k: usize) -> Rational {
        if k.is_multiple_of(2) {
            q(1)
        } else {
            q(-1)
        }
    }

    proptest! {
        #[test]
        fn graded_commutative((a, b, u, v) in pair_of_homogeneous(3)) {
            prop_assert_eq!(u.mul(&v).unwrap(), v.mul(&u).unwrap().scaled(&sign_of(a * b)));
        }

        #[test]
        fn associative(u in random_element(3, 5), v in random_element(3, 5), w in random_element(3, 5)) {
            prop_assert_eq!(u.mul(&v).unwrap().mul(&w).unwrap(), u.mul(&v.mul(&w).unwrap()).unwrap());
        }

        #[test]
        fn leibniz((a, _b, u, v) in pair_of_homogeneous(3)) {
            let n = 3;
            let uv = u.mul(&v).unwrap();
            for (der, odd) in [(Derivation::differential(n), true), (Derivation::sl2_e(n), false), (Derivation::sl2_f(n), false)] {
                let lhs = apply_derivation(&der, &uv).unwrap();
                let du = apply_derivation(&der, &u).unwrap().mul(&v).unwrap();
                let sign = if odd { sign_of(a) } else { q(1) };
                let dv = u.mul(&apply_derivation(&der, &v).unwrap()).unwrap().scaled(&sign);
                prop_assert_eq!(lhs, du.add(&dv).unwrap());
            }
        }

        #[test]
        fn substitutions_compose(v in random_element(4, 6), s in 0usize..24, t in 0usize..24) {
            let n = 4;
            let perms: Vec<Permutation> = Permutation::all(n).collect();
            let (sigma, tau) = (&perms[s], &perms[t]);
            let st = substitute(&substitute(&v, &Substitution::permutation(n, tau)).unwrap(), &Substitution::permutation(n, sigma)).unwrap();
            let direct = substitute(&v, &Substitution::permutation(n, &sigma.compose(tau))).unwrap();
            prop_assert_eq!(st, direct);
        }

        #[test]
        fn permutations_commute_with_sl2(v in random_element(3, 6), s in 0usize..6, a in -2i64..3, b in -2i64..3) {
            let n = 3;
            let sigma = Permutation::all(n).nth(s).unwrap();
            let p = Substitution::permutation(n, &sigma);
            let m = Substitution::sl2(n, [[a, b], [1, 1]]);
            let lhs = substitute(&substitute(&v, &m).unwrap(), &p).unwrap();
            let rhs = substitute(&substitute(&v, &p).unwrap(), &m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
