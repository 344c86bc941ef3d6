//! The distinguished cocycles `α, ᾱ, β, γ, γ̄`, extraction of the leading
//! coefficients of `α^q` and `α^{q-1}β`, and the checks of the ring
//! presentation, generation in low degrees, and formality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::cohomology::{cohomology, cohomology_slice, CohomologySlice};
use crate::error::{Error, Result};
use crate::exterior::{Generator, Monomial, MultiVector};
use crate::linalg::{reduce, subspace_intersection, Echelon, SparseMatrix, SparseVec, SubspaceBasis};
use crate::model::{gamma, gammabar, KrizModel, ModelId};
use crate::perm::{factorial, Permutation};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassName {
    Alpha,
    AlphaBar,
    Beta,
    Gamma,
    GammaBar,
}

impl ClassName {
    pub const ALL: [ClassName; 5] = [
        ClassName::Alpha,
        ClassName::AlphaBar,
        ClassName::Beta,
        ClassName::Gamma,
        ClassName::GammaBar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ClassName::Alpha => "alpha",
            ClassName::AlphaBar => "alphabar",
            ClassName::Beta => "beta",
            ClassName::Gamma => "gamma",
            ClassName::GammaBar => "gammabar",
        }
    }

    /// Smallest number of points for which the class is defined.
    pub fn min_points(&self) -> usize {
        match self {
            ClassName::Alpha | ClassName::AlphaBar => 3,
            ClassName::Beta => 4,
            ClassName::Gamma | ClassName::GammaBar => 1,
        }
    }

    /// `(p, q)`: number of `x, y` letters and of `ω` letters.
    pub fn bidegree(&self) -> (usize, usize) {
        match self {
            ClassName::Alpha | ClassName::AlphaBar => (1, 1),
            ClassName::Beta => (2, 1),
            ClassName::Gamma | ClassName::GammaBar => (1, 0),
        }
    }
}

impl fmt::Display for ClassName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassName::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown class '{s}'")))
    }
}

/// A class together with its normal form in `A`.
#[derive(Clone, Debug)]
pub struct NamedClass {
    pub name: ClassName,
    pub n: usize,
    pub value: MultiVector,
}

impl NamedClass {
    pub fn bidegree(&self) -> (usize, usize) {
        self.name.bidegree()
    }
}

fn word_term(n: usize, word: &[Generator], c: i64) -> Option<(Monomial, Rational)> {
    Monomial::from_word(n, word).map(|(s, m)| (m, Rational::from_integer(s * c)))
}

/// The defining sum in the free algebra, before normal form.
pub fn raw_class(name: ClassName, n: usize) -> Result<MultiVector> {
    if n < name.min_points() {
        return Err(Error::ClassUndefined { name: name.to_string(), n });
    }
    let pairs = || (1..=n).flat_map(move |k| (k + 1..=n).map(move |h| (k, h)));
    let mut terms = Vec::new();
    match name {
        ClassName::Alpha | ClassName::AlphaBar => {
            let g = |i| if name == ClassName::Alpha { Generator::X(i) } else { Generator::Y(i) };
            for (k, h) in pairs() {
                for i in (1..=n).filter(|&i| i != k && i != h) {
                    terms.extend(word_term(n, &[g(i), Generator::omega(k, h)], 1));
                    terms.extend(word_term(n, &[g(k), Generator::omega(k, h)], -1));
                }
            }
        }
        ClassName::Beta => {
            for (k, h) in pairs() {
                let w = Generator::omega(k, h);
                for i in (1..=n).filter(|&i| i != k && i != h) {
                    for j in (1..=n).filter(|&j| j != k && j != h && j != i) {
                        for (xa, cx) in [(i, 3), (j, -1), (k, -2)] {
                            for (yb, cy) in [(j, 1), (k, -1)] {
                                terms.extend(word_term(n, &[Generator::X(xa), Generator::Y(yb), w], cx * cy));
                            }
                        }
                    }
                }
            }
        }
        ClassName::Gamma => return Ok(gamma(n)),
        ClassName::GammaBar => return Ok(gammabar(n)),
    }
    Ok(MultiVector::from_terms(n, terms))
}

/// Normal form of `v` as a combination of basis monomials.
pub fn reduced(model: &KrizModel, v: &MultiVector) -> Result<MultiVector> {
    match v.require_bidegree()? {
        None => Ok(MultiVector::zero(model.n())),
        Some((p, q)) => Ok(model.element(p, q, &model.coordinates(v, p, q)?)),
    }
}

/// Normal form of the product `a·b`.
pub fn product(model: &KrizModel, a: &MultiVector, b: &MultiVector) -> Result<MultiVector> {
    reduced(model, &a.mul(b)?)
}

/// Normal-formed power, reducing after every factor.
pub fn power(model: &KrizModel, a: &MultiVector, k: usize) -> Result<MultiVector> {
    let mut acc = MultiVector::one(model.n());
    for _ in 0..k {
        acc = product(model, &acc, a)?;
    }
    Ok(acc)
}

fn is_cocycle(model: &KrizModel, v: &MultiVector, p: usize, q: usize) -> Result<bool> {
    if q == 0 {
        return Ok(true);
    }
    let coords = model.coordinates(v, p, q)?;
    Ok(model.differential_matrix(p, q).mul_vec(&coords)?.is_zero())
}

/// Builds the class in normal form and checks that it is closed.
pub fn build_class(model: &KrizModel, name: ClassName) -> Result<NamedClass> {
    let value = reduced(model, &raw_class(name, model.n())?)?;
    let (p, q) = name.bidegree();
    if !is_cocycle(model, &value, p, q)? {
        return Err(Error::NotCocycle { name: name.to_string() });
    }
    Ok(NamedClass {
        name,
        n: model.n(),
        value,
    })
}

/// Coefficient of a basis monomial in the normal form of `v`.
pub fn monomial_coefficient(model: &KrizModel, v: &MultiVector, target: Monomial) -> Result<Rational> {
    let (p, q) = target.bidegree(model.n());
    if model.basis(p, q).index_of(target).is_none() {
        return Err(Error::NotNormalForm(target.display(model.n())));
    }
    Ok(reduced(model, v)?.coefficient(&target))
}

/// Coefficient of the element spelled by `word`, which must be a basis
/// monomial up to sign.
pub fn word_coefficient(model: &KrizModel, v: &MultiVector, word: &[Generator]) -> Result<Rational> {
    let (sign, m) = Monomial::from_word(model.n(), word)
        .ok_or_else(|| Error::NotNormalForm("word with a repeated letter".into()))?;
    Ok(monomial_coefficient(model, v, m)? * Rational::from_integer(sign))
}

/// `x_1ω_{1,2} x_3ω_{3,4} ⋯ x_{2q-1}ω_{2q-1,2q}`.
pub fn alpha_target(q: usize) -> Vec<Generator> {
    (0..q)
        .flat_map(|t| [Generator::X(2 * t + 1), Generator::omega(2 * t + 1, 2 * t + 2)])
        .collect()
}

/// `x_1ω_{1,2} ⋯ x_{2q-1} y_{2q+1} ω_{2q-1,2q}`: the last factor keeps the
/// letter order `x y ω` of `β`. Moving `y_{2q+1}` to the end flips the sign.
pub fn beta_target(q: usize) -> Vec<Generator> {
    let mut w = alpha_target(q);
    w.insert(w.len() - 1, Generator::Y(2 * q + 1));
    w
}

fn leading_coefficient(scale: i64, n: usize, q: usize, shift: usize) -> Rational {
    let sign = if q.is_multiple_of(2) { scale } else { -scale };
    let value = BigInt::from(sign)
        * BigInt::from(factorial(q))
        * BigInt::from(n).pow(q as u32 - 1)
        * (BigInt::from(n) - BigInt::from(2 * q + shift));
    Rational::from_big_integer(value)
}

/// `(-1)^q q! n^{q-1} (n - 2q)`, `q ≥ 1`.
pub fn a_q_closed(n: usize, q: usize) -> Rational {
    leading_coefficient(1, n, q, 0)
}

/// `2 (-1)^q q! n^{q-1} (n - 2q - 1)`, `q ≥ 1`.
pub fn b_q_closed(n: usize, q: usize) -> Rational {
    leading_coefficient(2, n, q, 1)
}

/// Coefficient of [`alpha_target`] in `α^q`; needs `2q ≤ n`.
pub fn a_q_extracted(model: &KrizModel, alpha: &NamedClass, q: usize) -> Result<Rational> {
    let v = power(model, &alpha.value, q)?;
    word_coefficient(model, &v, &alpha_target(q))
}

/// Coefficient of [`beta_target`] in `α^{q-1}β`; needs `2q + 1 ≤ n`.
pub fn b_q_extracted(model: &KrizModel, alpha: &NamedClass, beta: &NamedClass, q: usize) -> Result<Rational> {
    let v = product(model, &power(model, &alpha.value, q - 1)?, &beta.value)?;
    word_coefficient(model, &v, &beta_target(q))
}

/// Integer polynomial `Σ_{σ∈S_q} sgn(σ) x^{|Fix σ|}` by enumeration.
pub fn fixed_point_sign_sum(q: usize) -> Vec<i64> {
    let mut out = vec![0i64; q + 1];
    for sigma in Permutation::all(q) {
        out[sigma.fixed_points()] += sigma.sign();
    }
    out
}

/// Coefficients of `(x-1)^{q-1}(x+q-1)`, `q ≥ 1`.
pub fn fixed_point_closed_form(q: usize) -> Vec<i64> {
    let mut poly = vec![q as i64 - 1, 1];
    for _ in 1..q {
        let mut next = vec![0i64; poly.len() + 1];
        for (e, &c) in poly.iter().enumerate() {
            next[e + 1] += c;
            next[e] -= c;
        }
        poly = next;
    }
    poly
}

/// One line of [`PowerReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerCheck {
    /// `"alpha^q"` or `"alpha^(q-1) beta"`.
    pub label: String,
    pub q: usize,
    pub bidegree: (usize, usize),
    pub extracted: Rational,
    pub closed_form: Rational,
    /// Whether the class survives in `H(UB)`, decided by coboundary membership.
    pub nonzero_in_cohomology: bool,
    pub expected_nonzero: bool,
}

impl PowerCheck {
    pub fn passed(&self) -> bool {
        self.extracted == self.closed_form && self.nonzero_in_cohomology == self.expected_nonzero
    }
}

#[derive(Clone, Debug)]
pub struct PowerReport {
    pub n: usize,
    pub checks: Vec<PowerCheck>,
}

impl PowerReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(PowerCheck::passed)
    }
}

fn nonzero_in(slice: &CohomologySlice, model: &KrizModel, v: &MultiVector) -> Result<bool> {
    if v.is_zero() {
        return Ok(false);
    }
    let coords = model.coordinates(v, slice.p, slice.q)?;
    Ok(!slice.is_coboundary(&coords))
}

/// Coefficients of `α^q` (for `2q ≤ n`) and `α^{q-1}β` (for `2q+1 ≤ n`)
/// against their closed forms, and their survival in `H(UB)` exactly when
/// `n > 2q`, respectively `n > 2q + 1`.
pub fn verify_power_nonvanishing(model: &KrizModel) -> Result<PowerReport> {
    let n = model.n();
    let mut checks = Vec::new();
    if n < ClassName::Alpha.min_points() {
        return Ok(PowerReport { n, checks });
    }
    let alpha = build_class(model, ClassName::Alpha)?;
    let beta = if n >= ClassName::Beta.min_points() {
        Some(build_class(model, ClassName::Beta)?)
    } else {
        None
    };
    let mut alpha_power = MultiVector::one(n);
    for q in 1..=n / 2 {
        let previous = alpha_power.clone();
        alpha_power = product(model, &alpha_power, &alpha.value)?;
        let slice = cohomology_slice(model, ModelId::UB, q, q)?;
        checks.push(PowerCheck {
            label: format!("alpha^{q}"),
            q,
            bidegree: (q, q),
            extracted: word_coefficient(model, &alpha_power, &alpha_target(q))?,
            closed_form: a_q_closed(n, q),
            nonzero_in_cohomology: nonzero_in(&slice, model, &alpha_power)?,
            expected_nonzero: n > 2 * q,
        });
        if let Some(beta) = &beta {
            if 2 * q < n {
                let v = product(model, &previous, &beta.value)?;
                let slice = cohomology_slice(model, ModelId::UB, q + 1, q)?;
                checks.push(PowerCheck {
                    label: format!("alpha^{} beta", q - 1),
                    q,
                    bidegree: (q + 1, q),
                    extracted: word_coefficient(model, &v, &beta_target(q))?,
                    closed_form: b_q_closed(n, q),
                    nonzero_in_cohomology: nonzero_in(&slice, model, &v)?,
                    expected_nonzero: n > 2 * q + 1,
                });
            }
        }
    }
    Ok(PowerReport { n, checks })
}

/// Monomial `a^i ā^j b^k` of the abstract algebra `S V_1 [b]`.
type AbstractMonomial = (usize, usize, usize);

fn abstract_degree(m: AbstractMonomial) -> usize {
    2 * (m.0 + m.1) + 3 * m.2
}

fn abstract_monomials(degree: usize) -> Vec<AbstractMonomial> {
    let mut out = Vec::new();
    for k in 0..=degree / 3 {
        let rest = degree - 3 * k;
        if rest.is_multiple_of(2) {
            for i in 0..=rest / 2 {
                out.push((i, rest / 2 - i, k));
            }
        }
    }
    out
}

type AbstractPoly = BTreeMap<AbstractMonomial, i64>;

/// `f = ā ∂/∂a` (`raise == false`) or `e = a ∂/∂ā` (`raise == true`).
fn abstract_sl2(poly: &AbstractPoly, raise: bool) -> AbstractPoly {
    let mut out = AbstractPoly::new();
    for (&(i, j, k), &c) in poly {
        let (from, target) = if raise { (j, (i + 1, j.wrapping_sub(1), k)) } else { (i, (i.wrapping_sub(1), j + 1, k)) };
        if from > 0 {
            *out.entry(target).or_insert(0) += c * from as i64;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Dimensions in degrees `0..=top` of `S V_1[b]` modulo the ideal
/// generated by the `SL2`-orbits of the given monomial relations.
pub fn abstract_quotient_dims(relations: &[AbstractMonomial], top: usize) -> Result<Vec<usize>> {
    let mut orbit: Vec<AbstractPoly> = Vec::new();
    for &r in relations {
        for raise in [false, true] {
            let mut g: AbstractPoly = [(r, 1)].into_iter().collect();
            while !g.is_empty() {
                orbit.push(g.clone());
                g = abstract_sl2(&g, raise);
            }
        }
    }
    let mut dims = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let basis = abstract_monomials(d);
        let index: BTreeMap<AbstractMonomial, usize> = basis.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut rows = Vec::new();
        for g in &orbit {
            let gd = abstract_degree(*g.keys().next().expect("nonzero"));
            if gd > d {
                continue;
            }
            for m in abstract_monomials(d - gd) {
                rows.push(SparseVec::from_entries(g.iter().map(|(&(i, j, k), &c)| {
                    (index[&(i + m.0, j + m.1, k + m.2)], Rational::from_integer(c))
                })));
            }
        }
        let rank = reduce(&SparseMatrix::from_rows(basis.len(), rows)?).rank;
        dims.push(basis.len() - rank);
    }
    Ok(dims)
}

#[derive(Clone, Debug)]
pub struct PresentationReport {
    pub n: usize,
    /// Exponent of the relation `a^m`, `m = ⌊(n+1)/2⌋`.
    pub a_exponent: usize,
    /// Each candidate `e` for the relation `a^e b` with the degreewise
    /// dimensions of the quotient.
    pub candidates: Vec<(usize, Vec<usize>)>,
    /// Degreewise dimensions of `H(UB)`.
    pub observed: Vec<usize>,
    pub matched_exponent: usize,
    /// The exponent `⌊n/2⌋` of the stated presentation.
    pub stated_exponent: usize,
    pub stated_exponent_matches: bool,
    /// `α^i` survives for `i < m` and `α^m` is a coboundary.
    pub alpha_powers_ok: bool,
    /// `α^k β` survives exactly in the degrees where the quotient is nonzero.
    pub beta_products_ok: bool,
    /// `β^2 = 0` in normal form.
    pub beta_square_zero: bool,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.alpha_powers_ok && self.beta_products_ok && self.beta_square_zero
    }
}

/// Compares `S V_1[b] / (a^m, a^e b, b^2)` with `H(UB)` for the candidates
/// `e ∈ {⌊n/2⌋-1, ⌊n/2⌋, ⌊n/2⌋+1}` and checks the products of the
/// computed representatives. Fails if no candidate matches.
pub fn verify_presentation(model: &KrizModel) -> Result<PresentationReport> {
    let n = model.n();
    if n < ClassName::Beta.min_points() {
        return Err(Error::ClassUndefined { name: "beta".into(), n });
    }
    let m = n.div_ceil(2);
    let slices = cohomology(model, ModelId::UB)?;
    let top = slices.keys().map(|&(p, q)| p + q).max().unwrap_or(0).max(2 * m + 3);
    let mut observed = vec![0usize; top + 1];
    for s in slices.values() {
        observed[s.p + s.q] += s.dim;
    }
    let stated = n / 2;
    let mut candidates = Vec::new();
    for e in [stated - 1, stated, stated + 1] {
        let dims = abstract_quotient_dims(&[(m, 0, 0), (e, 0, 1), (0, 0, 2)], top)?;
        candidates.push((e, dims));
    }
    let matched: Vec<usize> = candidates.iter().filter(|(_, d)| *d == observed).map(|(e, _)| *e).collect();
    let matched_exponent = match matched.as_slice() {
        [e] => *e,
        _ => return Err(Error::NoMatchingExponent(n)),
    };
    let quotient = &candidates.iter().find(|(e, _)| *e == matched_exponent).expect("matched").1;

    let alpha = build_class(model, ClassName::Alpha)?;
    let beta = build_class(model, ClassName::Beta)?;
    let survives = |v: &MultiVector, p: usize, q: usize| -> Result<bool> {
        match slices.get(&(p, q)) {
            Some(s) => nonzero_in(s, model, v),
            None => Ok(false),
        }
    };
    let mut alpha_powers_ok = true;
    let mut beta_products_ok = true;
    let mut alpha_power = MultiVector::one(n);
    for i in 0..=m {
        if i > 0 {
            alpha_powers_ok &= survives(&alpha_power, i, i)? == (i < m);
        }
        let deg = 2 * i + 3;
        if deg <= top {
            let v = product(model, &alpha_power, &beta.value)?;
            beta_products_ok &= survives(&v, i + 2, i + 1)? == (quotient[deg] > 0);
        }
        alpha_power = product(model, &alpha_power, &alpha.value)?;
    }
    Ok(PresentationReport {
        n,
        a_exponent: m,
        candidates,
        observed,
        matched_exponent,
        stated_exponent: stated,
        stated_exponent_matches: matched_exponent == stated,
        alpha_powers_ok,
        beta_products_ok,
        beta_square_zero: product(model, &beta.value, &beta.value)?.is_zero(),
    })
}

/// Per-bidegree dimension of a generated subalgebra against a reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceComparison {
    pub p: usize,
    pub q: usize,
    pub generated: usize,
    pub expected: usize,
}

/// Spanning elements of the subalgebra generated by `gens`, bidegree by
/// bidegree. An element is kept when it is independent of the kept ones
/// modulo `modulo(p, q)`.
fn generated_subalgebra(
    model: &KrizModel,
    gens: &[NamedClass],
    modulo: impl Fn(usize, usize) -> Result<Vec<SparseVec>>,
) -> Result<BTreeMap<(usize, usize), Vec<(MultiVector, SparseVec)>>> {
    let mut order = model.bidegrees();
    order.sort_by_key(|&(p, q)| (p + q, q));
    let mut spans: BTreeMap<(usize, usize), Vec<(MultiVector, SparseVec)>> = BTreeMap::new();
    for (p, q) in order {
        let mut ech = Echelon::new();
        for b in modulo(p, q)? {
            ech.insert(b);
        }
        let mut kept = Vec::new();
        if (p, q) == (0, 0) {
            let one = MultiVector::one(model.n());
            let coords = model.coordinates(&one, 0, 0)?;
            ech.insert(coords.clone());
            kept.push((one, coords));
        }
        for g in gens {
            let (gp, gq) = g.bidegree();
            if gp > p || gq > q {
                continue;
            }
            let Some(previous) = spans.get(&(p - gp, q - gq)) else { continue };
            for (v, _) in previous {
                let w = product(model, v, &g.value)?;
                if w.is_zero() {
                    continue;
                }
                let coords = model.coordinates(&w, p, q)?;
                if ech.insert(coords.clone()) {
                    kept.push((w, coords));
                }
            }
        }
        if !kept.is_empty() {
            spans.insert((p, q), kept);
        }
    }
    Ok(spans)
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub n: usize,
    pub slices: Vec<SliceComparison>,
}

impl GenerationReport {
    pub fn passed(&self) -> bool {
        self.slices.iter().all(|s| s.generated == s.expected)
    }

    /// Generated dimension in total degree `d`.
    pub fn degree_dim(&self, d: usize) -> usize {
        self.slices.iter().filter(|s| s.p + s.q == d).map(|s| s.generated).sum()
    }
}

/// Products of `α, ᾱ, β, γ, γ̄` span `H(UA)` in every bidegree.
pub fn verify_generation(model: &KrizModel) -> Result<GenerationReport> {
    let n = model.n();
    if n < ClassName::Beta.min_points() {
        return Err(Error::ClassUndefined { name: "beta".into(), n });
    }
    let gens = ClassName::ALL.iter().map(|&c| build_class(model, c)).collect::<Result<Vec<_>>>()?;
    let h = cohomology(model, ModelId::UA)?;
    let spans = generated_subalgebra(model, &gens, |p, q| Ok(h[&(p, q)].coboundary_space.vectors().to_vec()))?;
    let slices = h
        .values()
        .map(|s| SliceComparison {
            p: s.p,
            q: s.q,
            generated: spans.get(&(s.p, s.q)).map_or(0, Vec::len),
            expected: s.dim,
        })
        .collect();
    Ok(GenerationReport { n, slices })
}

#[derive(Clone, Debug)]
pub struct FormalityReport {
    pub n: usize,
    /// `dim K^{p,q}` against `dim H^{p,q}(UB)`.
    pub slices: Vec<SliceComparison>,
    /// Bidegrees where `K` meets the coboundaries.
    pub meets_coboundaries: Vec<(usize, usize)>,
    /// Bidegrees where some element of `K` is not closed.
    pub not_closed: Vec<(usize, usize)>,
    /// Bidegrees of `K` other than `(i, i)` and `(i + 1, i)`.
    pub off_pattern: Vec<(usize, usize)>,
}

impl FormalityReport {
    pub fn passed(&self) -> bool {
        self.meets_coboundaries.is_empty()
            && self.not_closed.is_empty()
            && self.off_pattern.is_empty()
            && self.slices.iter().all(|s| s.generated == s.expected)
    }
}

/// The subalgebra `K ⊂ UB` generated by `α, ᾱ, β` meets the coboundaries
/// trivially, consists of cocycles, and has the dimensions of `H(UB)`.
pub fn verify_formality(model: &KrizModel) -> Result<FormalityReport> {
    let n = model.n();
    if n < ClassName::Beta.min_points() {
        return Err(Error::ClassUndefined { name: "beta".into(), n });
    }
    let gens = [ClassName::Alpha, ClassName::AlphaBar, ClassName::Beta]
        .iter()
        .map(|&c| build_class(model, c))
        .collect::<Result<Vec<_>>>()?;
    let h = cohomology(model, ModelId::UB)?;
    let spans = generated_subalgebra(model, &gens, |_, _| Ok(Vec::new()))?;
    let mut report = FormalityReport {
        n,
        slices: Vec::new(),
        meets_coboundaries: Vec::new(),
        not_closed: Vec::new(),
        off_pattern: Vec::new(),
    };
    for s in h.values() {
        let kept = spans.get(&(s.p, s.q)).map(Vec::as_slice).unwrap_or(&[]);
        report.slices.push(SliceComparison {
            p: s.p,
            q: s.q,
            generated: kept.len(),
            expected: s.dim,
        });
        if kept.is_empty() {
            continue;
        }
        if s.p != s.q && s.p != s.q + 1 {
            report.off_pattern.push((s.p, s.q));
        }
        let ambient = model.basis(s.p, s.q).dim();
        let k = SubspaceBasis::from_vectors(ambient, kept.iter().map(|(_, c)| c.clone()).collect())?;
        if subspace_intersection(&k, &s.coboundary_space)?.dim() > 0 {
            report.meets_coboundaries.push((s.p, s.q));
        }
        if !k.is_subspace_of(&s.cocycles) {
            report.not_closed.push((s.p, s.q));
        }
    }
    Ok(report)
}
