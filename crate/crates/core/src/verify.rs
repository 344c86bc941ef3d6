//! Named verification checks grouped into suites. Each check carries a
//! short descriptive anchor naming the statement it reproduces.

use std::fmt;
use std::str::FromStr;

use crate::classes::{
    a_q_closed, a_q_extracted, b_q_closed, b_q_extracted, build_class, fixed_point_closed_form,
    fixed_point_sign_sum, verify_formality, verify_generation, verify_power_nonvanishing,
    verify_presentation, ClassName,
};
use crate::cohomology::{
    closed_form, cohomology_slice, curve_groth, groth_hodge_polynomial, hodge_polynomial,
    invariant_cohomology_dim, um_groth_closed_form, Polynomial, Space,
};
use crate::equivariance::{
    generators, permutation_matrix, pi_a_injectivity, sl2_matrix, weight_decomposition, Sl2Operator,
};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::model::{binomial, oracle_quotient_dim, KrizModel, ModelId, ORACLE_FREE_LIMIT};
use crate::partitions::{invariant_dimension_oracle, slice_dimension_oracle};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Dims,
    Reps,
    Cohomology,
    Classes,
    Ring,
    Formality,
}

impl Suite {
    pub const PARTS: [Suite; 6] = [
        Suite::Dims,
        Suite::Reps,
        Suite::Cohomology,
        Suite::Classes,
        Suite::Ring,
        Suite::Formality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Dims => "dims",
            Suite::Reps => "reps",
            Suite::Cohomology => "cohomology",
            Suite::Classes => "classes",
            Suite::Ring => "ring",
            Suite::Formality => "formality",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::PARTS)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub details: String,
}

impl Check {
    pub fn new(name: &str, anchor: &str, passed: bool, details: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            anchor: anchor.to_string(),
            passed,
            details: details.into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub n: usize,
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the requested suite at `model.n()`.
pub fn verify(model: &KrizModel, suite: Suite) -> Result<VerificationReport> {
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for part in parts {
        checks.extend(match part {
            Suite::Dims => dims_suite(model)?,
            Suite::Reps => reps_suite(model)?,
            Suite::Cohomology => cohomology_suite(model)?,
            Suite::Classes => classes_suite(model)?,
            Suite::Ring => ring_suite(model)?,
            Suite::Formality => formality_suite(model)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(VerificationReport {
        n: model.n(),
        suite,
        checks,
    })
}

fn first_failure<I: IntoIterator<Item = ((usize, usize), String)>>(failures: I, total: usize) -> (bool, String) {
    let failures: Vec<_> = failures.into_iter().collect();
    match failures.first() {
        None => (true, format!("{total} slices")),
        Some(((p, q), why)) => (false, format!("{} of {total} slices fail; first at ({p},{q}): {why}", failures.len())),
    }
}

pub fn dims_suite(model: &KrizModel) -> Result<Vec<Check>> {
    let n = model.n();
    let bidegrees = model.bidegrees();
    let mut checks = Vec::new();

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        let (dim, formula) = (model.basis(p, q).dim() as u128, model.formula_dim(ModelId::A, p, q));
        if dim != formula {
            bad.push(((p, q), format!("basis {dim}, formula {formula}")));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("basis-formula", "dimension of A^{p,q} from Stirling numbers and binomials", ok, d));

    let mut bad = Vec::new();
    let mut checked = 0;
    for &(p, q) in &bidegrees {
        let free = binomial(2 * n, p) * binomial(crate::exterior::pair_count(n), q);
        if free > ORACLE_FREE_LIMIT {
            continue;
        }
        checked += 1;
        let oracle = oracle_quotient_dim(n, p, q)?;
        let dim = model.basis(p, q).dim();
        if oracle != dim {
            bad.push(((p, q), format!("nbc basis {dim}, quotient {oracle}")));
        }
    }
    let (ok, mut d) = first_failure(bad, checked);
    if checked < bidegrees.len() {
        d.push_str(&format!("; {} slices above the oracle size limit", bidegrees.len() - checked));
    }
    checks.push(Check::new("nbc-oracle", "nbc basis against the presentation by generators and relations", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        let oracle = slice_dimension_oracle(n, p, q)?;
        let dim = model.basis(p, q).dim() as u128;
        if oracle != dim {
            bad.push(((p, q), format!("basis {dim}, marked partitions {oracle}")));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("marked-partitions", "dim A^{p,q} as a sum of induced representations", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        let oracle = invariant_dimension_oracle(n, p, q);
        let dim = model.dim(ModelId::UA, p, q)?;
        if oracle != dim {
            bad.push(((p, q), format!("invariants {dim}, trivial characters {oracle}")));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("invariant-count", "dim UA^{p,q} counts marked partitions with trivial character", ok, d));

    let mut bad = Vec::new();
    let mut count = 0;
    for &(p, q) in bidegrees.iter().filter(|&&(p, q)| q > p + 1) {
        count += 1;
        let (ua, ub) = (model.dim(ModelId::UA, p, q)?, model.dim(ModelId::UB, p, q)?);
        if ua != 0 || ub != 0 {
            bad.push(((p, q), format!("UA {ua}, UB {ub}")));
        }
    }
    let (ok, d) = first_failure(bad, count);
    checks.push(Check::new("invariants-vanish", "UA^{p,q} = UB^{p,q} = 0 for q > p + 1", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        let mut split = 0;
        for dp in 0..=p.min(2) {
            if p - dp <= model.max_p(q) {
                split += model.dim(ModelId::D, dp, 0)? * model.dim(ModelId::B, p - dp, q)?;
            }
        }
        let dim = model.basis(p, q).dim();
        if split != dim {
            bad.push(((p, q), format!("A {dim}, B ⊗ D {split}")));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("splitting", "A ≅ B ⊗ D (dimensions)", ok, d));
    Ok(checks)
}

fn commutes(left: &SparseMatrix, right: &SparseMatrix, left2: &SparseMatrix, right2: &SparseMatrix) -> Result<bool> {
    Ok(left.mul(right)? == left2.mul(right2)?)
}

pub fn reps_suite(model: &KrizModel) -> Result<Vec<Check>> {
    let n = model.n();
    let bidegrees = model.bidegrees();
    let mut checks = Vec::new();

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        if q < 2 {
            continue;
        }
        let dd = model.differential_matrix(p + 2, q - 1).mul(&model.differential_matrix(p, q))?;
        if !dd.is_zero() {
            bad.push(((p, q), "d∘d ≠ 0".to_string()));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("d-squared", "d∘d = 0", ok, d));

    let gens = generators(n);
    let mut bad = Vec::new();
    for &(p, q) in bidegrees.iter().filter(|&&(_, q)| q >= 1) {
        let d = model.differential_matrix(p, q);
        for g in &gens {
            let (s, t) = (permutation_matrix(model, g, p, q), permutation_matrix(model, g, p + 2, q - 1));
            if !commutes(&d, &s, &t, &d)? {
                bad.push(((p, q), format!("σ = {:?}", g)));
            }
        }
        for op in [Sl2Operator::E, Sl2Operator::F, Sl2Operator::H] {
            let (s, t) = (sl2_matrix(model, op, p, q), sl2_matrix(model, op, p + 2, q - 1));
            if !commutes(&d, &s, &t, &d)? {
                bad.push(((p, q), format!("{op:?}")));
            }
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("d-equivariance", "d commutes with S_n and with sl2", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        let e = sl2_matrix(model, Sl2Operator::E, p, q);
        let f = sl2_matrix(model, Sl2Operator::F, p, q);
        let h = sl2_matrix(model, Sl2Operator::H, p, q);
        let ef = e.mul(&f)?.sub(&f.mul(&e)?)?;
        let he = h.mul(&e)?.sub(&e.mul(&h)?)?;
        let hf = h.mul(&f)?.sub(&f.mul(&h)?)?;
        if ef != h || he != e.scaled(&Rational::from_integer(2)) || hf != f.scaled(&Rational::from_integer(-2)) {
            bad.push(((p, q), "commutator relation fails".to_string()));
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("sl2-relations", "[e,f] = h, [h,e] = 2e, [h,f] = -2f", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        for a in 0..=p as i64 {
            let r = pi_a_injectivity(model, p, q, a);
            if !r.injective() {
                bad.push(((p, q), format!("a = {a}: rank {} < {}", r.rank, r.source_dim)));
            }
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("pi-injective", "π_a injective for a ≥ 0", ok, d));

    let mut bad = Vec::new();
    for &(p, q) in &bidegrees {
        for which in [ModelId::A, ModelId::UA, ModelId::B, ModelId::UB] {
            let w = weight_decomposition(model, which, p, q)?;
            if !w.is_symmetric() || w.irrep_multiplicities().is_err() {
                bad.push(((p, q), format!("{which}: {:?}", w.dims)));
            }
        }
    }
    let (ok, d) = first_failure(bad, bidegrees.len());
    checks.push(Check::new("weights", "weight spaces symmetric with nonnegative irreducible multiplicities", ok, d));
    Ok(checks)
}

fn compare<T: PartialEq + fmt::Display>(name: &str, anchor: &str, computed: &T, expected: &T) -> Check {
    let passed = computed == expected;
    let details = if passed {
        computed.to_string()
    } else {
        format!("computed {computed}, expected {expected}")
    };
    Check::new(name, anchor, passed, details)
}

pub fn cohomology_suite(model: &KrizModel) -> Result<Vec<Check>> {
    let n = model.n();
    let mut checks = Vec::new();
    let cf = closed_form(Space::UConf, n)?;
    let uconf = hodge_polynomial(model, Space::UConf)?;
    checks.push(compare("betti-uconf", "Poincaré polynomial of UConf", &uconf.betti(), &cf.betti));
    checks.push(compare("hodge-uconf", "Hodge polynomial of UConf", &uconf, &cf.hodge));
    checks.push(compare(
        "groth-uconf",
        "Hodge polynomial of UConf in the Grothendieck ring",
        &groth_hodge_polynomial(model, Space::UConf)?,
        &cf.groth,
    ));
    let um = groth_hodge_polynomial(model, Space::UM)?;
    checks.push(compare("groth-um", "Hodge polynomial of UB in the Grothendieck ring", &um, &um_groth_closed_form(n)));
    checks.push(compare("betti-um", "Poincaré polynomial of UB", &um.dimensions().betti(), &closed_form(Space::UM, n)?.betti));

    if n <= 5 {
        let conf = hodge_polynomial(model, Space::Conf)?;
        let chi_model: i64 = model
            .bidegrees()
            .iter()
            .map(|&(p, q)| if (p + q) % 2 == 0 { 1 } else { -1 } * model.basis(p, q).dim() as i64)
            .sum();
        let betti = conf.betti();
        let chi_h: i64 = betti.coeffs.iter().map(|(&i, &c)| if i % 2 == 0 { c } else { -c }).sum();
        checks.push(compare("euler", "Euler characteristic of A equals that of its cohomology", &chi_h, &chi_model));

        let circle = Polynomial::from_coeffs([(0, 1), (1, 2), (2, 1)]);
        let m = hodge_polynomial(model, Space::M)?;
        checks.push(compare("kunneth-betti", "betti(Conf) = (1+t)^2 betti(M)", &betti, &circle.mul(&m.betti())));
        let gc = groth_hodge_polynomial(model, Space::Conf)?;
        let gm = groth_hodge_polynomial(model, Space::M)?;
        checks.push(compare(
            "kunneth-groth",
            "Conf splits as the curve times M in the Grothendieck ring",
            &gc,
            &curve_groth().mul(&gm),
        ));
    }
    if n <= 4 {
        let mut bad = Vec::new();
        let bidegrees = model.bidegrees();
        for &(p, q) in &bidegrees {
            let direct = cohomology_slice(model, ModelId::UA, p, q)?.dim;
            let fixed = invariant_cohomology_dim(model, p, q)?;
            if direct != fixed {
                bad.push(((p, q), format!("H(UA) {direct}, H(A)^Sn {fixed}")));
            }
        }
        let (ok, d) = first_failure(bad, bidegrees.len());
        checks.push(Check::new("transfer", "cohomology of invariants equals invariants of cohomology", ok, d));
    }
    Ok(checks)
}

pub fn classes_suite(model: &KrizModel) -> Result<Vec<Check>> {
    let n = model.n();
    let mut checks = Vec::new();
    let mut built = Vec::new();
    for c in ClassName::ALL.into_iter().filter(|c| n >= c.min_points()) {
        match build_class(model, c) {
            Ok(v) => built.push(v),
            Err(Error::NotCocycle { name }) => {
                checks.push(Check::new("cocycles", "α, ᾱ, β, γ, γ̄ are closed", false, format!("{name} is not closed")));
                return Ok(checks);
            }
            Err(e) => return Err(e),
        }
    }
    let names: Vec<&str> = built.iter().map(|c| c.name.name()).collect();
    checks.push(Check::new("cocycles", "α, ᾱ, β, γ, γ̄ are closed", true, names.join(", ")));

    let mut failures = Vec::new();
    for c in &built {
        let (p, q) = c.bidegree();
        let coords = model.coordinates(&c.value, p, q)?;
        for g in generators(n) {
            if permutation_matrix(model, &g, p, q).mul_vec(&coords)? != coords {
                failures.push(c.name.name());
            }
        }
    }
    checks.push(Check::new(
        "classes-invariant",
        "the classes are S_n-invariant",
        failures.is_empty(),
        if failures.is_empty() { "fixed by (1 2) and the n-cycle".to_string() } else { failures.join(", ") },
    ));

    if let Some(alpha) = built.iter().find(|c| c.name == ClassName::Alpha) {
        let abar = built.iter().find(|c| c.name == ClassName::AlphaBar).expect("built with alpha");
        let f = sl2_matrix(model, Sl2Operator::F, 1, 1);
        let image = f.mul_vec(&model.coordinates(&alpha.value, 1, 1)?)?;
        checks.push(Check::new(
            "f-alpha",
            "f(α) = ᾱ",
            image == model.coordinates(&abar.value, 1, 1)?,
            "",
        ));
        let mut lines = Vec::new();
        let mut ok = true;
        for q in 1..=n / 2 {
            let (x, y) = (a_q_extracted(model, alpha, q)?, a_q_closed(n, q));
            ok &= x == y;
            lines.push(format!("a_{q} = {x} (closed form {y})"));
        }
        if let Some(beta) = built.iter().find(|c| c.name == ClassName::Beta) {
            for q in 1..=(n - 1) / 2 {
                let (x, y) = (b_q_extracted(model, alpha, beta, q)?, b_q_closed(n, q));
                ok &= x == y;
                lines.push(format!("b_{q} = {x} (closed form {y})"));
            }
        }
        checks.push(Check::new("coefficients", "leading coefficients a_q of α^q and b_q of α^(q-1)β", ok, lines.join("; ")));

        let powers = verify_power_nonvanishing(model)?;
        let bad: Vec<&str> = powers.checks.iter().filter(|c| !c.passed()).map(|c| c.label.as_str()).collect();
        checks.push(Check::new(
            "power-nonvanishing",
            "α^q ≠ 0 for n > 2q and α^(q-1)β ≠ 0 for n > 2q+1 in H(UB)",
            bad.is_empty(),
            if bad.is_empty() { format!("{} classes", powers.checks.len()) } else { bad.join(", ") },
        ));
    }

    let mut ok = true;
    for q in 1..=7 {
        ok &= fixed_point_sign_sum(q) == fixed_point_closed_form(q);
    }
    checks.push(Check::new("determinant", "Σ sgn(σ) x^|Fix σ| = (x-1)^(q-1)(x+q-1)", ok, "q ≤ 7"));

    if n >= 4 {
        let w = cohomology_slice(model, ModelId::UB, 2, 1)?.weights(model)?;
        let expected = crate::equivariance::WeightDecomposition::from_dims([(0, 1)]);
        checks.push(Check::new(
            "beta-line",
            "[β] spans an invariant line in degree 3 of H(UB)",
            w == expected,
            format!("{:?}", w.dims),
        ));
    }
    Ok(checks)
}

pub fn ring_suite(model: &KrizModel) -> Result<Vec<Check>> {
    let n = model.n();
    if n < 4 {
        let um = groth_hodge_polynomial(model, Space::UM)?;
        return Ok(vec![compare(
            "ring-small",
            "H(UB) for n < 4 against the Grothendieck-ring closed form",
            &um,
            &um_groth_closed_form(n),
        )]);
    }
    let mut checks = Vec::new();
    match verify_presentation(model) {
        Ok(r) => {
            checks.push(Check::new(
                "presentation",
                "H(UB) = S V_1[b] / (a^m, a^e b, b^2) for exactly one candidate e",
                true,
                format!(
                    "matched e = {}; stated exponent {} {}; observed {:?}",
                    r.matched_exponent,
                    r.stated_exponent,
                    if r.stated_exponent_matches { "matches" } else { "does not match" },
                    r.observed
                ),
            ));
            checks.push(Check::new(
                "alpha-powers",
                "α^i ≠ 0 in H(UB) for i < ⌊(n+1)/2⌋ and α^⌊(n+1)/2⌋ = 0",
                r.alpha_powers_ok,
                format!("m = {}", r.a_exponent),
            ));
            checks.push(Check::new(
                "beta-products",
                "products α^k β realize the quotient and β^2 = 0",
                r.beta_products_ok && r.beta_square_zero,
                "",
            ));
        }
        Err(Error::NoMatchingExponent(_)) => {
            checks.push(Check::new("presentation", "H(UB) = S V_1[b] / (a^m, a^e b, b^2) for exactly one candidate e", false, "no candidate exponent matches"));
        }
        Err(e) => return Err(e),
    }
    let g = verify_generation(model)?;
    let bad: Vec<String> = g
        .slices
        .iter()
        .filter(|s| s.generated != s.expected)
        .map(|s| format!("({},{}): {} of {}", s.p, s.q, s.generated, s.expected))
        .collect();
    checks.push(Check::new(
        "generation",
        "H(UConf) is generated by α, ᾱ, β, γ, γ̄ (degrees 1, 2, 3)",
        bad.is_empty(),
        if bad.is_empty() { format!("degree 1 spanned by γ, γ̄ (dim {})", g.degree_dim(1)) } else { bad.join("; ") },
    ));
    Ok(checks)
}

pub fn formality_suite(model: &KrizModel) -> Result<Vec<Check>> {
    if model.n() < 4 {
        return Ok(Vec::new());
    }
    let r = verify_formality(model)?;
    let dims_ok = r.slices.iter().all(|s| s.generated == s.expected);
    Ok(vec![
        Check::new("formality-intersection", "K ∩ Im d = 0", r.meets_coboundaries.is_empty(), format!("{:?}", r.meets_coboundaries)),
        Check::new("formality-dimension", "dim K = dim H(UB) in every bidegree", dims_ok, ""),
        Check::new("formality-closed", "every element of K is closed", r.not_closed.is_empty(), ""),
        Check::new(
            "formality-pattern",
            "K is concentrated on the two diagonals of α^i and α^(i-1)β",
            r.off_pattern.is_empty(),
            format!("{:?}", r.off_pattern),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in [Suite::All].into_iter().chain(Suite::PARTS) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn all_suites_pass_small() {
        for n in 2..=4 {
            let m = KrizModel::new(n).unwrap();
            let r = verify(&m, Suite::All).unwrap();
            for c in &r.checks {
                assert!(c.passed, "n={n} {}: {}", c.name, c.details);
            }
        }
    }
}
