use std::path::PathBuf;

use serde_json::{json, Value};

use ellconf_core::classes::{
    a_q_closed, a_q_extracted, b_q_closed, b_q_extracted, build_class, ClassName, NamedClass,
};
use ellconf_core::cohomology::{closed_form, groth_hodge_polynomial, hodge_polynomial};
use ellconf_core::equivariance::weight_decomposition;
use ellconf_core::model::oracle_quotient_dim;
use ellconf_core::partitions::{enumerate_marked, MAX_FACTORIAL_N};
use ellconf_core::verify::verify as run_suite;
use ellconf_core::{DiskCache, Error, KrizModel, ModelId, Rational, Space, Suite};

use crate::render::{big, latex_grid, latex_poly, Output, Table};

/// Largest `n` for general commands.
pub const DEFAULT_MAX_N: usize = 6;
/// Largest `n` with `--allow-large`, for UB-only and class commands.
pub const LARGE_MAX_N: usize = 7;

pub struct Context {
    pub cache_dir: Option<PathBuf>,
    pub allow_large: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Guard(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Guard(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded(_) | Error::UnsupportedPointCount { .. } => CliError::Guard(e.to_string()),
            Error::Parse(_) | Error::UnsupportedModel { .. } | Error::ClassUndefined { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

type CmdResult = Result<(Output, bool), CliError>;

impl Context {
    /// Builds the model after the size guard; `ub_only` marks requests that
    /// may go to `n = 7` with `--allow-large`.
    fn model(&self, n: usize, ub_only: bool) -> Result<KrizModel, CliError> {
        if n > DEFAULT_MAX_N {
            let permitted = ub_only && self.allow_large && n <= LARGE_MAX_N;
            if !permitted {
                let hint = if ub_only && n <= LARGE_MAX_N {
                    " (pass --allow-large)"
                } else {
                    ""
                };
                return Err(CliError::Guard(format!(
                    "n = {n} exceeds the limit n <= {DEFAULT_MAX_N}{hint}; n = {LARGE_MAX_N} is available only for UB and class commands"
                )));
            }
        }
        let model = KrizModel::new(n)?;
        Ok(match &self.cache_dir {
            Some(dir) => model.with_cache(DiskCache::new(dir)),
            None => model,
        })
    }
}

fn frac(r: &Rational) -> String {
    r.to_fraction_string()
}

pub fn basis(ctx: &Context, n: usize, which: ModelId, p: usize, q: usize, oracle: bool) -> CmdResult {
    let model = ctx.model(n, false)?;
    let basis = model.basis(p, q);
    let mut table = Table::new(&["index", "element"]);
    let mut elements = Vec::new();
    let dim;
    if which == ModelId::A {
        dim = basis.dim();
        for (k, e) in basis.elements().iter().enumerate() {
            let text = e.monomial.display(n);
            table.push([k.to_string(), text.clone()]);
            let forest: Vec<[usize; 2]> = e.forest.edges().iter().map(|&(i, j)| [i, j]).collect();
            elements.push(json!({"index": k, "element": text, "forest": forest}));
        }
    } else {
        let space = if p <= model.max_p(q) { Some(model.subspace(which, p, q)?) } else { None };
        dim = space.as_ref().map_or(0, |s| s.dim());
        for (k, v) in space.iter().flat_map(|s| s.vectors().iter()).enumerate() {
            let text = model.element(p, q, v).to_string();
            table.push([k.to_string(), text.clone()]);
            elements.push(json!({"index": k, "element": text}));
        }
    }
    let mut out = json!({
        "command": "basis",
        "n": n,
        "model": which.name().to_ascii_lowercase(),
        "p": p,
        "q": q,
        "dim": dim,
        "elements": elements,
    });
    let mut text = format!("dim {}^{{{p},{q}}} (n = {n}) = {dim}\n", which.name());
    for row in &table.rows {
        text.push_str(&format!("{:>5}  {}\n", row[0], row[1]));
    }
    let mut agrees = true;
    if oracle {
        let independent = if which == ModelId::A {
            oracle_quotient_dim(n, p, q)? as u128
        } else {
            model.formula_dim(ModelId::B, p, q)
        };
        agrees = independent == dim as u128;
        out["oracle_dim"] = big(independent);
        out["oracle_agrees"] = Value::from(agrees);
        text.push_str(&format!("oracle dimension {independent} ({})\n", if agrees { "agrees" } else { "DISAGREES" }));
    }
    Ok((Output { json: out, text, table, latex: None }, agrees))
}

pub fn betti(ctx: &Context, n: usize, space: Space) -> CmdResult {
    let model = ctx.model(n, space == Space::UM)?;
    let poly = hodge_polynomial(&model, space)?.betti();
    let coeffs = poly.to_vec();
    let mut table = Table::new(&["degree", "betti"]);
    for (i, c) in coeffs.iter().enumerate() {
        table.push([i.to_string(), c.to_string()]);
    }
    let text = poly.to_string();
    let json = json!({
        "command": "betti",
        "n": n,
        "space": space.name(),
        "coefficients": coeffs,
        "polynomial": text,
    });
    let latex = Some(latex_poly(&text));
    Ok((Output { json, text, table, latex }, true))
}

/// `(degree, weight)` back to `(p, q)`.
fn bidegree_of(degree: usize, weight: usize) -> (usize, usize) {
    (2 * degree - weight, weight - degree)
}

pub fn hodge(ctx: &Context, n: usize, space: Space, grothendieck: bool) -> CmdResult {
    let model = ctx.model(n, space == Space::UM)?;
    let expected = closed_form(space, n).ok();
    if grothendieck {
        let g = groth_hodge_polynomial(&model, space)?;
        let mut table = Table::new(&["degree", "weight", "p", "q", "dim", "irreps"]);
        let mut terms = Vec::new();
        let mut cells = Vec::new();
        for (&(i, w), m) in &g.coeffs {
            let (p, q) = bidegree_of(i, w);
            table.push([i.to_string(), w.to_string(), p.to_string(), q.to_string(), m.dim().to_string(), m.to_string()]);
            let irreps: Vec<Value> = m.mult.iter().map(|(&k, &c)| json!({"k": k, "multiplicity": c})).collect();
            terms.push(json!({"degree": i, "weight": w, "p": p, "q": q, "dim": m.dim(), "irreps": irreps}));
            let latex = m
                .mult
                .iter()
                .map(|(&k, &c)| if c == 1 { format!("V_{k}") } else { format!("{c}V_{k}") })
                .collect::<Vec<_>>()
                .join(" + ");
            cells.push(((p, q), latex));
        }
        let matches = expected.as_ref().map(|e| e.groth == g);
        let json = json!({
            "command": "hodge",
            "n": n,
            "space": space.name(),
            "grothendieck": true,
            "polynomial": g.to_string(),
            "terms": terms,
            "matches_closed_form": matches,
        });
        return Ok((Output { json, text: g.to_string(), table, latex: Some(latex_grid(&cells)) }, true));
    }
    let h = hodge_polynomial(&model, space)?;
    let mut table = Table::new(&["degree", "weight", "p", "q", "dim"]);
    let mut terms = Vec::new();
    let mut cells = Vec::new();
    for (&(i, w), &c) in &h.coeffs {
        let (p, q) = bidegree_of(i, w);
        table.push([i.to_string(), w.to_string(), p.to_string(), q.to_string(), c.to_string()]);
        terms.push(json!({"degree": i, "weight": w, "p": p, "q": q, "dim": c}));
        cells.push(((p, q), c.to_string()));
    }
    let json = json!({
        "command": "hodge",
        "n": n,
        "space": space.name(),
        "grothendieck": false,
        "polynomial": h.to_string(),
        "terms": terms,
        "matches_closed_form": expected.as_ref().map(|e| e.hodge == h),
    });
    Ok((Output { json, text: h.to_string(), table, latex: Some(latex_grid(&cells)) }, true))
}

pub fn decompose(ctx: &Context, n: usize, which: ModelId, p: usize, q: usize) -> CmdResult {
    let model = ctx.model(n, which == ModelId::UB)?;
    if p > model.max_p(q) {
        return Err(CliError::Usage(format!("A^{{{p},{q}}} is zero for n = {n}")));
    }
    let w = weight_decomposition(&model, which, p, q)?;
    let irreps = w.irrep_multiplicities()?;
    let mut table = Table::new(&["weight", "dim"]);
    for (&a, &d) in &w.dims {
        table.push([a.to_string(), d.to_string()]);
    }
    let weights: Vec<Value> = w.dims.iter().map(|(&a, &d)| json!({"weight": a, "dim": d})).collect();
    let irrep_list: Vec<Value> = irreps.mult.iter().map(|(&k, &c)| json!({"k": k, "multiplicity": c})).collect();
    let json = json!({
        "command": "decompose",
        "n": n,
        "model": which.name().to_ascii_lowercase(),
        "p": p,
        "q": q,
        "dim": w.total(),
        "weights": weights,
        "irreps": irrep_list,
        "decomposition": irreps.to_string(),
    });
    let weights_text: Vec<String> = w.dims.iter().map(|(a, d)| format!("{a}:{d}")).collect();
    let text = format!(
        "{}^{{{p},{q}}} (n = {n}): dim {}\nweights {}\nirreps {}\n",
        which.name(),
        w.total(),
        weights_text.join(" "),
        irreps
    );
    Ok((Output { json, text, table, latex: None }, true))
}

pub fn partitions(n: usize, p: usize, q: usize) -> CmdResult {
    if n > MAX_FACTORIAL_N {
        return Err(CliError::Guard(format!(
            "n = {n} exceeds the limit n <= {MAX_FACTORIAL_N} for exact group orders"
        )));
    }
    let list = enumerate_marked(n, p, q);
    let mut table = Table::new(&[
        "lambda", "marks", "size_l", "size_h", "norm_h", "c_order", "n_order", "z_order", "xi_trivial", "induced_dim",
    ]);
    let mut entries = Vec::new();
    let mut total: u128 = 0;
    let mut trivial = 0usize;
    for mp in &list {
        let s = mp.stabilizer()?;
        let induced = mp.induced_dim()?;
        total += induced;
        trivial += usize::from(mp.xi_is_trivial());
        let lambda: Vec<String> = mp.lambda.iter().map(|l| l.to_string()).collect();
        let marks: Vec<&str> = mp.marks.iter().map(|m| m.name()).collect();
        table.push([
            lambda.join(" "),
            marks.join(" "),
            mp.size_l().to_string(),
            mp.size_h().to_string(),
            mp.norm_h().to_string(),
            s.c_order.to_string(),
            s.n_order.to_string(),
            s.z_order.to_string(),
            mp.xi_is_trivial().to_string(),
            induced.to_string(),
        ]);
        entries.push(json!({
            "lambda": mp.lambda,
            "marks": marks,
            "size_l": mp.size_l(),
            "size_h": mp.size_h(),
            "norm_h": mp.norm_h(),
            "c_order": big(s.c_order),
            "n_order": big(s.n_order),
            "z_order": big(s.z_order),
            "xi_trivial": mp.xi_is_trivial(),
            "induced_dim": big(induced),
        }));
    }
    let json = json!({
        "command": "partitions",
        "n": n,
        "p": p,
        "q": q,
        "count": list.len(),
        "total_induced_dim": big(total),
        "trivial_count": trivial,
        "entries": entries,
    });
    let mut text = String::new();
    for (mp, row) in list.iter().zip(&table.rows) {
        text.push_str(&format!("{mp}  |Z| = {}  xi trivial: {}  induced dim {}\n", row[7], row[8], row[9]));
    }
    text.push_str(&format!("{} marked partitions, total dimension {total}, {trivial} with trivial xi\n", list.len()));
    Ok((Output { json, text, table, latex: None }, true))
}

pub fn classes(ctx: &Context, n: usize) -> CmdResult {
    let model = ctx.model(n, true)?;
    let mut built: Vec<NamedClass> = Vec::new();
    let mut class_json = Vec::new();
    let mut text = String::new();
    for c in ClassName::ALL {
        let (p, q) = c.bidegree();
        if n < c.min_points() {
            class_json.push(json!({"name": c.name(), "defined": false, "p": p, "q": q}));
            text.push_str(&format!("{c}: undefined for n = {n}\n"));
            continue;
        }
        let v = build_class(&model, c)?;
        class_json.push(json!({
            "name": c.name(),
            "defined": true,
            "p": p,
            "q": q,
            "terms": v.value.len(),
            "cocycle": true,
        }));
        text.push_str(&format!("{c}: bidegree ({p},{q}), {} terms, closed\n", v.value.len()));
        built.push(v);
    }
    let mut table = Table::new(&["coefficient", "q", "extracted", "closed_form", "agrees"]);
    let mut coeffs = Vec::new();
    let mut all = true;
    let find = |name| built.iter().find(|c: &&NamedClass| c.name == name);
    if let Some(alpha) = find(ClassName::Alpha) {
        let mut rows = Vec::new();
        for q in 1..=n / 2 {
            rows.push(("a", q, a_q_extracted(&model, alpha, q)?, a_q_closed(n, q)));
        }
        if let Some(beta) = find(ClassName::Beta) {
            for q in 1..=(n - 1) / 2 {
                rows.push(("b", q, b_q_extracted(&model, alpha, beta, q)?, b_q_closed(n, q)));
            }
        }
        for (kind, q, x, y) in rows {
            let agrees = x == y;
            all &= agrees;
            table.push([kind.to_string(), q.to_string(), frac(&x), frac(&y), agrees.to_string()]);
            coeffs.push(json!({"kind": kind, "q": q, "extracted": frac(&x), "closed_form": frac(&y), "agrees": agrees}));
            text.push_str(&format!("{kind}_{q} = {x} (closed form {y})\n"));
        }
    }
    let json = json!({
        "command": "classes",
        "n": n,
        "classes": class_json,
        "coefficients": coeffs,
    });
    Ok((Output { json, text, table, latex: None }, all))
}

pub fn verify(ctx: &Context, n: usize, suite: Suite) -> CmdResult {
    let model = ctx.model(n, suite == Suite::Classes)?;
    let report = run_suite(&model, suite)?;
    let mut table = Table::new(&["name", "anchor", "status", "details"]);
    let mut checks = Vec::new();
    let mut text = String::new();
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "fail" };
        table.push([c.name.clone(), c.anchor.clone(), status.to_string(), c.details.clone()]);
        checks.push(json!({"name": c.name, "anchor": c.anchor, "status": status, "details": c.details}));
        text.push_str(&format!("[{}] {} ({}): {}\n", status.to_uppercase(), c.name, c.anchor, c.details));
    }
    let passed = report.passed();
    text.push_str(&format!(
        "{} of {} checks passed\n",
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len()
    ));
    let json = json!({
        "command": "verify",
        "n": n,
        "suite": suite.name(),
        "status": if passed { "pass" } else { "fail" },
        "checks": checks,
    });
    Ok((Output { json, text, table, latex: None }, passed))
}
