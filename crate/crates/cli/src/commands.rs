//! Subcommand implementations. Each returns the JSON document to write and,
//! if a numerical check failed, the reason.

use std::path::Path;

use achsolve::cr::Component;
use achsolve::gjms::hermitian_defect;
use achsolve::io::residuals_csv;
use achsolve::solver::verify::lambda_sweep;
use achsolve::{
    det_product_check, gjms_apply, gjms_matrix, growth_probe, solve, verify, Background, BackgroundSpec, Coeff,
    Complex64, Error, ExactComplex, FieldValue, GjmsRequest, Mode, SolveConfig, SolveResult,
};
use anyhow::{bail, ensure, Context};
use serde_json::{json, Value};

use crate::config::{scalar_json, Command, ModeChoice, RunConfig};

pub struct Outcome {
    pub doc: Value,
    pub failure: Option<String>,
}

pub fn run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let mut out = match cfg.command {
        Command::Solve => {
            let (spec, label) = cfg.background_spec()?;
            if use_exact(cfg, &spec) {
                solve_cmd::<ExactComplex>(cfg, &spec, &label)?
            } else {
                solve_cmd::<Complex64>(cfg, &spec, &label)?
            }
        }
        Command::Gjms => gjms_cmd(cfg)?,
        Command::Verify => verify_cmd(cfg)?,
        Command::Indicial => indicial_cmd(cfg)?,
    };
    out.doc["provenance"] = cfg.provenance();
    Ok(out)
}

fn use_exact(cfg: &RunConfig, spec: &BackgroundSpec) -> bool {
    match cfg.mode {
        ModeChoice::Auto => spec.supports_exact(),
        ModeChoice::Exact => true,
        ModeChoice::Float => false,
    }
}

fn solve_configs<C: Coeff>(cfg: &RunConfig) -> anyhow::Result<Vec<SolveConfig<C>>> {
    let order = cfg.order.context("`order` is required")?;
    let lambdas: Vec<String> = if cfg.lambda.is_empty() { vec!["0".into()] } else { cfg.lambda.clone() };
    lambdas
        .iter()
        .map(|text| {
            let lambda = C::from_json(&scalar_json(text)).with_context(|| format!("bad lambda `{text}`"))?;
            let mut sc = SolveConfig::new(order, lambda);
            sc.tol = cfg.tolerance();
            sc.strict = cfg.strict;
            sc.bianchi = cfg.bianchi;
            sc.validate()?;
            Ok(sc)
        })
        .collect()
}

/// Solves every configured λ, one thread per value.
fn solve_all<C: Coeff>(cfg: &RunConfig, bg: &Background<C>) -> anyhow::Result<Vec<SolveResult<C>>> {
    let configs = solve_configs::<C>(cfg)?;
    let results: Vec<achsolve::Result<SolveResult<C>>> = std::thread::scope(|s| {
        let handles: Vec<_> = configs.into_iter().map(|sc| s.spawn(move || solve(bg, sc))).collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });
    Ok(results.into_iter().collect::<achsolve::Result<_>>()?)
}

fn solve_cmd<C: Coeff>(cfg: &RunConfig, spec: &BackgroundSpec, label: &str) -> anyhow::Result<Outcome> {
    let bg = spec.build::<C>(label)?;
    let results = solve_all(cfg, &bg)?;
    if let Some(path) = &cfg.csv {
        let rows: Vec<_> = results.iter().flat_map(|r| r.residuals.iter().cloned()).collect();
        write_text(path, &residuals_csv(&rows)?)?;
    }
    if let [single] = results.as_slice() {
        return Ok(Outcome { doc: single.to_json(), failure: None });
    }
    let sweep = lambda_sweep(&results, results[0].order, cfg.tolerance())?;
    let failure = (!sweep.ok).then(|| "λ-degree bound violated".to_string());
    Ok(Outcome {
        doc: json!({
            "results": results.iter().map(SolveResult::to_json).collect::<Vec<_>>(),
            "sweep": sweep,
        }),
        failure,
    })
}

/// A solve result on disk together with its arithmetic mode.
fn read_result(path: &Path) -> anyhow::Result<(Value, Mode)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mode = doc.get("mode").cloned().with_context(|| format!("{} is not a single solve result", path.display()))?;
    let mode: Mode = serde_json::from_value(mode).with_context(|| format!("bad mode in {}", path.display()))?;
    Ok((doc, mode))
}

/// Rebuilds the background a stored result was solved on.
fn source_background<C: Coeff>(result: &SolveResult<C>) -> anyhow::Result<Background<C>> {
    let spec = result.background_spec.as_ref().context("solve result carries no background spec")?;
    Ok(BackgroundSpec::from_json(spec)?.build::<C>(&result.background)?)
}

fn gjms_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    match cfg.input.as_slice() {
        [] => {
            let (spec, label) = cfg.background_spec()?;
            ensure!(cfg.lambda.len() <= 1, "gjms takes a single lambda");
            if use_exact(cfg, &spec) {
                gjms_inline::<ExactComplex>(cfg, &spec, &label)
            } else {
                gjms_inline::<Complex64>(cfg, &spec, &label)
            }
        }
        [path] => {
            let (doc, mode) = read_result(path)?;
            match mode {
                Mode::Exact => {
                    let r = SolveResult::<ExactComplex>::from_json(&doc)?;
                    gjms_typed(cfg, &r, &source_background(&r)?)
                }
                Mode::Float => {
                    let r = SolveResult::<Complex64>::from_json(&doc)?;
                    gjms_typed(cfg, &r, &source_background(&r)?)
                }
            }
        }
        _ => bail!("gjms takes exactly one input"),
    }
}

fn gjms_inline<C: Coeff>(cfg: &RunConfig, spec: &BackgroundSpec, label: &str) -> anyhow::Result<Outcome> {
    let bg = spec.build::<C>(label)?;
    let result = solve_all(cfg, &bg)?.pop().expect("one λ");
    gjms_typed(cfg, &result, &bg)
}

/// Samples the test function; constant backgrounds accept constants only.
fn test_function<C: Coeff>(spec: &Value, bg: &Background<C>) -> anyhow::Result<FieldValue<C>> {
    let comp = Component::from_json(spec)?;
    match (bg.geom(), &comp) {
        (Some(geom), _) => Ok(comp.to_field(geom)?),
        (None, Component::Const(v)) => Ok(FieldValue::Const(C::from_json(v)?)),
        (None, _) => Err(Error::Invalid("a constant background takes constant test functions only".into()).into()),
    }
}

/// Largest contact-direction frequency in the self-adjointness basis.
const BASIS_FREQ: i64 = 1;

fn gjms_typed<C: Coeff>(cfg: &RunConfig, result: &SolveResult<C>, bg: &Background<C>) -> anyhow::Result<Outcome> {
    let k = cfg.k.context("`k` is required")?;
    let f = test_function(cfg.f.as_ref().context("`f` is required")?, bg)?;
    let out = gjms_apply(&GjmsRequest { k, f, source: result, background: bg })?;
    let defect = match bg.geom() {
        Some(geom) if C::MODE == Mode::Float => {
            let basis = (-BASIS_FREQ..=BASIS_FREQ)
                .flat_map(|a| (-BASIS_FREQ..=BASIS_FREQ).map(move |b| [a, b, 0]))
                .map(|freq| Component::Fourier(vec![(Complex64::new(1.0, 0.0), freq)]).to_field(geom))
                .collect::<achsolve::Result<Vec<_>>>()?;
            Some(hermitian_defect(&gjms_matrix(result, bg, k, &basis)?))
        }
        _ => None,
    };
    let mut doc = out.to_json(&result.lambda);
    doc["selfadjoint_defect"] = json!(defect);
    let failure = defect
        .filter(|&d| d > cfg.tolerance())
        .map(|d| format!("self-adjointness defect {d:.3e} exceeds {:.1e}", cfg.tolerance()));
    Ok(Outcome { doc, failure })
}

fn verify_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    ensure!(!cfg.input.is_empty(), "verify needs at least one `input`");
    let docs = cfg.input.iter().map(|p| read_result(p)).collect::<anyhow::Result<Vec<_>>>()?;
    let mode = docs[0].1;
    ensure!(docs.iter().all(|(_, m)| *m == mode), "inputs mix exact and float results");
    match mode {
        Mode::Exact => verify_typed::<ExactComplex>(cfg, &docs),
        Mode::Float => verify_typed::<Complex64>(cfg, &docs),
    }
}

fn verify_typed<C: Coeff>(cfg: &RunConfig, docs: &[(Value, Mode)]) -> anyhow::Result<Outcome> {
    let results = docs.iter().map(|(d, _)| SolveResult::<C>::from_json(d)).collect::<achsolve::Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for (path, r) in cfg.input.iter().zip(&results) {
        let report = verify(r);
        let name = path.display();
        if let Some(order) = report.einstein_residual_order {
            failures.push(format!("{name}: Einstein residual at order {order}"));
        }
        if !report.parity_ok {
            failures.push(format!("{name}: parity defect {:.3e}", report.parity_defect));
        }
        if let Some(v) = report.weyl_valuation.filter(|&v| v < 6) {
            failures.push(format!("{name}: anti-self-dual Weyl tensor at order {v}"));
        }
        reports.push(json!({ "input": path, "lambda": r.lambda.to_json(), "report": report }));
    }
    let sweep = if results.len() > 1 {
        let order = results.iter().map(|r| r.order).min().expect("non-empty");
        let sweep = lambda_sweep(&results, order, cfg.tolerance())?;
        if !sweep.ok {
            failures.push("λ-degree bound violated".into());
        }
        Some(sweep)
    } else {
        None
    };
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Outcome { doc: json!({ "reports": reports, "sweep": sweep }), failure })
}

fn indicial_cmd(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let pencil = det_product_check(cfg.kmax.unwrap_or(200))?;
    let probe = match cfg.input.as_slice() {
        [] => None,
        [path] => {
            let (doc, mode) = read_result(path)?;
            Some(match mode {
                Mode::Exact => growth_probe(&SolveResult::<ExactComplex>::from_json(&doc)?)?,
                Mode::Float => growth_probe(&SolveResult::<Complex64>::from_json(&doc)?)?,
            })
        }
        _ => bail!("indicial takes at most one input"),
    };
    let failure = (!(pencil.all_equal && pencil.all_nonzero))
        .then(|| format!("{} of {} determinants match the product formula", pencil.matches, pencil.entries.len()));
    Ok(Outcome { doc: json!({ "pencil": pencil, "probe": probe }), failure })
}

pub fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
