use hogeom_core::cfunction::{b0_regular, c_function, c_tilde};
use hogeom_core::multiplicity::{region_flags, standardize, Mult};
use hogeom_core::rootsys::RootSystem;
use hogeom_core::taufun::{Engine, EvalOptions, TauEvaluator, TauRequest};
use hogeom_core::verify::{hull_membership, ray_scan, run_case, suite_cases, Suite, SuiteReport};
use hogeom_core::C64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{parse_range, Function, JobConfig};
use crate::error::CliError;
use crate::output::{fmt17, to_csv, to_json};

/// Rendered command output; `failed` maps to exit code 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub failed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, failed: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub param: Option<f64>,
    pub x: Vec<f64>,
    pub value: C64,
    pub error: f64,
    pub method: String,
}

enum Evaluator {
    Tau(Box<TauEvaluator>),
    Plain(Box<Engine>),
}

impl Evaluator {
    fn new(rs: &RootSystem, f: Function, m: &Mult, ell: f64, lam: &[C64], opts: EvalOptions) -> Result<Self, CliError> {
        Ok(match f {
            Function::F | Function::G => {
                let req = TauRequest::new(*m, ell, lam.to_vec(), opts.method)?;
                Evaluator::Tau(Box::new(TauEvaluator::new(rs, req, opts)?))
            }
            Function::Generic | Function::GenericG => Evaluator::Plain(Box::new(Engine::new(rs, m, lam, opts)?)),
        })
    }

    fn eval(&mut self, f: Function, x: &[f64]) -> Result<(C64, f64, String), CliError> {
        let out = match (self, f) {
            (Evaluator::Tau(ev), Function::G) => ev.g_ell(x).map(|v| (v.value, v.error, v.label())),
            (Evaluator::Tau(ev), _) => ev.f_ell(x).map(|v| (v.value, v.error, v.label())),
            (Evaluator::Plain(e), Function::GenericG) => e.g(x).map(|(v, r)| (v.value, v.error, r.name().to_string())),
            (Evaluator::Plain(e), _) => e.f(x).map(|(v, r)| (v.value, v.error, r.name().to_string())),
        };
        out.map_err(|e| {
            let mut c = CliError::from(e);
            c.message = format!("{} at x = {x:?}", c.message);
            c
        })
    }
}

fn rho_for(rs: &RootSystem, f: Function, m: &Mult, ell: f64) -> Vec<f64> {
    match f {
        Function::F | Function::G => rs.rho(&m.deform(ell)),
        Function::Generic | Function::GenericG => rs.rho(m),
    }
}

/// Evaluates one (ℓ, λ) over the points, split into per-thread chunks with their own evaluator.
fn eval_points(
    rs: &RootSystem,
    cfg: &JobConfig,
    ell: f64,
    lam: &[C64],
    points: &[Vec<f64>],
    param: Option<f64>,
) -> Result<Vec<Row>, CliError> {
    let m = cfg.mult()?;
    let f = cfg.function;
    let opts = cfg.options();
    let chunk = points.len().div_ceil(rayon::current_num_threads()).max(1);
    let parts: Vec<Result<Vec<Row>, CliError>> = points
        .par_chunks(chunk)
        .map(|ch| {
            let mut ev = Evaluator::new(rs, f, &m, ell, lam, opts)?;
            ch.iter()
                .map(|x| {
                    let (value, error, method) = ev.eval(f, x)?;
                    Ok(Row { param, x: x.clone(), value, error, method })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(points.len());
    for p in parts {
        rows.extend(p?);
    }
    if let Some(tol) = cfg.tolerance {
        if let Some(r) = rows.iter().find(|r| !(r.error <= tol)) {
            return Err(CliError::numerical(format!(
                "estimated error {} exceeds tolerance {tol} at x = {:?}",
                r.error, r.x
            )));
        }
    }
    Ok(rows)
}

fn render_rows(cfg: &JobConfig, rank: usize, rows: &[Row], param: Option<&str>) -> Result<String, CliError> {
    if cfg.json {
        let items: Vec<serde_json::Value> = rows
            .iter()
            .map(|r| {
                let mut v =
                    json!({ "x": r.x, "re": r.value.re, "im": r.value.im, "method": r.method, "est_error": r.error });
                if let (Some(name), Some(p)) = (param, r.param) {
                    v[name] = json!(p);
                }
                v
            })
            .collect();
        return to_json(&items);
    }
    let mut header: Vec<String> = Vec::new();
    if let Some(name) = param {
        header.push(name.to_string());
    }
    header.extend((1..=rank).map(|j| format!("x_{j}")));
    header.extend(["re", "im", "method", "est_error"].map(String::from));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut line: Vec<String> = r.param.iter().map(|&p| fmt17(p)).collect();
            line.extend(r.x.iter().map(|&v| fmt17(v)));
            line.extend([fmt17(r.value.re), fmt17(r.value.im), r.method.clone(), fmt17(r.error)]);
            line
        })
        .collect();
    to_csv(&header, &body)
}

pub fn cmd_eval(cfg: &JobConfig) -> Result<Report, CliError> {
    let rank = cfg.rank()?;
    let rs = RootSystem::build_bc(rank)?;
    let m = cfg.mult()?;
    let lam = cfg.lambda(rank, &rho_for(&rs, cfg.function, &m, cfg.ell))?;
    let points = cfg.points(rank)?;
    let rows = eval_points(&rs, cfg, cfg.ell, &lam, &points, None)?;
    Ok(Report::ok(render_rows(cfg, rank, &rows, None)?))
}

pub fn cmd_sweep(cfg: &JobConfig) -> Result<Report, CliError> {
    let rank = cfg.rank()?;
    let rs = RootSystem::build_bc(rank)?;
    let m = cfg.mult()?;
    let param = cfg.param.as_deref().ok_or_else(|| CliError::config("sweep needs --param ell|lambda.K"))?;
    let values =
        parse_range(cfg.range.as_deref().ok_or_else(|| CliError::config("sweep needs --range start:stop:count"))?)?;
    let coord = match param {
        "ell" => None,
        p => {
            let k: usize = p
                .strip_prefix("lambda.")
                .and_then(|k| k.parse().ok())
                .filter(|&k| (1..=rank).contains(&k))
                .ok_or_else(|| CliError::config(format!("unknown sweep parameter {p:?}")))?;
            Some(k - 1)
        }
    };
    let points = cfg.points(rank)?;
    let per: Vec<Result<Vec<Row>, CliError>> = values
        .par_iter()
        .map(|&p| {
            let ell = if coord.is_none() { p } else { cfg.ell };
            let mut lam = cfg.lambda(rank, &rho_for(&rs, cfg.function, &m, ell))?;
            if let Some(k) = coord {
                lam[k].re = p;
            }
            eval_points(&rs, cfg, ell, &lam, &points, Some(p))
        })
        .collect();
    let mut rows = Vec::new();
    for r in per {
        rows.extend(r?);
    }
    Ok(Report::ok(render_rows(cfg, rank, &rows, Some(param))?))
}

pub fn cmd_regions(cfg: &JobConfig) -> Result<Report, CliError> {
    let m = cfg.mult()?;
    let f = region_flags(&m);
    let standardized = standardize(&m).ok().map(|(s, ell)| {
        let g = region_flags(&s);
        json!({ "m": [s.m_s, s.m_m, s.m_l], "ell": ell, "ell_range": [g.ell_min, g.ell_max] })
    });
    let v = json!({
        "m": [m.m_s, m.m_m, m.m_l],
        "Mplus": f.in_mplus,
        "M0": f.in_m0,
        "M1": f.in_m1,
        "M2": f.in_m2,
        "M3": f.in_m3,
        "ell_range": [f.ell_min, f.ell_max],
        "standardized": standardized,
    });
    Ok(Report::ok(to_json(&v)?))
}

fn cx(z: C64) -> serde_json::Value {
    json!([z.re, z.im])
}

pub fn cmd_cfunc(cfg: &JobConfig) -> Result<Report, CliError> {
    let rank = cfg.rank()?;
    let rs = RootSystem::build_bc(rank)?;
    let m = cfg.mult()?;
    let lam = cfg.lambda(rank, &rs.rho(&m))?;
    let ct = c_tilde(&rs, &m, &lam);
    let c = c_function(&rs, &m, &lam);
    let v = json!({
        "rank": rank,
        "m": [m.m_s, m.m_m, m.m_l],
        "lambda": lam.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
        "c_tilde": if ct.is_regular() { cx(ct.value) } else { serde_json::Value::Null },
        "regular": ct.is_regular(),
        "numerator_poles": ct.numerator_poles,
        "denominator_poles": ct.denominator_poles,
        "c": c.as_ref().map(|&z| cx(z)).unwrap_or(serde_json::Value::Null),
        "c_error": c.as_ref().err().map(|e| e.to_string()),
        "b0_regular": b0_regular(&rs, &m, &lam),
    });
    Ok(Report::ok(to_json(&v)?))
}

pub fn cmd_bounded(cfg: &JobConfig) -> Result<Report, CliError> {
    let rank = cfg.rank()?;
    let rs = RootSystem::build_bc(rank)?;
    let m = cfg.mult()?;
    let rho = rs.rho(&m);
    let lam = cfg.lambda(rank, &rho)?;
    let re: Vec<f64> = lam.iter().map(|z| z.re).collect();
    let in_tube = hull_membership(&rho, &re);
    let scfg = cfg.suite_config();
    let req = TauRequest::new(m, cfg.ell, lam, cfg.method)?;
    let mut ev = TauEvaluator::new(&rs, req, cfg.options())?;
    let scan = ray_scan(&mut ev, rank, &scfg)?;
    let (_, ell_max) = hogeom_core::multiplicity::ell_range(&m);
    let v = json!({
        "in_tube": in_tube,
        "verdict": if scan.bounded { "bounded" } else { "unbounded" },
        "sup": scan.sup,
        "sup_error": scan.sup_error,
        "threshold": scfg.threshold,
        "ell_within_range": cfg.ell.abs() < ell_max,
    });
    Ok(Report::ok(to_json(&v)?))
}

pub fn selected_suites(name: Option<&str>) -> Result<Vec<Suite>, CliError> {
    match name.unwrap_or("all") {
        "all" => Ok(Suite::ALL.to_vec()),
        list => list
            .split(',')
            .map(|s| Suite::parse(s.trim()).ok_or_else(|| CliError::config(format!("unknown suite {s:?}"))))
            .collect(),
    }
}

/// Runs the selected suites with cases distributed over the worker pool.
pub fn run_suites(cfg: &JobConfig) -> Result<Vec<SuiteReport>, CliError> {
    let scfg = cfg.suite_config();
    let mut reports = Vec::new();
    for suite in selected_suites(cfg.suite.as_deref())? {
        let cases = suite_cases(suite, &scfg)?;
        let results = cases.par_iter().map(|c| run_case(c, &scfg)).collect();
        reports.push(SuiteReport::from_results(suite, results));
    }
    Ok(reports)
}

pub fn cmd_verify(cfg: &JobConfig) -> Result<Report, CliError> {
    let reports = run_suites(cfg)?;
    let failed = reports.iter().any(|r| !r.passed);
    if cfg.json {
        let v = json!({ "seed": cfg.seed, "passed": !failed, "suites": reports });
        return Ok(Report { text: to_json(&v)?, failed });
    }
    let mut text = String::new();
    for r in &reports {
        let bad = r.cases.iter().filter(|c| !c.passed).count();
        text += &format!(
            "{:<14} {}  cases={} failed={} worst_margin={}\n",
            r.suite.name(),
            if r.passed { "PASS" } else { "FAIL" },
            r.cases.len(),
            bad,
            fmt17(r.worst_margin)
        );
        for c in r.cases.iter().filter(|c| !c.passed).take(10) {
            text += &format!("    {}: {}\n", c.label, c.failure.as_deref().unwrap_or(""));
        }
    }
    Ok(Report { text, failed })
}

pub fn run_job(cfg: &JobConfig) -> Result<Report, CliError> {
    match cfg.command.as_str() {
        "eval" => cmd_eval(cfg),
        "sweep" => cmd_sweep(cfg),
        "regions" => cmd_regions(cfg),
        "cfunc" => cmd_cfunc(cfg),
        "bounded" => cmd_bounded(cfg),
        "verify" => cmd_verify(cfg),
        other => Err(CliError::config(format!("unknown command {other:?}"))),
    }
}
