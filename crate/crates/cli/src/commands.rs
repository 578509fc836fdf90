use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cphi_core::bounds::{approx_number_bound, norm_bounds};
use cphi_core::figure::figure_data;
use cphi_core::operator_matrix::{
    build_matrix_capped, default_truncation, operator_norm_estimate, singular_values,
};
use cphi_core::special_functions::CertifiedValue;
use cphi_core::symbol::DirichletSymbol;
use cphi_core::verify::{run_lemma_suite, VerifyConfig};
use cphi_core::Error;
use serde_json::{json, Map, Value};

use crate::config::{max_entries, Format, RunConfig};
use crate::format::{fmt_num, json_document, num, CsvTable};

/// Slack allowed between a computed singular value and its analytic bound.
pub const APPROX_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    ResourceLimit = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::InvalidInput,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } | Error::BudgetExhausted { .. } => ExitCode::ResourceLimit,
            Error::NoConvergence { .. } | Error::Bracketing { .. } | Error::Overflow(_) => {
                ExitCode::VerificationFailed
            }
            _ => ExitCode::InvalidInput,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// A rendered document plus the status it implies.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub code: ExitCode,
    /// Lines for stderr (offending points and the like).
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn new(body: String, ok: bool) -> Self {
        Self {
            body,
            code: if ok {
                ExitCode::Success
            } else {
                ExitCode::VerificationFailed
            },
            diagnostics: Vec::new(),
        }
    }
}

fn certified(v: &CertifiedValue) -> Value {
    json!({ "value": num(v.value), "error_bound": num(v.error_bound) })
}

fn opt_num(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Key/value pairs as JSON payload or a two-column CSV.
fn render_pairs(command: &str, cfg: &RunConfig, pairs: Vec<(&str, Value)>) -> String {
    match cfg.format_or(Format::Json) {
        Format::Json => json_document(
            command,
            cfg,
            pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        ),
        Format::Csv => {
            let mut t = CsvTable::new(&["quantity", "value"]);
            for (k, v) in pairs {
                flatten_into(&mut t, k, &v);
            }
            t.finish()
        }
    }
}

fn flatten_into(t: &mut CsvTable, key: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, inner) in m {
                flatten_into(t, &format!("{key}.{k}"), inner);
            }
        }
        Value::Null => t.row([key.to_string(), String::new()]),
        Value::String(s) => t.row([key.to_string(), s.clone()]),
        other => t.row([key.to_string(), other.to_string()]),
    }
}

fn truncation(cfg: &RunConfig, sym: &DirichletSymbol) -> (usize, usize) {
    let (i, j) = default_truncation(sym, cfg.budget.rel_tol());
    (cfg.rows.unwrap_or(i), cfg.cols.unwrap_or(j))
}

pub fn cmd_bounds(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sym = cfg.symbol()?;
    let rep = norm_bounds(&sym, &cfg.budget)?;
    let approx = approx_number_bound(&sym).ok().map_or(
        Value::Null,
        |b| json!({ "prefactor": num(b.prefactor), "ratio": num(b.ratio) }),
    );
    let pairs = vec![
        (
            "symbol_class",
            Value::String(rep.symbol_class.as_str().into()),
        ),
        ("schur_r", opt_num(rep.schur_r)),
        ("lower_sq", certified(&rep.lower_sq)),
        ("upper_sq", certified(&rep.upper_sq)),
        ("upper_sq_argument", num(rep.upper_argument(&sym))),
        ("kernel_lower_sq", num(rep.kernel_lower_sq)),
        ("kernel_maximizer", opt_num(rep.kernel_maximizer)),
        ("approx_numbers", approx),
    ];
    Ok(Outcome::new(render_pairs("bounds", cfg, pairs), true))
}

pub fn cmd_matrix_norm(
    cfg: &RunConfig,
    dump: Option<&Path>,
    max_iter: usize,
) -> Result<Outcome, CliError> {
    let sym = cfg.symbol()?;
    let (rows, cols) = truncation(cfg, &sym);
    let m = build_matrix_capped(&sym, rows, cols, max_entries()?)?;
    if let Some(path) = dump {
        let file = File::create(path)
            .map_err(|e| CliError::invalid(format!("cannot create {}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        m.write_dump(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let est = operator_norm_estimate(&m, cfg.budget.rel_tol().max(1e-15), max_iter)?;
    let rep = norm_bounds(&sym, &cfg.budget)?;

    // ‖A_{I,J}‖ ≤ ‖C_φ‖ ≤ upper, so lower² must not exceed the analytic
    // upper bound and upper² must not fall below its lower bound.
    let lower_sq = est.lower * est.lower;
    let eps_hi = cfg.budget.target(rep.upper_sq.value);
    let eps_lo = cfg.budget.target(rep.lower_sq.value);
    let below_upper = lower_sq <= rep.upper_sq.upper() + eps_hi;
    let above_lower =
        !est.upper_certified || est.upper * est.upper >= rep.lower_sq.lower() - eps_lo;
    let within = below_upper && above_lower;

    let upper = if est.upper_certified {
        num(est.upper)
    } else {
        Value::String("uncertified".into())
    };
    let pairs = vec![
        (
            "symbol_class",
            Value::String(rep.symbol_class.as_str().into()),
        ),
        ("rows", json!(rows)),
        ("cols", json!(cols)),
        ("lower", num(est.lower)),
        ("lower_sq", num(lower_sq)),
        ("truncated_upper", num(est.truncated_upper)),
        ("tail_bound", num(est.tail_bound)),
        ("upper", upper),
        ("upper_certified", Value::Bool(est.upper_certified)),
        ("iterations", json!(est.iterations)),
        ("converged", Value::Bool(est.converged)),
        ("analytic_lower_sq", certified(&rep.lower_sq)),
        ("analytic_upper_sq", certified(&rep.upper_sq)),
        ("within_analytic_bracket", Value::Bool(within)),
    ];
    let mut out = Outcome::new(render_pairs("matrix-norm", cfg, pairs), within);
    if !within {
        out.diagnostics.push(format!(
            "truncated norm² {} lies outside the analytic bracket [{}, {}]",
            fmt_num(lower_sq),
            fmt_num(rep.lower_sq.value),
            fmt_num(rep.upper_sq.value)
        ));
    }
    Ok(out)
}

pub fn cmd_approx_numbers(cfg: &RunConfig, n_max: usize) -> Result<Outcome, CliError> {
    let sym = cfg.symbol()?;
    let bound = approx_number_bound(&sym)?;
    let (rows, cols) = truncation(cfg, &sym);
    let available = (rows + 1).min(cols);
    if n_max + 1 > available {
        return Err(CliError::invalid(format!(
            "n-max = {n_max} needs {} singular values but the {}×{} truncation has {available}",
            n_max + 1,
            rows + 1,
            cols
        )));
    }
    let values = if n_max == 0 {
        Vec::new()
    } else {
        let m = build_matrix_capped(&sym, rows, cols, max_entries()?)?;
        singular_values(&m, n_max + 1)?.values
    };
    let table: Vec<(usize, f64, f64, bool)> = (1..=n_max)
        .map(|n| {
            let sigma = values[n];
            let b = bound.bound_at(n as u32);
            (n, sigma, b, sigma <= b + APPROX_SLACK)
        })
        .collect();
    let all_passed = table.iter().all(|r| r.3);

    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut t = CsvTable::new(&["n", "sigma_n_plus_1", "bound", "pass"]);
            for (n, s, b, ok) in &table {
                t.row([n.to_string(), fmt_num(*s), fmt_num(*b), ok.to_string()]);
            }
            t.finish()
        }
        Format::Json => {
            let mut p = Map::new();
            p.insert("rows".into(), json!(rows));
            p.insert("cols".into(), json!(cols));
            p.insert("prefactor".into(), num(bound.prefactor));
            p.insert("ratio".into(), num(bound.ratio));
            p.insert(
                "table".into(),
                Value::Array(
                    table
                        .iter()
                        .map(|(n, s, b, ok)| json!({ "n": n, "sigma_n_plus_1": num(*s), "bound": num(*b), "pass": ok }))
                        .collect(),
                ),
            );
            p.insert("all_passed".into(), Value::Bool(all_passed));
            json_document("approx-numbers", cfg, p)
        }
    };
    let mut out = Outcome::new(body, all_passed);
    for (n, s, b, ok) in &table {
        if !ok {
            out.diagnostics.push(format!(
                "N = {n}: sigma = {} exceeds bound {}",
                fmt_num(*s),
                fmt_num(*b)
            ));
        }
    }
    Ok(out)
}

pub fn cmd_verify_lemmas(
    cfg: &RunConfig,
    s_min: f64,
    s_max: f64,
    points: usize,
    inject_fault: bool,
) -> Result<Outcome, CliError> {
    let vcfg = VerifyConfig {
        s_min,
        s_max,
        points,
        budget: cfg.budget,
        inject_fault,
    };
    let report = run_lemma_suite(&vcfg)?;
    let ok = report.all_passed();
    let body = match cfg.format_or(Format::Json) {
        Format::Json => {
            let lemmas = report
                .checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "statement": c.statement,
                        "points": c.points,
                        "passed": c.passed,
                        "failed": c.points - c.passed,
                        "min_margin": num(c.min_margin),
                        "worst_at": num(c.worst_at),
                        "failures": c.failures.iter().map(|(a, m)| json!([num(*a), num(*m)])).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut p = Map::new();
            p.insert(
                "grid".into(),
                json!({ "s_min": num(s_min), "s_max": num(s_max), "points": points }),
            );
            p.insert("lemmas".into(), Value::Array(lemmas));
            p.insert("s2".into(), num(report.crossing_root));
            p.insert("all_passed".into(), Value::Bool(ok));
            json_document("verify-lemmas", cfg, p)
        }
        Format::Csv => {
            let mut t = CsvTable::new(&["lemma", "points", "passed", "min_margin", "worst_at"]);
            for c in &report.checks {
                t.row([
                    c.name.to_string(),
                    c.points.to_string(),
                    c.passed.to_string(),
                    fmt_num(c.min_margin),
                    fmt_num(c.worst_at),
                ]);
            }
            t.footer("s2", &fmt_num(report.crossing_root));
            t.finish()
        }
    };
    let mut out = Outcome::new(body, ok);
    for c in &report.checks {
        for (at, margin) in &c.failures {
            out.diagnostics.push(format!(
                "{} failed at {}: margin {}",
                c.name,
                fmt_num(*at),
                fmt_num(*margin)
            ));
        }
    }
    Ok(out)
}

pub fn cmd_figure(cfg: &RunConfig, points: usize) -> Result<Outcome, CliError> {
    let data = figure_data(points, &cfg.budget)?;
    let body = match cfg.format_or(Format::Csv) {
        Format::Csv => {
            let mut t = CsvTable::new(&["x", "inv_x_plus_f", "inv_x_plus_g", "zeta_x_plus_1"]);
            for r in &data.rows {
                t.row([
                    fmt_num(r.x),
                    fmt_num(r.with_f),
                    fmt_num(r.with_g),
                    fmt_num(r.zeta.value),
                ]);
            }
            t.footer("s2", &fmt_num(data.crossing_root));
            t.finish()
        }
        Format::Json => {
            let rows = data
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "x": num(r.x),
                        "inv_x_plus_f": num(r.with_f),
                        "inv_x_plus_g": num(r.with_g),
                        "zeta_x_plus_1": certified(&r.zeta),
                    })
                })
                .collect();
            let mut p = Map::new();
            p.insert("rows".into(), Value::Array(rows));
            p.insert("s2".into(), num(data.crossing_root));
            json_document("figure", cfg, p)
        }
    };
    Ok(Outcome::new(body, true))
}
