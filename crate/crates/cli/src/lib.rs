//! Command-line driver: reads problem specifications as JSON, runs the
//! discretization, verification, limit, identity, catalog and fundamental-system
//! workflows, and renders the result as JSON or a plain table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use umbral_core::catalog::{build_example, continuum_limit_study, ENTRY_NAMES};
use umbral_core::discretize::{describe_nonlinear, LinearStencil, Problem, ResidualSweep};
use umbral_core::exactnum::{identity_sweep, IdentityRanges};
use umbral_core::galois::is_fundamental_system;
use umbral_core::json::{
    delta_operator_from_value, format_rational, parse_rational, problem_from_value,
    problem_to_value, rationals_from_value, rationals_to_value, sweep_to_value, ProblemDocument,
};
use umbral_core::series::{solve_linear_series, solve_nonlinear_series, TaylorSeries};
use umbral_core::umbral::{basic_polynomials, forward_transform, LatticeSequence};
use umbral_core::{Error as CoreError, Rational, Scalar};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Json(msg) => CliError::Parse(msg),
            e @ CoreError::CertificateFailed { .. } => CliError::Verification(e.to_string()),
            e => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Table,
}

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "umbral",
    version,
    about = "Exact umbral discretization of ODEs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Input JSON file.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Last lattice site to report or verify.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Lattice spacing, as p/q.
    #[arg(long, global = true, value_parser = rational_arg)]
    pub h: Option<Rational>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Catalog parameters, `k=v,k=v`.
    #[arg(long, global = true)]
    pub params: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the lattice equation for an ODE (or the basic polynomials of a delta operator).
    Discretize,
    /// Check that the residual vanishes at every site.
    Verify,
    /// Continuum-limit table for a catalog entry.
    Limit {
        entry: String,
        #[arg(long = "x-star", value_parser = rational_arg)]
        x_star: Option<Rational>,
        /// Comma-separated spacings.
        #[arg(long)]
        hs: Option<String>,
    },
    /// Sweep the binomial identities.
    Identities {
        #[arg(long)]
        max: Option<i64>,
    },
    /// Build and certify a catalog entry.
    Catalog {
        name: String,
        /// Emit a problem document that `verify` accepts.
        #[arg(long = "emit-problem")]
        emit_problem: bool,
    },
    /// Decide whether solutions form a fundamental system.
    Fundamental,
}

/// Everything a run depends on; identical configs produce identical reports.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Option<String>,
    pub n_max: Option<usize>,
    pub h: Rational,
    pub format: Format,
    pub params: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CommandKind {
    Discretize,
    Verify,
    Limit {
        entry: String,
        x_star: Rational,
        hs: Vec<Rational>,
    },
    Identities {
        max: Option<i64>,
    },
    Catalog {
        name: String,
        emit_problem: bool,
    },
    Fundamental,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub report: String,
}

pub fn parse_params(text: &str) -> CliResult<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("parameter `{pair}` is not k=v")))?;
        out.insert(k.trim().to_string(), parse_rational(v)?);
    }
    Ok(out)
}

pub fn parse_rational_list(text: &str) -> CliResult<Vec<Rational>> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| Ok(parse_rational(p)?))
        .collect()
}

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

impl RunConfig {
    /// Resolve parsed arguments, reading the input file if one was named.
    pub fn from_cli(cli: Cli) -> CliResult<Self> {
        let g = cli.global;
        let input = match &g.input {
            Some(path) => Some(
                std::fs::read_to_string(path)
                    .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?,
            ),
            None => None,
        };
        let h = g.h.unwrap_or_else(|| q(1));
        if h <= q(0) {
            return Err(CliError::Validation("h must be positive".into()));
        }
        let params = g
            .params
            .as_deref()
            .map(parse_params)
            .transpose()?
            .unwrap_or_default();
        let command = match cli.command {
            Command::Discretize => CommandKind::Discretize,
            Command::Verify => CommandKind::Verify,
            Command::Limit { entry, x_star, hs } => CommandKind::Limit {
                entry,
                x_star: x_star.unwrap_or_else(|| Rational::new(1.into(), 2.into())),
                hs: match hs {
                    Some(text) => parse_rational_list(&text)?,
                    None => [4, 8, 16, 32]
                        .iter()
                        .map(|d| Rational::new(1.into(), (*d).into()))
                        .collect(),
                },
            },
            Command::Identities { max } => CommandKind::Identities { max },
            Command::Catalog { name, emit_problem } => CommandKind::Catalog { name, emit_problem },
            Command::Fundamental => CommandKind::Fundamental,
        };
        Ok(Self {
            command,
            input,
            n_max: g.n_max,
            h,
            format: g.format,
            params,
        })
    }

    fn input_value(&self) -> CliResult<Value> {
        let text = self
            .input
            .as_deref()
            .ok_or_else(|| CliError::Parse("this command needs --input".into()))?;
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Execute one command. Errors carry their exit code; a completed run that
/// fails verification returns status 1 with the full report.
pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    let (status, report) = match &config.command {
        CommandKind::Discretize => discretize(config)?,
        CommandKind::Verify => verify(config)?,
        CommandKind::Limit { entry, x_star, hs } => limit(config, entry, x_star, hs)?,
        CommandKind::Identities { max } => identities(config, *max)?,
        CommandKind::Catalog { name, emit_problem } => catalog(config, name, *emit_problem)?,
        CommandKind::Fundamental => fundamental(config)?,
    };
    let mut text = match report {
        Report::Json(v) => serde_json::to_string_pretty(&v).expect("report serializes"),
        Report::Table(t) => t,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(Outcome {
        status,
        report: text,
    })
}

enum Report {
    Json(Value),
    Table(String),
}

fn render(config: &RunConfig, value: Value, table: impl FnOnce() -> String) -> Report {
    match config.format {
        Format::Json => Report::Json(value),
        Format::Table => Report::Table(table()),
    }
}

fn join(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

/// A series of order `order` for the document: explicit coefficients, or the
/// solution of the initial-value problem.
fn document_series(
    doc: &ProblemDocument,
    order: usize,
) -> CliResult<Option<TaylorSeries<Rational>>> {
    if let Some(series) = &doc.series {
        if series.len() < order + 1 {
            return Err(CoreError::TruncationTooSmall {
                have: series.len().saturating_sub(1),
                need: order,
            }
            .into());
        }
        return Ok(Some(TaylorSeries::new(series[..=order].to_vec())));
    }
    let Some(init) = &doc.init else {
        return Ok(None);
    };
    let series = match &doc.problem {
        Problem::Linear(ode) => solve_linear_series(&ode.extend_polynomial(order)?, init, order)?,
        Problem::Nonlinear(ode) => {
            solve_nonlinear_series(&ode.extend_polynomial(order)?, init, order)?
        }
    };
    Ok(Some(series))
}

fn spacing(config: &RunConfig, doc: &ProblemDocument) -> Rational {
    doc.h.clone().unwrap_or_else(|| config.h.clone())
}

fn discretize(config: &RunConfig) -> CliResult<(u8, Report)> {
    let value = config.input_value()?;
    if value.get("sigma").is_some() {
        return discretize_delta(config, value);
    }
    let doc = problem_from_value(value)?;
    let h = spacing(config, &doc);
    let nmax = config.n_max.unwrap_or(10);
    let (kind, equation) = match &doc.problem {
        Problem::Linear(ode) => ("linear", LinearStencil::from_ode(ode, &h).to_string()),
        Problem::Nonlinear(ode) => ("nonlinear", describe_nonlinear(ode, &h)),
    };
    let prefix = match (&doc.u, document_series(&doc, nmax)?) {
        (_, Some(series)) => Some(forward_transform(&series, nmax, &h)?.values().to_vec()),
        (Some(u), None) => Some(u.iter().take(nmax + 1).cloned().collect()),
        (None, None) => None,
    };
    let v = json!({
        "kind": kind,
        "h": format_rational(&h),
        "equation": equation,
        "u": prefix.as_deref().map(rationals_to_value),
    });
    Ok((
        EXIT_OK,
        render(config, v, || {
            let mut t = format!(
                "kind: {kind}\nh: {}\nequation: {equation}\n",
                format_rational(&h)
            );
            if let Some(u) = &prefix {
                t.push_str("n  u[n]\n");
                for (n, x) in u.iter().enumerate() {
                    writeln!(t, "{n}  {}", format_rational(x)).unwrap();
                }
            }
            t
        }),
    ))
}

fn discretize_delta(config: &RunConfig, value: Value) -> CliResult<(u8, Report)> {
    let op = delta_operator_from_value(value)?;
    let order = op.validate()?;
    let kmax = config.n_max.unwrap_or(5);
    let polys = basic_polynomials(&op, kmax)?;
    let coeffs: Vec<Vec<Rational>> = polys.into_iter().map(|p| p.trimmed().coeffs).collect();
    let v = json!({
        "kind": "delta_operator",
        "order": order,
        "basic_polynomials": coeffs.iter().map(|c| rationals_to_value(c)).collect::<Vec<_>>(),
    });
    Ok((
        EXIT_OK,
        render(config, v, || {
            let mut t = format!(
                "kind: delta_operator\norder: {order}\nk  coefficients of p_k (ascending powers)\n"
            );
            for (k, c) in coeffs.iter().enumerate() {
                writeln!(t, "{k}  {}", join(c)).unwrap();
            }
            t
        }),
    ))
}

fn sweep_table(sweep: &ResidualSweep<Rational>) -> String {
    let mut t = String::from("n  residual\n");
    for (n, r) in &sweep.records {
        writeln!(t, "{n}  {}", format_rational(r)).unwrap();
    }
    writeln!(t, "max_abs_residual: {}", format_rational(&sweep.max_abs())).unwrap();
    let opt = |o: Option<usize>| o.map_or("none".to_string(), |n| n.to_string());
    writeln!(t, "verified_through: {}", opt(sweep.verified_through())).unwrap();
    writeln!(t, "first_failure: {}", opt(sweep.first_failure())).unwrap();
    t
}

fn verify(config: &RunConfig) -> CliResult<(u8, Report)> {
    let doc = problem_from_value(config.input_value()?)?;
    let h = spacing(config, &doc);
    let reach = doc.problem.reach();
    let lattice = if let Some(u) = &doc.u {
        LatticeSequence::new(u.clone(), h.clone())?
    } else {
        let nmax = config.n_max.unwrap_or(30);
        let series = document_series(&doc, nmax + reach)?
            .ok_or_else(|| CliError::Validation("verify needs one of u, series or init".into()))?;
        forward_transform(&series, nmax + reach, &h)?
    };
    let available = lattice
        .nmax()
        .checked_sub(reach)
        .ok_or(CoreError::WindowExceeded {
            need: reach,
            have: lattice.nmax(),
        })?;
    let nmax = config.n_max.unwrap_or(available);
    if nmax > available {
        return Err(CoreError::WindowExceeded {
            need: nmax + reach,
            have: lattice.nmax(),
        }
        .into());
    }
    let problem = doc
        .problem
        .extend_polynomial(nmax.max(doc.problem.truncation()))?;
    let sweep = problem.sweep(&lattice, nmax)?;
    let status = if sweep.all_zero() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    };
    if let Some(n) = sweep.first_failure() {
        eprintln!("residual is nonzero at n = {n}");
    }
    let mut v = sweep_to_value(&sweep);
    v["h"] = Value::String(format_rational(&h));
    Ok((status, render(config, v, || sweep_table(&sweep))))
}

fn limit(
    config: &RunConfig,
    entry: &str,
    x_star: &Rational,
    hs: &[Rational],
) -> CliResult<(u8, Report)> {
    let built = build_example(entry, &config.params)?;
    let table = continuum_limit_study(&built, hs, x_star)?;
    let ratios = table.ratios();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "h": format_rational(&r.h),
                "n": r.n,
                "u_n": format_rational(&r.lattice_value),
                "y_x_star": format_rational(&r.series_value),
                "error_f64": r.error,
            })
        })
        .collect();
    let v = json!({
        "entry": table.entry,
        "x_star": format_rational(&table.x_star),
        "rows": rows,
        "ratios_f64": ratios,
        "monotone": table.strictly_decreasing(),
    });
    Ok((
        EXIT_OK,
        render(config, v, || {
            let mut t = format!(
                "entry: {}\nx_star: {}\nh  n  error(f64)  ratio(f64)\n",
                table.entry,
                format_rational(&table.x_star)
            );
            for (i, r) in table.rows.iter().enumerate() {
                let ratio = match i.checked_sub(1).and_then(|j| ratios[j]) {
                    Some(x) => format!("{x:.6}"),
                    None => "-".into(),
                };
                writeln!(
                    t,
                    "{}  {}  {:.6e}  {ratio}",
                    format_rational(&r.h),
                    r.n,
                    r.error
                )
                .unwrap();
            }
            t
        }),
    ))
}

fn identities(config: &RunConfig, max: Option<i64>) -> CliResult<(u8, Report)> {
    let ranges = match max {
        Some(m) if m < 0 => return Err(CliError::Validation("--max must be nonnegative".into())),
        Some(m) => IdentityRanges::with_max(m),
        None => IdentityRanges::default(),
    };
    let reports = identity_sweep::<Rational>(&ranges);
    let ok = reports.iter().all(|r| r.passed());
    let v = json!({
        "families": reports.iter().map(|r| json!({
            "name": r.name,
            "checked": r.checked,
            "passed": r.passed(),
            "first_failure": r.first_failure,
        })).collect::<Vec<_>>(),
        "all_passed": ok,
    });
    let status = if ok { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((
        status,
        render(config, v, || {
            let mut t = String::from("family  checked  result\n");
            for r in &reports {
                let result = match &r.first_failure {
                    None => "pass".to_string(),
                    Some(args) => format!("FAIL at {args:?}"),
                };
                writeln!(t, "{}  {}  {result}", r.name, r.checked).unwrap();
            }
            t
        }),
    ))
}

fn catalog(config: &RunConfig, name: &str, emit_problem: bool) -> CliResult<(u8, Report)> {
    if !ENTRY_NAMES.contains(&name) {
        return Err(CoreError::UnknownEntry(name.to_string()).into());
    }
    let entry = build_example(name, &config.params)?;
    let params: BTreeMap<&str, String> = entry
        .parameters
        .iter()
        .map(|(k, v)| (k.as_str(), format_rational(v)))
        .collect();
    if emit_problem {
        let doc = ProblemDocument {
            problem: entry.problem.clone(),
            init: None,
            series: None,
            u: Some(entry.lattice.values().to_vec()),
            h: Some(entry.lattice.h().clone()),
        };
        return Ok((EXIT_OK, Report::Json(problem_to_value(&doc))));
    }
    let equation = match &entry.problem {
        Problem::Linear(ode) => LinearStencil::from_ode(ode, &q(1)).to_string(),
        Problem::Nonlinear(ode) => describe_nonlinear(ode, &q(1)),
    };
    let prefix_len = config.n_max.map_or(entry.lattice.values().len(), |n| {
        (n + 1).min(entry.lattice.values().len())
    });
    let u = &entry.lattice.values()[..prefix_len];
    let v = json!({
        "entry": entry.name,
        "parameters": params,
        "equation": equation,
        "series": rationals_to_value(&entry.solution.coeffs()[..prefix_len]),
        "u": rationals_to_value(u),
        "certificate": sweep_to_value(&entry.certificate),
    });
    Ok((
        EXIT_OK,
        render(config, v, || {
            let mut t = format!("entry: {}\n", entry.name);
            for (k, v) in &params {
                writeln!(t, "{k} = {v}").unwrap();
            }
            writeln!(t, "equation: {equation}\nn  u[n]").unwrap();
            for (n, x) in u.iter().enumerate() {
                writeln!(t, "{n}  {}", format_rational(x)).unwrap();
            }
            t.push_str(&sweep_table(&entry.certificate));
            t
        }),
    ))
}

fn fundamental(config: &RunConfig) -> CliResult<(u8, Report)> {
    let value = config.input_value()?;
    let ode_value = value
        .get("ode")
        .cloned()
        .ok_or_else(|| CliError::Parse("missing `ode`".into()))?;
    let doc = problem_from_value(ode_value)?;
    let Problem::Linear(ode) = &doc.problem else {
        return Err(CliError::Validation(
            "fundamental systems need a linear equation".into(),
        ));
    };
    let nmax = config.n_max.unwrap_or(20);
    let order = nmax + ode.order();
    let list = value
        .get("solutions")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Parse("missing `solutions` array".into()))?;
    let mut solutions = Vec::with_capacity(list.len());
    for item in list {
        let mut candidate = ProblemDocument::new(doc.problem.clone());
        match (item.get("series"), item.get("init")) {
            (Some(s), None) => candidate.series = Some(rationals_from_value(s)?),
            (None, Some(i)) => candidate.init = Some(rationals_from_value(i)?),
            _ => {
                return Err(CliError::Parse(
                    "each solution needs exactly one of `series` or `init`".into(),
                ))
            }
        }
        solutions.push(document_series(&candidate, order)?.expect("series or init present"));
    }
    let verdict = is_fundamental_system(ode, &solutions, nmax)?;
    let v = json!({
        "fundamental": verdict.fundamental,
        "witness": format_rational(&verdict.witness),
        "wronskian": rationals_to_value(verdict.wronskian.coeffs()),
        "certified_through": nmax,
    });
    let status = if verdict.fundamental {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    };
    Ok((
        status,
        render(config, v, || {
            format!(
                "fundamental: {}\nwitness: {}\nwronskian: {}\n",
                verdict.fundamental,
                format_rational(&verdict.witness),
                join(verdict.wronskian.coeffs())
            )
        }),
    ))
}
