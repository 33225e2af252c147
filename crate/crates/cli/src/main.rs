//! `rankasym` command-line front end.
//!
//! Exit codes: 0 success, 1 an identity or consistency check failed, 2 invalid
//! flags, 3 a cap or the floating-point budget was exceeded, 4 numerical
//! non-convergence. Every failure writes one JSON line to stderr.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rankasym::asym::{
    far_field_bound_check, partition_gf_bound_check, rm_eval, write_bound_csv, AsymError, BoundRow, FarFieldParams,
    RmEstimate, RmMethod, SParam,
};
use rankasym::circle::{
    contour_rank_count, convergence_study, write_converge_csv, CircleError, ContourConfig, ContourResult, ConvergenceRow,
};
use rankasym::exact::{
    crank_table_capped, partition_numbers, rank_table_enumeration, rank_table_series, write_partition_csv, ExactError,
    StatTable, DEFAULT_ENUMERATION_CAP, DEFAULT_SERIES_CAP,
};
use rankasym::report::fmt_sig;
use rankasym::specfun::{IdentityCheck, QuadratureConfig, SpecError};
use rankasym::verify::{run_suite, Suite};
use serde_json::{json, Map, Number, Value};

/// Largest `n_max` accepted for the partition-number table.
const PARTITION_CAP: usize = 100_000;

#[derive(Parser, Debug)]
#[command(name = "rankasym", version, about = "Partition rank statistics: exact tables, identity checks and circle-method reconstruction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact tables of N(m,n), M(m,n) or p(n).
    #[command(allow_negative_numbers = true)]
    Exact(ExactArgs),
    /// Run a seeded identity-verification suite and report residuals.
    Verify(VerifyArgs),
    /// Evaluate the Fourier coefficient R_m at contour points.
    #[command(allow_negative_numbers = true)]
    Asym(AsymArgs),
    /// Reconstruct N(m,n) by integrating over the circle-method contour.
    #[command(allow_negative_numbers = true)]
    Circle(CircleArgs),
    /// Compare exact N(m,n) against the asymptotic main term on a grid.
    #[command(allow_negative_numbers = true)]
    Converge(ConvergeArgs),
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stat {
    Rank,
    Crank,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableMethod {
    Series,
    Enumeration,
}

#[derive(clap::Args, Debug)]
struct ExactArgs {
    #[arg(long, value_enum)]
    stat: Stat,
    #[arg(long)]
    n_max: usize,
    /// Algorithm for the rank table (crank always enumerates).
    #[arg(long, value_enum, default_value = "series")]
    method: TableMethod,
    #[command(flatten)]
    output: Output,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Pass threshold for every residual in the suite; defaults per suite.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Lemma41,
    #[value(name = "near_pole_formula")]
    NearPoleFormula,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AsymReport {
    Rm,
    Bounds,
}

#[derive(clap::Args, Debug)]
struct AsymArgs {
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: u64,
    /// Comma-separated contour positions.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    x: Vec<f64>,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "rm")]
    report: AsymReport,
    #[command(flatten)]
    output: Output,
}

#[derive(clap::Args, Debug)]
struct CircleArgs {
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: u64,
    /// Relative tolerance of the contour integrals.
    #[arg(long)]
    tol: Option<f64>,
    /// |x| at which the major arc hands over to the minor arc.
    #[arg(long)]
    arc_boundary: Option<f64>,
    /// Integrate the full contour instead of folding by conjugate symmetry.
    #[arg(long)]
    no_symmetry: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(clap::Args, Debug)]
struct ConvergeArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    m: Vec<i64>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long, value_parser = parse_n_grid)]
    n: NGrid,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NGrid(Vec<u64>);

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

fn parse_n_grid(s: &str) -> Result<NGrid, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("'{t}': {e}"));
    let ns = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got '{s}'"));
        };
        let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
        if step == 0 || start > stop {
            return Err(format!("empty range '{s}'"));
        }
        (start..=stop).step_by(step as usize).collect()
    } else {
        s.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err("n values must be positive".into());
    }
    Ok(NGrid(ns))
}

/// A failure mapped to its exit code and a stable kind tag.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Self { code, kind, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self::new(2, "invalid_argument", message)
    }

    fn emit(&self) -> ExitCode {
        let line = json!({ "error": self.kind, "exit_code": self.code, "message": self.message });
        eprintln!("{line}");
        ExitCode::from(self.code)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(2, "io", e.to_string())
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::EnumerationTooLarge { .. } | ExactError::SeriesTooLarge { .. } => {
                Failure::new(3, "cap_exceeded", e.to_string())
            }
            _ => Failure::invalid(e.to_string()),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::NoConvergence { .. } => Failure::new(4, "no_convergence", e.to_string()),
            SpecError::Singular { .. } => Failure::new(4, "singular", e.to_string()),
            SpecError::Domain(_) | SpecError::InvalidConfig(_) => Failure::invalid(e.to_string()),
        }
    }
}

impl From<AsymError> for Failure {
    fn from(e: AsymError) -> Self {
        match e {
            AsymError::Spec(s) => s.into(),
            AsymError::InvalidParam(_) => Failure::invalid(e.to_string()),
            AsymError::Precision { .. } => Failure::new(3, "precision_budget", e.to_string()),
        }
    }
}

impl From<CircleError> for Failure {
    fn from(e: CircleError) -> Self {
        match e {
            CircleError::InvalidParam(_) => Failure::invalid(e.to_string()),
            CircleError::Precision { .. } => Failure::new(3, "precision_budget", e.to_string()),
            CircleError::Quadrature { source: AsymError::Precision { .. }, .. } => {
                Failure::new(3, "precision_budget", e.to_string())
            }
            CircleError::Quadrature { .. } => Failure::new(4, "no_convergence", e.to_string()),
            CircleError::Exact(x) => x.into(),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Failure::invalid(first).emit();
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.emit(),
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Exact(a) => cmd_exact(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Asym(a) => cmd_asym(a),
        Command::Circle(a) => cmd_circle(a),
        Command::Converge(a) => cmd_converge(a),
    }
}

/// Renders into memory first so a failing command never leaves a partial file.
fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            w.write_all(bytes)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// `x` to 17 significant digits; `null` when not finite.
fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(fmt_sig(x, 17).parse::<Number>().expect("scientific notation is valid JSON"))
    } else {
        Value::Null
    }
}

fn int(s: impl ToString) -> Value {
    Value::Number(s.to_string().parse::<Number>().expect("integer literal is valid JSON"))
}

fn to_json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s.into_bytes()
}

fn cmd_exact(a: ExactArgs) -> Result<(), Failure> {
    let format = a.output.format.unwrap_or(Format::Csv);
    let mut buf = Vec::new();
    if a.stat == Stat::P {
        if a.n_max > PARTITION_CAP {
            return Err(Failure::new(
                3,
                "cap_exceeded",
                format!("n_max = {} exceeds the partition-number cap {PARTITION_CAP}", a.n_max),
            ));
        }
        match format {
            Format::Csv => write_partition_csv(a.n_max, &mut buf)?,
            Format::Json => {
                let rows: Vec<Value> =
                    partition_numbers(a.n_max).iter().enumerate().map(|(n, p)| json!({ "n": n, "count": int(p) })).collect();
                buf = to_json_bytes(&Value::Array(rows));
            }
        }
        return write_output(&a.output.out, &buf);
    }
    let table = match (a.stat, a.method) {
        (Stat::Rank, TableMethod::Series) => rank_table_series(a.n_max, DEFAULT_SERIES_CAP)?,
        (Stat::Rank, TableMethod::Enumeration) => rank_table_enumeration(a.n_max, DEFAULT_ENUMERATION_CAP)?,
        (Stat::Crank, _) => crank_table_capped(a.n_max, DEFAULT_ENUMERATION_CAP)?,
        (Stat::P, _) => unreachable!("handled above"),
    };
    check_totals(&table)?;
    match format {
        Format::Csv => table.write_csv(&mut buf)?,
        Format::Json => {
            let mut rows = Vec::new();
            for n in 0..=table.n_max() {
                for m in -(n as i64)..=n as i64 {
                    rows.push(json!({ "n": n, "m": m, "count": int(table.get(m, n)) }));
                }
            }
            buf = to_json_bytes(&Value::Array(rows));
        }
    }
    write_output(&a.output.out, &buf)
}

/// Every row must sum to `p(n)` before anything is written.
fn check_totals(table: &StatTable) -> Result<(), Failure> {
    let p: Vec<BigUint> = partition_numbers(table.n_max());
    for (n, pn) in p.iter().enumerate() {
        let sum = table.row_sum(n);
        if &sum != pn {
            return Err(Failure::new(
                1,
                "consistency_check",
                format!("{} row {n} sums to {sum}, expected p({n}) = {pn}", table.statistic().name()),
            ));
        }
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let tol = a.tol.unwrap_or(a.suite.default_tol());
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(Failure::invalid(format!("tol must be a finite non-negative number, got {tol}")));
    }
    let checks = run_suite(a.suite, a.seed, tol, &QuadratureConfig::default())?;
    let buf = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json_bytes(&Value::Array(checks.iter().map(check_json).collect())),
        Format::Csv => {
            let mut s = String::from("identity_name,sample_point,residual,tolerance,pass\n");
            for c in &checks {
                let pt: Vec<String> = c.sample_point.iter().map(|(k, v)| format!("{k}={}", fmt_sig(*v, 12))).collect();
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.identity_name,
                    pt.join(";"),
                    fmt_sig(c.residual, 12),
                    fmt_sig(c.tolerance, 12),
                    c.pass
                ));
            }
            s.into_bytes()
        }
    };
    write_output(&a.output.out, &buf)?;
    let failed: Vec<&IdentityCheck> = checks.iter().filter(|c| !c.pass).collect();
    if let Some(worst) = failed.iter().max_by(|x, y| x.residual.total_cmp(&y.residual)) {
        return Err(Failure::new(
            1,
            "identity_failed",
            format!(
                "{} of {} checks in suite {} failed; worst {} residual {} vs tolerance {}",
                failed.len(),
                checks.len(),
                a.suite,
                worst.identity_name,
                fmt_sig(worst.residual, 3),
                fmt_sig(tol, 3)
            ),
        ));
    }
    Ok(())
}

fn check_json(c: &IdentityCheck) -> Value {
    let mut pt = Map::new();
    for (k, v) in &c.sample_point {
        pt.insert((*k).to_string(), num(*v));
    }
    json!({
        "identity_name": c.identity_name,
        "sample_point": pt,
        "residual": num(c.residual),
        "tolerance": num(c.tolerance),
        "pass": c.pass,
    })
}

fn cmd_asym(a: AsymArgs) -> Result<(), Failure> {
    // Validate every point before evaluating any of them.
    let points: Vec<SParam> = a.x.iter().map(|&x| SParam::new(a.n, a.m, x)).collect::<Result<_, _>>()?;
    let cfg = QuadratureConfig::default();
    let format = a.output.format.unwrap_or(Format::Csv);
    let buf = match a.report {
        AsymReport::Rm => {
            let methods: Vec<RmMethod> = match a.method {
                MethodArg::Direct => vec![RmMethod::Direct],
                MethodArg::Lemma41 => vec![RmMethod::Lemma41],
                MethodArg::NearPoleFormula => vec![RmMethod::NearPoleFormula],
                MethodArg::All => RmMethod::ALL.to_vec(),
            };
            if a.method == MethodArg::NearPoleFormula {
                if let Some(sp) = points.iter().find(|sp| sp.x.abs() > 1.0) {
                    return Err(Failure::invalid(format!("near_pole_formula needs |x| <= 1, got x = {}", sp.x)));
                }
            }
            let mut rows: Vec<(f64, RmMethod, RmEstimate)> = Vec::new();
            for sp in &points {
                for &method in &methods {
                    // With `all`, the near-pole formula is only reported where it applies.
                    if method == RmMethod::NearPoleFormula && sp.x.abs() > 1.0 {
                        continue;
                    }
                    rows.push((sp.x, method, rm_eval(sp, method, &cfg)?));
                }
            }
            render_rm(a.m, a.n, &rows, format)?
        }
        AsymReport::Bounds => {
            let mut rows: Vec<BoundRow> = Vec::new();
            for sp in &points {
                let (_, far) = far_field_bound_check(sp, &cfg)?;
                rows.push(far);
                rows.push(partition_gf_bound_check(&FarFieldParams::from_sparam(sp)?, sp.m, sp.n, sp.x));
            }
            render_bounds(&rows, format)?
        }
    };
    write_output(&a.output.out, &buf)
}

fn render_rm(m: i64, n: u64, rows: &[(f64, RmMethod, RmEstimate)], format: Format) -> Result<Vec<u8>, Failure> {
    let mut values = Vec::with_capacity(rows.len());
    for (x, method, est) in rows {
        values.push((*x, *method, est.value()?, est.error_estimate()));
    }
    Ok(match format {
        Format::Csv => {
            let mut s = String::from("m,n,x,method,re,im,err_est\n");
            for (x, method, v, err) in values {
                s.push_str(&format!(
                    "{m},{n},{},{},{},{},{}\n",
                    fmt_sig(x, 12),
                    method.name(),
                    fmt_sig(v.re, 12),
                    fmt_sig(v.im, 12),
                    fmt_sig(err, 12)
                ));
            }
            s.into_bytes()
        }
        Format::Json => to_json_bytes(&Value::Array(
            values
                .into_iter()
                .map(|(x, method, v, err)| {
                    json!({ "m": m, "n": n, "x": num(x), "method": method.name(), "re": num(v.re), "im": num(v.im), "err_est": num(err) })
                })
                .collect(),
        )),
    })
}

fn render_bounds(rows: &[BoundRow], format: Format) -> Result<Vec<u8>, Failure> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_bound_csv(rows, &mut buf)?;
            buf
        }
        Format::Json => to_json_bytes(&Value::Array(
            rows.iter()
                .map(|r| {
                    json!({
                        "name": r.name, "m": r.m, "n": r.n, "x": num(r.x),
                        "value": num(r.value()), "bound": num(r.bound()), "ratio": num(r.ratio()),
                    })
                })
                .collect(),
        )),
    })
}

fn cmd_circle(a: CircleArgs) -> Result<(), Failure> {
    let mut cfg = ContourConfig::default();
    if let Some(t) = a.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Failure::invalid(format!("tol must lie in (0, 1), got {t}")));
        }
        cfg.rel_tol = t;
    }
    if let Some(b) = a.arc_boundary {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Failure::invalid(format!("arc-boundary must be positive, got {b}")));
        }
        cfg.arc_boundary = b;
    }
    cfg.use_symmetry = !a.no_symmetry;
    let r = contour_rank_count(a.m, a.n, &cfg)?;
    let buf = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => to_json_bytes(&circle_json(&r)),
        Format::Csv => {
            let mut s = String::from("m,n,major_re,major_im,minor_re,minor_im,total,rounded,exact,rel_err,flags\n");
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.m,
                r.n,
                fmt_sig(r.major.re, 12),
                fmt_sig(r.major.im, 12),
                fmt_sig(r.minor.re, 12),
                fmt_sig(r.minor.im, 12),
                fmt_sig(r.total, 12),
                r.rounded,
                r.exact.as_ref().map(|e| e.to_string()).unwrap_or_default(),
                r.rel_err.map(|e| fmt_sig(e, 12)).unwrap_or_default(),
                r.flags.join(";")
            ));
            s.into_bytes()
        }
    };
    write_output(&a.output.out, &buf)
}

fn circle_json(r: &ContourResult) -> Value {
    json!({
        "m": r.m,
        "n": r.n,
        "major": { "re": num(r.major.re), "im": num(r.major.im) },
        "minor": { "re": num(r.minor.re), "im": num(r.minor.im) },
        "total": num(r.total),
        "rounded": int(&r.rounded),
        "exact": r.exact.as_ref().map(int).unwrap_or(Value::Null),
        "rel_err": r.rel_err.map(num).unwrap_or(Value::Null),
        "minor_to_major": num(r.minor_to_major()),
        "flags": r.flags,
    })
}

fn cmd_converge(a: ConvergeArgs) -> Result<(), Failure> {
    let rows = convergence_study(&a.m, &a.n.0)?;
    let buf = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_converge_csv(&rows, &mut buf)?;
            buf
        }
        Format::Json => to_json_bytes(&Value::Array(rows.iter().map(converge_json).collect())),
    };
    write_output(&a.output.out, &buf)
}

fn converge_json(r: &ConvergenceRow) -> Value {
    json!({
        "m": r.m,
        "n": r.n,
        "exact": int(&r.exact),
        "main_term": num(r.main_term),
        "ratio": num(r.ratio),
        "error_scale": num(r.error_scale),
    })
}
