//! `cuspmoment`: command-line front end for the twisted-moment library.
//!
//! Every subcommand produces one table, written as CSV (header row, floats
//! with 17 significant digits) or JSON (array of objects). Exit status is 0
//! on success, 2 for configuration errors and 3 for computation errors; in
//! the error case a JSON object with `kind`, `module` and `message` goes to
//! stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use cuspmoment::exact_formula::{twisted_moment_exact, ShiftParams, TruncationParams, WeightParam};
use cuspmoment::identities::identity_suite;
use cuspmoment::legendre_asym::bg_error_scan;
use cuspmoment::oracle::{brute_force_twisted_moment, SUPPORTED_WEIGHTS};
use cuspmoment::weight_average::{
    averaged_moment, fit_points, make_bump, mollified_first_moment, mollifier_coeffs, FitStatus, MollifierReading,
};
use cuspmoment::{ComplexValue, Error};
use serde_json::{json, Map, Value};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cuspmoment", version, about = "Twisted first moments of level-1 cusp form L-values")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long = "output", global = true)]
    output_path: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "CUSPMOMENT_THREADS", default_value_t = 0, global = true)]
    threads: usize,
    /// Absolute budget for the discarded tail of the error series.
    #[arg(long, default_value_t = 1e-12, global = true)]
    tail_target: f64,
    /// Products cn per parallel work unit.
    #[arg(long, default_value_t = 1024, global = true)]
    chunk_size: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Reading {
    LogRatio,
    RatioOfLogs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residuals of the special-function and kernel identities.
    Identities,
    /// Exact twisted moment at one weight.
    Moment {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        weight: u32,
        /// Real part of u.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u_re: f64,
        /// Imaginary part of u.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        u_im: f64,
        /// Imaginary part of v (its real part is 0).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        v_im: f64,
    },
    /// Weight average M₁(l) with the bump on [theta1, theta2].
    Average {
        #[arg(long)]
        l: u64,
        #[arg(long = "K")]
        big_k: f64,
        #[arg(long, default_value_t = 1.0)]
        theta1: f64,
        #[arg(long, default_value_t = 2.0)]
        theta2: f64,
    },
    /// Weight averages over a grid of l and K, with the error exponent per l.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        l: Vec<u64>,
        #[arg(long = "K", value_delimiter = ',', required = true)]
        big_k: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        theta1: f64,
        #[arg(long, default_value_t = 2.0)]
        theta2: f64,
    },
    /// Exact formula against the brute-force oracle in the one-dimensional weights.
    OracleCompare {
        #[arg(long, value_delimiter = ',', default_values_t = SUPPORTED_WEIGHTS.to_vec())]
        weights: Vec<u32>,
        #[arg(long, default_value_t = 30)]
        l_max: u64,
    },
    /// Remainders of the Bessel-type asymptotics of P_n(cos θ).
    BgScan {
        #[arg(long, value_delimiter = ',', default_values_t = vec![50u32, 100, 200, 400, 800])]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0])]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Mollified first moment.
    Mollify {
        #[arg(long = "M")]
        big_m: u64,
        #[arg(long = "K")]
        big_k: f64,
        #[arg(long, default_value_t = 1.0)]
        theta1: f64,
        #[arg(long, default_value_t = 2.0)]
        theta2: f64,
        #[arg(long, value_enum, default_value_t = Reading::LogRatio)]
        reading: Reading,
    },
}

enum Failure {
    Config(String),
    Compute(Error),
    Check(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) => Failure::Config(m),
            other => Failure::Compute(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn error_module(e: &Error) -> &'static str {
    match e {
        Error::Pole { .. } | Error::Domain { .. } | Error::NonConvergence { .. } | Error::Quadrature { .. } => "specfun",
        Error::NotInvertible { .. } => "arith",
        Error::ShiftDomain { .. } | Error::Weight { .. } | Error::HardCapExceeded { .. } => "exact_formula",
        Error::InsufficientLength { .. } => "oracle",
        Error::DegenerateFit(_) => "weight_average",
        Error::InvalidParameter(_) => "config",
    }
}

#[derive(Clone)]
enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(v) => json!(v.to_string()),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write<W: Write>(&self, format: Format, out: W) -> Result<(), Failure> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, &rows).map_err(io::Error::other)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn truncation(common: &Common) -> Result<TruncationParams, Failure> {
    if !(common.tail_target > 0.0) || !common.tail_target.is_finite() {
        return Err(Failure::Config(format!("--tail-target must be > 0, got {}", common.tail_target)));
    }
    if common.chunk_size < 1 {
        return Err(Failure::Config("--chunk-size must be >= 1".into()));
    }
    let t = TruncationParams {
        tail_target: common.tail_target,
        chunk_size: common.chunk_size,
        ..Default::default()
    };
    t.validate()?;
    Ok(t)
}

fn weight_param(weight: u32) -> Result<WeightParam, Failure> {
    WeightParam::from_weight(weight).map_err(|e| Failure::Config(e.to_string()))
}

fn run_identities() -> Result<Table, Failure> {
    let mut t = Table::new(&["identity", "points", "max_residual", "threshold", "passed"]);
    let checks = identity_suite()?;
    for c in &checks {
        t.push(vec![
            c.name.as_str().into(),
            c.points.into(),
            c.max_residual.into(),
            c.threshold.into(),
            c.passed.into(),
        ]);
    }
    Ok(t)
}

fn run_moment(l: u64, weight: u32, u: ComplexValue, v: ComplexValue, trunc: &TruncationParams) -> Result<Table, Failure> {
    let w = weight_param(weight)?;
    let shift = ShiftParams::new(u, v);
    shift.validate(w).map_err(|e| Failure::Config(e.to_string()))?;
    let m = twisted_moment_exact(l, w, &shift, trunc)?;
    let mut t = Table::new(&[
        "l",
        "weight",
        "value_re",
        "value_im",
        "main_term_1_re",
        "main_term_1_im",
        "main_term_2_re",
        "main_term_2_im",
        "v1_re",
        "v1_im",
        "certified_tail",
        "cutoff",
    ]);
    t.push(vec![
        m.l.into(),
        m.weight.into(),
        m.value.re.into(),
        m.value.im.into(),
        m.main_term_1.re.into(),
        m.main_term_1.im.into(),
        m.main_term_2.re.into(),
        m.main_term_2.im.into(),
        m.v1_value.re.into(),
        m.v1_value.im.into(),
        m.certified_tail.into(),
        m.cutoff.into(),
    ]);
    Ok(t)
}

const AVERAGE_COLUMNS: [&str; 9] = [
    "l",
    "K",
    "value",
    "main_term",
    "abs_error",
    "certified_tail_total",
    "H",
    "weights",
    "slope",
];

fn run_sweep(ls: &[u64], ks: &[f64], theta1: f64, theta2: f64, trunc: &TruncationParams) -> Result<Table, Failure> {
    let h = make_bump(theta1, theta2)?;
    let mut t = Table::new(&AVERAGE_COLUMNS);
    for &l in ls {
        let points = ks
            .iter()
            .map(|&k| averaged_moment(l, k, &h, trunc))
            .collect::<Result<Vec<_>, _>>()?;
        let slope = if ks.len() >= 3 && ks.windows(2).all(|w| w[1] > w[0]) {
            let f = fit_points(points.clone())?;
            match f.status {
                FitStatus::Fitted => f.slope,
                FitStatus::BelowFloor => None,
            }
        } else {
            None
        };
        for a in &points {
            t.push(vec![
                a.l.into(),
                a.big_k.into(),
                a.value.into(),
                a.main_term.into(),
                a.abs_error.into(),
                a.certified_tail_total.into(),
                h.h_integral().into(),
                a.weights.into(),
                slope.into(),
            ]);
        }
    }
    Ok(t)
}

fn run_oracle_compare(weights: &[u32], l_max: u64, trunc: &TruncationParams) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "weight",
        "l",
        "exact",
        "oracle",
        "abs_diff",
        "certified_tail",
        "oracle_tail",
        "within",
    ]);
    for &weight in weights {
        if !SUPPORTED_WEIGHTS.contains(&weight) {
            return Err(Failure::Config(format!("weight {weight} not in {SUPPORTED_WEIGHTS:?}")));
        }
        let w = weight_param(weight)?;
        for l in 1..=l_max {
            let e = twisted_moment_exact(l, w, &ShiftParams::central(), trunc)?;
            let o = brute_force_twisted_moment(l, weight)?;
            let diff = (e.value.re - o.value).abs();
            let allowed = e.certified_tail + o.tail_bound + 1e-8 * o.value.abs().max(1e-300);
            t.push(vec![
                weight.into(),
                l.into(),
                e.value.re.into(),
                o.value.into(),
                diff.into(),
                e.certified_tail.into(),
                o.tail_bound.into(),
                (diff <= allowed).into(),
            ]);
        }
    }
    Ok(t)
}

fn run_bg_scan(ns: &[u32], thetas: &[f64], m: u32) -> Result<Table, Failure> {
    let s = bg_error_scan(ns, thetas, m)?;
    let mut t = Table::new(&["n", "theta", "m", "error", "scaled", "slope"]);
    for r in &s.rows {
        let slope = s.fits.iter().find(|f| f.theta == r.theta).map(|f| f.fit.slope);
        t.push(vec![
            r.n.into(),
            r.theta.into(),
            m.into(),
            r.error.into(),
            r.scaled.into(),
            slope.into(),
        ]);
    }
    Ok(t)
}

fn run_mollify(
    big_m: u64,
    big_k: f64,
    theta1: f64,
    theta2: f64,
    reading: Reading,
    trunc: &TruncationParams,
) -> Result<Table, Failure> {
    let h = make_bump(theta1, theta2)?;
    let reading = match reading {
        Reading::LogRatio => MollifierReading::LogRatio,
        Reading::RatioOfLogs => MollifierReading::RatioOfLogs,
    };
    let x = mollifier_coeffs(big_m, reading)?;
    let max_x = x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let m = mollified_first_moment(big_m, big_k, &h, trunc, reading)?;
    let mut t = Table::new(&["M", "K", "value", "HK", "ratio", "certified_tail_total", "max_abs_x", "log_M"]);
    t.push(vec![
        m.big_m.into(),
        m.big_k.into(),
        m.value.into(),
        m.hk.into(),
        (m.value / m.hk).into(),
        m.certified_tail_total.into(),
        max_x.into(),
        (big_m as f64).ln().into(),
    ]);
    Ok(t)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.threads)
        .build_global()
        .map_err(|e| Failure::Config(format!("thread pool: {e}")))?;
    let trunc = truncation(&cli.common)?;
    let table = match &cli.command {
        Command::Identities => run_identities()?,
        Command::Moment { l, weight, u_re, u_im, v_im } => run_moment(
            *l,
            *weight,
            ComplexValue::new(*u_re, *u_im),
            ComplexValue::new(0.0, *v_im),
            &trunc,
        )?,
        Command::Average { l, big_k, theta1, theta2 } => {
            let mut t = run_sweep(&[*l], &[*big_k], *theta1, *theta2, &trunc)?;
            t.columns.pop();
            for r in &mut t.rows {
                r.pop();
            }
            t
        }
        Command::Sweep { l, big_k, theta1, theta2 } => run_sweep(l, big_k, *theta1, *theta2, &trunc)?,
        Command::OracleCompare { weights, l_max } => run_oracle_compare(weights, *l_max, &trunc)?,
        Command::BgScan { n, theta, m } => run_bg_scan(n, theta, *m)?,
        Command::Mollify {
            big_m,
            big_k,
            theta1,
            theta2,
            reading,
        } => run_mollify(*big_m, *big_k, *theta1, *theta2, *reading, &trunc)?,
    };
    match &cli.common.output_path {
        Some(p) => table.write(cli.common.format, BufWriter::new(File::create(p)?))?,
        None => table.write(cli.common.format, io::stdout().lock())?,
    }
    if let Command::Identities = cli.command {
        if let Some(r) = table.rows.iter().find(|r| matches!(r[4], Cell::Bool(false))) {
            return Err(Failure::Check(format!("identity {} above threshold", r[0].csv())));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, kind, module, message) = match &f {
                Failure::Config(m) => (2, "config", "cli", m.clone()),
                Failure::Compute(e) => (3, "computation", error_module(e), e.to_string()),
                Failure::Check(m) => (3, "check", "identities", m.clone()),
                Failure::Io(e) => (3, "io", "cli", e.to_string()),
            };
            eprintln!("{}", json!({ "kind": kind, "module": module, "message": message }));
            ExitCode::from(code)
        }
    }
}
