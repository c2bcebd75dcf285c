//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit status together with everything that would be printed, so the
//! binary stays a thin wrapper and the behaviour is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::distribution::{
    moments_up_to, terms_for_tolerance_cdf, terms_for_tolerance_pdf, QGaussian, Support,
    TruncationPolicy, DEFAULT_EPSILON, DEFAULT_MAX_TERMS,
};
use crate::error::QGaussError;
use crate::qseries::{QKind, QParameter};
use crate::sampler::{rejection_bound, sample_lanes, Envelope, SamplingMethod};
use crate::validation::{run_suite, DEFAULT_SUITE_QS};

/// Environment variable overriding the default term cap.
pub const MAX_TERMS_ENV: &str = "QGAUSS_MAX_TERMS";

#[derive(Debug, Parser)]
#[command(name = "qgauss", version, about = "q-Gaussian densities, distribution functions and samplers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    Product,
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhichArg {
    Pdf,
    Cdf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Rejection,
    CdfInversion,
    EnvelopeInversion,
}

impl From<MethodArg> for SamplingMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => SamplingMethod::Auto,
            MethodArg::Rejection => SamplingMethod::Rejection,
            MethodArg::CdfInversion => SamplingMethod::CdfInversion,
            MethodArg::EnvelopeInversion => SamplingMethod::EnvelopeInversion,
        }
    }
}

/// `A:B:N`, meaning N+1 equally spaced points from A to B inclusive.
#[derive(Debug, Clone, Copy)]
struct Grid {
    a: f64,
    b: f64,
    n: usize,
}

impl Grid {
    fn points(&self) -> Vec<f64> {
        if self.n == 0 {
            return vec![self.a];
        }
        (0..=self.n)
            .map(|i| {
                if i == self.n {
                    self.b
                } else {
                    self.a + (self.b - self.a) * i as f64 / self.n as f64
                }
            })
            .collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must look like A:B:N, got {s:?}"));
    }
    let a: f64 = parts[0].trim().parse().map_err(|e| format!("bad grid start: {e}"))?;
    let b: f64 = parts[1].trim().parse().map_err(|e| format!("bad grid end: {e}"))?;
    let n: usize = parts[2].trim().parse().map_err(|e| format!("bad grid count: {e}"))?;
    if !a.is_finite() || !b.is_finite() {
        return Err("grid ends must be finite".into());
    }
    Ok(Grid { a, b, n })
}

fn parse_q(s: &str) -> Result<f64, String> {
    let q: f64 = s.trim().parse().map_err(|e| format!("q must be a number: {e}"))?;
    QParameter::new(q).map(|p| p.value()).map_err(|e| e.to_string())
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let e: f64 = s.trim().parse().map_err(|e| format!("eps must be a number: {e}"))?;
    if e > 0.0 && e.is_finite() {
        Ok(e)
    } else {
        Err(format!("eps must be positive, got {e}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the density on a grid.
    Pdf {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, value_enum, default_value = "product")]
        form: FormArg,
        #[arg(long, value_parser = parse_eps, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate the distribution function on a grid.
    Cdf {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, value_parser = parse_eps, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate quantiles for a grid of probability levels.
    Quantile {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, value_parser = parse_eps, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Raw moments up to a given order.
    Moments {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 10)]
        max_order: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw samples; one value per line plus a JSON report.
    Sample {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Worker lanes; lane i uses stream id `stream + i`.
        #[arg(long, default_value_t = 1)]
        lanes: usize,
        #[arg(long, value_parser = parse_eps, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Report path; defaults to `<output>.json`, or stderr when writing to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run the validation suite.
    Validate {
        #[arg(long, value_parser = parse_q, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sampler throughput and acceptance rates.
    Bench {
        #[arg(long, value_parser = parse_q, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Series length needed for a target accuracy.
    Terms {
        #[arg(long, value_parser = parse_q, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_parser = parse_eps)]
        eps: f64,
        #[arg(long, value_enum, default_value = "pdf")]
        which: WhichArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Exit status and captured output of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

impl Outcome {
    pub fn stdout_str(&self) -> String {
        String::from_utf8_lossy(&self.stdout).into_owned()
    }

    pub fn stderr_str(&self) -> String {
        String::from_utf8_lossy(&self.stderr).into_owned()
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(QGaussError),
    Io(String),
}

impl From<QGaussError> for Failure {
    fn from(e: QGaussError) -> Self {
        Failure::Compute(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Formats a number with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    fn render(&self, format: FormatArg) -> String {
        match format {
            FormatArg::Csv => {
                let mut s = self.header.join(",");
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(x) => fmt_num(*x),
                            Cell::Int(i) => i.to_string(),
                            Cell::Text(t) => csv_field(t),
                        })
                        .collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            FormatArg::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = serde_json::Map::new();
                        for (h, c) in self.header.iter().zip(row) {
                            let v = match c {
                                Cell::Num(x) if x.is_finite() => json!(x),
                                Cell::Num(x) => json!(fmt_num(*x)),
                                Cell::Int(i) => json!(i),
                                Cell::Text(t) => json!(t),
                            };
                            obj.insert((*h).to_string(), v);
                        }
                        serde_json::Value::Object(obj)
                    })
                    .collect();
                let doc = json!({ "columns": self.header, "rows": rows });
                let mut s = serde_json::to_string_pretty(&doc).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

fn csv_field(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

fn max_terms_from_env() -> Result<usize, Failure> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{MAX_TERMS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_MAX_TERMS),
    }
}

fn law(q: f64, eps: f64, max_terms: usize) -> Result<QGaussian, Failure> {
    let policy = TruncationPolicy::new(eps).with_max_terms(max_terms);
    Ok(QGaussian::with_policy(QParameter::new(q)?, policy)?)
}

struct Emit {
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

impl Emit {
    fn main(&mut self, output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
        match output {
            Some(path) => std::fs::write(path, text)?,
            None => self.stdout.extend_from_slice(text.as_bytes()),
        }
        Ok(())
    }
}

/// Runs one command line (including the program name in `args[0]`).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let mut out = Outcome {
                status,
                ..Default::default()
            };
            if status == 0 {
                out.stdout = rendered.into_bytes();
            } else {
                out.stderr = rendered.into_bytes();
            }
            return out;
        }
    };
    let mut emit = Emit {
        stdout: Vec::new(),
        stderr: Vec::new(),
    };
    let result = dispatch(cli.command, &mut emit);
    let mut out = Outcome {
        status: 0,
        stdout: emit.stdout,
        stderr: emit.stderr,
    };
    match result {
        Ok(status) => out.status = status,
        Err(Failure::Usage(msg)) => {
            out.status = 2;
            out.stderr.extend_from_slice(format!("error: {msg}\n").as_bytes());
        }
        Err(Failure::Compute(e)) => {
            out.status = 1;
            let doc = json!({ "error": e.code(), "message": e.to_string() });
            out.stderr.extend_from_slice(format!("{doc}\n").as_bytes());
        }
        Err(Failure::Io(msg)) => {
            out.status = 1;
            let doc = json!({ "error": "Io", "message": msg });
            out.stderr.extend_from_slice(format!("{doc}\n").as_bytes());
        }
    }
    out
}

fn dispatch(cmd: Command, emit: &mut Emit) -> Result<i32, Failure> {
    let max_terms = max_terms_from_env()?;
    match cmd {
        Command::Pdf { q, grid, form, eps, format, output } => {
            let qp = QParameter::new(q)?;
            if qp.kind() == QKind::TwoPoint {
                return Err(QGaussError::UnsupportedKind("two-point (q = -1)").into());
            }
            let f = law(q, eps, max_terms)?;
            let mut t = Table::new(vec!["x", "value", "error_bound"]);
            for x in grid.points() {
                let e = match form {
                    FormArg::Product => f.pdf_product(x)?,
                    FormArg::Expansion => f.pdf_expansion(x)?,
                };
                t.rows.push(vec![Cell::Num(x), Cell::Num(e.value), Cell::Num(e.error_bound)]);
            }
            emit.main(&output, &t.render(format))?;
        }
        Command::Cdf { q, grid, eps, format, output } => {
            let f = law(q, eps, max_terms)?;
            let mut t = Table::new(vec!["x", "cdf", "error_bound"]);
            for x in grid.points() {
                t.rows.push(vec![Cell::Num(x), Cell::Num(f.cdf(x)), Cell::Num(f.cdf_error_bound())]);
            }
            emit.main(&output, &t.render(format))?;
        }
        Command::Quantile { q, grid, eps, format, output } => {
            let f = law(q, eps, max_terms)?;
            let (lo, hi) = match f.support() {
                Support::Interval { lo, hi } | Support::TwoPoint { lo, hi } => (lo, hi),
                Support::RealLine => (f64::NEG_INFINITY, f64::INFINITY),
            };
            let mut t = Table::new(vec!["p", "x"]);
            for p in grid.points() {
                let x = if p == 0.0 {
                    lo
                } else if p == 1.0 {
                    hi
                } else {
                    f.quantile(p)?
                };
                t.rows.push(vec![Cell::Num(p), Cell::Num(x)]);
            }
            emit.main(&output, &t.render(format))?;
        }
        Command::Moments { q, max_order, format, output } => {
            let mut t = Table::new(vec!["order", "moment"]);
            for (r, m) in moments_up_to(max_order, q).into_iter().enumerate() {
                t.rows.push(vec![Cell::Int(r as u64), Cell::Num(m)]);
            }
            emit.main(&output, &t.render(format))?;
        }
        Command::Terms { q, eps, which, format, output } => {
            let (name, est) = match which {
                WhichArg::Pdf => ("pdf", terms_for_tolerance_pdf(q, eps)?),
                WhichArg::Cdf => ("cdf", terms_for_tolerance_cdf(q, eps)?),
            };
            let mut t = Table::new(vec!["which", "q", "eps", "root", "resolved_n", "max_terms"]);
            t.rows.push(vec![
                Cell::Text(name.into()),
                Cell::Num(q),
                Cell::Num(eps),
                Cell::Num(est.root),
                Cell::Int(est.resolved_n as u64),
                Cell::Int(max_terms as u64),
            ]);
            emit.main(&output, &t.render(format))?;
            if est.resolved_n > max_terms {
                TruncationPolicy::new(eps).with_max_terms(max_terms).resolve(q, est.resolved_n)?;
            }
        }
        Command::Sample {
            q,
            n,
            seed,
            stream,
            method,
            lanes,
            eps,
            output,
            report,
            timing,
        } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            if lanes == 0 {
                return Err(Failure::Usage("--lanes must be at least 1".into()));
            }
            let policy = TruncationPolicy::new(eps).with_max_terms(max_terms);
            let r = sample_lanes(n, QParameter::new(q)?, method.into(), seed, stream, lanes, &policy)?;
            let mut text = String::with_capacity(n * 24);
            for x in &r.samples {
                let _ = writeln!(text, "{}", fmt_num(*x));
            }
            emit.main(&output, &text)?;
            let mut sidecar = serde_json::to_string_pretty(&r.sidecar_json(timing)).expect("json");
            sidecar.push('\n');
            let report_path = report.or_else(|| {
                output.as_ref().map(|p| {
                    let mut s = p.clone().into_os_string();
                    s.push(".json");
                    PathBuf::from(s)
                })
            });
            match report_path {
                Some(p) => std::fs::write(p, sidecar)?,
                None => emit.stderr.extend_from_slice(sidecar.as_bytes()),
            }
        }
        Command::Validate { q, json, output } => {
            let qs = if q.is_empty() { DEFAULT_SUITE_QS.to_vec() } else { q };
            let rep = run_suite(&qs)?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(&rep).expect("json");
                s.push('\n');
                s
            } else {
                let mut s = String::new();
                for c in &rep.checks {
                    let tag = match (c.passed, c.gated) {
                        (true, _) => "PASS",
                        (false, true) => "FAIL",
                        (false, false) => "NOTE",
                    };
                    let _ = writeln!(
                        s,
                        "{tag} {:<52} lhs={:>24} rhs={:>24} err={:.3e} tol={:.1e}",
                        c.name,
                        fmt_num(c.lhs),
                        fmt_num(c.rhs),
                        c.abs_error,
                        c.tolerance
                    );
                }
                let _ = writeln!(
                    s,
                    "total {} passed {} failed {} recorded {}",
                    rep.summary.total, rep.summary.passed, rep.summary.failed, rep.summary.recorded
                );
                s
            };
            emit.main(&output, &text)?;
            return Ok(if rep.all_gated_passed() { 0 } else { 1 });
        }
        Command::Bench { q, n, seed, output } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let qs = if q.is_empty() { vec![-0.9, -0.5, 0.0, 0.5, 0.9] } else { q };
            let policy = TruncationPolicy::default().with_max_terms(max_terms);
            let mut t = Table::new(vec![
                "q",
                "method",
                "n",
                "seconds",
                "samples_per_second",
                "acceptance_rate",
                "rejection_bound",
                "effective_bound",
                "ks_statistic",
            ]);
            for q in qs {
                let qp = QParameter::new(q)?;
                let methods: Vec<SamplingMethod> = match qp.kind() {
                    QKind::TwoPoint => vec![SamplingMethod::TwoPoint],
                    QKind::Normal => vec![SamplingMethod::NormalClosedForm],
                    QKind::Continuous => {
                        let mut m = vec![SamplingMethod::CdfInversion, SamplingMethod::EnvelopeInversion];
                        // skip rejection when the expected trial count is absurd
                        let mass = Envelope::new(q)?.mass().max(1.0);
                        if rejection_bound(q, &policy)? * mass <= 1e3 {
                            m.insert(0, SamplingMethod::Rejection);
                        }
                        m
                    }
                };
                for m in methods {
                    let start = Instant::now();
                    let r = sample_lanes(n, qp, m, seed, 0, 1, &policy)?;
                    let secs = start.elapsed().as_secs_f64();
                    t.rows.push(vec![
                        Cell::Num(q),
                        Cell::Text(m.name().into()),
                        Cell::Int(n as u64),
                        Cell::Num(secs),
                        Cell::Num(n as f64 / secs),
                        Cell::Num(r.acceptance_rate),
                        Cell::Num(r.rejection_bound.unwrap_or(f64::NAN)),
                        Cell::Num(r.effective_bound.unwrap_or(f64::NAN)),
                        Cell::Num(r.ks_statistic.unwrap_or(f64::NAN)),
                    ]);
                }
            }
            emit.main(&output, &t.render(FormatArg::Csv))?;
        }
    }
    Ok(0)
}
