//! Command-line front end.
//!
//! Tables are CSV with a header row and 12 significant digits; simplices and
//! reports are JSON. Each run emits a manifest (command, parameters, version,
//! timestamp) to stderr or to the file named by `--manifest`.

use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds;
use crate::error::Error;
use crate::legendre;
use crate::measure;
use crate::norms::{self, MAX_EXACT_DIMENSION};
use crate::search::{self, SearchConfig};
use crate::simplex::{ball_volume, regular_inscribed_simplex, regular_simplex_volume, Simplex};

pub const EXIT_OK: i32 = 0;
/// A requested certificate or window check did not hold.
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;
pub const EXIT_DOMAIN: i32 = 6;
pub const EXIT_INTERNAL: i32 = 7;

pub const THREADS_ENV: &str = "BALLINTERP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ballinterp", version, about = "Linear interpolation projectors on the unit ball")]
pub struct Cli {
    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Write the run manifest to this file instead of stderr.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate χ_n(t), its derivative, or its inverse on [1, ∞).
    Legendre(LegendreArgs),
    /// Exact projector norm of a simplex read from a JSON file.
    Norm(NormArgs),
    /// Bounds, volumes and regular-simplex norms for n = 1..=n_max.
    Table(TableArgs),
    /// Closed-form versus Monte Carlo measure of E_{n,γ}.
    Measure(MeasureArgs),
    /// Search for a simplex of minimal projector norm.
    Search(SearchArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct LegendreArgs {
    pub n: usize,
    #[arg(required_unless_present = "invert", allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Print χ_n^{-1}(s) instead of χ_n(t).
    #[arg(long, value_name = "S", conflicts_with = "t")]
    pub invert: Option<f64>,
    /// With --invert, also print the closed-form lower estimate of the inverse.
    #[arg(long, requires = "invert", conflicts_with = "t")]
    pub bound: bool,
    /// Print χ_n'(t) instead of χ_n(t).
    #[arg(long, conflicts_with = "invert")]
    pub derivative: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct NormArgs {
    pub file: PathBuf,
    /// Accept vertices outside the unit ball.
    #[arg(long)]
    pub no_ball_check: bool,
    /// Also print the volume-based lower-bound certificate.
    #[arg(long)]
    pub certify: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    pub n_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct MeasureArgs {
    pub n: usize,
    pub gamma: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = search::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    pub n: usize,
    #[arg(long, default_value_t = search::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = search::DEFAULT_ITERATIONS)]
    pub iters: usize,
    #[arg(long, default_value_t = search::DEFAULT_PERTURBATION)]
    pub perturbation: f64,
    #[arg(long, default_value_t = search::DEFAULT_SEED)]
    pub seed: u64,
    /// Write the best simplex here instead of printing it before the summary.
    #[arg(long)]
    pub simplex_out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Io(_) | Error::InvalidArgument(_) => EXIT_INPUT,
            Error::Degenerate { .. } => EXIT_DEGENERATE,
            Error::Budget { .. } => EXIT_BUDGET,
            Error::Domain(_) | Error::Range(_) | Error::NotInBall { .. } => EXIT_DOMAIN,
            Error::BoundViolated { .. } => EXIT_ASSERTION,
            Error::Consistency(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn assertion(message: String) -> Failure {
    Failure {
        code: EXIT_ASSERTION,
        message,
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Formats with 12 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let fixed = format!("{:.*}", (11 - exp) as usize, x);
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // Fails harmlessly when a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match execute(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (name, params) = match &cli.command {
        Command::Legendre(a) => ("legendre", json!(a)),
        Command::Norm(a) => ("norm", json!(a)),
        Command::Table(a) => ("table", json!(a)),
        Command::Measure(a) => ("measure", json!(a)),
        Command::Search(a) => ("search", json!(a)),
    };
    let manifest = RunManifest {
        command: name.into(),
        parameters: params,
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let manifest_json = serde_json::to_string(&manifest).expect("manifest serializes");
    match &cli.manifest {
        Some(path) => std::fs::write(path, manifest_json + "\n")?,
        None => writeln!(err, "# manifest {manifest_json}")?,
    }

    match &cli.command {
        Command::Legendre(a) => cmd_legendre(a, out),
        Command::Norm(a) => cmd_norm(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Measure(a) => cmd_measure(a, out),
        Command::Search(a) => cmd_search(a, out),
    }
}

fn cmd_legendre(a: &LegendreArgs, out: &mut dyn Write) -> CmdResult {
    if let Some(s) = a.invert {
        let inv = legendre::inverse_on_ray(a.n, s)?;
        if a.bound {
            let lb = legendre::inverse_lower_bound(a.n, s)?;
            writeln!(out, "{},{}", fmt_sig(inv), fmt_sig(lb))?;
        } else {
            writeln!(out, "{}", fmt_sig(inv))?;
        }
        return Ok(());
    }
    let t = a.t.expect("clap requires t without --invert");
    let v = if a.derivative {
        legendre::eval_derivative(a.n, t)?
    } else {
        legendre::eval(a.n, t)?
    };
    writeln!(out, "{}", fmt_sig(v))?;
    Ok(())
}

fn cmd_norm(a: &NormArgs, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(&a.file)?;
    let s = Simplex::from_json(&text)?;
    s.vertex_matrix()?;
    if !a.no_ball_check || a.certify {
        s.require_in_ball()?;
    }
    let report = norms::ball_norm_exact(&s)?;
    let mut doc = json!({ "n": s.dimension(), "report": report });
    let mut result = Ok(());
    if a.certify {
        match bounds::theorem1_bound(&s) {
            Ok(cert) => doc["certificate"] = json!(cert),
            Err(Error::BoundViolated { .. }) => {
                result = Err(assertion("certificate does not hold".into()));
            }
            Err(e) => return Err(e.into()),
        }
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("report serializes"))?;
    result
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> CmdResult {
    if a.n_max == 0 || a.n_max > legendre::MAX_DEGREE {
        return Err(Error::Domain(format!(
            "n_max must lie in 1..={}",
            legendre::MAX_DEGREE
        ))
        .into());
    }
    let c = bounds::theorem2_constant();
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "corollary2_bound",
        "sqrt_n",
        "sqrt_n_plus_1",
        "c_sqrt_n",
        "sigma_n",
        "kappa_n",
        "corollary3_vol_bound",
        "regular_simplex_norm",
    ])?;
    let mut violations = Vec::new();
    for n in 1..=a.n_max {
        let bound = bounds::corollary2_bound(n)?;
        let upper = ((n + 1) as f64).sqrt();
        let norm = if n <= MAX_EXACT_DIMENSION {
            Some(norms::ball_norm(&regular_inscribed_simplex(n))?)
        } else {
            None
        };
        let top = norm.unwrap_or(bound);
        if !(bound <= top + bounds::SLACK_TOLERANCE && top <= upper + bounds::SLACK_TOLERANCE) {
            violations.push(n);
        }
        w.write_record([
            n.to_string(),
            fmt_sig(bound),
            fmt_sig((n as f64).sqrt()),
            fmt_sig(upper),
            fmt_sig(c * (n as f64).sqrt()),
            fmt_sig(regular_simplex_volume(n)),
            fmt_sig(ball_volume(n)),
            fmt_sig(bounds::corollary3_min_volume(n)?.vol_bound),
            norm.map(fmt_sig).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(assertion(format!(
            "bound <= norm <= sqrt(n+1) fails for n in {violations:?}"
        )))
    }
}

fn cmd_measure(a: &MeasureArgs, out: &mut dyn Write) -> CmdResult {
    let closed = measure::e_measure_closed_form(a.n, a.gamma)?;
    let est = measure::e_measure_mc(a.n, a.gamma, a.samples, a.seed)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "gamma",
        "closed_form",
        "mc_mean",
        "mc_stderr",
        "z_score",
        "samples",
        "seed",
    ])?;
    w.write_record([
        a.n.to_string(),
        fmt_sig(a.gamma),
        fmt_sig(closed),
        fmt_sig(est.mean),
        fmt_sig(est.stderr),
        fmt_sig(est.z_score(closed)),
        est.samples.to_string(),
        est.seed.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> CmdResult {
    let config = SearchConfig {
        dimension: a.n,
        restarts: a.restarts,
        max_iterations: a.iters,
        perturbation: a.perturbation,
        seed: a.seed,
    };
    let r = search::minimize_norm(&config)?;
    let simplex_json = r.best_simplex.to_json();
    match &a.simplex_out {
        Some(path) => std::fs::write(path, simplex_json + "\n")?,
        None => writeln!(out, "{simplex_json}")?,
    }
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["n", "lower", "best", "upper", "restarts", "seed"])?;
    w.write_record([
        a.n.to_string(),
        fmt_sig(r.lower_bound),
        fmt_sig(r.best_norm),
        fmt_sig(r.upper_bound),
        a.restarts.to_string(),
        a.seed.to_string(),
    ])?;
    w.flush()?;
    drop(w);
    let window = search::ThetaWindow {
        lower: r.lower_bound,
        upper: r.upper_bound,
        best_found: r.best_norm,
    };
    if window.contains_best() {
        Ok(())
    } else {
        Err(assertion(format!(
            "best norm {} outside [{}, {}]",
            r.best_norm, r.lower_bound, r.upper_bound
        )))
    }
}
