//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a verification campaign found failures,
//! `2` unreadable or malformed input and invalid flags, `3` a zero-divisor
//! policy aborted the condensation.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dodgson_core::condensation::{dodgson_det, CondensationError, ZeroPolicy};
use dodgson_core::identity::{fuzz_identities, FuzzConfig, IdentityError};
use dodgson_core::io::{parse_matrix, ParseError};
use dodgson_core::matrix::{random_matrix, Matrix, MatrixError, COFACTOR_ORACLE_BOUND};
use dodgson_core::scalar::{RingDomain, Scalar};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Policy(CondensationError),
    #[error("{failures} identity check(s) failed")]
    Failures { failures: usize },
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failures { .. } => 1,
            CliError::Input(_) | CliError::Output(_) => 2,
            CliError::Policy(_) => 3,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<IdentityError> for CliError {
    fn from(e: IdentityError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CondensationError> for CliError {
    fn from(e: CondensationError) -> Self {
        match e {
            CondensationError::Matrix(m) => m.into(),
            e if e.is_policy_abort() => CliError::Policy(e),
            // An inexact division is an engine bug; report it loudly but
            // outside the documented input/policy codes.
            e => CliError::Input(format!("internal error: {e}")),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "dodgson", version, about = "Exact determinants by Dodgson condensation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the determinant of one matrix.
    Det(DetArgs),
    /// Run a seeded identity campaign over random matrices.
    Verify(VerifyArgs),
    /// Print every condensation level and policy event.
    Pyramid(PyramidArgs),
    /// Time determinant algorithms on random matrices.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dodgson,
    Bareiss,
    Cofactor,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Dodgson => "dodgson",
            Algorithm::Bareiss => "bareiss",
            Algorithm::Cofactor => "cofactor",
        }
    }
}

/// `n,domain,bound,seed`, e.g. `6,integers,9,42` or `5,fp:7,1,3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub domain: RingDomain,
    pub bound: u32,
    pub seed: u64,
}

impl FromStr for GenSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, domain, bound, seed] = parts[..] else {
            return Err(format!("expected n,domain,bound,seed, got {s:?}"));
        };
        let n: usize = n.parse().map_err(|_| format!("bad order {n:?}"))?;
        if n == 0 {
            return Err("order must be at least 1".into());
        }
        let bound: u32 = bound.parse().map_err(|_| format!("bad bound {bound:?}"))?;
        if bound == 0 {
            return Err("entry bound must be at least 1".into());
        }
        Ok(GenSpec {
            n,
            domain: domain.parse().map_err(|e| format!("{e}"))?,
            bound,
            seed: seed.parse().map_err(|_| format!("bad seed {seed:?}"))?,
        })
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Matrix file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Random matrix as n,domain,bound,seed.
    #[arg(long, value_name = "N,DOMAIN,BOUND,SEED")]
    pub gen: Option<GenSpec>,
}

impl Source {
    fn load(&self) -> Result<Matrix, CliError> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            return Ok(parse_matrix(&text)?);
        }
        let g = self.gen.as_ref().expect("clap requires one source");
        Ok(random_matrix(g.domain, g.n, g.bound, g.seed))
    }
}

#[derive(Debug, Args)]
pub struct DetArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "dodgson")]
    pub algorithm: Algorithm,
    /// fail, row_swap[:N] or bareiss_fallback.
    #[arg(long, default_value = "bareiss_fallback")]
    pub zero_policy: ZeroPolicy,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PyramidArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value = "bareiss_fallback")]
    pub zero_policy: ZeroPolicy,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "integers")]
    pub domain: RingDomain,
    #[arg(long, default_value_t = 3)]
    pub min_n: usize,
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    #[arg(long, default_value_t = 9)]
    pub bound: u32,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One report per line instead of the summary.
    #[arg(long)]
    pub json: bool,
    /// Self-test hook: perturb every Desnanot-Jacobi check.
    #[arg(long, hide = true)]
    pub corrupt_check: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "20,50,100")]
    pub sizes: Vec<usize>,
    #[arg(long, value_delimiter = ',', value_enum, default_value = "bareiss,dodgson")]
    pub algorithms: Vec<Algorithm>,
    #[arg(long, default_value_t = 3)]
    pub repetitions: usize,
    #[arg(long, default_value = "integers")]
    pub domain: RingDomain,
    #[arg(long, default_value_t = 99)]
    pub bound: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "bareiss_fallback")]
    pub zero_policy: ZeroPolicy,
    #[arg(long)]
    pub json: bool,
}

fn check_cofactor(algorithm: Algorithm, n: usize) -> Result<(), CliError> {
    if algorithm == Algorithm::Cofactor && n > COFACTOR_ORACLE_BOUND {
        return Err(CliError::Input(format!(
            "cofactor expansion is limited to n <= {COFACTOR_ORACLE_BOUND}, got n = {n}"
        )));
    }
    Ok(())
}

/// Determinant and the number of zero-policy events that fired.
fn determinant(a: &Matrix, algorithm: Algorithm, policy: ZeroPolicy) -> Result<(Scalar, usize), CliError> {
    check_cofactor(algorithm, a.rows())?;
    match algorithm {
        Algorithm::Dodgson => {
            let (det, trace) = dodgson_det(a, policy)?;
            Ok((det, trace.policy_events.len()))
        }
        Algorithm::Bareiss => Ok((a.det_bareiss()?, 0)),
        Algorithm::Cofactor => Ok((a.det_cofactor()?, 0)),
    }
}

pub fn cmd_det(args: &DetArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let a = args.source.load()?;
    a.order()?;
    let (det, events) = determinant(&a, args.algorithm, args.zero_policy)?;
    if args.json {
        let record = serde_json::json!({
            "algorithm": args.algorithm.name(),
            "n": a.rows(),
            "domain": a.domain().to_string(),
            "determinant": det.to_string(),
            "policy_events": events,
        });
        writeln!(out, "{record}")?;
    } else {
        writeln!(out, "{det}")?;
    }
    Ok(())
}

pub fn cmd_pyramid(args: &PyramidArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let a = args.source.load()?;
    let (_, trace) = dodgson_det(&a, args.zero_policy)?;
    out.write_all(trace.render().as_bytes())?;
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = FuzzConfig::new(args.domain, args.min_n, args.max_n, args.bound, args.trials, args.seed);
    config.corrupt_desnanot_jacobi = args.corrupt_check;
    let summary = fuzz_identities(&config)?;
    if args.json {
        for r in &summary.reports {
            writeln!(out, "{}", r.to_json_line())?;
        }
    } else {
        out.write_all(summary.render_text().as_bytes())?;
    }
    match summary.failures() {
        0 => Ok(()),
        failures => Err(CliError::Failures { failures }),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub algorithm: Algorithm,
    pub median: Duration,
    pub repetitions: usize,
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2
    }
}

pub fn run_bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if args.repetitions == 0 {
        return Err(CliError::Input("repetitions must be at least 1".into()));
    }
    if args.sizes.iter().any(|&n| n == 0) {
        return Err(CliError::Input("sizes must be at least 1".into()));
    }
    for &n in &args.sizes {
        for &alg in &args.algorithms {
            check_cofactor(alg, n)?;
        }
    }
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let a = random_matrix(args.domain, n, args.bound, args.seed.wrapping_add(n as u64));
        for &algorithm in &args.algorithms {
            let mut samples = Vec::with_capacity(args.repetitions);
            for _ in 0..args.repetitions {
                let start = Instant::now();
                determinant(&a, algorithm, args.zero_policy)?;
                samples.push(start.elapsed());
            }
            rows.push(BenchRow {
                n,
                algorithm,
                median: median(samples),
                repetitions: args.repetitions,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = run_bench(args)?;
    if args.json {
        for r in &rows {
            let record = serde_json::json!({
                "n": r.n,
                "algorithm": r.algorithm.name(),
                "median_ms": r.median.as_secs_f64() * 1e3,
                "repetitions": r.repetitions,
            });
            writeln!(out, "{record}")?;
        }
        return Ok(());
    }
    let mut table = format!("{:>6}  {:<10}  {:>12}  {:>5}\n", "n", "algorithm", "median_ms", "reps");
    for r in &rows {
        let _ = writeln!(
            table,
            "{:>6}  {:<10}  {:>12.3}  {:>5}",
            r.n,
            r.algorithm.name(),
            r.median.as_secs_f64() * 1e3,
            r.repetitions
        );
    }
    out.write_all(table.as_bytes())?;
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Det(args) => cmd_det(args, out),
        Command::Verify(args) => cmd_verify(args, out),
        Command::Pyramid(args) => cmd_pyramid(args, out),
        Command::Bench(args) => cmd_bench(args, out),
    }
}
