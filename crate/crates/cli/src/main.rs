//! `drh`: tables and curves for partial Euler products, written as CSV.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::{ConfigFile, CutoffSpec, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "drh", version, about = "Partial Euler products on the critical line, as CSV")]
struct Cli {
    #[command(flatten)]
    opts: Common,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by all subcommands; each may also come from `--config`.
#[derive(Debug, Args)]
struct Common {
    /// File of `key=value` lines; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Character: chi_3, chi_7a, chi_7b, d:<disc>, mod:<N>:<g>=<k>/<m>,...
    #[arg(long = "char", global = true)]
    character: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    tmin: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    tmax: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Ascending list: p<n> (n-th prime), a number x, or inf.
    #[arg(long, global = true, value_delimiter = ',')]
    cutoffs: Vec<CutoffSpec>,
    /// Discriminant list for table1.
    #[arg(long, global = true, allow_hyphen_values = true, value_delimiter = ',')]
    d: Vec<i64>,
    /// Point-counts file for curve-drh.
    #[arg(long, global = true)]
    counts: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Bernoulli correction terms in the Euler–Maclaurin evaluation (1..=15).
    #[arg(long = "em-terms", global = true)]
    em_terms: Option<usize>,
    /// Acceptance threshold for |L(1/2+it)| at a zero.
    #[arg(long = "zero-tol", global = true)]
    zero_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// √2·L(1/2) against the Euler product at a single cutoff, per discriminant.
    Table1,
    /// Re and Im of L_x(σ+it) for each cutoff and the analytic continuation.
    Converge,
    /// Power-law exponent of the relative error δL_x.
    Alpha,
    /// Density ρ_x(t) of the argument of L_x on the critical line.
    Density,
    /// Calibrated counting functions N_x(t).
    Counting,
    /// Collapse of N_x near the first zero in z = (t − t_1)x^λ.
    Collapse(CollapseArgs),
    /// Degree-n partial products over F_q[T] against the L-polynomial.
    FfVerify(FfArgs),
    /// Compensated products for a curve over a finite field.
    CurveDrh(CurveArgs),
    /// Sums of q^{-deg P} over monic irreducibles.
    Mertens(MertensArgs),
    /// Both sides of the q-integral identity for Σ q^{l/2}/l.
    Jackson(JacksonArgs),
}

#[derive(Debug, Args)]
struct CollapseArgs {
    /// Relative half-width of each curve's data window around t_1.
    #[arg(long)]
    window: Option<f64>,
    /// Use this exponent instead of fitting one.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Debug, Args)]
struct FfArgs {
    /// Modulus f as q:c0,c1,...,cd.
    #[arg(long)]
    modulus: Option<String>,
    /// Generator value as <poly>=<root>, e.g. 5:0,1=1/8; repeatable.
    #[arg(long = "gen")]
    generators: Vec<String>,
    /// Pick a character of this order instead of giving generator values.
    #[arg(long)]
    order: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Largest degree cutoff.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Use the projective line over F_q.
    #[arg(long)]
    p1: bool,
    #[arg(long)]
    q: Option<u64>,
    /// Count points on y² = f(x), f given as q:c0,c1,...
    #[arg(long)]
    hyperelliptic: Option<String>,
    /// Largest degree cutoff.
    #[arg(long)]
    n: Option<usize>,
    /// Reciprocal numerator roots for schemes of dimension ≥ 2, as re or re:im.
    #[arg(long)]
    alphas: Option<String>,
    /// Reciprocal denominator roots other than q^dim.
    #[arg(long)]
    betas: Option<String>,
}

#[derive(Debug, Args)]
struct MertensArgs {
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Args)]
struct JacksonArgs {
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    #[arg(long)]
    n: Option<usize>,
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.opts.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let o = &cli.opts;
    match cli.command {
        Command::Table1 => commands::table1(RunConfig::new("table1", file), o),
        Command::Converge => commands::converge(RunConfig::new("converge", file), o),
        Command::Alpha => commands::alpha(RunConfig::new("alpha", file), o),
        Command::Density => commands::density(RunConfig::new("density", file), o),
        Command::Counting => commands::counting(RunConfig::new("counting", file), o),
        Command::Collapse(a) => commands::collapse(RunConfig::new("collapse", file), o, a),
        Command::FfVerify(a) => commands::ff_verify(RunConfig::new("ff-verify", file), o, a),
        Command::CurveDrh(a) => commands::curve_drh(RunConfig::new("curve-drh", file), o, a),
        Command::Mertens(a) => commands::mertens(RunConfig::new("mertens", file), o, a),
        Command::Jackson(a) => commands::jackson(RunConfig::new("jackson", file), o, a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
