//! `yaglom`: emit bound curves and feasibility grids, build desk-scale
//! spherical codes and run the verification suite.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

const SUBCOMMANDS: &[&str] = &["bounds", "region", "build", "verify"];

#[derive(Debug, Parser)]
#[command(name = "yaglom", version, about, args_override_self = true)]
struct Cli {
    /// Read default flag values from a `key = value` file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when omitted). Relative paths are resolved
    /// against $YAGLOM_OUTPUT_DIR when it is set.
    #[arg(short, long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Row format for emitted data.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample rate curves in x = ln(rho), one row per point.
    #[command(args_override_self = true)]
    Bounds(BoundsArgs),
    /// Evaluate the attainable-region residual on a grid of (ln rho, ln p).
    #[command(args_override_self = true)]
    Region(RegionArgs),
    /// Build a code, lift it to the sphere and summarize it.
    #[command(args_override_self = true)]
    Build(BuildArgs),
    /// Run the acceptance checks.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Curve kinds, comma separated: shannon, lattice, lattice_shifted,
    /// lachaud_stern, gilbert_yaglom, tvz_line, envelope, scaled_shannon.
    #[arg(long, required = true, value_delimiter = ',')]
    kind: Vec<String>,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 101)]
    samples: usize,
    /// Alphabet size for gilbert_yaglom.
    #[arg(long)]
    q: Option<u32>,
    /// Prime for tvz_line: a decimal integer or `large` for the 137-digit
    /// operating prime.
    #[arg(long)]
    p: Option<String>,
    /// Number of BCH roots for tvz_line.
    #[arg(long)]
    t: Option<u64>,
    /// Relative inner distance t/(p-1) for tvz_line, instead of --t.
    #[arg(long)]
    tau: Option<f64>,
    /// Scale factor for scaled_shannon.
    #[arg(long)]
    lambda: Option<f64>,
    /// Envelope constant(s) c = x + 2y; several values give a sweep.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    c: Vec<f64>,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[arg(long, default_value_t = 0.98)]
    lambda: f64,
    #[arg(long, default_value_t = -1000.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = -300.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = 150.0)]
    y_min: f64,
    #[arg(long, default_value_t = 500.0)]
    y_max: f64,
    #[arg(long, default_value_t = 200)]
    nx: usize,
    #[arg(long, default_value_t = 200)]
    ny: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InnerKind {
    Bch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OuterKind {
    Rs,
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Greedy lexicographic code in Z_q^n with squared distance d.
    #[arg(long, conflicts_with_all = ["inner", "outer"])]
    gilbert: bool,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<u64>,
    /// Inner code: Lee-metric BCH over GF(p) of length p - 1.
    #[arg(long, value_enum)]
    inner: Option<InnerKind>,
    /// Outer code: Reed-Solomon over GF(p^k) with k the inner dimension.
    #[arg(long, value_enum, requires = "inner")]
    outer: Option<OuterKind>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    n_out: Option<usize>,
    #[arg(long)]
    k_out: Option<usize>,
    /// Random codeword pairs for distance sampling on large codes.
    #[arg(long, default_value_t = 100_000)]
    pairs: u64,
    /// Codewords lifted to the sphere when the code is larger than this.
    #[arg(long, default_value_t = 2000)]
    sample_points: usize,
    /// Also write the spherical points, one row of n + 1 reals each.
    #[arg(long, value_name = "PATH")]
    points: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Run only criteria matching an id, name or tag (e.g. saddle, operating_point).
    #[arg(long)]
    only: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match config::splice(std::env::args_os().collect(), SUBCOMMANDS) {
        Ok(args) => args,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

/// A closed downstream pipe (`yaglom region | head`) is not an error.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
