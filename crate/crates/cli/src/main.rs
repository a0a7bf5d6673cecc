use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qtime_cli::{run, Command, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "qtime",
    version,
    about = "Time observables for bound quantum systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// T_G matrix, [T_G, H], and commutator diagnostics
    Tg(Opts),
    /// Canonical time density table and covariance check
    Canonical(Opts),
    /// Convergence of the Cauchy sequence toward an eigenstate
    Cauchy(Opts),
    /// Sublevel-measure scan and log-modulus integral of f(t)
    Zeroset(Opts),
    /// Demonstrate the covariance failure, non-invariance of S, and null S-membership times
    Claims(Opts),
}

#[derive(Args, Debug)]
struct Opts {
    /// Spectrum/state JSON document
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    output: PathBuf,
    /// Grid points (time grids, N range for `cauchy`, panels for `zeroset`)
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Time horizon / analysis window
    #[arg(long = "tau-max", default_value_t = 20.0)]
    tau_max: f64,
    /// Sublevel threshold (repeatable)
    #[arg(long = "eps")]
    eps: Vec<f64>,
    /// Seed for random states
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target eigenstate index for `cauchy`
    #[arg(long, default_value_t = 0)]
    target: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match cli.command {
        Cmd::Tg(o) => (Command::Tg, o),
        Cmd::Canonical(o) => (Command::Canonical, o),
        Cmd::Cauchy(o) => (Command::Cauchy, o),
        Cmd::Zeroset(o) => (Command::Zeroset, o),
        Cmd::Claims(o) => (Command::Claims, o),
    };
    let config = RunConfig {
        command,
        input_path: opts.input,
        output_path: opts.output,
        grid: opts.grid,
        tau_max: opts.tau_max,
        epsilons: opts.eps,
        seed: opts.seed,
        target: opts.target,
    };
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
