//! `sched`: run, sweep, verify and search the testing-scheduling algorithms,
//! and play the makespan adversary.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::Status;

#[derive(Debug, Parser)]
#[command(
    name = "sched",
    version,
    about = "Scheduling with testing: simulators and checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one algorithm on an instance file and print its ratio report.
    Run(RunArgs),
    /// Grid over alpha and beta; one CSV row per grid point with the worst trial.
    Sweep(SweepArgs),
    /// Check every invariant on random instances; exit 1 on any violation.
    Verify(VerifyArgs),
    /// Play the makespan lower-bound game against a baseline scheduler.
    Adversary(AdversaryArgs),
    /// Hill-climb for a high-ratio instance.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoId {
    Ae,
    Pcp,
    RandPcp,
    PcpParallel,
    UniformParallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchedulerKind {
    TestAll,
    NeverTest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    TotalCompletion,
    Makespan,
}

#[derive(Debug, Clone, Args)]
pub struct AlgoArgs {
    #[arg(long = "alg", value_enum)]
    pub alg: AlgoId,
    /// Test threshold; defaults to the algorithm's tuned value.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Test weight factor; defaults to the algorithm's tuned value.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Machine count (parallel algorithms only).
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TrialArgs {
    /// Largest instance size; trial i has 1 + i mod n jobs.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Upper-limit ratio cap; cycles through 1.5, 3 and 6 when omitted.
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long)]
    pub input: std::path::PathBuf,
    /// Ratio ceiling to check against instead of the theorem bound.
    #[arg(long)]
    pub bound: Option<f64>,
    #[arg(long, value_enum, default_value = "total-completion")]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long = "alg", value_enum)]
    pub alg: AlgoId,
    /// Comma-separated alpha values.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    /// Comma-separated beta values.
    #[arg(long, value_delimiter = ',')]
    pub betas: Vec<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub trials: TrialArgs,
    /// Emit every trial instead of the worst trial per grid point.
    #[arg(long)]
    pub per_trial: bool,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[command(flatten)]
    pub trials: TrialArgs,
    /// Ratio ceiling to check against instead of the theorem bound.
    #[arg(long)]
    pub bound: Option<f64>,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum)]
    pub scheduler: SchedulerKind,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub algo: AlgoArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => commands::run(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Adversary(a) => commands::adversary(&a),
        Command::Search(a) => commands::search(&a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation(msg)) => {
            eprintln!("sched: invariant violation: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("sched: {e}");
            ExitCode::from(2)
        }
    }
}
