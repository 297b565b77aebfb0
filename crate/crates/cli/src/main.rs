mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forge_core::Budget;

#[derive(Parser, Debug)]
#[command(name = "forge", version, about = "Build and certify equations for small algebraic circuit classes")]
pub struct Cli {
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate a polynomial class.
    Class(ClassArgs),
    /// Hitting sets for an enumerated class.
    #[command(subcommand)]
    Hs(HsCommand),
    /// Build or verify equations.
    #[command(subcommand)]
    Eq(EqCommand),
    /// Nonzero vector vanishing on a hitting set (kernel or Siegel witness).
    Witness(WitnessArgs),
    /// Check usefulness on a class and non-triviality on witnesses.
    Verify(VerifyArgs),
    /// Definable (exponential-sum) classes.
    #[command(subcommand)]
    Vnp(VnpCommand),
    /// Re-run a recorded command and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ff,
    Int,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Greedy,
    Random,
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Field characteristic (ff mode).
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Field degree over F_p (ff mode).
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    /// Maximum number of gates.
    #[arg(long)]
    pub s: usize,
    /// Boolean summation variables; requires s = n + m.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Keep only members with coefficients in {-1, 0, 1}.
    #[arg(long)]
    pub delta: bool,
    /// Comma-separated integer constants, e.g. "0,1,-1".
    #[arg(long, allow_hyphen_values = true)]
    pub constants: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum HsCommand {
    /// Greedy or random hitting set over the default grid.
    Build(HsBuildArgs),
}

#[derive(Args, Debug)]
pub struct HsBuildArgs {
    #[arg(long)]
    pub class: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::Greedy)]
    pub strategy: Strategy,
    /// Degree of the extension K over F_p (ff mode); defaults to the least
    /// degree with |K| >= d².
    #[arg(long)]
    pub ext_r: Option<u32>,
    /// Integer grid side B (int mode); defaults to the class's grid bound.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Number of random points (random strategy).
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum EqCommand {
    /// Finite-field equation from a hitting set over an extension.
    BuildFf(EqBuildArgs),
    /// Integer equation from a hitting set in [B]^n.
    BuildInt(EqBuildArgs),
    /// Same as `forge verify`.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct EqBuildArgs {
    #[arg(long)]
    pub hs: PathBuf,
    /// Also write the compiled circuit here.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Refuse to compile integer equations with more linear factors.
    #[arg(long, default_value_t = 200_000)]
    pub max_factors: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long)]
    pub hs: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Equation manifest.
    #[arg(long = "eq")]
    pub equation: PathBuf,
    #[arg(long)]
    pub class: PathBuf,
    #[arg(long = "witness")]
    pub witnesses: Vec<PathBuf>,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum VnpCommand {
    /// Class, hitting set, equation and witness for a definable class.
    Demo(VnpDemoArgs),
}

#[derive(Args, Debug)]
pub struct VnpDemoArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long)]
    pub bound: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let budget = match Budget::from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: FORGE_BUDGET: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli, &args, &budget, true) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
