use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dppc",
    version,
    about = "Private partial set cover and clinic placement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a partial set cover instance.
    SolvePsc(SolvePscArgs),
    /// Place clinics on a mobility instance.
    SolveVacc(SolveVaccArgs),
    /// Sweep a parameter grid and report per-cell statistics.
    Bench(BenchArgs),
    /// Write generated instances.
    #[command(subcommand)]
    Gen(GenCommand),
}

macro_rules! value_enum_from_str {
    ($t:ty) => {
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PscAlgo {
    /// Private greedy permutation with a private threshold.
    Greedy,
    /// Private maximum coverage with a search over the optimum size.
    Maxcov,
    /// Non-private greedy.
    Baseline,
    /// Exhaustive optimum (m <= 24).
    Exact,
}
value_enum_from_str!(PscAlgo);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VaccAlgo {
    Private,
    Baseline,
}
value_enum_from_str!(VaccAlgo);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphaModeArg {
    Heuristic,
    Theoretical,
}
value_enum_from_str!(AlphaModeArg);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    Psc,
    Vacc,
}
value_enum_from_str!(Problem);

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Index of the first trial; trial `t` draws from the child seed `t` of `--seed`.
    #[arg(long)]
    pub trial_offset: Option<u64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolvePscArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub algo: Option<PscAlgo>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveVaccArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub algo: Option<VaccAlgo>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha_mode: Option<AlphaModeArg>,
    /// Calibration constant of the theoretical multiplier.
    #[arg(long)]
    pub alpha_constant: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub problem: Option<Problem>,
    /// `greedy` or `maxcov` for set-cover sweeps.
    #[arg(long)]
    pub algo: Option<PscAlgo>,
    /// Grid, e.g. `0.6,0.8`.
    #[arg(long)]
    pub rho: Option<String>,
    /// Grid, e.g. `0.25,0.5,1,2,4`.
    #[arg(long)]
    pub eps: Option<String>,
    /// Grid, e.g. `4..16`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub alpha_mode: Option<AlphaModeArg>,
    #[arg(long)]
    pub alpha_constant: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum GenCommand {
    /// Two stars joined at their centres, as a vertex-cover set system.
    Star {
        #[arg(long)]
        n: usize,
        /// Leaf-to-leaf edges added across the stars.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clustered synthetic mobility instance.
    Mobility {
        #[arg(long, default_value_t = 1000)]
        people: usize,
        #[arg(long, default_value_t = 100)]
        locations: usize,
        #[arg(long, default_value_t = 5)]
        clusters: usize,
        #[arg(long, default_value_t = 0.5)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a set system into a clinic instance whose radius-0 solutions are covers.
    ReducePsc {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random coverable set system.
    RandomPsc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
