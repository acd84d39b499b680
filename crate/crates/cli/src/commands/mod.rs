mod analysis;
mod simulate;

use std::path::PathBuf;

use clap::Args;

use crate::args::{AngleArg, EfficiencyArg, ModelArg, SignArg, SourceArg};
use crate::Format;

pub use analysis::{btcc, predict, scan, tables};
pub use simulate::simulate;

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// key = value file supplying any flag not given on the command line
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Pair-detection efficiency η
    #[arg(long)]
    pub eta: Option<f64>,
    /// Visibility
    #[arg(long = "F")]
    pub f: Option<f64>,
    /// parallel or anti
    #[arg(long)]
    pub sign: Option<SignArg>,
    /// Wing-1 analyzer, e.g. 0deg
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<AngleArg>,
    /// Wing-2 analyzer, e.g. 22.5deg
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<AngleArg>,
    /// text or json
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long = "F")]
    pub f: Option<f64>,
    #[arg(long)]
    pub sign: Option<SignArg>,
    /// Grid points over (0, 2π/3]
    #[arg(long)]
    pub grid: Option<usize>,
    /// CSV destination (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot here
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Random inefficiency tuples to check
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BtccArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in model, e.g. det_sign or malus_lossy(0.8)
    #[arg(long)]
    pub model: Option<ModelArg>,
    /// Common analyzer direction of both wings
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<AngleArg>,
    #[arg(long)]
    pub samples: Option<u64>,
    /// Sharpness tolerance on |ε|
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// qm or a built-in model
    #[arg(long)]
    pub source: Option<SourceArg>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long = "F")]
    pub f: Option<f64>,
    #[arg(long)]
    pub sign: Option<SignArg>,
    /// Quad parameter; ignored when all four analyzer angles are given
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<AngleArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<AngleArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<AngleArg>,
    #[arg(long = "a_prime", allow_hyphen_values = true)]
    pub a_prime: Option<AngleArg>,
    #[arg(long = "b_prime", allow_hyphen_values = true)]
    pub b_prime: Option<AngleArg>,
    #[arg(long = "pairs_per_setting")]
    pub pairs_per_setting: Option<u64>,
    /// Wing-1 detector: constant or cos(base,amplitude)
    #[arg(long)]
    pub efficiency1: Option<EfficiencyArg>,
    #[arg(long)]
    pub efficiency2: Option<EfficiencyArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; does not affect results
    #[arg(long)]
    pub workers: Option<usize>,
    /// Directory receiving counts.csv and report.json
    #[arg(long = "out_dir")]
    pub out_dir: Option<PathBuf>,
}
