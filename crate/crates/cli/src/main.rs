//! `holepred`: generate synthetic sweeps, train a predictor, evaluate it.
//!
//! Exit codes: 0 ok, 2 usage, 3 numerical failure or divergence, 4 data or
//! format error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(holepred::Error),
    /// Training blew up; outputs were still written.
    Diverged(String),
}

impl From<holepred::Error> for CliError {
    fn from(e: holepred::Error) -> Self {
        Self::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Core(holepred::Error::Invalid { .. }) => 2,
            Self::Core(holepred::Error::Numerical { .. }) | Self::Diverged(_) => 3,
            Self::Core(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) | Self::Diverged(m) => f.write_str(m),
            Self::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "holepred",
    version,
    about = "Spectrum-hole prediction with GA-seeded Levenberg-Marquardt neural networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)] // parsed once per process
enum Command {
    /// Simulate power sweeps from a two-state Markov channel model.
    Generate(GenerateArgs),
    /// List the built-in service bands.
    Bands(BandsArgs),
    /// Binarize, window, split and train a predictor.
    Train(TrainArgs),
    /// Evaluate a trained model on the recorded split.
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
pub struct GenerateArgs {
    /// `key = value` config file; flags win over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Band preset; sets the channel count [default: none].
    #[arg(long)]
    pub band: Option<String>,
    /// Number of channels [default: 1, or the band's channel count].
    #[arg(long)]
    pub channels: Option<usize>,
    /// Number of sweeps (time slots) [default: 2700].
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Sweep revisit time in seconds [default: 16].
    #[arg(long)]
    pub slot_duration: Option<f64>,
    /// Idle→busy transition probability per slot [default: 0.1].
    #[arg(long)]
    pub p_idle_to_busy: Option<f64>,
    /// Busy→idle transition probability per slot [default: 0.2].
    #[arg(long)]
    pub p_busy_to_idle: Option<f64>,
    /// Mean busy power in dBm [default: -83].
    #[arg(long, allow_hyphen_values = true)]
    pub busy_power: Option<f64>,
    /// Busy power standard deviation in dB [default: 2].
    #[arg(long)]
    pub busy_sigma: Option<f64>,
    /// Mean noise floor in dBm [default: -95].
    #[arg(long, allow_hyphen_values = true)]
    pub noise_floor: Option<f64>,
    /// Noise floor standard deviation in dB [default: 2].
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Output sweep CSV; the channel model is written next to it as `<out>.meta.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BandsArgs {
    /// Listing format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,
}

#[derive(Args)]
pub struct TrainArgs {
    /// `key = value` config file; flags win over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed for initialization, GA, shuffling and splitting [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sweep CSV or occupancy CSV (`slot,ch_<id>,...` or `slot,bit`).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output directory for model.json, logs and run_config.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Band preset the sweep file must match; also the report label [default: none].
    #[arg(long)]
    pub band: Option<String>,
    /// Channel to train on [default: 0].
    #[arg(long)]
    pub channel: Option<usize>,
    /// Busy threshold in dBm, power >= threshold is busy. Required for measured
    /// sweeps; defaults to the generator's midpoint for synthetic sweeps.
    #[arg(long, allow_hyphen_values = true)]
    pub threshold_dbm: Option<f64>,
    /// Window length τ, the number of past slots per input [default: 10].
    #[arg(long)]
    pub order: Option<usize>,
    /// Hidden layer sizes, comma separated; empty for none [default: 10].
    #[arg(long)]
    pub hidden: Option<String>,
    /// Trainer [default: ga+lm].
    #[arg(long, value_parser = ["gd", "lm", "ga+lm"])]
    pub trainer: Option<String>,
    /// Gradient-descent learning rate [default: 0.1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Error goal per training pattern; training stops once the summed
    /// error falls below theta × patterns [default: 0.01].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Initial Levenberg-Marquardt damping [default: 0.001].
    #[arg(long)]
    pub mu0: Option<f64>,
    /// Damping update factor [default: 10].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Damping at which training counts as stalled [default: 1e10].
    #[arg(long)]
    pub mu_max: Option<f64>,
    /// LM iterations (step attempts) or GD epochs [default: 1000].
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// GA population size, even [default: 50].
    #[arg(long)]
    pub pop_size: Option<usize>,
    /// GA generations [default: 100].
    #[arg(long)]
    pub generations: Option<usize>,
    /// GA crossover probability [default: 0.8].
    #[arg(long)]
    pub crossover_prob: Option<f64>,
    /// GA per-gene mutation probability [default: 0.05].
    #[arg(long)]
    pub mutation_prob: Option<f64>,
    /// GA crossover operator [default: arithmetic].
    #[arg(long, value_parser = ["one-point", "arithmetic"])]
    pub crossover: Option<String>,
    /// GA mutation operator [default: gaussian].
    #[arg(long, value_parser = ["gaussian", "uniform"])]
    pub mutation: Option<String>,
    /// Standard deviation of Gaussian mutation [default: 0.1].
    #[arg(long)]
    pub mutation_sigma: Option<f64>,
    /// Members copied unchanged into each generation [default: 1].
    #[arg(long)]
    pub elitism: Option<usize>,
    /// Evaluate GA fitness on this many evenly spaced patterns, or `all` [default: all].
    #[arg(long)]
    pub fitness_patterns: Option<String>,
    /// Training fraction of the windowed patterns [default: 0.5].
    #[arg(long)]
    pub split: Option<f64>,
    /// Split mode [default: chrono].
    #[arg(long, value_parser = ["chrono", "shuffle"])]
    pub split_mode: Option<String>,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// Trained model.json; its directory must hold the training run_config.
    #[arg(long)]
    pub model: PathBuf,
    /// Data file [default: the training input].
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output directory for the summary and traces.
    #[arg(long)]
    pub out: PathBuf,
    /// Report label [default: the training band, else the input file name].
    #[arg(long)]
    pub band: Option<String>,
    /// Channels to evaluate, comma separated [default: the training channel].
    #[arg(long)]
    pub channel: Option<String>,
    /// Busy threshold in dBm [default: the training threshold].
    #[arg(long, allow_hyphen_values = true)]
    pub threshold_dbm: Option<f64>,
    /// Window length; must match the model [default: the model's].
    #[arg(long)]
    pub order: Option<usize>,
    /// Which side of the recorded split to evaluate.
    #[arg(long, default_value = "test", value_parser = ["train", "test"])]
    pub side: String,
    /// Summary format.
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    pub format: String,
    /// Also write a per-slot `slot,predicted,actual` trace per channel.
    #[arg(long)]
    pub trace: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Bands(args) => commands::bands(&args),
        Command::Train(args) => commands::train(&args),
        Command::Evaluate(args) => commands::evaluate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
