//! `sfm`: validate models, run inference, contrasts and queries, check
//! dependencies, run scenario corpora and work with probabilistic models.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage or input error,
//! 3 enumeration budget exceeded. Diagnostics go to stderr.

mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "sfm",
    version,
    about = "Structural functional models: inference, contrasts and causal utterances"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of assignments an enumeration may visit.
    #[arg(long, global = true, default_value_t = sfm_core::Budget::DEFAULT.0)]
    pub budget: u64,
    /// Largest number of solutions `csp` reports.
    #[arg(long, global = true)]
    pub limit: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a model (or the model of a scenario) is well formed.
    Validate { file: PathBuf },
    /// Forward inference from an exo-assignment.
    Infer {
        file: PathBuf,
        /// Complete exo-assignment, e.g. `A:1, C:0`.
        #[arg(long)]
        exo: Option<String>,
        /// Evaluate only what these nodes need, e.g. `B,D`.
        #[arg(long)]
        targets: Option<String>,
    },
    /// Contrast an actual world with a default world or a tweak.
    Contrast {
        file: PathBuf,
        /// Actual world; an exo-assignment is completed by inference.
        #[arg(long)]
        actual: Option<String>,
        #[arg(long, conflicts_with = "tweak")]
        default: Option<String>,
        /// Exo values to change in the actual world.
        #[arg(long)]
        tweak: Option<String>,
    },
    /// Backward inference: values of the targets consistent with what is known.
    Csp {
        file: PathBuf,
        #[arg(long)]
        known: Option<String>,
        #[arg(long)]
        targets: Option<String>,
    },
    /// Scenario corpora.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Every world the model permits.
    Team { file: PathBuf },
    /// Does `x` functionally determine `y` across the model's worlds?
    Fd {
        file: PathBuf,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
    },
    /// A root or a cycle of a directed graph given as `SRC DST` lines.
    Gmt { file: PathBuf },
    /// Probabilistic models.
    Prob {
        #[command(subcommand)]
        action: ProbAction,
    },
    /// Evaluation counts of vanilla versus contrastive inference.
    Bench {
        file: PathBuf,
        /// Reference world, completed by inference when only exo is given.
        #[arg(long)]
        actual: String,
        /// One tweak per flag.
        #[arg(long, required = true)]
        tweak: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ScenarioAction {
    /// Run a scenario file, or every `*.sfm` file of a directory.
    Run { path: PathBuf },
    /// Print a scenario in canonical form.
    Print { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct ProbModel {
    /// A model file, or a `.cpt` table imported as a Bayesian network.
    pub file: PathBuf,
    /// `Node=source:{v:p, ...}`, `Node={v:p, ...}` or `Node=uniform`.
    #[arg(long)]
    pub dist: Vec<String>,
    /// Values for exo-nodes without a distribution.
    #[arg(long)]
    pub exo: Option<String>,
    /// Report the marginal on these nodes only.
    #[arg(long)]
    pub nodes: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ProbAction {
    /// Exact distribution over worlds.
    Push {
        #[command(flatten)]
        model: ProbModel,
    },
    /// Seeded Monte-Carlo counts of worlds.
    Sample {
        #[command(flatten)]
        model: ProbModel,
        #[arg(long, short = 'n', default_value_t = 100_000)]
        samples: u64,
        /// Also report the total-variation distance to the exact law.
        #[arg(long)]
        compare: bool,
    },
    /// Import a CPT table and print the equivalent model and noise laws.
    ImportBn { file: PathBuf },
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
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("sfm: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
