//! `randset` — batch frontend over the library of the same name.
//!
//! Every command reads JSON inputs, runs exactly one library analysis, and
//! emits one JSON or CSV report to stdout or `--out`. All randomness flows
//! from `--seed` (default 0), so seeded runs are byte-for-byte reproducible.
//! On failure nothing is written to the output path; a structured error
//! object goes to stderr and the exit code is nonzero.

mod commands;
mod reports;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use randset::SimulationConfig;
use reports::{ErrorBody, ErrorReport};

#[derive(Parser)]
#[command(
    name = "randset",
    version,
    about = "Kernel distances, stability analysis, and permutation tests for random sets on finite measure spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect space files.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Distances between two sets or between two distributions.
    #[command(subcommand)]
    Distance(DistanceCmd),
    /// Project a set onto a pairwise-disjoint system of sets.
    Project(ProjectArgs),
    /// Stability checks and convergence tables for powers of random sets.
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Two-sample permutation tests, discretization, and simulations.
    #[command(subcommand)]
    Test(TestCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; CSV is available for tabular reports only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum SpaceCmd {
    /// Parse a space file and report its weights and total mass.
    Validate {
        /// Space file.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum DistanceCmd {
    /// Kernels, metric, and angle between two sets.
    Sets {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// First set file.
        #[arg(long)]
        input: PathBuf,
        /// Second set file.
        #[arg(long)]
        input_b: PathBuf,
        /// Exponent of the metric family (the value is alpha-independent up
        /// to the exponent rule min(1, 1/alpha)).
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// N-distances between two distributions of random sets.
    Dists {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// First distribution file.
        #[arg(long)]
        input: PathBuf,
        /// Second distribution file.
        #[arg(long)]
        input_b: PathBuf,
        /// Order of the additional L^p distance in the report.
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct ProjectArgs {
    /// Space file.
    #[arg(long)]
    space: PathBuf,
    /// Set file to project.
    #[arg(long)]
    input: PathBuf,
    /// System file with the pairwise-disjoint target sets.
    #[arg(long)]
    input_b: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Decide stability of a distribution and report the power constants.
    Check {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// Distribution file.
        #[arg(long)]
        input: PathBuf,
        /// Largest power to verify.
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        /// Clustering tolerance on the mean-function levels.
        #[arg(long, default_value_t = randset::STABILITY_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convergence of powers to the indicator of the common intersection.
    T1 {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// Distribution file; the intersection of its support must itself be
        /// a support atom with positive probability.
        #[arg(long)]
        input: PathBuf,
        /// Largest power to tabulate.
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Scaled convergence of powers to a stable reference distribution.
    T2 {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// Distribution file to power up.
        #[arg(long)]
        input: PathBuf,
        /// Stable reference distribution file.
        #[arg(long)]
        input_b: PathBuf,
        /// Largest power to tabulate.
        #[arg(long, default_value_t = 30)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact power identity for geometric distributions on a nested chain.
    T3 {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// System file with the strictly nested chain of sets.
        #[arg(long)]
        input: PathBuf,
        /// Geometric parameter in (0, 1).
        #[arg(long)]
        a: f64,
        /// Largest power to tabulate.
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum TestCmd {
    /// Permutation two-sample test on samples of sets.
    Sets {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// First sample file.
        #[arg(long)]
        input: PathBuf,
        /// Second sample file.
        #[arg(long)]
        input_b: PathBuf,
        /// Monte-Carlo permutation count.
        #[arg(long, default_value_t = 999)]
        n_permutations: usize,
        /// Master seed; fixed seeds give byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate all distinct re-splits instead of sampling them.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Permutation two-sample test on samples of real vectors.
    Vectors {
        /// First vectors file.
        #[arg(long)]
        input: PathBuf,
        /// Second vectors file.
        #[arg(long)]
        input_b: PathBuf,
        /// Exponent of the Euclidean-distance kernel, in (0, 2).
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Monte-Carlo permutation count.
        #[arg(long, default_value_t = 999)]
        n_permutations: usize,
        /// Master seed; fixed seeds give byte-identical reports.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate all distinct re-splits instead of sampling them.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reduce a sample of sets to per-cell observation vectors.
    Discretize {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// Sample file.
        #[arg(long)]
        input: PathBuf,
        /// Partition file with the observation cells.
        #[arg(long)]
        input_b: PathBuf,
        /// Record the measure fraction of each intersection instead of the
        /// nonemptiness bit.
        #[arg(long)]
        measure: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rejection rate when both samples come from one distribution.
    SimulateLevel {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// Distribution file.
        #[arg(long)]
        input: PathBuf,
        /// Observations per sample in each trial.
        #[arg(long, default_value_t = 20)]
        sample_size: usize,
        /// Permutations per trial.
        #[arg(long, default_value_t = 999)]
        n_permutations: usize,
        /// Number of simulated trials.
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// Rejection level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Master seed; trial t derives its own sample and test seeds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rejection rate when the samples come from two different distributions.
    SimulatePower {
        /// Space file.
        #[arg(long)]
        space: PathBuf,
        /// First distribution file.
        #[arg(long)]
        input: PathBuf,
        /// Second distribution file.
        #[arg(long)]
        input_b: PathBuf,
        /// Observations per sample in each trial.
        #[arg(long, default_value_t = 10)]
        sample_size: usize,
        /// Permutations per trial.
        #[arg(long, default_value_t = 199)]
        n_permutations: usize,
        /// Number of simulated trials.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Rejection level.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Master seed; trial t derives its own sample and test seeds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Error shell rendered as a structured object on stderr.
struct CliError {
    kind: &'static str,
    message: String,
}

impl CliError {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            kind: "Io",
            message: format!("{}: {err}", path.display()),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Self {
            kind: "InvalidParameter",
            message: message.into(),
        }
    }

    fn render(&self) -> String {
        serde_json::to_string_pretty(&ErrorReport {
            error: ErrorBody {
                kind: self.kind,
                message: self.message.clone(),
            },
        })
        .expect("error reports are serializable")
    }
}

impl From<randset::Error> for CliError {
    fn from(err: randset::Error) -> Self {
        Self {
            kind: err.kind(),
            message: err.to_string(),
        }
    }
}

/// Print the finished report, or write it whole; a failed command never
/// creates the output file.
fn emit(text: String, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Space(SpaceCmd::Validate { input, output }) => {
            let text = commands::space_validate(&input, output.format)?;
            emit(text, &output)
        }
        Command::Distance(DistanceCmd::Sets {
            space,
            input,
            input_b,
            alpha,
            output,
        }) => {
            let text = commands::distance_sets(&space, &input, &input_b, alpha, output.format)?;
            emit(text, &output)
        }
        Command::Distance(DistanceCmd::Dists {
            space,
            input,
            input_b,
            p,
            output,
        }) => {
            let text = commands::distance_dists(&space, &input, &input_b, p, output.format)?;
            emit(text, &output)
        }
        Command::Project(ProjectArgs {
            space,
            input,
            input_b,
            output,
        }) => {
            let text = commands::project(&space, &input, &input_b, output.format)?;
            emit(text, &output)
        }
        Command::Stability(StabilityCmd::Check {
            space,
            input,
            n_max,
            tol,
            output,
        }) => {
            let text = commands::stability_check(&space, &input, n_max, tol, output.format)?;
            emit(text, &output)
        }
        Command::Stability(StabilityCmd::T1 {
            space,
            input,
            n_max,
            output,
        }) => {
            let text = commands::stability_t1(&space, &input, n_max, output.format)?;
            emit(text, &output)
        }
        Command::Stability(StabilityCmd::T2 {
            space,
            input,
            input_b,
            n_max,
            output,
        }) => {
            let text = commands::stability_t2(&space, &input, &input_b, n_max, output.format)?;
            emit(text, &output)
        }
        Command::Stability(StabilityCmd::T3 {
            space,
            input,
            a,
            n_max,
            output,
        }) => {
            let text = commands::stability_t3(&space, &input, a, n_max, output.format)?;
            emit(text, &output)
        }
        Command::Test(TestCmd::Sets {
            space,
            input,
            input_b,
            n_permutations,
            seed,
            exact,
            output,
        }) => {
            let text = commands::test_sets(
                &space,
                &input,
                &input_b,
                n_permutations,
                seed,
                exact,
                output.format,
            )?;
            emit(text, &output)
        }
        Command::Test(TestCmd::Vectors {
            input,
            input_b,
            r,
            n_permutations,
            seed,
            exact,
            output,
        }) => {
            let text = commands::test_vectors(
                &input,
                &input_b,
                r,
                n_permutations,
                seed,
                exact,
                output.format,
            )?;
            emit(text, &output)
        }
        Command::Test(TestCmd::Discretize {
            space,
            input,
            input_b,
            measure,
            output,
        }) => {
            let text = commands::test_discretize(&space, &input, &input_b, measure, output.format)?;
            emit(text, &output)
        }
        Command::Test(TestCmd::SimulateLevel {
            space,
            input,
            sample_size,
            n_permutations,
            trials,
            alpha,
            seed,
            output,
        }) => {
            let cfg = SimulationConfig {
                sample_size,
                n_permutations,
                trials,
                alpha,
                seed,
            };
            let text = commands::simulate_level(&space, &input, cfg, output.format)?;
            emit(text, &output)
        }
        Command::Test(TestCmd::SimulatePower {
            space,
            input,
            input_b,
            sample_size,
            n_permutations,
            trials,
            alpha,
            seed,
            output,
        }) => {
            let cfg = SimulationConfig {
                sample_size,
                n_permutations,
                trials,
                alpha,
                seed,
            };
            let text = commands::simulate_power(&space, &input, &input_b, cfg, output.format)?;
            emit(text, &output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.render());
            ExitCode::FAILURE
        }
    }
}
