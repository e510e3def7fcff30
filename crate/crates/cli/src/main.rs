use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Evaluate multi-label predictions under capacity-based losses.
#[derive(Parser, Debug)]
#[command(name = "capaloss", version, about)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Tolerance for measure validation and diagonal crossings.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect and convert measure files.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Per-instance and mean loss of a prediction file.
    Loss {
        #[arg(long)]
        loss: String,
        predictions: PathBuf,
    },
    /// Loss-minimizing binary prediction for a label distribution.
    Bayes {
        #[arg(long)]
        loss: String,
        distribution: PathBuf,
        /// Reject distributions whose mass is not 1 instead of renormalizing.
        #[arg(long)]
        strict: bool,
    },
    /// Mean loss of every method across a family parameter range.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also write curves (and pairwise traces for --pair) as JSON.
        #[arg(long)]
        plot_json: Option<PathBuf>,
        /// Method pairs `a:b` to include in the JSON output.
        #[arg(long = "pair")]
        pairs: Vec<String>,
        #[arg(required = true)]
        predictions: Vec<PathBuf>,
    },
    /// Trace of two methods' losses with diagonal crossings and curvature.
    Pairwise {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        method_a: String,
        #[arg(long)]
        method_b: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        predictions: Vec<PathBuf>,
    },
    /// Dataset statistics of prediction files.
    Meta {
        #[arg(required = true)]
        predictions: Vec<PathBuf>,
    },
    /// Write the synthetic two-method fixture.
    Fixture {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        labels: usize,
        #[arg(long, default_value_t = 8)]
        contexts: usize,
        #[arg(long, default_value_t = 250)]
        instances_per_context: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MeasureCmd {
    /// Check the capacity axioms; exit 2 when violated.
    Validate { file: PathBuf },
    /// Möbius masses of a measure.
    Moebius {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense capacity table of a measure.
    Expand {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure of a covering error over the given label subsets.
    FromCovering {
        #[arg(long = "labels")]
        k: usize,
        /// Comma-separated 1-based labels; repeat for each subset.
        #[arg(long = "subset", required = true)]
        subsets: Vec<String>,
        /// One positive weight per subset (default: uniform).
        #[arg(long = "weight")]
        weights: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// `binom` or `poly`.
    #[arg(long)]
    pub family: String,
    /// Polynomial exponents: a point count for a log grid on [1, 1000], or a comma list.
    #[arg(long)]
    pub alpha_grid: Option<String>,
    /// Binomial orders `a..b` (inclusive); defaults to 1..K.
    #[arg(long)]
    pub k_range: Option<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    log::debug!("running with {} threads", pool.current_num_threads());
    match pool.install(|| commands::run(&cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
