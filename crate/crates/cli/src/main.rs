//! Deterministic command-line front end: a declarative spec file plus
//! optional CSV data in, aligned text / CSV / JSON out.
//!
//! Exit codes: 0 success, 2 parse or schema error, 3 numeric or domain
//! error.

mod commands;
mod ingest;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;
use credence::EstimationUtility;
use report::Format;

#[derive(Parser)]
#[command(
    name = "credence",
    version,
    about = "Bayesian inference and decision analysis on declarative spec files"
)]
struct Cli {
    /// Seed for any sampling the command performs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Decimal places in rendered numbers.
    #[arg(long, global = true, default_value_t = 4)]
    precision: usize,
    /// Suppress output (exit code only).
    #[arg(long, global = true, default_value_t = false)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArg {
    /// Path to the analysis spec file (JSON).
    spec: PathBuf,
}

#[derive(Args)]
struct ModelArgs {
    /// Path to the analysis spec file (JSON).
    spec: PathBuf,
    /// Override the spec's data source with a single-column CSV.
    #[arg(long)]
    data: Option<String>,
    /// Prior override: `jeffreys` replaces the spec's prior with the
    /// non-informative rule.
    #[arg(long)]
    prior: Option<String>,
}

impl ModelArgs {
    fn jeffreys(&self) -> Result<bool, CliError> {
        match self.prior.as_deref() {
            None => Ok(false),
            Some(p) if p.eq_ignore_ascii_case("jeffreys") => Ok(true),
            Some(other) => Err(CliError::Schema(vec![format!(
                "--prior only accepts `jeffreys`, got `{other}`"
            )])),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit prior hyperparameters from constraints.
    Elicit(SpecArg),
    /// Posterior update (conjugate, grid, or two-event spec).
    Update(ModelArgs),
    /// Predictive distribution of the next observation.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        /// Also report the predictive density/mass at this point.
        #[arg(long)]
        at: Option<f64>,
        /// Draw this many predictive samples (seeded).
        #[arg(long, default_value_t = 0)]
        draws: usize,
    },
    /// Point estimate of the parameter under a utility.
    Estimate {
        #[command(flatten)]
        model: ModelArgs,
        /// quadratic | absolute | relative-quadratic
        #[arg(long, default_value = "quadratic")]
        utility: String,
    },
    /// Highest-density region of the posterior.
    Hpd {
        #[command(flatten)]
        model: ModelArgs,
        /// Probability mass of the region.
        #[arg(long)]
        mass: f64,
    },
    /// Hypothesis contrast over a partition.
    Test(ModelArgs),
    /// Solve a single-stage decision problem.
    Decide(SpecArg),
    /// Solve a decision tree by backward induction.
    Tree(SpecArg),
    /// Value of information for an experiment.
    Voi(SpecArg),
    /// Score reported probabilities against outcomes.
    Score(SpecArg),
    /// Logarithmic discrepancy between two distributions.
    Discrepancy(SpecArg),
    /// Information carried by data or an experiment.
    Info(SpecArg),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let precision = cli.precision;
    let outcome = dispatch(&cli);
    match outcome {
        Ok(report) => {
            if !cli.quiet {
                print!("{}", report.render(cli.format, precision));
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Schema(problems)) => {
            for p in &problems {
                eprintln!("error: {p}");
            }
            ExitCode::from(2)
        }
        Err(CliError::Numeric(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<report::Report, CliError> {
    let precision = cli.precision;
    match &cli.command {
        Command::Elicit(args) => {
            let spec = load(&args.spec)?;
            commands::run_elicit(&spec, precision)
        }
        Command::Update(args) => {
            let spec = load(&args.spec)?;
            if spec.event.is_some() {
                commands::run_event(&spec)
            } else {
                commands::run_update(&spec, args.data.as_deref(), args.jeffreys()?, precision)
            }
        }
        Command::Predict { model, at, draws } => {
            let spec = load(&model.spec)?;
            if model.jeffreys()? {
                return Err(CliError::Schema(vec![
                    "`predict` does not take --prior jeffreys; set it in the spec".into(),
                ]));
            }
            commands::run_predict(&spec, model.data.as_deref(), *at, *draws, cli.seed, precision)
        }
        Command::Estimate { model, utility } => {
            let spec = load(&model.spec)?;
            let u = match utility.as_str() {
                "quadratic" => EstimationUtility::Quadratic,
                "absolute" => EstimationUtility::Absolute,
                "relative-quadratic" => EstimationUtility::RelativeQuadratic,
                other => {
                    return Err(CliError::Schema(vec![format!(
                        "unknown utility `{other}` (quadratic, absolute, relative-quadratic)"
                    )]))
                }
            };
            commands::run_estimate(&spec, model.data.as_deref(), u, model.jeffreys()?, precision)
        }
        Command::Hpd { model, mass } => {
            let spec = load(&model.spec)?;
            commands::run_hpd(&spec, model.data.as_deref(), *mass, model.jeffreys()?, precision)
        }
        Command::Test(args) => {
            let spec = load(&args.spec)?;
            commands::run_test(&spec, args.data.as_deref(), args.jeffreys()?, precision)
        }
        Command::Decide(args) => {
            let spec = load(&args.spec)?;
            commands::run_decide(&spec)
        }
        Command::Tree(args) => {
            let spec = load(&args.spec)?;
            commands::run_tree(&spec)
        }
        Command::Voi(args) => {
            let spec = load(&args.spec)?;
            commands::run_voi(&spec)
        }
        Command::Score(args) => {
            let spec = load(&args.spec)?;
            commands::run_score(&spec)
        }
        Command::Discrepancy(args) => {
            let spec = load(&args.spec)?;
            commands::run_discrepancy(&spec)
        }
        Command::Info(args) => {
            let spec = load(&args.spec)?;
            commands::run_info(&spec)
        }
    }
}

fn load(path: &std::path::Path) -> Result<spec::AnalysisSpec, CliError> {
    spec::parse_spec(path).map_err(CliError::Schema)
}
