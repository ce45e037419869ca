//! `crowdfund`: solve threshold crowdfunding games from the command line.
//!
//! Exit codes: 0 success, 1 i/o error, 2 parameter error, 3 validation
//! failure, 4 internal-consistency error.

mod commands;
mod config;
mod failure;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crowdfund::equilibrium::GameParams;
use crowdfund::sweep::Metric;
use crowdfund::table::{Population, TableSpec, ThresholdRule};
use crowdfund::validate::ValidationGrid;

use commands::Style;
use config::Config;
use failure::Failure;
use render::Format;

const DEFAULT_SIMULATE_TRIALS: u64 = 1_000_000;
const DEFAULT_VALIDATE_TRIALS: u64 = 100_000;
const DEFAULT_SEED: u64 = 1;
const MAX_DECIMALS: u32 = 15;

#[derive(Parser, Debug)]
#[command(name = "crowdfund", version, about = "Equilibria of threshold crowdfunding games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format [default: json]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Decimal places for rounded display values [default: 3]
    #[arg(long, global = true)]
    decimals: Option<u32>,
    /// Read defaults from a key=value file; flags take precedence
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write output to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one game and report its equilibrium and indices
    Solve {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Compute the grid of indices over accuracies, populations and threshold rules
    Table {
        /// Comma-separated signal accuracies
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        /// Comma-separated population sizes; `inf` selects the limit row
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<Population>>,
        /// Comma-separated threshold fractions such as 1/3,1/2,9/10
        #[arg(long, value_delimiter = ',')]
        b_rules: Option<Vec<ThresholdRule>>,
    },
    /// Evaluate every threshold B = 1..n and report the best one
    Sweep {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
        /// theta or penetration [default: theta]
        #[arg(long)]
        metric: Option<Metric>,
    },
    /// Large-population limits for threshold fraction q
    Asymptote {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Monte Carlo estimates of the indices at the equilibrium (or a given lambda)
    Simulate {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
        /// Low-type commit probability; defaults to the equilibrium value
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the analytic indices against enumeration and simulation
    Validate {
        /// Comma-separated populations for the enumeration checks
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<u64>>,
        /// Comma-separated accuracies for the enumeration checks
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Parameter(format!("missing required parameter --{name}")))
}

fn game(cfg: &Config, n: Option<u64>, b: Option<u64>, p: Option<f64>) -> Result<GameParams, Failure> {
    let n = required(cfg.pick(n, &["n"])?, "n")?;
    let b = required(cfg.pick(b, &["b"])?, "b")?;
    let p = required(cfg.pick(p, &["p"])?, "p")?;
    Ok(GameParams::new(n, b, p)?)
}

fn run(cli: Cli) -> Result<(String, Option<Failure>), Failure> {
    let cfg = match &cli.output.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let style = Style {
        format: cfg.pick(cli.output.format, &["format"])?.unwrap_or(Format::Json),
        decimals: cfg.pick(cli.output.decimals, &["decimals"])?.unwrap_or(3),
    };
    if style.decimals > MAX_DECIMALS {
        return Err(Failure::Parameter(format!(
            "decimals must be at most {MAX_DECIMALS}, got {}",
            style.decimals
        )));
    }

    let text = match cli.command {
        Command::Solve { n, b, p } => commands::cmd_solve(game(&cfg, n, b, p)?, &style)?,
        Command::Table { p, n, b_rules } => {
            let defaults = TableSpec::default();
            let spec = TableSpec {
                p_values: cfg.pick_list(p, &["p_values", "p"])?.unwrap_or(defaults.p_values),
                n_values: cfg.pick_list(n, &["n_values", "n"])?.unwrap_or(defaults.n_values),
                b_rules: cfg.pick_list(b_rules, &["b_rules"])?.unwrap_or(defaults.b_rules),
                decimals: style.decimals,
            };
            commands::cmd_table(&spec, &style)?
        }
        Command::Sweep { n, p, metric } => {
            let n = required(cfg.pick(n, &["n"])?, "n")?;
            let p = required(cfg.pick(p, &["p"])?, "p")?;
            let metric = cfg.pick(metric, &["metric"])?.unwrap_or(Metric::Theta);
            commands::cmd_sweep(n, p, metric, &style)?
        }
        Command::Asymptote { p, q } => {
            let p = required(cfg.pick(p, &["p"])?, "p")?;
            let q = required(cfg.pick(q, &["q"])?, "q")?;
            commands::cmd_asymptote(q, p, &style)?
        }
        Command::Simulate { n, b, p, lambda, trials, seed } => {
            let params = game(&cfg, n, b, p)?;
            let lambda = cfg.pick(lambda, &["lambda"])?;
            let trials = cfg.pick(trials, &["trials"])?.unwrap_or(DEFAULT_SIMULATE_TRIALS);
            let seed = cfg.pick(seed, &["seed"])?.unwrap_or(DEFAULT_SEED);
            commands::cmd_simulate(params, lambda, trials, seed, &style)?
        }
        Command::Validate { n, p, trials, seed } => {
            let defaults = ValidationGrid::default();
            let grid = ValidationGrid {
                n_values: cfg.pick_list(n, &["n_values", "n"])?.unwrap_or(defaults.n_values),
                p_values: cfg.pick_list(p, &["p_values", "p"])?.unwrap_or(defaults.p_values),
                ..defaults
            };
            let trials = cfg.pick(trials, &["trials"])?.unwrap_or(DEFAULT_VALIDATE_TRIALS);
            let seed = cfg.pick(seed, &["seed"])?.unwrap_or(DEFAULT_SEED);
            let (text, report) = commands::cmd_validate(&grid, trials, seed, &style)?;
            let failure = (!report.ok()).then(|| {
                Failure::Validation(format!("{} of {} checks failed", report.failed, report.checks.len()))
            });
            return write_output(&cli.output.out, &text).map(|_| (text, failure));
        }
    };
    write_output(&cli.output.out, &text)?;
    Ok((text, None))
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let failure = match run(cli) {
        Ok((_, None)) => return ExitCode::SUCCESS,
        Ok((_, Some(f))) | Err(f) => f,
    };
    eprintln!("crowdfund: {failure}");
    ExitCode::from(failure.exit_code())
}
