//! Batch front-end. Exit codes: 0 success, 1 check failure or exhausted
//! budget/precision, 2 usage or parse error.

mod census;
mod config;
mod jobs;
mod output;
mod selftest;

use clap::{Parser, Subcommand};
use config::{JobConfig, TaskKind};
use galdot::{Ring64, DEFAULT_WORK_BUDGET};
use output::{Format, Report};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "galdot",
    version,
    about = "Exact dot-product configuration counts and threshold tables over Galois rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Job configuration file (JSON, one object per run).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Work budget for counting loops; overrides the config value.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// PRNG seed; overrides the config value. Mandatory for census.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Describe one ring: cardinality, units, digit alphabet, layers.
    RingInfo {
        /// Descriptor such as "p=2 e=3 k=2" or "p=2 e=2 k=2 f=1,1,1".
        ring: Option<String>,
    },
    /// Run the invariant suites over a list of small rings.
    Selftest,
    /// One exact counting job (nu, nu-decomposition, pair, forest, matrix).
    Count,
    /// Threshold table over a parameter grid.
    Bounds,
    /// Sample random subsets of R^d and record max nu against the ceilings.
    Census,
    /// Character-sum identities over every ring up to a size cap.
    VerifyIdentities,
}

enum AppError {
    Usage(String),
    Run(String),
}

fn classify(e: galdot::Error) -> AppError {
    use galdot::Error as E;
    match e {
        E::NotPrime(_)
        | E::NotIrreducible(..)
        | E::DegreeMismatch { .. }
        | E::RingMismatch { .. }
        | E::NotAUnit(_)
        | E::IndexOutOfRange { .. }
        | E::DimensionMismatch { .. }
        | E::CyclicGraph
        | E::ParseError(_)
        | E::ScalarOverflow { .. } => AppError::Usage(e.to_string()),
        other => AppError::Run(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, AppError> {
    let cfg = match &cli.config {
        Some(path) => Some(JobConfig::load(path).map_err(AppError::Usage)?),
        None => None,
    };
    check_task_agreement(&cli.command, cfg.as_ref())?;
    let budget = cli
        .budget
        .or(cfg.as_ref().and_then(|c| c.budget))
        .unwrap_or(DEFAULT_WORK_BUDGET);

    let (report, ok) = match &cli.command {
        Command::RingInfo { ring } => {
            let desc = ring
                .clone()
                .or_else(|| cfg.as_ref().and_then(|c| c.ring.clone()))
                .ok_or_else(|| {
                    AppError::Usage(
                        "ring-info needs a descriptor argument or a config with `ring`".to_string(),
                    )
                })?;
            (jobs::ring_info(&desc).map_err(classify)?, true)
        }
        Command::Selftest => {
            let defaults: Vec<String> =
                selftest::DEFAULT_RINGS.iter().map(|s| s.to_string()).collect();
            let rings = cfg
                .as_ref()
                .and_then(|c| c.rings.clone())
                .unwrap_or(defaults);
            let cap = cfg
                .as_ref()
                .and_then(|c| c.cap)
                .unwrap_or(selftest::DEFAULT_CAP);
            selftest::run(&rings, cap, budget)
        }
        Command::Count => {
            let cfg = required_config(cfg.as_ref())?;
            (jobs::run_count(cfg, budget).map_err(classify)?, true)
        }
        Command::Bounds => {
            let cfg = required_config(cfg.as_ref())?;
            (jobs::run_bounds(cfg).map_err(classify)?, true)
        }
        Command::Census => {
            let cfg = required_config(cfg.as_ref())?;
            let params = census_params(&cli, cfg, budget)?;
            census::run(&params).map_err(classify)?
        }
        Command::VerifyIdentities => {
            let cap = cfg
                .as_ref()
                .and_then(|c| c.cap)
                .unwrap_or(jobs::VERIFY_DEFAULT_CAP);
            let rings = cfg.as_ref().and_then(|c| c.rings.as_deref());
            jobs::run_verify(rings, cap).map_err(classify)?
        }
    };

    write_report(&report, cli.format, &cli.out)?;
    Ok(ok)
}

fn check_task_agreement(command: &Command, cfg: Option<&JobConfig>) -> Result<(), AppError> {
    let (Some(cfg), expected) = (
        cfg,
        match command {
            Command::RingInfo { .. } => None,
            Command::Selftest => Some(TaskKind::Selftest),
            Command::Count => Some(TaskKind::Count),
            Command::Bounds => Some(TaskKind::Bounds),
            Command::Census => Some(TaskKind::Census),
            Command::VerifyIdentities => Some(TaskKind::VerifyIdentities),
        },
    ) else {
        return Ok(());
    };
    match expected {
        Some(task) if cfg.task != task => Err(AppError::Usage(format!(
            "config declares task `{}` but the `{task}` subcommand was invoked",
            cfg.task
        ))),
        _ => Ok(()),
    }
}

fn required_config(cfg: Option<&JobConfig>) -> Result<&JobConfig, AppError> {
    cfg.ok_or_else(|| AppError::Usage("this subcommand requires --config <file>".to_string()))
}

fn census_params(cli: &Cli, cfg: &JobConfig, budget: u64) -> Result<census::Params, AppError> {
    let seed = cli.seed.or(cfg.seed).ok_or_else(|| {
        AppError::Usage("census requires a seed (config `seed` or --seed)".to_string())
    })?;
    let desc = cfg
        .ring
        .as_ref()
        .ok_or_else(|| AppError::Usage("census config requires `ring`".to_string()))?;
    let ring = Ring64::parse_descriptor(desc).map_err(classify)?;
    let d = cfg
        .d
        .ok_or_else(|| AppError::Usage("census config requires `d`".to_string()))?;
    if d == 0 {
        return Err(AppError::Usage("census dimension d must be positive".to_string()));
    }
    let sizes = cfg
        .sizes
        .clone()
        .ok_or_else(|| AppError::Usage("census config requires `sizes`".to_string()))?;
    Ok(census::Params {
        ring,
        d,
        sizes,
        samples: cfg.samples.unwrap_or(1),
        seed,
        budget,
    })
}

fn write_report(report: &Report, format: Format, out: &Option<PathBuf>) -> Result<(), AppError> {
    match out {
        Some(path) => {
            let mut file = std::fs::File::create(path).map_err(|e| {
                AppError::Usage(format!("cannot create {}: {e}", path.display()))
            })?;
            report
                .write(format, &mut file)
                .map_err(|e| AppError::Run(format!("write failed: {e}")))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            report
                .write(format, &mut lock)
                .map_err(|e| AppError::Run(format!("write failed: {e}")))
        }
    }
}
