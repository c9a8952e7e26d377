//! Command-line front end: imputation, fitting, simulation, the BEST and
//! COST policies, and outcome prediction, each writing CSV/JSON artifacts.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use commands::*;
pub use config::{RunConfig, Scenario};
pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "sidur",
    version,
    about = "Testing-controlled SIDUR epidemic model"
)]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the swarm optimizer.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Use the testable population `(1−θ)·N`.
    #[arg(long, global = true)]
    pub assumption5: bool,
    /// Raw or imputed data CSV (the bundled extract by default).
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Parameter file written by `fit` (default: <out>/params.json).
    #[arg(long, conflicts_with = "published")]
    pub params: Option<PathBuf>,
    /// Use the published estimates instead of a parameter file.
    #[arg(long)]
    pub published: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Impute the model's daily series from a raw extract.
    Impute {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output file (default: <out>/imputed.csv).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the parameters by regression and particle swarm.
    Fit {
        #[arg(long)]
        swarm_size: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        /// Fix the initial infected multiplier instead of estimating it.
        #[arg(long)]
        kappa: Option<f64>,
    },
    /// Simulate a scenario over the data horizon.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "actual")]
        scenario: Scenario,
    },
    /// Best-effort suppression from a start date.
    Best {
        #[command(flatten)]
        model: ModelArgs,
        /// Start date (ISO-8601).
        #[arg(long)]
        date: Option<String>,
        /// Sweep the start date over an inclusive range.
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        sweep: Option<Vec<String>>,
    },
    /// Constant-rate use of a test stockpile.
    Cost {
        #[command(flatten)]
        model: ModelArgs,
        /// Stockpile size (tests).
        #[arg(long)]
        rmax: Option<f64>,
        /// Newton start (tests/day).
        #[arg(long)]
        c0: Option<f64>,
        /// Start date (ISO-8601).
        #[arg(long)]
        start: Option<String>,
        /// Number of points of the brute-force grid.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Fit ICU and death regressions and predict them for a scenario.
    Predict {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "best")]
        scenario: Scenario,
    },
}

/// Configuration file merged with the global flags.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        config.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        config.estimation.seed = seed;
    }
    if cli.assumption5 {
        config.assumption5 = true;
    }
    if let Some(data) = &cli.data {
        config.data = Some(data.clone());
    }
    Ok(config)
}

/// Prints a summary as JSON. A closed stdout is not an error.
fn show<T: serde::Serialize>(summary: &T) {
    use std::io::Write;
    match serde_json::to_string_pretty(summary) {
        Ok(text) => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
        Err(e) => eprintln!("warning: cannot print summary: {e}"),
    }
}

/// Runs a parsed command line and prints its summary as JSON.
pub fn run(cli: Cli) -> CliResult<()> {
    let mut config = resolve_config(&cli)?;
    let source =
        |m: &ModelArgs, c: &RunConfig| ParamsSource::resolve(c, m.params.clone(), m.published);
    match cli.command {
        Command::Impute { input, output } => {
            let s = cmd_impute(&config, input.as_deref(), output.as_deref())?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            show(&s);
        }
        Command::Fit {
            swarm_size,
            iterations,
            kappa,
        } => {
            if let Some(n) = swarm_size {
                config.estimation.swarm_size = n;
            }
            if let Some(n) = iterations {
                config.estimation.max_iterations = n;
            }
            if kappa.is_some() {
                config.model.kappa = kappa;
            }
            show(&cmd_fit(&config)?);
        }
        Command::Simulate { model, scenario } => {
            show(&cmd_simulate(&config, &source(&model, &config), scenario)?);
        }
        Command::Best { model, date, sweep } => {
            if let Some(d) = date {
                config.policy.t_star = d;
            }
            if let Some(range) = sweep {
                config.policy.sweep = Some((range[0].clone(), range[1].clone()));
            }
            let s = cmd_best(&config, &source(&model, &config))?;
            show(&(&s.record, &s.written));
        }
        Command::Cost {
            model,
            rmax,
            c0,
            start,
            grid,
        } => {
            if let Some(r) = rmax {
                config.policy.r_max = r;
            }
            if c0.is_some() {
                config.policy.c0 = c0;
            }
            if let Some(s) = start {
                config.policy.cost_start = s;
            }
            if grid.is_some() {
                config.policy.grid_points = grid;
            }
            let s = cmd_cost(&config, &source(&model, &config))?;
            show(&s);
        }
        Command::Predict { model, scenario } => {
            show(&cmd_predict(&config, &source(&model, &config), scenario)?);
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and maps the outcome to an exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"out": "a", "estimation": {"seed": 1}}"#).unwrap();
        let cli = Cli::try_parse_from([
            "sidur",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "7",
            "fit",
            "--assumption5",
        ])
        .unwrap();
        let c = resolve_config(&cli).unwrap();
        assert_eq!(c.out, PathBuf::from("a"));
        assert_eq!(c.estimation.seed, 7);
        assert!(c.assumption5);
    }

    #[test]
    fn params_and_published_conflict() {
        let r = Cli::try_parse_from(["sidur", "best", "--published", "--params", "p.json"]);
        assert!(r.is_err());
    }

    #[test]
    fn sweep_takes_two_dates() {
        let cli =
            Cli::try_parse_from(["sidur", "best", "--sweep", "2020-01-24", "2020-03-13"]).unwrap();
        match cli.command {
            Command::Best { sweep, .. } => assert_eq!(sweep.unwrap().len(), 2),
            _ => unreachable!(),
        }
    }
}
