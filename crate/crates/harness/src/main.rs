use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use splitstep_harness::config::ExperimentConfig;
use splitstep_harness::emit::{emit_bounds_csv, emit_csv, emit_json};
use splitstep_harness::experiment::{bound_table, run_experiment};
use splitstep_harness::report::verify_suite;
use splitstep_harness::sweep::{write_sweep, SweepConfig};

/// Split-step simulator and verification harness for the periodic
/// Schrödinger equation on a uniform grid.
#[derive(Parser)]
#[command(name = "splitstep", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Overrides shared by the config-driven subcommands.
#[derive(Args)]
struct Overrides {
    /// Replace the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override a named tolerance, e.g. `--tolerance l2_conservation=1e-10`.
    /// May be given multiple times.
    #[arg(long = "tolerance", value_name = "NAME=VALUE", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
}

impl Overrides {
    fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        for (name, value) in &self.tolerances {
            config.tolerances.insert(name.clone(), *value);
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its trajectory CSV and summary JSON.
    Simulate {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run one experiment and grade every invariant it is entitled to.
    /// Exits non-zero if any claimed check fails.
    Verify {
        config: PathBuf,
        /// Also write the full report as JSON next to the printed lines.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run every case of a sweep config and write per-case artifacts plus
    /// an index file.
    Sweep {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Tabulate the certified lower bounds for a config without running
    /// the simulation.
    Bounds {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value
        .parse()
        .map_err(|e| format!("tolerance {name:?}: {e}"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(format!("tolerance {name:?}: must be finite and positive"));
    }
    Ok((name.to_string(), value))
}

fn load_config(path: &Path, overrides: &Overrides) -> anyhow::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(path)
        .with_context(|| format!("loading {}", path.display()))?;
    overrides.apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn main() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            out_dir,
            overrides,
        } => {
            let config = load_config(&config, &overrides)?;
            let (records, summary) = run_experiment(&config)?;
            std::fs::create_dir_all(&out_dir)?;
            let (csv_name, json_name) = config.artifact_names();
            let csv_path = out_dir.join(csv_name);
            let json_path = out_dir.join(json_name);
            emit_csv(&records, &csv_path)?;
            emit_json(&summary, &json_path)?;
            println!(
                "{}: {} rows, classification {:?}, final h1 = {:.6e}",
                config.name,
                records.len(),
                summary.classification,
                records.last().map(|r| r.h1).unwrap_or(0.0),
            );
            println!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            config,
            json,
            overrides,
        } => {
            let config = load_config(&config, &overrides)?;
            let report = verify_suite(&config)?;
            print!("{}", report.render());
            if let Some(path) = json {
                let file = std::fs::File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                serde_json::to_writer_pretty(&file, &report)?;
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Sweep { config, out_dir } => {
            let sweep = SweepConfig::load(&config)
                .with_context(|| format!("loading {}", config.display()))?;
            let index = write_sweep(&sweep, &out_dir)?;
            for case in &index.cases {
                println!(
                    "{}: τ = {:.6e}, τK² = {:.6e}, final h1 = {:.6e}",
                    case.name, case.tau, case.cfl_number, case.final_h1
                );
            }
            println!("wrote {} cases into {}", index.cases.len(), out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            config,
            out_dir,
            overrides,
        } => {
            let config = load_config(&config, &overrides)?;
            let (rows, constants, classification) = bound_table(&config)?;
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join(format!("{}.bounds.csv", config.name));
            emit_bounds_csv(&rows, &path)?;
            println!("classification: {classification:?}");
            println!("constants: {}", serde_json::to_string_pretty(&constants)?);
            match constants.horizon_steps {
                Some(h) => println!("certified horizon: {h} steps"),
                None => println!("certified horizon: unbounded (C1 = 0)"),
            }
            println!("wrote {}", path.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
