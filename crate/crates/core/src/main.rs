use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use multiphoton_rabi::config::{parse_config_with, Overrides, ScenarioConfig};
use multiphoton_rabi::scenario::{run_scenario, run_spectrum};
use multiphoton_rabi::validity::Warning;
use multiphoton_rabi::Error;

/// Environment variable that overrides the output directory.
const OUTPUT_DIR_ENV: &str = "MPRABI_OUTPUT_DIR";

#[derive(Parser)]
#[command(version, about = "Multiphoton Rabi dynamics of a two-level system with permanent dipoles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// RK4 step in oscillator periods.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Oscillator levels kept.
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Duration in oscillator periods.
    #[arg(long, global = true)]
    t_end: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a scenario and write CSV time series plus a JSON manifest.
    Run { config: PathBuf },
    /// Write the dressed-state spectrum of a scenario as JSON.
    Spectrum { config: PathBuf },
    /// Run every scenario matching a glob, in parallel, one output directory each.
    Sweep { pattern: String },
    /// Parse and validate a scenario, printing the resolved configuration.
    Validate { config: PathBuf },
}

fn load(path: &Path, overrides: &Overrides) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.into(), source: e })?;
    parse_config_with(&text, overrides)
}

fn output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn run_one(path: &Path, overrides: &Overrides, out: &Path) -> Result<i32, Error> {
    let config = load(path, overrides)?.with_output_dir(out);
    let outcome = run_scenario(&config)?;
    for w in &outcome.manifest.flags.warnings {
        // the step-size heuristic is conservative; RK4 accuracy is policed by the norm bound
        if matches!(w, Warning::LargeTimeStep { .. }) {
            log::info!("{}: {w}", path.display());
        } else {
            log::warn!("{}: {w}", path.display());
        }
    }
    for f in &outcome.manifest.outputs {
        println!("{}", f.display());
    }
    Ok(if outcome.manifest.flags.valid() { 0 } else { 2 })
}

fn report(path: &Path, r: Result<i32, Error>) -> i32 {
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let overrides = Overrides { dt: cli.dt, n_max: cli.n_max, t_end: cli.t_end };
    let code = match &cli.command {
        Command::Run { config } => report(config, run_one(config, &overrides, &output_dir())),
        Command::Spectrum { config } => report(
            config,
            load(config, &overrides).and_then(|c| {
                let p = run_spectrum(&c.with_output_dir(&output_dir()))?;
                println!("{}", p.display());
                Ok(0)
            }),
        ),
        Command::Validate { config } => report(
            config,
            load(config, &overrides).and_then(|c| {
                println!("{}", serde_json::to_string_pretty(&c)?);
                Ok(0)
            }),
        ),
        Command::Sweep { pattern } => {
            let paths: Vec<PathBuf> = match glob::glob(pattern) {
                Ok(it) => it.filter_map(|p| p.ok()).collect(),
                Err(e) => {
                    eprintln!("bad pattern {pattern:?}: {e}");
                    return ExitCode::from(1);
                }
            };
            if paths.is_empty() {
                eprintln!("no configs match {pattern:?}");
                return ExitCode::from(1);
            }
            let base = output_dir();
            paths
                .par_iter()
                .map(|p| {
                    let stem = p.file_stem().map(PathBuf::from).unwrap_or_else(|| "scenario".into());
                    let dir = base.join(stem);
                    let r = std::fs::create_dir_all(&dir)
                        .map_err(|e| Error::Io { path: dir.clone(), source: e })
                        .and_then(|_| run_one(p, &overrides, &dir));
                    report(p, r)
                })
                .max()
                .unwrap_or(0)
        }
    };
    ExitCode::from(code as u8)
}
