//! `resonance-lab`: experiment runner for the coupled-Schrödinger resonance
//! toolkit.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric or I/O failure
//! during a run.

mod config;
mod run;

use clap::{CommandFactory, Parser};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "resonance-lab",
    version,
    about = "Run simulation and verification scenarios for the coupled cubic Schrödinger system, its resonant limit dynamics and two-mode beating orbits",
    after_help = "Presets: reduced, beating, gamma-scan, resonant-field, transfer-check, nls, decompose, scattering, potential.\nA preset name selects a built-in configuration; --config loads a JSON file with the same schema (see the README)."
)]
struct Cli {
    /// JSON experiment configuration file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Built-in preset name (one per scenario).
    #[arg(long)]
    preset: Option<String>,

    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Override the configuration's RNG seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for per-column parallelism
    /// (falls back to RESONANCE_LAB_THREADS, then the core count).
    #[arg(long)]
    threads: Option<usize>,
}

const EXIT_CONFIG: i32 = 2;
const EXIT_NUMERIC: i32 = 3;

fn thread_count(cli: &Cli) -> Option<usize> {
    cli.threads.or_else(|| {
        std::env::var("RESONANCE_LAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn load_config(cli: &Cli) -> Result<config::ExperimentConfig, String> {
    let mut cfg = if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
    } else if let Some(name) = &cli.preset {
        config::preset(name).ok_or_else(|| {
            format!(
                "unknown preset `{name}` (expected one of: {})",
                config::Scenario::all()
                    .iter()
                    .map(|s| s.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })?
    } else {
        unreachable!("caller checks that a source is present")
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() {
    let cli = Cli::parse();

    if cli.config.is_none() && cli.preset.is_none() {
        Cli::command().print_long_help().expect("help printable");
        println!();
        std::process::exit(0);
    }

    if let Some(n) = thread_count(&cli) {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not configure {n} threads: {e}");
        }
    }

    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(message) => {
            eprintln!("config error: {message}");
            std::process::exit(EXIT_CONFIG);
        }
    };

    match run::run(&cfg, &cli.out) {
        Ok(output) => {
            println!(
                "{}: wrote {} file(s) to {}",
                cfg.scenario.name(),
                output.files.len(),
                cli.out.display()
            );
        }
        Err(error) => {
            let diagnostic = serde_json::json!({
                "scenario": cfg.scenario.name(),
                "error": format!("{error:#}"),
            });
            eprintln!("{diagnostic}");
            std::process::exit(EXIT_NUMERIC);
        }
    }
}
