//! `oam`: renders modes and holograms, runs displacement scans, singularity
//! tables, interferometer and decomposition runs from one JSON config.
//!
//! Exit status: 0 success, 2 configuration error, 3 numerical guard tripped,
//! 1 anything else (I/O).

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Artifact, DEFAULT_SINGULARITY_POINTS};
use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical guard: {0}")]
    Guard(String),
    #[error(transparent)]
    Core(#[from] oam_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "oam", version, about = "Gaussian / Laguerre-Gaussian superposition simulator")]
struct Cli {
    /// Run configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Grid samples per side; overrides `grid.n`.
    #[arg(long, global = true, value_name = "N")]
    grid_n: Option<usize>,
    /// Do not print the run report.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one LG mode; writes FGRID plus intensity and phase PGM images.
    RenderMode {
        #[arg(long, default_value_t = 0)]
        p: u32,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        l: i32,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z: f64,
    },
    /// Binary and blazed hologram templates as PGM images.
    Hologram,
    /// Displacement scan: scan CSV and summary JSON.
    Scan,
    /// Singularity position table for paired (gamma, phase) lists.
    Singularity {
        /// Comma-separated amplitude ratios.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gamma: Vec<f64>,
        /// Comma-separated relative phases in radians, one per gamma.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        phase: Vec<f64>,
    },
    /// Mach-Zehnder output field and its decomposition.
    Interfere,
    /// Decompose the configured hologram's output, or a saved FGRID field.
    Decompose {
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.grid_n {
        cfg.grid.n = n;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn singularity_points(gamma: &[f64], phase: &[f64]) -> Result<Vec<(f64, f64)>, CliError> {
    if gamma.is_empty() && phase.is_empty() {
        return Ok(DEFAULT_SINGULARITY_POINTS.to_vec());
    }
    if gamma.len() != phase.len() {
        return Err(CliError::Config(format!(
            "--gamma has {} values but --phase has {}",
            gamma.len(),
            phase.len()
        )));
    }
    Ok(gamma.iter().copied().zip(phase.iter().copied()).collect())
}

/// Writes each artifact through a temporary file so no half-written file is left behind.
fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    let io = |what: &Path, e: std::io::Error| CliError::Io(format!("{}: {e}", what.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    for a in artifacts {
        let target = dir.join(&a.name);
        let tmp = dir.join(format!(".{}.partial", a.name));
        std::fs::write(&tmp, &a.bytes).map_err(|e| io(&tmp, e))?;
        std::fs::rename(&tmp, &target).map_err(|e| io(&target, e))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let outcome = match &cli.command {
        Command::RenderMode { p, l, z } => commands::render_mode(&cfg, *p, *l, *z)?,
        Command::Hologram => commands::hologram(&cfg)?,
        Command::Scan => commands::scan(&cfg)?,
        Command::Singularity { gamma, phase } => commands::singularity(&cfg, &singularity_points(gamma, phase)?)?,
        Command::Interfere => commands::interfere(&cfg)?,
        Command::Decompose { field } => commands::decompose(&cfg, field.as_deref())?,
    };
    write_all(&cfg.output_dir, &outcome.artifacts)?;
    if !cli.quiet {
        print!("{}", outcome.report);
        for a in &outcome.artifacts {
            println!("wrote {}", cfg.output_dir.join(&a.name).display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oam: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
