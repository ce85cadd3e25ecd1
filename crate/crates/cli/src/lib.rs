//! Batch sweeps over the `gaussq` formulas, written as CSV or JSON tables.
//!
//! Exit codes: 0 on success, 2 for bad input, 3 when the computed numbers
//! fail a validity check (the table is still written).

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod settings;
pub mod table;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use error::CliError;
use commands::Outcome;
use config::Config;
use settings::Settings;

#[derive(Debug, Parser)]
#[command(name = "gaussq", version, about = "Entanglement and teleportation sweeps for Gaussian states in lossy fibers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Log-negativity against fiber length (noiseless fibers).
    EntanglementSweep,
    /// Teleportation fidelity of a pure squeezed signal over (eta, zeta).
    FidelitySweep,
    /// Thermal-photon threshold and separability length.
    Separability,
    /// Receiver covariance, gain and fidelity of the full protocol.
    Teleport,
    /// Physicality, classicality and entanglement of a single state.
    CheckState,
}

/// Grids take `start:stop:count` or a comma list.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// TMSV squeezing; `inf` allowed in entanglement-sweep
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub zeta: Option<String>,
    /// Signal squeezing of the pure squeezed input
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Fiber transmittance |T|²
    #[arg(long, global = true)]
    pub t2: Option<String>,
    /// Fiber reflectance |R|²
    #[arg(long, global = true)]
    pub r2: Option<String>,
    /// Mean thermal photon number of the fiber environment
    #[arg(long, global = true)]
    pub nth: Option<String>,
    /// Fiber length, in the units of --absorption-length
    #[arg(long, global = true)]
    pub length: Option<String>,
    #[arg(long, global = true)]
    pub absorption_length: Option<String>,
    /// e or 2
    #[arg(long, global = true)]
    pub log_base: Option<String>,
    /// csv or json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Seed for Monte-Carlo estimates
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Monte-Carlo samples for the unit-gain fidelity (teleport; 0 disables)
    #[arg(long, global = true)]
    pub samples: Option<String>,
    /// vacuum, thermal, squeezed, tmsv or degraded-tmsv (check-state)
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Row-major covariance matrix entries (check-state)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// key = value file; flags given here take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, CliError> {
        let config = match &self.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        let pairs = [
            ("zeta", &self.zeta),
            ("eta", &self.eta),
            ("t2", &self.t2),
            ("r2", &self.r2),
            ("nth", &self.nth),
            ("length", &self.length),
            ("absorption-length", &self.absorption_length),
            ("log-base", &self.log_base),
            ("format", &self.format),
            ("out", &self.out),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("state", &self.state),
            ("gamma", &self.gamma),
        ];
        let flags: BTreeMap<_, _> = pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        Ok(Settings::new(flags, config))
    }
}

/// Rendered output and where it goes.
pub struct Report {
    pub text: String,
    pub out: Option<PathBuf>,
    pub invalid: Option<String>,
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let s = cli.flags.settings()?;
    let format = s.format()?;
    let Outcome { table, invalid } = match cli.command {
        Command::EntanglementSweep => commands::entanglement_sweep(&s)?,
        Command::FidelitySweep => commands::fidelity_sweep(&s)?,
        Command::Separability => commands::separability_report(&s)?,
        Command::Teleport => commands::teleport_sweep(&s)?,
        Command::CheckState => commands::check_state(&s)?,
    };
    Ok(Report { text: table.render(format)?, out: s.get("out").map(PathBuf::from), invalid })
}
