use std::collections::BTreeMap;

use gaussq::entanglement::LogBase;

use crate::commands::parse_log_base;
use crate::config::Config;
use crate::error::CliError;
use crate::table::Format;

/// Flag values from the command line layered over a config file.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    flags: BTreeMap<&'static str, String>,
    config: Config,
}

impl Settings {
    pub fn new(flags: BTreeMap<&'static str, String>, config: Config) -> Self {
        Self { flags, config }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.flags.get(key).map(String::as_str).or_else(|| self.config.get(key))
    }

    pub fn log_base(&self) -> Result<LogBase, CliError> {
        parse_log_base(self.get("log-base").unwrap_or("e"))
    }

    pub fn format(&self) -> Result<Format, CliError> {
        Format::parse(self.get("format").unwrap_or("csv"))
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.integer("seed", 0)
    }

    pub fn samples(&self) -> Result<usize, CliError> {
        self.integer("samples", 0).map(|n| n as usize)
    }

    fn integer(&self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(t) => t.trim().parse().map_err(|_| CliError::Input(format!("--{key} must be a non-negative integer, got {t:?}"))),
        }
    }
}
