use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Settings read from a TOML file. Command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub m: Option<u32>,
    pub n: Option<u64>,
    pub sign: Option<Sign>,
    pub d: Option<i64>,
    pub x_max: Option<u64>,
    pub n_max: Option<u64>,
    pub checkpoints: Option<Vec<u64>>,
    pub ratio_tolerance: Option<f64>,
    pub sieve_tolerance: Option<f64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("ratio_tolerance", self.ratio_tolerance), ("sieve_tolerance", self.sieve_tolerance)] {
            if t.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if self.x_max == Some(0) || self.n_max == Some(0) {
            return Err(Error::Config("x_max and n_max must be at least 1".into()));
        }
        Ok(())
    }
}
