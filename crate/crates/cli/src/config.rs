//! Run configuration: budgets, seed and thread count from an optional TOML
//! file, then `--budget key=value` overrides.
//!
//! ```toml
//! seed = 7
//! threads = 4
//!
//! [budgets]
//! enumeration_max_sets = 4096
//! auerbach_restarts = 32
//! ```

use std::path::{Path, PathBuf};

use kottsep_core::Budgets;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "KOTTSEP_CONFIG";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub budgets: Budgets,
}

impl Config {
    /// Reads `path`, or the file named by `KOTTSEP_CONFIG`, or falls back to defaults.
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let path: Option<PathBuf> = match path {
            Some(p) => Some(p.to_path_buf()),
            None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(&path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Applies `key=value` budget overrides.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> CliResult<()> {
        if overrides.is_empty() {
            return Ok(());
        }
        let mut value = serde_json::to_value(&self.budgets).expect("budgets serialize");
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--budget expects key=value, got {item:?}")))?;
            let key = key.trim().replace('-', "_");
            let parsed: serde_json::Value = serde_json::from_str(raw.trim())
                .map_err(|_| CliError::Usage(format!("--budget {key}: {raw:?} is not a number")))?;
            value[key.as_str()] = parsed;
        }
        self.budgets = serde_json::from_value(value).map_err(|e| CliError::Usage(format!("--budget: {e}")))?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form of the configuration.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_value(self).expect("config serializes").to_string();
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
