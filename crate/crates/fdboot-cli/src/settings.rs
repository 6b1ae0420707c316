//! Layered configuration: CLI flags take precedence over an optional
//! `key=value` config file, which takes precedence over the environment seed
//! override (`FDBOOT_SEED`) and built-in defaults.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use crate::errors::{CliError, CliResult};

pub const SEED_ENV: &str = "FDBOOT_SEED";

/// Key=value pairs from `--config`; `#` starts a comment.
#[derive(Debug, Default)]
pub struct Settings {
    values: HashMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(&format!("reading config {}", path.display()), e))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Validation(format!(
                    "{}: line {}: expected key=value, got {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Settings { values })
    }

    /// Resolves one option: explicit flag, then config file, then default.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T>
    where
        T: FromStr,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(raw) => raw.parse().map_err(|_| {
                CliError::Validation(format!("config key {key}: cannot parse {raw:?}"))
            }),
            None => Ok(default),
        }
    }

    /// Seed resolution adds an environment override between the config file
    /// and the built-in default.
    pub fn resolve_seed(&self, flag: Option<u64>, default: u64) -> CliResult<u64> {
        if let Some(seed) = flag {
            return Ok(seed);
        }
        if let Some(raw) = self.values.get("seed") {
            return raw.parse().map_err(|_| {
                CliError::Validation(format!("config key seed: cannot parse {raw:?}"))
            });
        }
        if let Ok(raw) = std::env::var(SEED_ENV) {
            return raw.parse().map_err(|_| {
                CliError::Validation(format!("{SEED_ENV}: cannot parse {raw:?}"))
            });
        }
        Ok(default)
    }
}
