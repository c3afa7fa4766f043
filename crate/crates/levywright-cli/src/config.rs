//! Flat `key = value` config files. Flags override config entries; unknown
//! keys are rejected before any computation runs.

use std::collections::HashMap;
use std::path::Path;

use crate::run::CliError;

const KNOWN_KEYS: &[&str] = &[
    "alpha", "gamma", "delta", "kappa", "lambda", "t", "x", "y", "q", "a", "z", "upper", "lower",
    "tol", "n_paths", "eps_jump", "horizon", "step", "seed", "direction", "min", "max", "n",
    "n_nodes",
];

#[derive(Default)]
pub struct Config {
    entries: HashMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("config {}: {e}", path.display())))?;
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::validation(format!(
                    "config line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::validation(format!(
                    "config line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|_| {
                CliError::validation(format!("config key `{key}`: cannot parse `{raw}`"))
            }),
        }
    }

    /// Flag value if present, else config value, else error naming the key.
    pub fn require_f64(&self, flag: Option<f64>, key: &str) -> Result<f64, CliError> {
        self.opt_f64(flag, key)?
            .ok_or_else(|| CliError::validation(format!("missing required parameter `{key}`")))
    }

    pub fn opt_f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }

    pub fn usize_or(&self, flag: Option<usize>, key: &str, default: usize) -> Result<usize, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.parsed(key)?.unwrap_or(default)),
        }
    }

    pub fn f64_or(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.opt_f64(flag, key)?.unwrap_or(default))
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.entries.get(key).cloned())
    }

    /// Seed resolution order: flag, config, $LEVYWRIGHT_SEED, 42.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = flag {
            return Ok(s);
        }
        if let Some(s) = self.parsed("seed")? {
            return Ok(s);
        }
        match std::env::var("LEVYWRIGHT_SEED") {
            Ok(raw) => raw
                .parse()
                .map_err(|_| CliError::validation(format!("$LEVYWRIGHT_SEED: cannot parse `{raw}`"))),
            Err(_) => Ok(42),
        }
    }
}
