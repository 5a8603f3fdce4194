//! Run configuration, read from a flat `key = value` file (a TOML subset).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::thetamod::ThetaSettings;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("parsing config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seed for every randomized check.
    pub seed: u64,
    /// Worker threads for counting sweeps; 0 picks the rayon default.
    pub jobs: usize,
    /// Largest prime in the modularity sweep.
    pub pmax: u32,
    /// Wall-clock budget for the sweep, in seconds.
    pub sweep_budget_s: f64,
    pub oracle_primes: Vec<u32>,
    /// Primes = 1 mod 8 for the node and fixed-locus checks.
    pub node_primes: Vec<u32>,
    pub theta_samples: usize,
    pub theta_tol: f64,
    pub residual_bound: f64,
    pub gamma_word_length: usize,
    pub k3_sweep: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let theta = ThetaSettings::default();
        Self {
            seed: theta.seed,
            jobs: 0,
            pmax: 97,
            sweep_budget_s: 120.0,
            oracle_primes: vec![3, 5, 7],
            node_primes: vec![17, 41],
            theta_samples: theta.samples,
            theta_tol: theta.tol,
            residual_bound: theta.residual_bound,
            gamma_word_length: theta.max_word,
            k3_sweep: 100,
            cache_dir: None,
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: Config = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.into(), e))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.pmax < 3 {
            return Err(ConfigError::Invalid(format!("pmax = {} leaves no odd prime", self.pmax)));
        }
        if let Some(p) = self.node_primes.iter().find(|&&p| p % 8 != 1) {
            return Err(ConfigError::Invalid(format!("node prime {p} is not 1 mod 8")));
        }
        if self.node_primes.is_empty() {
            return Err(ConfigError::Invalid("node_primes is empty".into()));
        }
        Ok(())
    }

    pub fn theta(&self) -> ThetaSettings {
        ThetaSettings {
            samples: self.theta_samples,
            tol: self.theta_tol,
            residual_bound: self.residual_bound,
            seed: self.seed,
            max_word: self.gamma_word_length,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }

    #[test]
    fn keys_override() {
        let c = Config::parse("seed = 9\npmax = 31\nnode_primes = [17]\n").unwrap();
        assert_eq!((c.seed, c.pmax, c.node_primes), (9, 31, vec![17]));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_primes() {
        assert!(matches!(Config::parse("colour = 1"), Err(ConfigError::Parse(_))));
        assert!(matches!(Config::parse("node_primes = [13]"), Err(ConfigError::Invalid(_))));
    }
}
