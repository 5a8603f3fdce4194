use std::fs;
use std::path::{Path, PathBuf};

use super::{CountError, CountResult};

/// Overrides the configured cache directory.
pub const CACHE_ENV: &str = "SIEGEL_CY_CACHE";
/// Bumped whenever a counting kernel changes meaning.
pub const CODE_VERSION: u32 = 1;

/// On-disk JSON cache of counts keyed by (variety, p, k, code version).
#[derive(Debug, Clone)]
pub struct CountCache {
    dir: PathBuf,
}

impl CountCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$SIEGEL_CY_CACHE` if set, else `fallback`.
    pub fn from_env_or(fallback: Option<&Path>) -> Option<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => Some(Self::new(d)),
            _ => fallback.map(Self::new),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, variety: &str, p: u32, k: u32) -> PathBuf {
        let safe: String = variety.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '-' }).collect();
        self.dir.join(format!("{safe}-p{p}-k{k}-v{CODE_VERSION}.json"))
    }

    pub fn get(&self, variety: &str, p: u32, k: u32) -> Option<CountResult> {
        let text = fs::read_to_string(self.path(variety, p, k)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn put(&self, r: &CountResult) -> Result<(), CountError> {
        fs::create_dir_all(&self.dir).map_err(|e| CountError::Cache(e.to_string()))?;
        let text = serde_json::to_string(r).map_err(|e| CountError::Cache(e.to_string()))?;
        let path = self.path(&r.variety, r.p, r.k);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(|e| CountError::Cache(e.to_string()))?;
        fs::rename(&tmp, &path).map_err(|e| CountError::Cache(e.to_string()))
    }
}
