use std::path::Path;

use serde::Deserialize;

/// Defaults read from a `key = value` file; command-line flags take precedence.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Truncation order applied to every parameter.
    pub order: Option<u32>,
    /// Taylor order for `conormal`.
    pub taylor: u32,
    /// Highest bracket arity probed by `linf`, `derived` and `conormal`.
    pub cap: usize,
    pub seed: u64,
    /// Random triples tested by `star-assoc` on top of the monomial sweep.
    pub probes: usize,
    /// Largest monomial degree used as an L∞ probe for arities one and two.
    pub probe_degree: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            order: None,
            taylor: 3,
            cap: 3,
            seed: 0,
            probes: 20,
            probe_degree: 2,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e.message()))
    }
}
