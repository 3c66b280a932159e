use std::path::Path;

use anyhow::Context;
use hypercurve::Error;
use serde::{Deserialize, Serialize};

/// Caps and sampling knobs, read from a TOML file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub chamber_cap: usize,
    pub word_length_cap: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { chamber_cap: 100_000, word_length_cap: 8, sample_count: 200, seed: 0 }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<RunConfig> {
        let cfg = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str(&text).map_err(|e| Error::Validation(format!("config {}: {e}", p.display())))?
            }
        };
        if cfg.chamber_cap == 0 || cfg.word_length_cap == 0 || cfg.sample_count == 0 {
            return Err(Error::Validation("caps and sample count must be positive".into()).into());
        }
        Ok(cfg)
    }
}
