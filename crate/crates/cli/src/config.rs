//! The JSON run configuration and how flags override it.

use std::path::Path;

use entrofy::{AttributeSpec, SelectionParams, SelectionRequest};
use serde::{Deserialize, Serialize};

use crate::fail::Failure;

/// Contents of `--config`. Every parameter may instead come from a flag,
/// and flags win.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub id_column: Option<String>,
    pub schema: Vec<AttributeSpec>,
    #[serde(default)]
    pub params: ParamOverrides,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub quantile: Option<f64>,
    pub n_trials: Option<usize>,
    pub seed: Option<u64>,
    pub pre_selected: Option<Vec<String>>,
}

/// Where the seed of a run came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Flag,
    Config,
    Entropy,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::validation(format!("config {}: {e}", path.display())))
    }

    /// Merges flag values over the file. The seed falls back to system
    /// entropy; the returned source says which one was used.
    pub fn resolve(self, flags: ParamOverrides) -> Result<(SelectionRequest, SeedSource), Failure> {
        let file = self.params;
        let k = flags.k.or(file.k).ok_or_else(|| {
            Failure::validation("cohort size missing: pass --k or set params.k in the config")
        })?;
        let (seed, source) = match (flags.seed, file.seed) {
            (Some(s), _) => (s, SeedSource::Flag),
            (None, Some(s)) => (s, SeedSource::Config),
            (None, None) => (rand::random(), SeedSource::Entropy),
        };
        let mut params = SelectionParams::new(k).with_seed(seed);
        if let Some(a) = flags.alpha.or(file.alpha) {
            params.alpha = a;
        }
        if let Some(q) = flags.quantile.or(file.quantile) {
            params.quantile = q;
        }
        if let Some(n) = flags.n_trials.or(file.n_trials) {
            params.n_trials = n;
        }
        if let Some(pre) = flags.pre_selected.or(file.pre_selected) {
            params.pre_selected = pre;
        }
        let request = SelectionRequest {
            id_column: self.id_column,
            schema: self.schema,
            params,
        };
        Ok((request, source))
    }
}

/// Reads a file of candidate ids, one per line. Blank lines and lines
/// starting with `#` are skipped.
pub fn read_id_list(path: &Path) -> Result<Vec<String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}
