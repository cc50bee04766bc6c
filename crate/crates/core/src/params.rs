use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Recommended exponent of the concave transform.
pub const DEFAULT_ALPHA: f64 = 0.5;
/// Quantile level 1.0 keeps only the best marginal gains (plain greedy).
pub const DEFAULT_QUANTILE: f64 = 1.0;
pub const DEFAULT_TRIALS: usize = 15;

/// Parameters of one selection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    /// Size of the cohort to select.
    pub k: usize,
    /// Exponent of the concave transform, in `(0, 1]`.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Quantile level in `(0, 1]`: at each step the pick is drawn uniformly
    /// from candidates whose gain is at least the nearest-rank quantile.
    #[serde(default = "default_quantile")]
    pub quantile: f64,
    /// Number of independent randomized restarts.
    #[serde(default = "default_trials")]
    pub n_trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Candidates fixed into the cohort before optimization starts.
    #[serde(default)]
    pub pre_selected: Vec<String>,
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_quantile() -> f64 {
    DEFAULT_QUANTILE
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

impl SelectionParams {
    pub fn new(k: usize) -> Self {
        SelectionParams {
            k,
            alpha: DEFAULT_ALPHA,
            quantile: DEFAULT_QUANTILE,
            n_trials: DEFAULT_TRIALS,
            seed: 0,
            pre_selected: Vec::new(),
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_quantile(mut self, quantile: f64) -> Self {
        self.quantile = quantile;
        self
    }

    pub fn with_trials(mut self, n_trials: usize) -> Self {
        self.n_trials = n_trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_pre_selected<S: Into<String>>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.pre_selected = ids.into_iter().map(Into::into).collect();
        self
    }

    /// Checks the scalar parameters alone.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        if self.k == 0 {
            errors.push(Error::InvalidParameter("k must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            errors.push(Error::InvalidParameter(format!(
                "alpha = {} is outside (0, 1]",
                self.alpha
            )));
        }
        if !(self.quantile > 0.0 && self.quantile <= 1.0) {
            errors.push(Error::InvalidParameter(format!(
                "quantile = {} is outside (0, 1]",
                self.quantile
            )));
        }
        if self.n_trials == 0 {
            errors.push(Error::InvalidParameter("n_trials must be positive".into()));
        }
        Error::collect(errors)
    }

    /// Checks the parameters against a pool and returns the pre-selected
    /// candidates as pool positions.
    pub fn validate_for(&self, matrix: &BinaryMatrix) -> Result<Vec<usize>> {
        self.validate()?;
        if self.k > matrix.pool_size() {
            return Err(Error::Infeasible {
                k: self.k,
                pool: matrix.pool_size(),
            });
        }
        let pre = matrix.resolve(&self.pre_selected)?;
        if pre.len() > self.k {
            return Err(Error::TooManyPreSelected {
                count: pre.len(),
                k: self.k,
            });
        }
        Ok(pre)
    }
}
