//! The saturating-coverage objective
//!
//! ```text
//! f(X) = Σ_i w_i · min(k·p_i, Σ_{x∈X} a_i(x))^α
//! ```
//!
//! Each column counts selected members carrying its indicator but stops
//! counting at the real-valued cap `k·p_i`; the exponent `α ∈ (0, 1]` makes
//! gains shrink as a column approaches its cap, so under-served columns win
//! ties. `0^α` is taken as 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::params::SelectionParams;

/// Objective value of a set together with the per-column quantities it was
/// built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveScore {
    pub value: f64,
    pub per_column_counts: Vec<u32>,
    pub per_column_saturation: Vec<f64>,
}

/// Objective evaluator bound to a matrix, a cohort size and an exponent.
#[derive(Debug, Clone)]
pub struct Coverage<'m> {
    matrix: &'m BinaryMatrix,
    caps: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
}

impl<'m> Coverage<'m> {
    pub fn new(matrix: &'m BinaryMatrix, k: usize, alpha: f64) -> Self {
        let caps = matrix
            .columns()
            .iter()
            .map(|c| k as f64 * c.target)
            .collect();
        let weights = matrix.columns().iter().map(|c| c.weight).collect();
        Coverage {
            matrix,
            caps,
            weights,
            alpha,
        }
    }

    pub fn matrix(&self) -> &'m BinaryMatrix {
        self.matrix
    }

    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    fn transform(&self, saturation: f64) -> f64 {
        if saturation == 0.0 {
            0.0
        } else {
            saturation.powf(self.alpha)
        }
    }

    fn saturation(&self, column: usize, count: u32) -> f64 {
        self.caps[column].min(count as f64)
    }

    /// Per-column counts of the given members.
    pub fn counts(&self, members: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.caps.len()];
        for &m in members {
            for &c in self.matrix.row(m) {
                counts[c] += 1;
            }
        }
        counts
    }

    /// Objective value from per-column counts.
    pub fn value(&self, counts: &[u32]) -> f64 {
        counts
            .iter()
            .enumerate()
            .map(|(c, &n)| self.weights[c] * self.transform(self.saturation(c, n)))
            .sum()
    }

    pub fn score(&self, members: &[usize]) -> ObjectiveScore {
        let per_column_counts = self.counts(members);
        let per_column_saturation: Vec<f64> = per_column_counts
            .iter()
            .enumerate()
            .map(|(c, &n)| self.saturation(c, n))
            .collect();
        let value = per_column_saturation
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * self.transform(s))
            .sum();
        ObjectiveScore {
            value,
            per_column_counts,
            per_column_saturation,
        }
    }

    /// Increase of the objective when `candidate` joins a set with the given
    /// per-column counts. Exactly zero once every column of the candidate is
    /// saturated.
    pub fn gain(&self, counts: &[u32], candidate: usize) -> f64 {
        self.matrix
            .row(candidate)
            .iter()
            .map(|&c| {
                let before = self.saturation(c, counts[c]);
                let after = self.saturation(c, counts[c] + 1);
                if after == before {
                    0.0
                } else {
                    self.weights[c] * (self.transform(after) - self.transform(before))
                }
            })
            .sum()
    }
}

fn check_alpha(params: &SelectionParams) -> Result<()> {
    if params.alpha > 0.0 && params.alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha = {} is outside (0, 1]",
            params.alpha
        )))
    }
}

/// Evaluates the objective on the set of candidates `selected` (by id).
pub fn objective<S: AsRef<str>>(
    matrix: &BinaryMatrix,
    selected: &[S],
    params: &SelectionParams,
) -> Result<ObjectiveScore> {
    check_alpha(params)?;
    let members = matrix.resolve(selected)?;
    Ok(Coverage::new(matrix, params.k, params.alpha).score(&members))
}

/// Marginal gain `f(X ∪ {x}) − f(X)` of adding `candidate` to `selected`.
///
/// Adding a candidate that is already a member is an error rather than a
/// zero gain.
pub fn marginal_gain<S: AsRef<str>>(
    matrix: &BinaryMatrix,
    selected: &[S],
    candidate: &str,
    params: &SelectionParams,
) -> Result<f64> {
    check_alpha(params)?;
    let members = matrix.resolve(selected)?;
    let x = matrix
        .position(candidate)
        .ok_or_else(|| Error::UnknownCandidate(candidate.to_string()))?;
    if members.contains(&x) {
        return Err(Error::AlreadySelected(candidate.to_string()));
    }
    let coverage = Coverage::new(matrix, params.k, params.alpha);
    Ok(coverage.gain(&coverage.counts(&members), x))
}
