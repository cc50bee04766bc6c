//! Greedy and randomized cohort selection.
//!
//! All three entry points share one step loop: starting from the
//! pre-selected candidates, compute the marginal gain of every remaining
//! candidate, keep those whose gain reaches a threshold, and draw one of
//! them uniformly from a seeded ChaCha stream. Plain greedy uses the
//! maximum gain as threshold; the randomized variant uses the nearest-rank
//! quantile of the gains, which is the maximum when the quantile level is 1.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::BinaryMatrix;
use crate::objective::{Coverage, ObjectiveScore};
use crate::params::SelectionParams;

/// Gains this close below the threshold still qualify.
pub const GAIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionResult {
    /// Selected ids, pre-selected first, then in pick order.
    pub selected: Vec<String>,
    pub score: ObjectiveScore,
    /// Index of the restart that produced `selected`.
    pub trial_index: usize,
    pub per_trial_scores: Vec<f64>,
    pub seed_used: u64,
    pub params_echo: SelectionParams,
    /// Objective after pre-seeding, then after each pick of the winning trial.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    Argmax,
    Quantile(f64),
}

struct Trial {
    members: Vec<usize>,
    trace: Vec<f64>,
}

/// Nearest-rank `q`-quantile of `gains`: the value at index `⌈q·M⌉ − 1` of
/// the ascending sort. `q = 1` yields the maximum.
pub fn quantile_threshold(gains: &[f64], q: f64) -> f64 {
    assert!(!gains.is_empty(), "quantile of an empty gain list");
    let m = gains.len();
    // The epsilon keeps products like 0.3·10 from ceiling to 4.
    let rank = ((q * m as f64 - 1e-9).ceil() as usize).clamp(1, m);
    let mut sorted = gains.to_vec();
    let (_, nth, _) = sorted.select_nth_unstable_by(rank - 1, f64::total_cmp);
    *nth
}

/// Derives the seed of restart `trial` from a master seed.
pub fn child_seed(master: u64, trial: usize) -> u64 {
    const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
    splitmix64(splitmix64(master).wrapping_add(GOLDEN.wrapping_mul(trial as u64 + 1)))
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_trial(coverage: &Coverage, pre: &[usize], k: usize, rule: Rule, seed: u64) -> Trial {
    let matrix = coverage.matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = pre.to_vec();
    let mut counts = coverage.counts(&members);
    let mut trace = vec![coverage.value(&counts)];

    let mut taken = vec![false; matrix.pool_size()];
    for &m in &members {
        taken[m] = true;
    }
    let mut remaining: Vec<usize> = (0..matrix.pool_size()).filter(|&i| !taken[i]).collect();
    let mut gains = Vec::with_capacity(remaining.len());
    let mut eligible = Vec::with_capacity(remaining.len());

    while members.len() < k {
        gains.clear();
        gains.extend(remaining.iter().map(|&x| coverage.gain(&counts, x)));
        let threshold = match rule {
            Rule::Argmax => gains.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Rule::Quantile(q) => quantile_threshold(&gains, q),
        };
        eligible.clear();
        eligible.extend((0..remaining.len()).filter(|&i| gains[i] >= threshold - GAIN_TOLERANCE));

        let slot = eligible[rng.random_range(0..eligible.len())];
        let pick = remaining.remove(slot);
        for &c in matrix.row(pick) {
            counts[c] += 1;
        }
        members.push(pick);
        trace.push(coverage.value(&counts));
    }
    Trial { members, trace }
}

fn finish(
    coverage: &Coverage,
    trial: Trial,
    trial_index: usize,
    per_trial_scores: Vec<f64>,
    seed_used: u64,
    params_echo: SelectionParams,
) -> SelectionResult {
    let ids = coverage.matrix().candidate_ids();
    SelectionResult {
        selected: trial.members.iter().map(|&i| ids[i].clone()).collect(),
        score: coverage.score(&trial.members),
        trial_index,
        per_trial_scores,
        seed_used,
        params_echo,
        trace: trial.trace,
    }
}

fn single(matrix: &BinaryMatrix, params: &SelectionParams, rule: Rule) -> Result<SelectionResult> {
    let pre = params.validate_for(matrix)?;
    let coverage = Coverage::new(matrix, params.k, params.alpha);
    let trial = run_trial(&coverage, &pre, params.k, rule, params.seed);
    let score = coverage.value(&coverage.counts(&trial.members));
    let echo = SelectionParams {
        n_trials: 1,
        ..params.clone()
    };
    Ok(finish(&coverage, trial, 0, vec![score], params.seed, echo))
}

/// Greedy maximization: each step adds a candidate of maximum marginal
/// gain, breaking exact ties uniformly at random from the seeded stream.
pub fn greedy_select(matrix: &BinaryMatrix, params: &SelectionParams) -> Result<SelectionResult> {
    single(matrix, params, Rule::Argmax)
}

/// One randomized run: each step draws uniformly among candidates whose
/// gain reaches the nearest-rank `params.quantile` quantile of all gains.
pub fn entrofy_select(matrix: &BinaryMatrix, params: &SelectionParams) -> Result<SelectionResult> {
    single(matrix, params, Rule::Quantile(params.quantile))
}

/// Best of `params.n_trials` independent randomized runs.
///
/// Trial `j` runs on `child_seed(params.seed, j)`. Trials execute in
/// parallel but the result depends only on the master seed; ties between
/// trials go to the lowest index.
pub fn entrofy_mc(matrix: &BinaryMatrix, params: &SelectionParams) -> Result<SelectionResult> {
    let pre = params.validate_for(matrix)?;
    let coverage = Coverage::new(matrix, params.k, params.alpha);
    let rule = Rule::Quantile(params.quantile);
    let trials: Vec<(Trial, f64)> = (0..params.n_trials)
        .into_par_iter()
        .map(|j| {
            let trial = run_trial(&coverage, &pre, params.k, rule, child_seed(params.seed, j));
            let value = coverage.value(&coverage.counts(&trial.members));
            (trial, value)
        })
        .collect();

    let per_trial_scores: Vec<f64> = trials.iter().map(|(_, v)| *v).collect();
    let mut best = 0;
    for (j, &v) in per_trial_scores.iter().enumerate().skip(1) {
        if v > per_trial_scores[best] {
            best = j;
        }
    }
    let winner = trials.into_iter().nth(best).map(|(t, _)| t).unwrap();
    Ok(finish(
        &coverage,
        winner,
        best,
        per_trial_scores,
        params.seed,
        params.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::matrix::BinaryColumn;
    use crate::objective::objective;

    fn abcd() -> BinaryMatrix {
        BinaryMatrix::new(
            ["A", "B", "C", "D"].map(String::from).to_vec(),
            vec![
                BinaryColumn::new("g", vec![true, true, false, false]).with_target(0.5),
                BinaryColumn::new("s", vec![false, true, true, false]).with_target(0.5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn nearest_rank_threshold() {
        assert_eq!(quantile_threshold(&[0.2, 0.5, 0.5, 1.0], 0.5), 0.5);
        assert_eq!(quantile_threshold(&[1.0, 0.2, 0.5, 0.5], 1.0), 1.0);
        assert_eq!(quantile_threshold(&[1.0, 0.2, 0.5, 0.5], 0.25), 0.2);
        assert_eq!(quantile_threshold(&[3.0], 0.01), 3.0);
        // 0.3·10 is 3.0000000000000004 in binary floating point.
        let g: Vec<f64> = (0..10).map(f64::from).collect();
        assert_eq!(quantile_threshold(&g, 0.3), 2.0);
    }

    #[test]
    fn greedy_picks_b_first_on_abcd() {
        let m = abcd();
        for seed in 0..20 {
            let r = greedy_select(&m, &SelectionParams::new(2).with_alpha(1.0).with_seed(seed))
                .unwrap();
            assert_eq!(r.selected[0], "B");
            assert_eq!(r.score.value, 2.0);
            assert_eq!(r.trace, vec![0.0, 2.0, 2.0]);
        }
    }

    #[test]
    fn full_pool_selects_everything() {
        let m = abcd();
        for seed in 0..5 {
            let r = entrofy_mc(&m, &SelectionParams::new(4).with_seed(seed).with_quantile(0.3))
                .unwrap();
            let mut s = r.selected.clone();
            s.sort();
            assert_eq!(s, vec!["A", "B", "C", "D"]);
        }
    }

    #[test]
    fn pre_selected_b_still_reaches_two() {
        let m = abcd();
        for seed in 0..20 {
            let p = SelectionParams::new(2)
                .with_alpha(1.0)
                .with_seed(seed)
                .with_pre_selected(["B"]);
            let r = greedy_select(&m, &p).unwrap();
            assert_eq!(r.selected[0], "B");
            assert_eq!(r.score.value, 2.0);
        }
    }

    #[test]
    fn errors_on_oversized_k_and_pre_selection() {
        let m = abcd();
        assert!(greedy_select(&m, &SelectionParams::new(5))
            .unwrap_err()
            .is_infeasible());
        let p = SelectionParams::new(1).with_pre_selected(["A", "B"]);
        assert_eq!(
            entrofy_select(&m, &p).unwrap_err(),
            Error::TooManyPreSelected { count: 2, k: 1 }
        );
    }

    #[test]
    fn single_trial_mc_matches_child_seed_run() {
        let m = abcd();
        let p = SelectionParams::new(3).with_seed(99).with_quantile(0.5).with_trials(1);
        let mc = entrofy_mc(&m, &p).unwrap();
        let one = entrofy_select(&m, &p.clone().with_seed(child_seed(99, 0))).unwrap();
        assert_eq!(mc.selected, one.selected);
        assert_eq!(mc.score, one.score);
        assert_eq!(mc.trace, one.trace);
        assert_eq!(mc.seed_used, 99);
    }

    #[test]
    fn mc_reports_best_trial() {
        let m = abcd();
        let p = SelectionParams::new(2).with_alpha(1.0).with_quantile(0.25).with_trials(12);
        let r = entrofy_mc(&m, &p).unwrap();
        assert_eq!(r.per_trial_scores.len(), 12);
        let best = r.per_trial_scores.iter().copied().fold(f64::MIN, f64::max);
        assert_eq!(r.score.value, best);
        assert_eq!(r.per_trial_scores[r.trial_index], best);
        assert!(r.per_trial_scores[..r.trial_index].iter().all(|&v| v < best));
        let again = objective(&m, &r.selected, &p).unwrap();
        assert_eq!(again.value, r.score.value);
    }

    #[test]
    fn child_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|j| child_seed(7, j)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(child_seed(7, 0), child_seed(8, 0));
    }
}
