//! Planted-solution simulations.
//!
//! A block of `n_out` candidates is built to meet every target exactly and
//! is then hidden among `n_random` distractors drawn at random. A run fails
//! when the selected cohort of size `n_out` scores below the planted block.
//! Two binary categories are simulated, each encoded as a `yes` and a `no`
//! column with targets `p` and `1 − p`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BinaryColumn, BinaryMatrix};
use crate::objective::Coverage;
use crate::params::SelectionParams;
use crate::select::{entrofy_mc, splitmix64};

/// Score shortfall beyond which a run counts as a failure.
pub const FAILURE_TOLERANCE: f64 = 1e-9;

/// Quantile level used by the simulations: each pick is drawn among the
/// top 5% of marginal gains (plus ties).
pub const EXPERIMENT_QUANTILE: f64 = 0.95;

/// The candidates that form the planted optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedBlock {
    pub target_fractions: Vec<f64>,
    /// `yes[a][i]`: whether planted candidate `i` says yes to category `a`.
    pub yes: Vec<Vec<bool>>,
    pub warnings: Vec<String>,
}

impl PlantedBlock {
    pub fn len(&self) -> usize {
        self.yes.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceConfig {
    pub n_out: usize,
    pub n_random: usize,
    pub target_fractions: Vec<f64>,
    pub noise_fractions: Vec<f64>,
    pub alpha: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub pool: BinaryMatrix,
    pub planted_ids: Vec<String>,
    pub planted_score: f64,
    pub config: InstanceConfig,
}

/// Mixes a list of words into one seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Builds `n_out` candidates with exactly `round(n_out·p)` yeses per
/// category, assigned to shuffled positions independently per category.
pub fn plant_solution(n_out: usize, target_fractions: &[f64], seed: u64) -> Result<PlantedBlock> {
    if n_out == 0 {
        return Err(Error::InvalidParameter("n_out must be positive".into()));
    }
    if let Some(p) = target_fractions.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidParameter(format!(
            "target fraction {p} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut warnings = Vec::new();
    let yes = target_fractions
        .iter()
        .enumerate()
        .map(|(a, &p)| {
            let count = round_half_up(n_out as f64 * p);
            if count == 0 && p > 0.0 {
                warnings.push(format!(
                    "category {a}: n_out·p = {} rounds to zero planted yeses",
                    n_out as f64 * p
                ));
            }
            let mut column: Vec<bool> = (0..n_out).map(|i| i < count).collect();
            column.shuffle(&mut rng);
            column
        })
        .collect();
    Ok(PlantedBlock {
        target_fractions: target_fractions.to_vec(),
        yes,
        warnings,
    })
}

/// Appends `n_random` distractors whose answers are i.i.d. Bernoulli with
/// the given noise fractions and encodes the whole pool.
///
/// Planted candidates are `p0, p1, …`; distractors are `r0, r1, …`.
pub fn add_noise(
    block: PlantedBlock,
    n_random: usize,
    noise_fractions: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<PlantedInstance> {
    if noise_fractions.len() != block.target_fractions.len() {
        return Err(Error::InvalidParameter(format!(
            "{} noise fractions for {} categories",
            noise_fractions.len(),
            block.target_fractions.len()
        )));
    }
    if let Some(f) = noise_fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Error::InvalidParameter(format!(
            "noise fraction {f} is outside [0, 1]"
        )));
    }
    let n_out = block.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let planted_ids: Vec<String> = (0..n_out).map(|i| format!("p{i}")).collect();
    let ids: Vec<String> = planted_ids
        .iter()
        .cloned()
        .chain((0..n_random).map(|i| format!("r{i}")))
        .collect();

    let mut columns = Vec::with_capacity(2 * block.yes.len());
    for (a, (planted, &noise)) in block.yes.iter().zip(noise_fractions).enumerate() {
        let yes: Vec<bool> = planted
            .iter()
            .copied()
            .chain((0..n_random).map(|_| rng.random::<f64>() < noise))
            .collect();
        let no: Vec<bool> = yes.iter().map(|y| !y).collect();
        let attribute = format!("cat{a}");
        let p = block.target_fractions[a];
        columns.push(
            BinaryColumn::new(format!("{attribute}=yes"), yes)
                .with_source(&attribute, "yes")
                .with_target(p),
        );
        columns.push(
            BinaryColumn::new(format!("{attribute}=no"), no)
                .with_source(&attribute, "no")
                .with_target(1.0 - p),
        );
    }
    let pool = BinaryMatrix::new(ids, columns)?;
    let planted: Vec<usize> = (0..n_out).collect();
    let planted_score = Coverage::new(&pool, n_out, alpha).score(&planted).value;

    Ok(PlantedInstance {
        pool,
        planted_ids,
        planted_score,
        config: InstanceConfig {
            n_out,
            n_random,
            target_fractions: block.target_fractions,
            noise_fractions: noise_fractions.to_vec(),
            alpha,
            seed,
            warnings: block.warnings,
        },
    })
}

/// Builds a complete instance; the planted block and the distractors get
/// independent streams derived from `seed`.
pub fn planted_instance(
    n_out: usize,
    n_random: usize,
    target_fractions: &[f64],
    noise_fractions: &[f64],
    alpha: f64,
    seed: u64,
) -> Result<PlantedInstance> {
    let block = plant_solution(n_out, target_fractions, derive_seed(seed, &[0]))?;
    let mut instance = add_noise(
        block,
        n_random,
        noise_fractions,
        alpha,
        derive_seed(seed, &[1]),
    )?;
    instance.config.seed = seed;
    Ok(instance)
}

impl PlantedInstance {
    /// Runs the selector once and reports whether it fell short of the
    /// planted score.
    pub fn run_fails(&self, n_trials: usize, quantile: f64, seed: u64) -> Result<bool> {
        let params = SelectionParams::new(self.config.n_out)
            .with_alpha(self.config.alpha)
            .with_quantile(quantile)
            .with_trials(n_trials)
            .with_seed(seed);
        let found = entrofy_mc(&self.pool, &params)?;
        Ok(self.planted_score - found.score.value > FAILURE_TOLERANCE)
    }
}

/// Parameters of one simulated cell. Category 0 is varied; category 1 is
/// held at `fixed_target` / `fixed_noise`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentCell {
    pub n_out: usize,
    pub n_random: usize,
    pub target_fraction: f64,
    pub noise_fraction: f64,
    pub fixed_target: f64,
    pub fixed_noise: f64,
    pub alpha: f64,
    pub n_trials: usize,
    pub quantile: f64,
}

impl ExperimentCell {
    pub fn target_fractions(&self) -> [f64; 2] {
        [self.target_fraction, self.fixed_target]
    }

    pub fn noise_fractions(&self) -> [f64; 2] {
        [self.noise_fraction, self.fixed_noise]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    #[serde(flatten)]
    pub cell: ExperimentCell,
    pub failures: usize,
    pub sims: usize,
    pub failure_rate: f64,
}

impl ExperimentOutcome {
    pub const CSV_HEADER: [&'static str; 12] = [
        "n_out",
        "n_random",
        "target_fraction",
        "noise_fraction",
        "fixed_target",
        "fixed_noise",
        "alpha",
        "n_trials",
        "quantile",
        "failures",
        "sims",
        "failure_rate",
    ];

    pub fn csv_record(&self) -> Vec<String> {
        let c = &self.cell;
        vec![
            c.n_out.to_string(),
            c.n_random.to_string(),
            c.target_fraction.to_string(),
            c.noise_fraction.to_string(),
            c.fixed_target.to_string(),
            c.fixed_noise.to_string(),
            c.alpha.to_string(),
            c.n_trials.to_string(),
            c.quantile.to_string(),
            self.failures.to_string(),
            self.sims.to_string(),
            self.failure_rate.to_string(),
        ]
    }
}

/// Writes outcomes as CSV, one row per cell.
pub fn outcomes_to_csv(outcomes: &[ExperimentOutcome]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    writer.write_record(ExperimentOutcome::CSV_HEADER).map_err(io)?;
    for o in outcomes {
        writer.write_record(o.csv_record()).map_err(io)?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

/// Runs `sims` simulations of one cell. Simulation `s` draws its instance
/// from `derive_seed(seed, [s, 0])` and its selector stream from
/// `derive_seed(seed, [s, 1])`.
pub fn run_cell(cell: &ExperimentCell, sims: usize, seed: u64) -> Result<ExperimentOutcome> {
    let results: Vec<bool> = (0..sims)
        .into_par_iter()
        .map(|s| {
            let instance = planted_instance(
                cell.n_out,
                cell.n_random,
                &cell.target_fractions(),
                &cell.noise_fractions(),
                cell.alpha,
                derive_seed(seed, &[s as u64, 0]),
            )?;
            instance.run_fails(cell.n_trials, cell.quantile, derive_seed(seed, &[s as u64, 1]))
        })
        .collect::<Result<_>>()?;
    let failures = results.iter().filter(|&&f| f).count();
    Ok(ExperimentOutcome {
        cell: cell.clone(),
        failures,
        sims,
        failure_rate: if sims == 0 {
            0.0
        } else {
            failures as f64 / sims as f64
        },
    })
}

/// Parameter grid of the noise-sweep experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment1Grid {
    pub n_out: Vec<usize>,
    pub n_random: Vec<usize>,
    pub target_fraction: Vec<f64>,
    pub noise_fraction: Vec<f64>,
    pub alpha: Vec<f64>,
    pub fixed_target: f64,
    pub fixed_noise: f64,
    pub quantile: f64,
    pub sims_per_cell: usize,
    pub trials_per_run: usize,
}

impl Default for Experiment1Grid {
    fn default() -> Self {
        Experiment1Grid {
            n_out: vec![10, 50, 100],
            n_random: vec![1, 10, 100, 1000],
            target_fraction: vec![0.1, 0.3, 0.5],
            noise_fraction: vec![0.0, 0.25, 0.5],
            alpha: vec![0.5, 1.0],
            fixed_target: 0.5,
            fixed_noise: 0.5,
            quantile: EXPERIMENT_QUANTILE,
            sims_per_cell: 50,
            trials_per_run: 1,
        }
    }
}

impl Experiment1Grid {
    pub fn cells(&self) -> Vec<ExperimentCell> {
        let mut cells = Vec::new();
        for &alpha in &self.alpha {
            for &n_out in &self.n_out {
                for &n_random in &self.n_random {
                    for &target_fraction in &self.target_fraction {
                        for &noise_fraction in &self.noise_fraction {
                            cells.push(ExperimentCell {
                                n_out,
                                n_random,
                                target_fraction,
                                noise_fraction,
                                fixed_target: self.fixed_target,
                                fixed_noise: self.fixed_noise,
                                alpha,
                                n_trials: self.trials_per_run,
                                quantile: self.quantile,
                            });
                        }
                    }
                }
            }
        }
        cells
    }
}

/// Failure rates over every cell of the grid.
///
/// The seed of a cell depends only on `(n_out, n_random, target_fraction)`,
/// so cells that differ in noise fraction or alpha see the same planted
/// blocks, the same uniform draws behind their distractors and the same
/// selector streams. Outcomes do not depend on scheduling.
pub fn run_experiment1(grid: &Experiment1Grid, seed: u64) -> Result<Vec<ExperimentOutcome>> {
    grid.cells()
        .par_iter()
        .map(|cell| {
            let key = [
                cell.n_out as u64,
                cell.n_random as u64,
                cell.target_fraction.to_bits(),
            ];
            run_cell(cell, grid.sims_per_cell, derive_seed(seed, &key))
        })
        .collect()
}

/// The restart-count experiment: 100 planted candidates with targets 0.5
/// in both categories, hidden among 5 distractors whose first category says
/// yes with probability 0.1 and whose second says yes with probability 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment2Config {
    pub n_trials: Vec<usize>,
    pub sims: usize,
    pub n_out: usize,
    pub n_random: usize,
    pub target_fractions: [f64; 2],
    pub noise_fractions: [f64; 2],
    pub alpha: f64,
    pub quantile: f64,
}

impl Default for Experiment2Config {
    fn default() -> Self {
        Experiment2Config {
            n_trials: vec![1, 2, 3, 5, 10, 20, 50, 100, 200],
            sims: 100,
            n_out: 100,
            n_random: 5,
            target_fractions: [0.5, 0.5],
            noise_fractions: [0.1, 0.5],
            alpha: 0.5,
            quantile: EXPERIMENT_QUANTILE,
        }
    }
}

/// Failure rate as a function of the number of restarts. Each restart count
/// gets its own seed stream `derive_seed(seed, [n_trials])`.
pub fn run_experiment2(config: &Experiment2Config, seed: u64) -> Result<Vec<ExperimentOutcome>> {
    config
        .n_trials
        .par_iter()
        .map(|&n_trials| {
            let cell = ExperimentCell {
                n_out: config.n_out,
                n_random: config.n_random,
                target_fraction: config.target_fractions[0],
                noise_fraction: config.noise_fractions[0],
                fixed_target: config.target_fractions[1],
                fixed_noise: config.noise_fractions[1],
                alpha: config.alpha,
                n_trials,
                quantile: config.quantile,
            };
            run_cell(&cell, config.sims, derive_seed(seed, &[n_trials as u64]))
        })
        .collect()
}
