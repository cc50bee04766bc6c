//! Random instances and a brute-force objective that shares no code with
//! the library's evaluator.

#![allow(dead_code)]

use entrofy::{BinaryColumn, BinaryMatrix};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Instance {
    /// `indicator[c][x]`
    pub indicator: Vec<Vec<bool>>,
    pub targets: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Instance {
    pub fn random<R: Rng>(rng: &mut R, max_pool: usize, max_cols: usize) -> Self {
        let pool = rng.random_range(1..=max_pool);
        let cols = rng.random_range(1..=max_cols);
        let density = rng.random_range(0.1..0.9);
        Instance {
            indicator: (0..cols)
                .map(|_| (0..pool).map(|_| rng.random_bool(density)).collect())
                .collect(),
            targets: (0..cols).map(|_| rng.random_range(0.0..=1.0)).collect(),
            weights: (0..cols).map(|_| rng.random_range(0.0..3.0)).collect(),
        }
    }

    pub fn pool(&self) -> usize {
        self.indicator[0].len()
    }

    pub fn ids(&self) -> Vec<String> {
        (0..self.pool()).map(|i| format!("x{i}")).collect()
    }

    pub fn matrix(&self) -> BinaryMatrix {
        let columns = self
            .indicator
            .iter()
            .enumerate()
            .map(|(c, ind)| {
                BinaryColumn::new(format!("col{c}"), ind.clone())
                    .with_target(self.targets[c])
                    .with_weight(self.weights[c])
            })
            .collect();
        BinaryMatrix::new(self.ids(), columns).unwrap()
    }

    /// Direct evaluation of Σ w · min(k·p, count)^α.
    pub fn brute_value(&self, set: &[usize], k: usize, alpha: f64) -> f64 {
        let mut total = 0.0;
        for c in 0..self.indicator.len() {
            let mut count = 0.0;
            for &x in set {
                if self.indicator[c][x] {
                    count += 1.0;
                }
            }
            let cap = k as f64 * self.targets[c];
            let s = if count < cap { count } else { cap };
            if s > 0.0 {
                total += self.weights[c] * s.powf(alpha);
            }
        }
        total
    }

    /// Optimum over all subsets of size exactly `k`.
    pub fn exhaustive_optimum(&self, k: usize, alpha: f64) -> (f64, Vec<usize>) {
        let n = self.pool();
        let mut best = (f64::NEG_INFINITY, Vec::new());
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let v = self.brute_value(&set, k, alpha);
            if v > best.0 {
                best = (v, set);
            }
        }
        best
    }
}

pub fn names(ids: &[String], set: &[usize]) -> Vec<String> {
    set.iter().map(|&i| ids[i].clone()).collect()
}
