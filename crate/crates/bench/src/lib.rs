//! Synthetic pools for the benchmarks.

use entrofy::{build_matrix, AttributeSpec, BinaryMatrix, CandidateTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A pool of `n` candidates with four categorical attributes of 2 to 5
/// labels each and one numeric attribute, as CSV text.
pub fn pool_csv(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("id,a2,a3,a4,a5,score\n");
    for i in 0..n {
        csv.push_str(&format!(
            "c{i},{},{},{},{},{:.2}\n",
            rng.random_range(0..2),
            rng.random_range(0..3),
            rng.random_range(0..4),
            rng.random_range(0..5),
            rng.random_range(0.0..100.0)
        ));
    }
    csv
}

/// Schema for [`pool_csv`] with uniform targets and five score bins.
pub fn schema() -> Vec<AttributeSpec> {
    let mut specs: Vec<AttributeSpec> = (2..=5)
        .map(|m| {
            let labels: Vec<String> = (0..m).map(|j| j.to_string()).collect();
            labels.iter().fold(
                AttributeSpec::categorical(format!("a{m}"), labels.clone()),
                |s, l| s.with_target(l, 1.0 / m as f64),
            )
        })
        .collect();
    specs.push(AttributeSpec::ordinal("score", 5));
    specs
}

pub fn pool(n: usize, seed: u64) -> BinaryMatrix {
    let table = CandidateTable::from_csv(pool_csv(n, seed).as_bytes(), None).unwrap();
    build_matrix(&table, &schema()).unwrap()
}
