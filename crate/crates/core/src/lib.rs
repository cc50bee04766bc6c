//! Cohort selection by greedy maximization of a saturating coverage
//! objective.
//!
//! Candidates are encoded as binary indicator columns ([`encode`]), each
//! with a target fraction and a weight. A cohort of size `k` scores
//!
//! ```text
//! f(X) = Σ_i w_i · min(k·p_i, Σ_{x∈X} a_i(x))^α
//! ```
//!
//! and is built greedily by [`select`], optionally with randomized
//! near-tie breaking and best-of-n restarts. [`metrics`] measures how far a
//! set lies from the targets, and [`experiments`] hosts the planted-solution
//! simulations.
//!
//! ```
//! use entrofy::{build_matrix, entrofy_mc, AttributeSpec, CandidateTable, SelectionParams};
//!
//! let csv = "id,gender\na,F\nb,M\nc,M\nd,M\n";
//! let table = CandidateTable::from_csv(csv.as_bytes(), None).unwrap();
//! let specs = [AttributeSpec::categorical("gender", ["F", "M"])
//!     .with_target("F", 0.5)
//!     .with_target("M", 0.5)];
//! let matrix = build_matrix(&table, &specs).unwrap();
//! let result = entrofy_mc(&matrix, &SelectionParams::new(2).with_seed(1)).unwrap();
//! assert!(result.selected.contains(&"a".to_string()));
//! ```

/// Version of this library, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod encode;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod metrics;
pub mod objective;
pub mod params;
pub mod run;
pub mod select;
pub mod table;

pub use encode::{build_matrix, AttributeKind, AttributeSpec};
pub use error::{Error, Result};
pub use matrix::{BinaryColumn, BinaryMatrix};
pub use metrics::{distance, pool_distance, report, DistanceReport, Report};
pub use objective::{marginal_gain, objective, ObjectiveScore};
pub use params::SelectionParams;
pub use run::{run_selection, SelectionOutcome, SelectionRequest};
pub use select::{entrofy_mc, entrofy_select, greedy_select, SelectionResult};
pub use table::{CandidateTable, RawValue};
