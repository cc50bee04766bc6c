//! End-to-end selection over a raw candidate table.

use serde::{Deserialize, Serialize};

use crate::encode::{build_matrix, AttributeSpec};
use crate::error::Result;
use crate::metrics::{report, Report};
use crate::params::SelectionParams;
use crate::select::{entrofy_mc, SelectionResult};
use crate::table::CandidateTable;

/// Everything needed to reproduce a selection from a CSV file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRequest {
    /// Header of the id column; the first column when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_column: Option<String>,
    pub schema: Vec<AttributeSpec>,
    pub params: SelectionParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub result: SelectionResult,
    pub report: Report,
}

/// Encodes `table`, runs the best-of-n selector and measures the result
/// against the whole pool.
pub fn run_selection(
    table: &CandidateTable,
    schema: &[AttributeSpec],
    params: &SelectionParams,
) -> Result<SelectionOutcome> {
    let matrix = build_matrix(table, schema)?;
    let result = entrofy_mc(&matrix, params)?;
    let report = report(&matrix, &result.selected)?;
    Ok(SelectionOutcome { result, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_round_trips_through_json() {
        let json = r#"{
            "schema": [{"name": "g", "kind": "categorical", "categories": ["F", "M"],
                        "targets": {"F": 0.5, "M": 0.5}}],
            "params": {"k": 2, "seed": 4}
        }"#;
        let req: SelectionRequest = serde_json::from_str(json).unwrap();
        assert_eq!(req.params.alpha, 0.5);
        assert_eq!(req.params.n_trials, 15);
        assert_eq!(req.id_column, None);
        let back: SelectionRequest =
            serde_json::from_str(&serde_json::to_string(&req).unwrap()).unwrap();
        assert_eq!(back, req);

        let table = CandidateTable::from_csv("id,g\na,F\nb,M\nc,M\n".as_bytes(), None).unwrap();
        let out = run_selection(&table, &req.schema, &req.params).unwrap();
        assert_eq!(out.result.selected.len(), 2);
        assert_eq!(out.report.selected.overall, 0.0);
    }
}
