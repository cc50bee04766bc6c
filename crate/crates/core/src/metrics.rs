//! Distance between a set's attribute fractions and the targets.
//!
//! ```text
//! d(X) = (1/N) Σ_i (1/n_i) Σ_j | count_ij(X) / |X| − p_ij |
//! ```
//!
//! over the `N` source attributes with `n_i` labels each. Attributes count
//! equally regardless of weight.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDeviation {
    pub column_id: String,
    pub achieved: f64,
    pub target: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeDistance {
    pub attribute: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub overall: f64,
    pub per_attribute: Vec<AttributeDistance>,
    pub per_column: Vec<ColumnDeviation>,
    pub set_size: usize,
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

fn distance_of(matrix: &BinaryMatrix, members: &[usize]) -> DistanceReport {
    let size = members.len() as f64;
    let per_column: Vec<ColumnDeviation> = matrix
        .columns()
        .iter()
        .map(|c| {
            let achieved = c.count(members) as f64 / size;
            ColumnDeviation {
                column_id: c.column_id.clone(),
                achieved,
                target: c.target,
                deviation: (achieved - c.target).abs(),
            }
        })
        .collect();
    let per_attribute: Vec<AttributeDistance> = matrix
        .attribute_groups()
        .into_iter()
        .map(|(attribute, cols)| AttributeDistance {
            attribute: attribute.to_string(),
            distance: mean(cols.iter().map(|&c| per_column[c].deviation)),
        })
        .collect();
    DistanceReport {
        overall: mean(per_attribute.iter().map(|a| a.distance)),
        per_attribute,
        per_column,
        set_size: members.len(),
    }
}

fn members<S: AsRef<str>>(matrix: &BinaryMatrix, selected: &[S]) -> Result<Vec<usize>> {
    let members = matrix.resolve(selected)?;
    if members.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(members)
}

/// Distance of the set `selected` from the column targets. Pass every
/// candidate id to measure the whole pool.
pub fn distance<S: AsRef<str>>(matrix: &BinaryMatrix, selected: &[S]) -> Result<DistanceReport> {
    Ok(distance_of(matrix, &members(matrix, selected)?))
}

/// Distance of the whole pool from the targets.
pub fn pool_distance(matrix: &BinaryMatrix) -> Result<DistanceReport> {
    distance(matrix, matrix.candidate_ids())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub column_id: String,
    pub attribute: String,
    pub label: String,
    pub weight: f64,
    pub target: f64,
    pub pool_fraction: f64,
    pub selected_fraction: f64,
    pub deviation: f64,
}

/// Per-column targets against pool and selected fractions, in matrix
/// column order, with the distances of both sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub pool: DistanceReport,
    pub selected: DistanceReport,
}

pub fn report<S: AsRef<str>>(matrix: &BinaryMatrix, selected: &[S]) -> Result<Report> {
    let chosen = members(matrix, selected)?;
    let everyone: Vec<usize> = (0..matrix.pool_size()).collect();
    if everyone.is_empty() {
        return Err(Error::EmptySelection);
    }
    let pool = distance_of(matrix, &everyone);
    let selected = distance_of(matrix, &chosen);
    let rows = matrix
        .columns()
        .iter()
        .enumerate()
        .map(|(c, col)| ReportRow {
            column_id: col.column_id.clone(),
            attribute: col.source_attribute.clone(),
            label: col.value_label.clone(),
            weight: col.weight,
            target: col.target,
            pool_fraction: pool.per_column[c].achieved,
            selected_fraction: selected.per_column[c].achieved,
            deviation: selected.per_column[c].deviation,
        })
        .collect();
    Ok(Report {
        rows,
        pool,
        selected,
    })
}

impl Report {
    pub const CSV_HEADER: [&'static str; 8] = [
        "column_id",
        "attribute",
        "label",
        "weight",
        "target",
        "pool_fraction",
        "selected_fraction",
        "deviation",
    ];

    /// RFC 4180 CSV, one row per column. Numbers use the shortest
    /// representation that round-trips.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        // Writing into a Vec cannot fail.
        w.write_record(Self::CSV_HEADER).unwrap();
        for r in &self.rows {
            w.write_record([
                r.column_id.clone(),
                r.attribute.clone(),
                r.label.clone(),
                r.weight.to_string(),
                r.target.to_string(),
                r.pool_fraction.to_string(),
                r.selected_fraction.to_string(),
                r.deviation.to_string(),
            ])
            .unwrap();
        }
        w.into_inner().unwrap()
    }
}
