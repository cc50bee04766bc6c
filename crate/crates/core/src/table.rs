//! Raw candidate rows before encoding, and CSV ingestion.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Number(f64),
    Text(String),
    Missing,
}

impl RawValue {
    /// Parses a CSV field: empty (after trimming) is missing, everything
    /// else is text.
    pub fn from_field(field: &str) -> Self {
        let field = field.trim();
        if field.is_empty() {
            RawValue::Missing
        } else {
            RawValue::Text(field.to_string())
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, RawValue::Missing)
    }

    /// The value as a categorical label.
    pub fn label(&self) -> Option<String> {
        match self {
            RawValue::Number(x) => Some(x.to_string()),
            RawValue::Text(s) => Some(s.clone()),
            RawValue::Missing => None,
        }
    }

    /// The value as a number, if it is one or parses as one.
    pub fn number(&self) -> Option<f64> {
        match self {
            RawValue::Number(x) => Some(*x),
            RawValue::Text(s) => s.parse().ok().filter(|x: &f64| x.is_finite()),
            RawValue::Missing => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRow {
    pub id: String,
    pub values: BTreeMap<String, RawValue>,
}

/// The candidate pool as raw attribute values.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateTable {
    attributes: Vec<String>,
    rows: Vec<CandidateRow>,
}

static MISSING: RawValue = RawValue::Missing;

impl CandidateTable {
    /// `attributes` lists the attribute names present in the data, in
    /// display order.
    pub fn new(attributes: Vec<String>, rows: Vec<CandidateRow>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.id.is_empty() {
                return Err(Error::EmptyCandidateId(i));
            }
            if !seen.insert(row.id.as_str()) {
                return Err(Error::DuplicateCandidate(row.id.clone()));
            }
        }
        Ok(CandidateTable { attributes, rows })
    }

    /// Reads an RFC 4180 CSV with a header row. The id column defaults to
    /// the first column; every other column becomes an attribute.
    pub fn from_csv<R: Read>(reader: R, id_column: Option<&str>) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(reader);
        let headers: Vec<String> = csv
            .headers()
            .map_err(csv_error)?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        if headers.iter().all(String::is_empty) {
            return Err(Error::InvalidParameter("CSV input has no header row".into()));
        }
        let id_index = match id_column {
            Some(name) => headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::InvalidParameter(format!("id column `{name}` not found in header"))
            })?,
            None => 0,
        };
        let mut names = HashSet::new();
        if let Some(dup) = headers.iter().find(|h| !names.insert(h.as_str())) {
            return Err(Error::InvalidParameter(format!(
                "duplicate header column `{dup}`"
            )));
        }
        let attributes: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != id_index)
            .map(|(_, h)| h.clone())
            .collect();

        let mut rows = Vec::new();
        for (r, record) in csv.records().enumerate() {
            let record = record.map_err(csv_error)?;
            let id = record.get(id_index).unwrap_or("").trim().to_string();
            if id.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "row {}: empty candidate id",
                    r + 2
                )));
            }
            let values = record
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != id_index)
                .map(|(i, field)| (headers[i].clone(), RawValue::from_field(field)))
                .collect();
            rows.push(CandidateRow { id, values });
        }
        if rows.is_empty() {
            return Err(Error::InvalidParameter("CSV input has no candidate rows".into()));
        }
        CandidateTable::new(attributes, rows)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn has_attribute(&self, name: &str) -> bool {
        self.attributes.iter().any(|a| a == name)
    }

    pub fn rows(&self) -> &[CandidateRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.rows.iter().map(|r| r.id.clone()).collect()
    }

    pub fn value(&self, row: usize, attribute: &str) -> &RawValue {
        self.rows[row].values.get(attribute).unwrap_or(&MISSING)
    }

    /// Observed values per attribute, to seed schema editing.
    pub fn summarize(&self) -> Vec<ColumnSummary> {
        self.attributes
            .iter()
            .map(|name| {
                let values: Vec<&RawValue> = (0..self.len()).map(|i| self.value(i, name)).collect();
                let present: Vec<&RawValue> =
                    values.iter().copied().filter(|v| !v.is_missing()).collect();
                let numbers: Vec<f64> = present.iter().filter_map(|v| v.number()).collect();
                let numeric_range = (!numbers.is_empty() && numbers.len() == present.len())
                    .then(|| {
                        let lo = numbers.iter().copied().fold(f64::INFINITY, f64::min);
                        let hi = numbers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        [lo, hi]
                    });
                let distinct: BTreeSet<String> = present.iter().filter_map(|v| v.label()).collect();
                ColumnSummary {
                    name: name.clone(),
                    missing: values.len() - present.len(),
                    distinct: distinct.into_iter().collect(),
                    numeric_range,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub name: String,
    pub missing: usize,
    pub distinct: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_range: Option<[f64; 2]>,
}

fn csv_error(e: csv::Error) -> Error {
    let at = e
        .position()
        .map(|p| format!(" at line {}", p.line()))
        .unwrap_or_default();
    let detail = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => format!("expected {expected_len} fields, found {len}"),
        csv::ErrorKind::Utf8 { err, .. } => format!("invalid UTF-8 in field {}", err.field() + 1),
        _ => e.to_string(),
    };
    Error::InvalidParameter(format!("CSV parse error{at}: {detail}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "id,gender,age\nA,F,30\nB,M,\n\"C\",\"F\",41\n";

    #[test]
    fn reads_csv_with_missing_values() {
        let t = CandidateTable::from_csv(FIXTURE.as_bytes(), None).unwrap();
        assert_eq!(t.ids(), vec!["A", "B", "C"]);
        assert_eq!(t.attributes(), &["gender", "age"]);
        assert_eq!(t.value(1, "age"), &RawValue::Missing);
        assert_eq!(t.value(2, "age").number(), Some(41.0));
        assert_eq!(t.value(0, "nope"), &RawValue::Missing);
    }

    #[test]
    fn explicit_id_column() {
        let t = CandidateTable::from_csv("x,key\n1,a\n2,b\n".as_bytes(), Some("key")).unwrap();
        assert_eq!(t.ids(), vec!["a", "b"]);
        assert_eq!(t.attributes(), &["x"]);
    }

    #[test]
    fn duplicate_id_is_named() {
        let err = CandidateTable::from_csv("id,g\nA,1\nA,2\n".as_bytes(), None).unwrap_err();
        assert_eq!(err, Error::DuplicateCandidate("A".into()));
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = CandidateTable::from_csv("id,g\nA,1\nB,2,3\n".as_bytes(), None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(CandidateTable::from_csv("".as_bytes(), None).is_err());
        assert!(CandidateTable::from_csv("id,g\n".as_bytes(), None).is_err());
    }

    #[test]
    fn summary_reports_ranges_and_values() {
        let t = CandidateTable::from_csv(FIXTURE.as_bytes(), None).unwrap();
        let s = t.summarize();
        assert_eq!(s[0].distinct, vec!["F", "M"]);
        assert_eq!(s[0].numeric_range, None);
        assert_eq!(s[1].missing, 1);
        assert_eq!(s[1].numeric_range, Some([30.0, 41.0]));
    }
}
