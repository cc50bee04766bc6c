//! Attribute schemas and their binary encodings.
//!
//! Categorical attributes are one-hot encoded over their declared
//! categories. Ordinal attributes are cut into bins (equal width between the
//! observed extremes unless edges are given) and the bins one-hot encoded.
//! A joint attribute crosses two categorical or binned attributes into
//! `N_i·N_j` combined labels. Every column of an attribute shares the
//! attribute's weight; labels without a target get target 0. Missing values
//! leave all of a candidate's indicators for that attribute unset.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BinaryColumn, BinaryMatrix};
use crate::table::CandidateTable;

/// Allowed excess of an attribute's target sum over 1.
pub const TARGET_SUM_TOLERANCE: f64 = 1e-9;

/// Separator of the two component labels in a joint label.
pub const JOINT_SEPARATOR: &str = "×";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttributeKind {
    Categorical,
    Ordinal,
    Joint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    /// Declared values of a categorical attribute, in column order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
    /// Number of equal-width bins of an ordinal attribute.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    /// Explicit, strictly increasing bin edges of an ordinal attribute.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<f64>>,
    /// Names for the ordinal bins; defaults to the interval notation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bin_labels: Option<Vec<String>>,
    /// The two attributes crossed by a joint attribute.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<String>,
    #[serde(default = "default_weight")]
    pub weight: f64,
    /// Target fraction per label.
    #[serde(default)]
    pub targets: BTreeMap<String, f64>,
    /// Only feeds joint attributes; contributes no columns of its own.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub component_only: bool,
}

fn default_weight() -> f64 {
    1.0
}

impl AttributeSpec {
    fn base(name: impl Into<String>, kind: AttributeKind) -> Self {
        AttributeSpec {
            name: name.into(),
            kind,
            categories: Vec::new(),
            bins: None,
            edges: None,
            bin_labels: None,
            components: Vec::new(),
            weight: 1.0,
            targets: BTreeMap::new(),
            component_only: false,
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        categories: impl IntoIterator<Item = S>,
    ) -> Self {
        AttributeSpec {
            categories: categories.into_iter().map(Into::into).collect(),
            ..Self::base(name, AttributeKind::Categorical)
        }
    }

    pub fn ordinal(name: impl Into<String>, bins: usize) -> Self {
        AttributeSpec {
            bins: Some(bins),
            ..Self::base(name, AttributeKind::Ordinal)
        }
    }

    pub fn ordinal_with_edges(name: impl Into<String>, edges: Vec<f64>) -> Self {
        AttributeSpec {
            edges: Some(edges),
            ..Self::base(name, AttributeKind::Ordinal)
        }
    }

    pub fn joint(name: impl Into<String>, first: impl Into<String>, second: impl Into<String>) -> Self {
        AttributeSpec {
            components: vec![first.into(), second.into()],
            ..Self::base(name, AttributeKind::Joint)
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_target(mut self, label: impl Into<String>, target: f64) -> Self {
        self.targets.insert(label.into(), target);
        self
    }

    pub fn with_bin_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        self.bin_labels = Some(labels.into_iter().map(Into::into).collect());
        self
    }

    pub fn component_only(mut self) -> Self {
        self.component_only = true;
        self
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::attribute(&self.name, message)
    }

    pub fn target_sum(&self) -> f64 {
        self.targets.values().sum()
    }

    /// `1 − Σ targets`: the share of the cohort left unconstrained.
    pub fn target_slack(&self) -> f64 {
        1.0 - self.target_sum()
    }

    /// Checks the attribute description on its own, without data.
    pub fn validate(&self) -> Result<()> {
        let mut errors = Vec::new();
        if self.name.trim().is_empty() {
            errors.push(self.err("attribute name is empty"));
        }
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            errors.push(self.err(format!("weight {} must be finite and >= 0", self.weight)));
        }
        for (label, &t) in &self.targets {
            if !(0.0..=1.0).contains(&t) {
                errors.push(self.err(format!("target {t} for `{label}` is outside [0, 1]")));
            }
        }
        let sum = self.target_sum();
        if sum > 1.0 + TARGET_SUM_TOLERANCE {
            errors.push(self.err(format!("targets sum to {sum}, more than 1")));
        }
        match self.kind {
            AttributeKind::Categorical => {
                if self.categories.is_empty() {
                    errors.push(self.err("categorical attribute declares no categories"));
                }
                let mut seen = HashSet::new();
                for c in &self.categories {
                    if !seen.insert(c) {
                        errors.push(self.err(format!("category `{c}` declared twice")));
                    }
                }
            }
            AttributeKind::Ordinal => {
                if let Err(e) = self.bin_count() {
                    errors.push(e);
                }
                if let Some(edges) = &self.edges {
                    if edges.iter().any(|e| !e.is_finite())
                        || edges.windows(2).any(|w| w[0] >= w[1])
                    {
                        errors.push(self.err("bin edges must be finite and strictly increasing"));
                    }
                }
            }
            AttributeKind::Joint => {
                if self.components.len() != 2 {
                    errors.push(self.err(format!(
                        "joint attribute needs exactly two components, got {}",
                        self.components.len()
                    )));
                }
            }
        }
        if self.kind != AttributeKind::Joint && !self.components.is_empty() {
            errors.push(self.err("only joint attributes take components"));
        }
        Error::collect(errors)
    }

    fn bin_count(&self) -> Result<usize> {
        let m = match (&self.edges, self.bins) {
            (Some(edges), Some(m)) if edges.len() != m + 1 => {
                return Err(self.err(format!(
                    "{} edges do not describe {m} bins",
                    edges.len()
                )))
            }
            (Some(edges), _) => edges.len().saturating_sub(1),
            (None, Some(m)) => m,
            (None, None) => return Err(self.err("ordinal attribute needs `bins` or `edges`")),
        };
        if m == 0 {
            return Err(self.err("ordinal attribute needs at least one bin"));
        }
        if let Some(labels) = &self.bin_labels {
            if labels.len() != m {
                return Err(self.err(format!("{} bin labels for {m} bins", labels.len())));
            }
        }
        Ok(m)
    }

    fn require_kind(&self, kind: AttributeKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(self.err(format!("expected a {kind:?} attribute, found {:?}", self.kind)))
        }
    }

    fn require_column(&self, table: &CandidateTable) -> Result<()> {
        if table.has_attribute(&self.name) {
            Ok(())
        } else {
            Err(self.err("attribute is absent from the candidate data"))
        }
    }
}

/// Labels of one attribute and, per candidate, the index of its label
/// (`None` when the value is missing).
#[derive(Debug, Clone, PartialEq)]
struct Assignment {
    labels: Vec<String>,
    members: Vec<Option<usize>>,
}

impl Assignment {
    fn into_columns(self, spec: &AttributeSpec) -> Result<Vec<BinaryColumn>> {
        let known: HashSet<&str> = self.labels.iter().map(String::as_str).collect();
        let unknown: Vec<&str> = spec
            .targets
            .keys()
            .map(String::as_str)
            .filter(|l| !known.contains(l))
            .collect();
        if !unknown.is_empty() {
            return Err(spec.err(format!(
                "targets name unknown labels: {}",
                unknown.join(", ")
            )));
        }
        Ok(self
            .labels
            .iter()
            .enumerate()
            .map(|(j, label)| {
                let indicator = self.members.iter().map(|m| *m == Some(j)).collect();
                BinaryColumn::new(format!("{}={label}", spec.name), indicator)
                    .with_source(&spec.name, label)
                    .with_weight(spec.weight)
                    .with_target(spec.targets.get(label).copied().unwrap_or(0.0))
            })
            .collect())
    }
}

fn assign_categorical(table: &CandidateTable, spec: &AttributeSpec) -> Result<Assignment> {
    spec.require_kind(AttributeKind::Categorical)?;
    spec.validate()?;
    spec.require_column(table)?;
    let index: BTreeMap<&str, usize> = spec
        .categories
        .iter()
        .enumerate()
        .map(|(j, c)| (c.as_str(), j))
        .collect();
    let mut errors = Vec::new();
    let members = table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let label = table.value(i, &spec.name).label()?;
            match index.get(label.as_str()) {
                Some(&j) => Some(j),
                None => {
                    errors.push(spec.err(format!(
                        "candidate `{}` has undeclared value `{label}`",
                        row.id
                    )));
                    None
                }
            }
        })
        .collect();
    Error::collect(errors)?;
    Ok(Assignment {
        labels: spec.categories.clone(),
        members,
    })
}

fn interval_label(lo: f64, hi: f64, closed: bool) -> String {
    format!("[{lo}, {hi}{}", if closed { "]" } else { ")" })
}

/// Bin of `value`: half-open `[e_j, e_{j+1})` except the closed last bin.
fn bin_of(edges: &[f64], value: f64) -> Option<usize> {
    let m = edges.len() - 1;
    if value < edges[0] || value > edges[m] {
        return None;
    }
    let j = edges.partition_point(|&e| e <= value);
    Some(j.saturating_sub(1).min(m - 1))
}

/// Equal-width edges from `lo` to `hi`; the last edge is exactly `hi`.
fn linspace(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let step = (hi - lo) / bins as f64;
    (0..=bins)
        .map(|j| if j == bins { hi } else { lo + j as f64 * step })
        .collect()
}

fn assign_ordinal(table: &CandidateTable, spec: &AttributeSpec) -> Result<Assignment> {
    spec.require_kind(AttributeKind::Ordinal)?;
    spec.validate()?;
    spec.require_column(table)?;
    let m = spec.bin_count()?;

    let mut errors = Vec::new();
    let values: Vec<Option<f64>> = table
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let raw = table.value(i, &spec.name);
            if raw.is_missing() {
                return None;
            }
            let v = raw.number();
            if v.is_none() {
                errors.push(spec.err(format!(
                    "candidate `{}` has non-numeric value `{}`",
                    row.id,
                    raw.label().unwrap_or_default()
                )));
            }
            v
        })
        .collect();
    Error::collect(errors)?;

    let edges = match &spec.edges {
        Some(edges) => edges.clone(),
        None => {
            let present: Vec<f64> = values.iter().flatten().copied().collect();
            if present.is_empty() {
                return Err(spec.err("every value is missing; cannot place bins"));
            }
            let lo = present.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = present.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo == hi && m > 1 {
                return Err(spec.err(format!(
                    "all values equal {lo}; {m} bins cannot be formed, treat it as categorical"
                )));
            }
            if lo == hi {
                vec![lo, hi]
            } else {
                linspace(lo, hi, m)
            }
        }
    };

    let labels = spec.bin_labels.clone().unwrap_or_else(|| {
        (0..m)
            .map(|j| interval_label(edges[j], edges[j + 1], j + 1 == m))
            .collect()
    });

    let mut errors = Vec::new();
    let members = values
        .iter()
        .zip(table.rows())
        .map(|(v, row)| {
            let v = (*v)?;
            let bin = bin_of(&edges, v);
            if bin.is_none() {
                errors.push(spec.err(format!(
                    "candidate `{}` value {v} lies outside the bin edges",
                    row.id
                )));
            }
            bin
        })
        .collect();
    Error::collect(errors)?;
    Ok(Assignment { labels, members })
}

fn assign_component(table: &CandidateTable, spec: &AttributeSpec) -> Result<Assignment> {
    match spec.kind {
        AttributeKind::Categorical => assign_categorical(table, spec),
        AttributeKind::Ordinal => assign_ordinal(table, spec),
        AttributeKind::Joint => Err(spec.err("a joint attribute cannot be a joint component")),
    }
}

/// One-hot encoding over the declared categories.
pub fn encode_categorical(table: &CandidateTable, spec: &AttributeSpec) -> Result<Vec<BinaryColumn>> {
    assign_categorical(table, spec)?.into_columns(spec)
}

/// Bins numeric values and one-hot encodes the bins.
pub fn encode_ordinal(table: &CandidateTable, spec: &AttributeSpec) -> Result<Vec<BinaryColumn>> {
    assign_ordinal(table, spec)?.into_columns(spec)
}

/// Crosses two component attributes. Labels run over the first component's
/// labels in the outer loop and the second's in the inner loop.
pub fn encode_joint(
    table: &CandidateTable,
    spec: &AttributeSpec,
    components: [&AttributeSpec; 2],
) -> Result<Vec<BinaryColumn>> {
    spec.require_kind(AttributeKind::Joint)?;
    spec.validate()?;
    for (declared, given) in spec.components.iter().zip(components) {
        if *declared != given.name {
            return Err(spec.err(format!(
                "component `{}` given where `{declared}` was declared",
                given.name
            )));
        }
    }
    let first = assign_component(table, components[0]).map_err(|e| nest(spec, e))?;
    let second = assign_component(table, components[1]).map_err(|e| nest(spec, e))?;
    let width = second.labels.len();
    let labels = first
        .labels
        .iter()
        .flat_map(|a| {
            second
                .labels
                .iter()
                .map(move |b| format!("{a}{JOINT_SEPARATOR}{b}"))
        })
        .collect();
    let members = first
        .members
        .iter()
        .zip(&second.members)
        .map(|(a, b)| Some((*a)? * width + (*b)?))
        .collect();
    Assignment { labels, members }.into_columns(spec)
}

fn nest(spec: &AttributeSpec, inner: Error) -> Error {
    spec.err(format!("component error: {inner}"))
}

/// Encodes every attribute in order and assembles the validated matrix.
/// Errors from all attributes are reported together.
pub fn build_matrix(table: &CandidateTable, specs: &[AttributeSpec]) -> Result<BinaryMatrix> {
    let mut errors = Vec::new();
    let mut names = HashSet::new();
    for spec in specs {
        if !names.insert(spec.name.as_str()) {
            errors.push(spec.err("attribute declared twice"));
        }
    }
    Error::collect(errors)?;

    let mut errors = Vec::new();
    let mut columns = Vec::new();
    for spec in specs.iter().filter(|s| !s.component_only) {
        let encoded = match spec.kind {
            AttributeKind::Categorical => encode_categorical(table, spec),
            AttributeKind::Ordinal => encode_ordinal(table, spec),
            AttributeKind::Joint => resolve_components(spec, specs)
                .and_then(|parts| encode_joint(table, spec, parts)),
        };
        match encoded {
            Ok(cols) => columns.extend(cols),
            Err(e) => errors.extend(e.flatten()),
        }
    }
    Error::collect(errors)?;
    BinaryMatrix::new(table.ids(), columns)
}

fn resolve_components<'s>(
    spec: &AttributeSpec,
    specs: &'s [AttributeSpec],
) -> Result<[&'s AttributeSpec; 2]> {
    spec.validate()?;
    let find = |name: &str| {
        specs
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| spec.err(format!("component `{name}` is not a declared attribute")))
    };
    Ok([find(&spec.components[0])?, find(&spec.components[1])?])
}

/// Checks specs against data, returning every problem found.
pub fn validate_schema(table: &CandidateTable, specs: &[AttributeSpec]) -> Vec<Error> {
    let mut errors: Vec<Error> = specs
        .iter()
        .filter_map(|s| s.validate().err())
        .flat_map(Error::flatten)
        .collect();
    if let Err(e) = build_matrix(table, specs) {
        for e in e.flatten() {
            if !errors.contains(&e) {
                errors.push(e);
            }
        }
    }
    errors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{CandidateRow, RawValue};

    fn table(attribute: &str, values: &[Option<&str>]) -> CandidateTable {
        let rows = values
            .iter()
            .enumerate()
            .map(|(i, v)| CandidateRow {
                id: format!("c{i}"),
                values: [(
                    attribute.to_string(),
                    v.map_or(RawValue::Missing, |s| RawValue::Text(s.into())),
                )]
                .into(),
            })
            .collect();
        CandidateTable::new(vec![attribute.into()], rows).unwrap()
    }

    fn indicators(cols: &[BinaryColumn]) -> Vec<Vec<u8>> {
        cols.iter()
            .map(|c| c.indicator.iter().map(|&b| b as u8).collect())
            .collect()
    }

    #[test]
    fn one_hot_columns() {
        let t = table("g", &[Some("A"), Some("A"), Some("B"), Some("C"), Some("B")]);
        let cols = encode_categorical(&t, &AttributeSpec::categorical("g", ["A", "B", "C"])).unwrap();
        assert_eq!(
            indicators(&cols),
            vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, 0, 1], vec![0, 0, 0, 1, 0]]
        );
        assert_eq!(cols[1].column_id, "g=B");
        assert_eq!(cols[1].value_label, "B");
    }

    #[test]
    fn missing_categorical_is_all_zero() {
        let t = table("g", &[Some("B"), None]);
        let cols = encode_categorical(&t, &AttributeSpec::categorical("g", ["A", "B", "C"])).unwrap();
        assert_eq!(indicators(&cols), vec![vec![0, 0], vec![1, 0], vec![0, 0]]);
    }

    #[test]
    fn undeclared_category_names_candidate_and_value() {
        let t = table("g", &[Some("A"), Some("Z")]);
        let err = encode_categorical(&t, &AttributeSpec::categorical("g", ["A"])).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("`c1`") && msg.contains("`Z`") && msg.contains("`g`"), "{msg}");
    }

    #[test]
    fn targets_and_weight_attach() {
        let t = table("g", &[Some("A"), Some("B")]);
        let spec = AttributeSpec::categorical("g", ["A", "B", "C"])
            .with_weight(2.5)
            .with_target("A", 0.4);
        let cols = encode_categorical(&t, &spec).unwrap();
        assert!(cols.iter().all(|c| c.weight == 2.5));
        assert_eq!(
            cols.iter().map(|c| c.target).collect::<Vec<_>>(),
            vec![0.4, 0.0, 0.0]
        );
    }

    #[test]
    fn target_for_unknown_label_is_rejected() {
        let t = table("g", &[Some("A")]);
        let spec = AttributeSpec::categorical("g", ["A"]).with_target("Q", 0.5);
        assert!(encode_categorical(&t, &spec).is_err());
    }

    #[test]
    fn target_sum_above_one_is_rejected() {
        let spec = AttributeSpec::categorical("g", ["A", "B"])
            .with_target("A", 0.7)
            .with_target("B", 0.5);
        let msg = spec.validate().unwrap_err().to_string();
        assert!(msg.contains("`g`") && msg.contains("sum"), "{msg}");
        assert!((spec.target_slack() + 0.2).abs() < 1e-12);
    }

    #[test]
    fn equal_width_bins_close_the_last() {
        let vals: Vec<String> = (1..=10).map(|v| v.to_string()).collect();
        let mut refs: Vec<Option<&str>> = vals.iter().map(|s| Some(s.as_str())).collect();
        refs.push(Some("5.5"));
        let t = table("n", &refs);
        let cols = encode_ordinal(&t, &AttributeSpec::ordinal("n", 2)).unwrap();
        assert_eq!(cols[0].value_label, "[1, 5.5)");
        assert_eq!(cols[1].value_label, "[5.5, 10]");
        // value 5 → bin 1, 5.5 → bin 2, 10 → bin 2
        assert!(cols[0].indicator[4]);
        assert!(cols[1].indicator[10]);
        assert!(cols[1].indicator[9]);
    }

    #[test]
    fn single_bin_is_always_on() {
        let t = table("n", &[Some("3"), None, Some("8")]);
        let cols = encode_ordinal(&t, &AttributeSpec::ordinal("n", 1)).unwrap();
        assert_eq!(indicators(&cols), vec![vec![1, 0, 1]]);
    }

    #[test]
    fn explicit_edges() {
        let t = table("age", &[Some("17"), Some("18"), Some("40")]);
        let spec = AttributeSpec::ordinal_with_edges("age", vec![0.0, 18.0, 35.0, 120.0])
            .with_bin_labels(["minor", "young", "adult"])
            .with_target("adult", 0.3);
        let cols = encode_ordinal(&t, &spec).unwrap();
        assert_eq!(indicators(&cols), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(cols[2].target, 0.3);
    }

    #[test]
    fn ordinal_errors() {
        let t = table("n", &[None, None]);
        assert!(encode_ordinal(&t, &AttributeSpec::ordinal("n", 2)).is_err());

        let t = table("n", &[Some("4"), Some("4")]);
        let msg = encode_ordinal(&t, &AttributeSpec::ordinal("n", 3))
            .unwrap_err()
            .to_string();
        assert!(msg.contains("categorical"), "{msg}");
        assert!(encode_ordinal(&t, &AttributeSpec::ordinal("n", 1)).is_ok());

        let t = table("n", &[Some("x")]);
        assert!(encode_ordinal(&t, &AttributeSpec::ordinal("n", 2)).is_err());

        let t = table("n", &[Some("200")]);
        let spec = AttributeSpec::ordinal_with_edges("n", vec![0.0, 10.0]);
        assert!(encode_ordinal(&t, &spec).is_err());

        let bad = AttributeSpec::ordinal_with_edges("n", vec![0.0, 10.0, 5.0]);
        assert!(bad.validate().is_err());
    }

    fn two_attr_table(rows: &[(&str, Option<&str>, Option<&str>)]) -> CandidateTable {
        let rows = rows
            .iter()
            .map(|(id, g, s)| {
                let mut values = BTreeMap::new();
                for (k, v) in [("gender", g), ("seniority", s)] {
                    values.insert(
                        k.to_string(),
                        v.map_or(RawValue::Missing, |v| RawValue::Text(v.into())),
                    );
                }
                CandidateRow {
                    id: id.to_string(),
                    values,
                }
            })
            .collect();
        CandidateTable::new(vec!["gender".into(), "seniority".into()], rows).unwrap()
    }

    #[test]
    fn joint_product_encoding() {
        let t = two_attr_table(&[
            ("a", Some("F"), Some("senior")),
            ("b", Some("M"), Some("junior")),
            ("c", None, Some("junior")),
        ]);
        let g = AttributeSpec::categorical("gender", ["F", "M"]);
        let s = AttributeSpec::categorical("seniority", ["junior", "senior"]);
        let j = AttributeSpec::joint("gs", "gender", "seniority").with_target("F×senior", 0.25);
        let cols = encode_joint(&t, &j, [&g, &s]).unwrap();
        let labels: Vec<&str> = cols.iter().map(|c| c.value_label.as_str()).collect();
        assert_eq!(labels, vec!["F×junior", "F×senior", "M×junior", "M×senior"]);
        assert_eq!(
            indicators(&cols),
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 0]]
        );
        assert_eq!(cols[1].target, 0.25);
    }

    #[test]
    fn joint_two_by_three() {
        let t = two_attr_table(&[("a", Some("F"), Some("mid"))]);
        let g = AttributeSpec::categorical("gender", ["F", "M"]);
        let s = AttributeSpec::categorical("seniority", ["junior", "mid", "senior"]);
        let j = AttributeSpec::joint("gs", "gender", "seniority");
        let cols = encode_joint(&t, &j, [&g, &s]).unwrap();
        assert_eq!(cols.len(), 6);
        assert!(cols[1].indicator[0]);
    }

    #[test]
    fn joint_component_missing_from_data() {
        let t = table("gender", &[Some("F")]);
        let g = AttributeSpec::categorical("gender", ["F", "M"]);
        let s = AttributeSpec::categorical("seniority", ["junior"]);
        let j = AttributeSpec::joint("gs", "gender", "seniority");
        let msg = encode_joint(&t, &j, [&g, &s]).unwrap_err().to_string();
        assert!(msg.contains("seniority"), "{msg}");
    }

    #[test]
    fn build_matrix_concatenates_in_spec_order() {
        let t = two_attr_table(&[("a", Some("F"), Some("junior")), ("b", Some("M"), None)]);
        assert_eq!(build_matrix(&t, &[]).unwrap().column_count(), 0);
        let specs = vec![
            AttributeSpec::categorical("gender", ["F", "M", "X"]).with_weight(2.0),
            AttributeSpec::categorical("seniority", ["junior", "senior"]).component_only(),
            AttributeSpec::joint("gs", "gender", "seniority"),
        ];
        let m = build_matrix(&t, &specs).unwrap();
        assert_eq!(m.column_count(), 3 + 6);
        assert_eq!(m.columns()[0].column_id, "gender=F");
        assert!(m.columns()[..3].iter().all(|c| c.weight == 2.0));
        assert_eq!(m.columns()[3].column_id, "gs=F×junior");
    }

    #[test]
    fn build_matrix_aggregates_errors() {
        let t = two_attr_table(&[("a", Some("Q"), Some("boss"))]);
        let specs = vec![
            AttributeSpec::categorical("gender", ["F"]),
            AttributeSpec::categorical("seniority", ["junior"]),
        ];
        let errs = build_matrix(&t, &specs).unwrap_err().flatten();
        assert_eq!(errs.len(), 2);
        let dup = vec![
            AttributeSpec::categorical("gender", ["F"]),
            AttributeSpec::categorical("gender", ["F"]),
        ];
        assert!(build_matrix(&t, &dup).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let json = r#"{"name": "age", "kind": "ordinal", "bins": 3, "targets": {"[1, 2)": 0.2}}"#;
        let spec: AttributeSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.kind, AttributeKind::Ordinal);
        assert_eq!(spec.bins, Some(3));
        assert_eq!(spec.weight, 1.0);
    }
}
