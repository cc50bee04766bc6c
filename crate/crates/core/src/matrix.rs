use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// One binary indicator column: a single categorical value or ordinal bin
/// of a source attribute, together with its target fraction and weight.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryColumn {
    pub column_id: String,
    pub source_attribute: String,
    pub value_label: String,
    pub target: f64,
    pub weight: f64,
    pub indicator: Vec<bool>,
}

impl BinaryColumn {
    /// A stand-alone column that is its own source attribute, with target 0
    /// and weight 1.
    pub fn new(column_id: impl Into<String>, indicator: Vec<bool>) -> Self {
        let column_id = column_id.into();
        BinaryColumn {
            source_attribute: column_id.clone(),
            value_label: column_id.clone(),
            column_id,
            target: 0.0,
            weight: 1.0,
            indicator,
        }
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target = target;
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_source(mut self, attribute: impl Into<String>, label: impl Into<String>) -> Self {
        self.source_attribute = attribute.into();
        self.value_label = label.into();
        self
    }

    /// Number of candidates in `members` whose indicator is set.
    pub fn count(&self, members: &[usize]) -> u32 {
        members.iter().filter(|&&i| self.indicator[i]).count() as u32
    }

    fn validate(&self, pool: usize) -> Result<()> {
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            return Err(Error::InvalidWeight {
                column: self.column_id.clone(),
                weight: self.weight,
            });
        }
        if !(0.0..=1.0).contains(&self.target) {
            return Err(Error::InvalidTarget {
                column: self.column_id.clone(),
                target: self.target,
            });
        }
        if self.indicator.len() != pool {
            return Err(Error::IndicatorLength {
                column: self.column_id.clone(),
                len: self.indicator.len(),
                pool,
            });
        }
        Ok(())
    }
}

/// The encoded candidate pool: ordered candidate ids and indicator columns.
///
/// Construction validates every invariant, so a `BinaryMatrix` in hand is
/// always well formed: unique non-empty ids, targets in `[0, 1]`,
/// non-negative weights shared across an attribute's columns, and at most
/// one indicator set per candidate per source attribute.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMatrix {
    candidate_ids: Vec<String>,
    columns: Vec<BinaryColumn>,
    index: HashMap<String, usize>,
    rows: Vec<Vec<usize>>,
}

impl BinaryMatrix {
    pub fn new(candidate_ids: Vec<String>, columns: Vec<BinaryColumn>) -> Result<Self> {
        let mut index = HashMap::with_capacity(candidate_ids.len());
        let mut errors = Vec::new();
        for (i, id) in candidate_ids.iter().enumerate() {
            if id.is_empty() {
                errors.push(Error::EmptyCandidateId(i));
            } else if index.insert(id.clone(), i).is_some() {
                errors.push(Error::DuplicateCandidate(id.clone()));
            }
        }
        let pool = candidate_ids.len();
        errors.extend(columns.iter().filter_map(|c| c.validate(pool).err()));
        Error::collect(errors)?;

        check_attribute_groups(&candidate_ids, &columns)?;

        let mut rows = vec![Vec::new(); pool];
        for (c, column) in columns.iter().enumerate() {
            for (i, _) in column.indicator.iter().enumerate().filter(|(_, &set)| set) {
                rows[i].push(c);
            }
        }

        Ok(BinaryMatrix {
            candidate_ids,
            columns,
            index,
            rows,
        })
    }

    pub fn candidate_ids(&self) -> &[String] {
        &self.candidate_ids
    }

    pub fn columns(&self) -> &[BinaryColumn] {
        &self.columns
    }

    pub fn pool_size(&self) -> usize {
        self.candidate_ids.len()
    }

    pub fn column_count(&self) -> usize {
        self.columns.len()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Column indices whose indicator is set for candidate `candidate`.
    pub fn row(&self, candidate: usize) -> &[usize] {
        &self.rows[candidate]
    }

    /// Resolves ids to pool positions, rejecting unknown ids. Duplicates
    /// collapse, so the result is a set in first-seen order.
    pub fn resolve<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>> {
        let mut seen = HashSet::with_capacity(ids.len());
        let mut out = Vec::with_capacity(ids.len());
        for id in ids {
            let id = id.as_ref();
            let pos = self
                .position(id)
                .ok_or_else(|| Error::UnknownCandidate(id.to_string()))?;
            if seen.insert(pos) {
                out.push(pos);
            }
        }
        Ok(out)
    }

    /// Source attributes in first-appearance order, each with the indices of
    /// its columns.
    pub fn attribute_groups(&self) -> Vec<(&str, Vec<usize>)> {
        attribute_groups(&self.columns)
    }
}

pub(crate) fn attribute_groups(columns: &[BinaryColumn]) -> Vec<(&str, Vec<usize>)> {
    let mut groups: Vec<(&str, Vec<usize>)> = Vec::new();
    for (c, column) in columns.iter().enumerate() {
        match groups
            .iter_mut()
            .find(|(name, _)| *name == column.source_attribute)
        {
            Some((_, members)) => members.push(c),
            None => groups.push((&column.source_attribute, vec![c])),
        }
    }
    groups
}

fn check_attribute_groups(candidate_ids: &[String], columns: &[BinaryColumn]) -> Result<()> {
    let mut errors = Vec::new();
    for (attribute, members) in attribute_groups(columns) {
        let weight = columns[members[0]].weight;
        if members.iter().any(|&c| columns[c].weight != weight) {
            errors.push(Error::InconsistentWeight {
                attribute: attribute.to_string(),
            });
        }
        if members.len() < 2 {
            continue;
        }
        if let Some(i) = (0..candidate_ids.len())
            .find(|&i| members.iter().filter(|&&c| columns[c].indicator[i]).count() > 1)
        {
            errors.push(Error::NotExclusive {
                attribute: attribute.to_string(),
                candidate: candidate_ids[i].clone(),
            });
        }
    }
    Error::collect(errors)
}
