//! Encoded, fully numeric dataset with binary labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Column indices forming one one-hot group (all indicators of a single
/// categorical feature). Each row has exactly one of them set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnGroup {
    pub feature: String,
    pub columns: Vec<usize>,
}

/// The universal dataset currency after preprocessing: a real-valued matrix,
/// named columns, and a 0/1 label per row (1 = lost).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledTable {
    pub column_names: Vec<String>,
    pub matrix: Matrix,
    pub labels: Vec<u8>,
    /// Always 1; kept explicit so exported files are self-describing.
    pub positive_label: u8,
    /// Columns currently stored as ln(1+x), in ascending index order.
    pub log_columns: Vec<usize>,
    /// One-hot groups produced by encoding, if any.
    pub groups: Vec<ColumnGroup>,
}

impl LabeledTable {
    pub fn new(column_names: Vec<String>, matrix: Matrix, labels: Vec<u8>) -> Result<Self> {
        if column_names.len() != matrix.n_cols() {
            return Err(Error::LengthMismatch {
                left: column_names.len(),
                right: matrix.n_cols(),
            });
        }
        if labels.len() != matrix.n_rows() {
            return Err(Error::LengthMismatch {
                left: labels.len(),
                right: matrix.n_rows(),
            });
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::SchemaViolation("labels must be 0 or 1".into()));
        }
        if !matrix.all_finite() {
            return Err(Error::NonFinite("table matrix".into()));
        }
        Ok(LabeledTable {
            column_names,
            matrix,
            labels,
            positive_label: 1,
            log_columns: Vec::new(),
            groups: Vec::new(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn width(&self) -> usize {
        self.matrix.n_cols()
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.matrix.row(i)
    }

    pub fn positive_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn positive_rate(&self) -> f64 {
        if self.labels.is_empty() {
            0.0
        } else {
            self.positive_count() as f64 / self.labels.len() as f64
        }
    }

    pub fn has_both_classes(&self) -> bool {
        let p = self.positive_count();
        p > 0 && p < self.labels.len()
    }

    /// Row indices of positives and negatives, in original order.
    pub fn class_indices(&self) -> (Vec<usize>, Vec<usize>) {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, &l) in self.labels.iter().enumerate() {
            if l == 1 {
                pos.push(i);
            } else {
                neg.push(i);
            }
        }
        (pos, neg)
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.column_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// New table with only the given rows, metadata preserved.
    pub fn take_rows(&self, indices: &[usize]) -> LabeledTable {
        LabeledTable {
            column_names: self.column_names.clone(),
            matrix: self.matrix.take_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            positive_label: self.positive_label,
            log_columns: self.log_columns.clone(),
            groups: self.groups.clone(),
        }
    }

    /// New table with only the given columns. Group and log-column metadata
    /// is remapped; groups that lose members are dropped.
    pub fn take_columns(&self, indices: &[usize]) -> Result<LabeledTable> {
        for &j in indices {
            if j >= self.width() {
                return Err(Error::UnknownColumn(format!("index {j}")));
            }
        }
        let position_of = |col: usize| indices.iter().position(|&j| j == col);
        let groups = self
            .groups
            .iter()
            .filter_map(|g| {
                let mapped: Vec<usize> =
                    g.columns.iter().filter_map(|&c| position_of(c)).collect();
                (mapped.len() == g.columns.len()).then(|| ColumnGroup {
                    feature: g.feature.clone(),
                    columns: mapped,
                })
            })
            .collect();
        Ok(LabeledTable {
            column_names: indices
                .iter()
                .map(|&j| self.column_names[j].clone())
                .collect(),
            matrix: self.matrix.take_columns(indices),
            labels: self.labels.clone(),
            positive_label: self.positive_label,
            log_columns: self
                .log_columns
                .iter()
                .filter_map(|&c| position_of(c))
                .collect(),
            groups,
        })
    }

    /// Rows with label 0 only (the "normal" subset).
    pub fn normals(&self) -> LabeledTable {
        let indices: Vec<usize> = (0..self.n_rows()).filter(|&i| self.label(i) == 0).collect();
        self.take_rows(&indices)
    }
}
