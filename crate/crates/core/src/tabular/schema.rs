//! Feature schemas and pre-encoding records.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    Boolean,
    /// Carries an ordered category vocabulary.
    Categorical { categories: Vec<String> },
}

/// Ordered feature declarations plus the target column name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<(String, FeatureKind)>,
    pub target_name: String,
}

impl FeatureSchema {
    pub fn new(features: Vec<(String, FeatureKind)>, target_name: impl Into<String>) -> Result<Self> {
        let schema = FeatureSchema {
            features,
            target_name: target_name.into(),
        };
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (name, kind) in &self.features {
            if !seen.insert(name.as_str()) {
                return Err(Error::SchemaViolation(format!(
                    "duplicate feature name '{name}'"
                )));
            }
            if name == &self.target_name {
                return Err(Error::SchemaViolation(format!(
                    "target '{name}' also declared as a feature"
                )));
            }
            if let FeatureKind::Categorical { categories } = kind {
                if categories.is_empty() {
                    return Err(Error::SchemaViolation(format!(
                        "categorical feature '{name}' has an empty vocabulary"
                    )));
                }
                let distinct: BTreeSet<_> = categories.iter().collect();
                if distinct.len() != categories.len() {
                    return Err(Error::SchemaViolation(format!(
                        "categorical feature '{name}' repeats a category"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|(n, _)| n.as_str()).collect()
    }
}

/// One pre-encoding cell value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Numeric(f64),
    Boolean(bool),
    Categorical(String),
}

/// Records matching a [`FeatureSchema`], with a binary label per row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawTable {
    pub schema: FeatureSchema,
    pub rows: Vec<Vec<RawValue>>,
    pub labels: Vec<u8>,
}

impl RawTable {
    pub fn new(schema: FeatureSchema, rows: Vec<Vec<RawValue>>, labels: Vec<u8>) -> Result<Self> {
        let table = RawTable {
            schema,
            rows,
            labels,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        self.schema.validate()?;
        if self.rows.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                left: self.rows.len(),
                right: self.labels.len(),
            });
        }
        if self.labels.iter().any(|&l| l > 1) {
            return Err(Error::SchemaViolation("labels must be 0 or 1".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.schema.features.len() {
                return Err(Error::WidthMismatch {
                    expected: self.schema.features.len(),
                    actual: row.len(),
                });
            }
            for (value, (name, kind)) in row.iter().zip(&self.schema.features) {
                match (value, kind) {
                    (RawValue::Numeric(v), FeatureKind::Numeric) => {
                        if !v.is_finite() {
                            return Err(Error::NonFinite(format!("row {i}, column '{name}'")));
                        }
                    }
                    (RawValue::Boolean(_), FeatureKind::Boolean) => {}
                    (RawValue::Categorical(v), FeatureKind::Categorical { categories }) => {
                        if !categories.iter().any(|c| c == v) {
                            return Err(Error::SchemaViolation(format!(
                                "row {i}: value '{v}' not in vocabulary of '{name}'"
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::SchemaViolation(format!(
                            "row {i}: value for '{name}' does not match its declared kind"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Raw numeric column by feature name.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<f64>> {
        let idx = self
            .schema
            .features
            .iter()
            .position(|(n, k)| n == name && matches!(k, FeatureKind::Numeric))
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        Ok(self
            .rows
            .iter()
            .map(|row| match &row[idx] {
                RawValue::Numeric(v) => *v,
                _ => unreachable!("validated column kind"),
            })
            .collect())
    }
}
