//! One-hot encoding with a category cap, and the ln(1+x) transform.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::schema::{FeatureKind, RawTable, RawValue};
use super::table::{ColumnGroup, LabeledTable};

const OTHER: &str = "OTHER";

/// Encodes a raw table into a fully numeric one.
///
/// Numeric and boolean features pass through as single columns. Each
/// categorical feature becomes indicator columns for its top
/// `max_categories - 1` observed values ranked by frequency (ties broken
/// lexicographically), with every remaining value relabeled to a reserved
/// `OTHER` bucket; the `OTHER` column is emitted only when that bucket is
/// non-empty. Column order is deterministic: schema order, then frequency
/// order within a feature, `OTHER` last.
pub fn encode_one_hot(raw: &RawTable, max_categories: usize) -> Result<LabeledTable> {
    raw.validate()?;
    if raw.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    if max_categories < 2 {
        return Err(Error::invalid("max_categories must be at least 2"));
    }

    struct Plan {
        feature: usize,
        kind: PlanKind,
    }
    enum PlanKind {
        Passthrough,
        OneHot { kept: Vec<String>, other: bool },
    }

    let mut plans = Vec::new();
    let mut column_names = Vec::new();
    let mut groups = Vec::new();
    for (f, (name, kind)) in raw.schema.features.iter().enumerate() {
        match kind {
            FeatureKind::Numeric | FeatureKind::Boolean => {
                plans.push(Plan {
                    feature: f,
                    kind: PlanKind::Passthrough,
                });
                column_names.push(name.clone());
            }
            FeatureKind::Categorical { .. } => {
                let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
                for row in &raw.rows {
                    if let RawValue::Categorical(v) = &row[f] {
                        *counts.entry(v.as_str()).or_insert(0) += 1;
                    }
                }
                if counts.is_empty() {
                    return Err(Error::SchemaViolation(format!(
                        "categorical feature '{name}' has zero observed categories"
                    )));
                }
                // frequency descending, then lexicographic (BTreeMap order)
                let mut ranked: Vec<(&str, usize)> = counts.into_iter().collect();
                ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
                let keep = if ranked.len() > max_categories {
                    max_categories - 1
                } else if ranked.len() == max_categories {
                    // cap reached exactly: folding the last value into OTHER
                    // would rename it without reducing width
                    max_categories
                } else {
                    ranked.len()
                };
                let kept: Vec<String> = ranked[..keep].iter().map(|(v, _)| v.to_string()).collect();
                let other = ranked.len() > keep;

                let start = column_names.len();
                for v in &kept {
                    column_names.push(format!("{name}_{v}"));
                }
                if other {
                    column_names.push(format!("{name}_{OTHER}"));
                }
                groups.push(ColumnGroup {
                    feature: name.clone(),
                    columns: (start..column_names.len()).collect(),
                });
                plans.push(Plan {
                    feature: f,
                    kind: PlanKind::OneHot { kept, other },
                });
            }
        }
    }

    let mut matrix = Matrix::zeros(raw.rows.len(), column_names.len());
    for (i, row) in raw.rows.iter().enumerate() {
        let mut j = 0;
        for plan in &plans {
            match (&plan.kind, &row[plan.feature]) {
                (PlanKind::Passthrough, RawValue::Numeric(v)) => {
                    matrix.set(i, j, *v);
                    j += 1;
                }
                (PlanKind::Passthrough, RawValue::Boolean(b)) => {
                    matrix.set(i, j, if *b { 1.0 } else { 0.0 });
                    j += 1;
                }
                (PlanKind::OneHot { kept, other }, RawValue::Categorical(v)) => {
                    match kept.iter().position(|k| k == v) {
                        Some(pos) => matrix.set(i, j + pos, 1.0),
                        None => {
                            debug_assert!(*other);
                            matrix.set(i, j + kept.len(), 1.0);
                        }
                    }
                    j += kept.len() + usize::from(*other);
                }
                _ => unreachable!("raw table validated against schema"),
            }
        }
    }

    let mut table = LabeledTable::new(column_names, matrix, raw.labels.clone())?;
    table.groups = groups;
    Ok(table)
}

/// Replaces each selected value x with ln(1+x), recording the columns so the
/// exact inverse exp(y)-1 stays available for business reporting.
pub fn log_transform(table: &LabeledTable, columns: &[&str]) -> Result<LabeledTable> {
    let mut out = table.clone();
    for name in columns {
        let j = out.column_index(name)?;
        if out.log_columns.contains(&j) {
            return Err(Error::invalid(format!("column '{name}' already transformed")));
        }
        for i in 0..out.n_rows() {
            let x = out.matrix.get(i, j);
            if x < 0.0 {
                return Err(Error::NegativeValue {
                    row: i,
                    column: name.to_string(),
                    value: x,
                });
            }
            out.matrix.set(i, j, x.ln_1p());
        }
        out.log_columns.push(j);
    }
    out.log_columns.sort_unstable();
    Ok(out)
}

/// Undoes [`log_transform`] on every recorded column.
pub fn inverse_log_transform(table: &LabeledTable) -> LabeledTable {
    let mut out = table.clone();
    for &j in &table.log_columns {
        for i in 0..out.n_rows() {
            let y = out.matrix.get(i, j);
            out.matrix.set(i, j, y.exp_m1());
        }
    }
    out.log_columns.clear();
    out
}
