//! CSV interchange.
//!
//! Encoded tables travel as UTF-8 CSV with a header row and '.' decimal
//! separators; the label column is last and named by the caller. Raw tables
//! are read against a schema; rows with missing cells are rejected rather
//! than imputed.

use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

use super::schema::{FeatureKind, FeatureSchema, RawTable, RawValue};
use super::table::LabeledTable;

impl LabeledTable {
    /// Writes the table with the label column appended under `target_name`.
    pub fn write_csv(&self, path: &Path, target_name: &str) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        let mut header: Vec<&str> = self.column_names.iter().map(String::as_str).collect();
        header.push(target_name);
        writer.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for i in 0..self.n_rows() {
            record.clear();
            for &v in self.row(i) {
                record.push(v.to_string());
            }
            record.push(self.labels[i].to_string());
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads a table written by [`LabeledTable::write_csv`]; the last column
    /// is the label.
    pub fn read_csv(path: &Path) -> Result<LabeledTable> {
        let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
        let header = reader.headers()?.clone();
        if header.len() < 2 {
            return Err(Error::SchemaViolation(
                "encoded CSV needs at least one feature column and a label".into(),
            ));
        }
        let n_features = header.len() - 1;
        let column_names: Vec<String> = header.iter().take(n_features).map(String::from).collect();
        let mut matrix = Matrix::zeros(0, 0);
        let mut labels = Vec::new();
        let mut row_buf = Vec::with_capacity(n_features);
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            row_buf.clear();
            for (j, cell) in record.iter().take(n_features).enumerate() {
                if cell.is_empty() {
                    return Err(Error::MissingValue {
                        row: i,
                        column: column_names[j].clone(),
                    });
                }
                let v: f64 = cell.parse().map_err(|_| {
                    Error::SchemaViolation(format!(
                        "row {i}: '{cell}' in '{}' is not a number",
                        column_names[j]
                    ))
                })?;
                row_buf.push(v);
            }
            let label_cell = &record[n_features];
            let label: u8 = label_cell.parse().map_err(|_| {
                Error::SchemaViolation(format!("row {i}: label '{label_cell}' is not 0/1"))
            })?;
            matrix.push_row(&row_buf)?;
            labels.push(label);
        }
        if labels.is_empty() {
            return Err(Error::EmptyTable);
        }
        LabeledTable::new(column_names, matrix, labels)
    }
}

impl RawTable {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        let mut header: Vec<&str> = self.schema.feature_names();
        header.push(&self.schema.target_name);
        writer.write_record(&header)?;
        let mut record: Vec<String> = Vec::with_capacity(header.len());
        for (row, label) in self.rows.iter().zip(&self.labels) {
            record.clear();
            for value in row {
                record.push(match value {
                    RawValue::Numeric(v) => v.to_string(),
                    RawValue::Boolean(b) => if *b { "1" } else { "0" }.to_string(),
                    RawValue::Categorical(c) => c.clone(),
                });
            }
            record.push(label.to_string());
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Reads raw records against the given schema. Header order must match
    /// the schema's feature order with the target column last; empty cells
    /// are rejected.
    pub fn read_csv(path: &Path, schema: &FeatureSchema) -> Result<RawTable> {
        schema.validate()?;
        let mut reader = csv::ReaderBuilder::new().flexible(false).from_path(path)?;
        let header = reader.headers()?.clone();
        let mut expected: Vec<&str> = schema.feature_names();
        expected.push(&schema.target_name);
        let got: Vec<&str> = header.iter().collect();
        if got != expected {
            return Err(Error::SchemaViolation(format!(
                "CSV header {got:?} does not match schema columns {expected:?}"
            )));
        }

        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(schema.features.len());
            for (j, (name, kind)) in schema.features.iter().enumerate() {
                let cell = &record[j];
                if cell.is_empty() {
                    return Err(Error::MissingValue {
                        row: i,
                        column: name.clone(),
                    });
                }
                let value = match kind {
                    FeatureKind::Numeric => {
                        RawValue::Numeric(cell.parse().map_err(|_| {
                            Error::SchemaViolation(format!(
                                "row {i}: '{cell}' in numeric column '{name}'"
                            ))
                        })?)
                    }
                    FeatureKind::Boolean => match cell {
                        "0" | "false" => RawValue::Boolean(false),
                        "1" | "true" => RawValue::Boolean(true),
                        _ => {
                            return Err(Error::SchemaViolation(format!(
                                "row {i}: '{cell}' in boolean column '{name}'"
                            )))
                        }
                    },
                    FeatureKind::Categorical { .. } => RawValue::Categorical(cell.to_string()),
                };
                row.push(value);
            }
            let label_cell = &record[schema.features.len()];
            labels.push(label_cell.parse().map_err(|_| {
                Error::SchemaViolation(format!("row {i}: label '{label_cell}' is not 0/1"))
            })?);
            rows.push(row);
        }
        RawTable::new(schema.clone(), rows, labels)
    }
}
