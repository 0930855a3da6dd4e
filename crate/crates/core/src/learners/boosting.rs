//! First-order gradient boosting on log-odds with logistic loss.
//!
//! The model starts at the base-rate log-odds and adds shrunken regression
//! trees fitted to the current residuals y - p. Zero stages therefore yield
//! the prior-only model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed::{derive_seed, rng_from};
use crate::tabular::LabeledTable;

use super::spec::{ClassifierKind, ClassifierSpec};
use super::tree::{grow_tree, DecisionTree, GrowParams, SplitCriterion};

/// Clamp on the base rate so the initial log-odds stay finite on
/// single-class tables.
const BASE_RATE_EPS: f64 = 1e-9;

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientBoosted {
    pub initial_margin: f64,
    pub learning_rate: f64,
    pub trees: Vec<DecisionTree>,
    /// Mean training logistic loss after each stage, starting with the
    /// prior-only loss.
    pub training_loss: Vec<f64>,
}

impl GradientBoosted {
    pub fn margin_row(&self, row: &[f64]) -> f64 {
        self.initial_margin
            + self.learning_rate
                * self
                    .trees
                    .iter()
                    .map(|t| t.predict_row(row))
                    .sum::<f64>()
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        sigmoid(self.margin_row(row))
    }
}

fn mean_logistic_loss(labels: &[u8], margins: &[f64]) -> f64 {
    labels
        .iter()
        .zip(margins)
        .map(|(&y, &m)| {
            // ln(1 + exp(-z)) with the sign folded in, numerically stable
            let z = if y == 1 { m } else { -m };
            if z > 0.0 {
                (-z).exp().ln_1p()
            } else {
                -z + z.exp().ln_1p()
            }
        })
        .sum::<f64>()
        / labels.len() as f64
}

/// Stagewise additive boosting. A single-class table degenerates to the
/// clamped base-rate model with no trees.
pub fn fit_gradient_boosting(
    table: &LabeledTable,
    spec: &ClassifierSpec,
) -> Result<GradientBoosted> {
    if spec.kind != ClassifierKind::GradientBoosting {
        return Err(Error::invalid("spec kind must be gradient_boosting"));
    }
    spec.validate()?;
    if table.n_rows() == 0 {
        return Err(Error::EmptyTable);
    }
    let n = table.n_rows();
    let base_rate = (table.positive_count() as f64 / n as f64)
        .clamp(BASE_RATE_EPS, 1.0 - BASE_RATE_EPS);
    let initial_margin = (base_rate / (1.0 - base_rate)).ln();

    let mut margins = vec![initial_margin; n];
    let mut training_loss = vec![mean_logistic_loss(&table.labels, &margins)];
    let mut trees = Vec::with_capacity(spec.n_estimators);
    let stages = if table.has_both_classes() {
        spec.n_estimators
    } else {
        0
    };
    for stage in 0..stages {
        let residuals: Vec<f64> = table
            .labels
            .iter()
            .zip(&margins)
            .map(|(&y, &m)| y as f64 - sigmoid(m))
            .collect();
        let params = GrowParams {
            max_depth: spec.max_depth,
            min_samples_leaf: spec.min_samples_leaf,
            feature_sample: spec.subsample_features,
            criterion: SplitCriterion::SumSquaredError,
        };
        let mut rng = rng_from(derive_seed(spec.seed, "boost-stage", stage as u64));
        let root = grow_tree(
            &table.matrix,
            &residuals,
            (0..n).collect(),
            &params,
            &mut rng,
        );
        let tree = DecisionTree {
            root,
            n_features: table.width(),
        };
        for (i, margin) in margins.iter_mut().enumerate() {
            *margin += spec.learning_rate * tree.predict_row(table.row(i));
        }
        trees.push(tree);
        training_loss.push(mean_logistic_loss(&table.labels, &margins));
    }
    Ok(GradientBoosted {
        initial_margin,
        learning_rate: spec.learning_rate,
        trees,
        training_loss,
    })
}

/// Margins of every row; exposed for the stagewise oracles.
pub fn margins(model: &GradientBoosted, rows: &Matrix) -> Vec<f64> {
    (0..rows.n_rows()).map(|i| model.margin_row(rows.row(i))).collect()
}
