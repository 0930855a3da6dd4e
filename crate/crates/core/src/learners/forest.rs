//! Random forest: bootstrapped trees with per-split feature subsampling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::map_indexed;
use crate::seed::{derive_seed, rng_from};
use crate::tabular::LabeledTable;

use super::spec::{ClassifierKind, ClassifierSpec};
use super::tree::{grow_tree, DecisionTree, GrowParams, SplitCriterion};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub trees: Vec<DecisionTree>,
}

impl RandomForest {
    /// Mean of member leaf probabilities.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64
    }
}

/// Fits `n_estimators` Gini trees, each on a bootstrap sample of size n
/// (disabled via `bootstrap: false`, in which case every member sees the
/// full table) with `subsample_features` features per split, defaulting to
/// ceil(sqrt(d)). Member seeds are pre-assigned, so results do not depend on
/// the thread count.
pub fn fit_random_forest(table: &LabeledTable, spec: &ClassifierSpec) -> Result<RandomForest> {
    fit_random_forest_threaded(table, spec, 1)
}

pub fn fit_random_forest_threaded(
    table: &LabeledTable,
    spec: &ClassifierSpec,
    threads: usize,
) -> Result<RandomForest> {
    if spec.kind != ClassifierKind::RandomForest {
        return Err(Error::invalid("spec kind must be random_forest"));
    }
    spec.validate()?;
    if table.n_rows() == 0 {
        return Err(Error::EmptyTable);
    }
    let n = table.n_rows();
    let d = table.width();
    let feature_sample = spec
        .subsample_features
        .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
        .min(d);
    let targets: Vec<f64> = table.labels.iter().map(|&l| l as f64).collect();

    let trees = map_indexed(threads, spec.n_estimators, |m| {
        let mut rng = rng_from(derive_seed(spec.seed, "forest-member", m as u64));
        let indices: Vec<usize> = if spec.bootstrap {
            (0..n).map(|_| rng.gen_range(0..n)).collect()
        } else {
            (0..n).collect()
        };
        let params = GrowParams {
            max_depth: spec.max_depth,
            min_samples_leaf: spec.min_samples_leaf,
            feature_sample: Some(feature_sample),
            criterion: SplitCriterion::Gini,
        };
        let root = grow_tree(&table.matrix, &targets, indices, &params, &mut rng);
        DecisionTree {
            root,
            n_features: d,
        }
    });
    Ok(RandomForest { trees })
}
