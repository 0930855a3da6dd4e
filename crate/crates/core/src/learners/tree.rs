//! CART-style greedy trees.
//!
//! Split search enumerates every candidate feature and every midpoint
//! between consecutive distinct sorted values, maximizing weighted impurity
//! decrease (Gini for classification targets, sum of squared errors for the
//! regression trees used inside boosting). Ties break toward the lowest
//! feature index and then the lowest threshold, so growth is deterministic;
//! rows with `x <= threshold` go left. Leaves carry the mean target of their
//! training rows, which for 0/1 labels is the positive-class fraction.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::seed::rng_from;
use crate::tabular::LabeledTable;

use super::spec::{ClassifierKind, ClassifierSpec};

const MIN_GAIN: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        /// Mean training target: the positive-class probability for
        /// classification trees, a residual step for regression trees.
        value: f64,
        /// Training rows that reached this leaf.
        n_samples: usize,
    },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Visits every leaf.
    pub fn for_each_leaf(&self, f: &mut impl FnMut(f64, usize)) {
        match self {
            TreeNode::Leaf { value, n_samples } => f(*value, *n_samples),
            TreeNode::Internal { left, right, .. } => {
                left.for_each_leaf(f);
                right.for_each_leaf(f);
            }
        }
    }

    /// Feature indices used by any split in the subtree.
    pub fn collect_features(&self, out: &mut std::collections::BTreeSet<usize>) {
        if let TreeNode::Internal {
            feature,
            left,
            right,
            ..
        } = self
        {
            out.insert(*feature);
            left.collect_features(out);
            right.collect_features(out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_features: usize,
}

impl DecisionTree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value, .. } => return *value,
                TreeNode::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub(crate) enum SplitCriterion {
    Gini,
    SumSquaredError,
}

pub(crate) struct GrowParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Features drawn per split; `None` considers all.
    pub feature_sample: Option<usize>,
    pub criterion: SplitCriterion,
}

/// Weighted impurity `n * imp(S)`: Gini uses 2p(1-p) on 0/1 targets, SSE the
/// within-node sum of squared deviations. Additive over children, so
/// `gain = w(parent) - w(left) - w(right)`.
fn weighted_impurity(criterion: SplitCriterion, n: f64, sum: f64, sum_sq: f64) -> f64 {
    match criterion {
        SplitCriterion::Gini => {
            let p = sum / n;
            2.0 * n * p * (1.0 - p)
        }
        SplitCriterion::SumSquaredError => sum_sq - sum * sum / n,
    }
}

pub(crate) fn grow_tree(
    x: &Matrix,
    targets: &[f64],
    indices: Vec<usize>,
    params: &GrowParams,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    grow_node(x, targets, indices, 0, params, rng)
}

fn grow_node(
    x: &Matrix,
    targets: &[f64],
    indices: Vec<usize>,
    depth: usize,
    params: &GrowParams,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let n = indices.len();
    let mean = indices.iter().map(|&i| targets[i]).sum::<f64>() / n as f64;
    let pure = indices.iter().all(|&i| targets[i] == targets[indices[0]]);
    if depth >= params.max_depth || n < 2 * params.min_samples_leaf || pure {
        return TreeNode::Leaf {
            value: mean,
            n_samples: n,
        };
    }

    let candidates = candidate_features(x.n_cols(), params.feature_sample, rng);
    let best = find_best_split(x, targets, &indices, &candidates, params);
    match best {
        None => TreeNode::Leaf {
            value: mean,
            n_samples: n,
        },
        Some(split) => {
            let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                .into_iter()
                .partition(|&i| x.get(i, split.feature) <= split.threshold);
            let left = grow_node(x, targets, left_idx, depth + 1, params, rng);
            let right = grow_node(x, targets, right_idx, depth + 1, params, rng);
            TreeNode::Internal {
                feature: split.feature,
                threshold: split.threshold,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

fn candidate_features(
    n_features: usize,
    sample: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    match sample {
        Some(k) if k < n_features => {
            // partial Fisher-Yates, then ascending order so the lowest-index
            // tie-break still applies among the sampled features
            use rand::Rng;
            let mut pool: Vec<usize> = (0..n_features).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n_features);
                pool.swap(i, j);
            }
            let mut chosen = pool[..k].to_vec();
            chosen.sort_unstable();
            chosen
        }
        _ => (0..n_features).collect(),
    }
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

fn find_best_split(
    x: &Matrix,
    targets: &[f64],
    indices: &[usize],
    features: &[usize],
    params: &GrowParams,
) -> Option<Split> {
    let n = indices.len() as f64;
    let (sum, sum_sq) = indices.iter().fold((0.0, 0.0), |(s, q), &i| {
        (s + targets[i], q + targets[i] * targets[i])
    });
    let parent = weighted_impurity(params.criterion, n, sum, sum_sq);

    let mut best: Option<Split> = None;
    let mut sorted: Vec<(f64, f64)> = Vec::with_capacity(indices.len());
    for &feature in features {
        sorted.clear();
        sorted.extend(indices.iter().map(|&i| (x.get(i, feature), targets[i])));
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));

        let mut left_n = 0.0;
        let mut left_sum = 0.0;
        let mut left_sq = 0.0;
        for i in 1..sorted.len() {
            let (prev_v, prev_t) = sorted[i - 1];
            left_n += 1.0;
            left_sum += prev_t;
            left_sq += prev_t * prev_t;
            let v = sorted[i].0;
            if v == prev_v {
                continue;
            }
            let n_left = i;
            let n_right = sorted.len() - i;
            if n_left < params.min_samples_leaf || n_right < params.min_samples_leaf {
                continue;
            }
            let threshold = prev_v + (v - prev_v) / 2.0;
            let w_left = weighted_impurity(params.criterion, left_n, left_sum, left_sq);
            let w_right = weighted_impurity(
                params.criterion,
                n - left_n,
                sum - left_sum,
                sum_sq - left_sq,
            );
            let gain = parent - w_left - w_right;
            if gain > MIN_GAIN && best.as_ref().map_or(true, |b| gain > b.gain) {
                best = Some(Split {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }
    best
}

/// Fits a classification tree by Gini impurity reduction. A single-class
/// table is allowed and collapses to a constant leaf scoring that class's
/// probability.
pub fn fit_decision_tree(table: &LabeledTable, spec: &ClassifierSpec) -> Result<DecisionTree> {
    if spec.kind != ClassifierKind::DecisionTree {
        return Err(Error::invalid("spec kind must be decision_tree"));
    }
    spec.validate()?;
    if table.n_rows() == 0 {
        return Err(Error::EmptyTable);
    }
    let targets: Vec<f64> = table.labels.iter().map(|&l| l as f64).collect();
    let params = GrowParams {
        max_depth: spec.max_depth,
        min_samples_leaf: spec.min_samples_leaf,
        feature_sample: spec.subsample_features,
        criterion: SplitCriterion::Gini,
    };
    let mut rng = rng_from(spec.seed);
    let root = grow_tree(
        &table.matrix,
        &targets,
        (0..table.n_rows()).collect(),
        &params,
        &mut rng,
    );
    Ok(DecisionTree {
        root,
        n_features: table.width(),
    })
}
