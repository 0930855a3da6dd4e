//! Model-agnostic Shapley attribution and partial dependence.
//!
//! The value function is interventional: v(S) is the mean model score over
//! rows assembled from the explained row's values on S and background rows'
//! values elsewhere. `shapley_exact` enumerates all subsets (bounded
//! dimensionality) and anchors the Monte-Carlo permutation estimator, which
//! is exact in expectation and satisfies efficiency per permutation by
//! telescoping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::parallel::map_indexed;
use crate::seed::{derive_seed, rng_from};

/// Hard cap for exact enumeration: 2^15 subsets.
const EXACT_FEATURE_LIMIT: usize = 15;

/// Per-feature attribution of one prediction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributionResult {
    pub values: Vec<f64>,
    /// Mean model score over the background set.
    pub base_value: f64,
    /// Model score of the explained row.
    pub explained_score: f64,
}

/// Partial-dependence curve of one feature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceCurve {
    pub feature: usize,
    pub grid: Vec<f64>,
    pub mean_scores: Vec<f64>,
    /// Feature whose values correlate most with this feature's
    /// attributions, when attributions were supplied.
    pub interaction_feature: Option<usize>,
}

fn mean_score<F: Fn(&[f64]) -> f64>(score: &F, rows: &Matrix) -> f64 {
    (0..rows.n_rows()).map(|i| score(rows.row(i))).sum::<f64>() / rows.n_rows() as f64
}

/// Exact Shapley values by subset enumeration.
pub fn shapley_exact<F>(score: F, background: &Matrix, row: &[f64]) -> Result<AttributionResult>
where
    F: Fn(&[f64]) -> f64,
{
    let d = row.len();
    if d == 0 || d > EXACT_FEATURE_LIMIT {
        return Err(Error::invalid(format!(
            "exact enumeration supports 1..={EXACT_FEATURE_LIMIT} features, got {d}"
        )));
    }
    if background.is_empty() {
        return Err(Error::EmptyTable);
    }
    if background.n_cols() != d {
        return Err(Error::WidthMismatch {
            expected: d,
            actual: background.n_cols(),
        });
    }

    // v(S) for every subset mask
    let n_subsets = 1usize << d;
    let mut v = vec![0.0; n_subsets];
    let mut composite = background.clone();
    for mask in 0..n_subsets {
        if mask > 0 {
            // rebuild only the columns in the mask; cheaper to just rebuild
            // the composite per mask given the small dimensionality
            composite = background.clone();
            for j in 0..d {
                if mask & (1 << j) != 0 {
                    for i in 0..composite.n_rows() {
                        composite.set(i, j, row[j]);
                    }
                }
            }
        }
        v[mask] = mean_score(&score, &composite);
    }

    // factorial weights |S|! (d-|S|-1)! / d!
    let mut factorial = vec![1.0; d + 1];
    for i in 1..=d {
        factorial[i] = factorial[i - 1] * i as f64;
    }
    let mut values = vec![0.0; d];
    for (j, value) in values.iter_mut().enumerate() {
        let bit = 1usize << j;
        for mask in 0..n_subsets {
            if mask & bit != 0 {
                continue;
            }
            let s = mask.count_ones() as usize;
            let weight = factorial[s] * factorial[d - s - 1] / factorial[d];
            *value += weight * (v[mask | bit] - v[mask]);
        }
    }
    Ok(AttributionResult {
        values,
        base_value: v[0],
        explained_score: v[n_subsets - 1],
    })
}

/// Monte-Carlo permutation estimate of the Shapley values. Deterministic
/// under the seed; permutations may be evaluated across threads without
/// changing the result.
pub fn shapley_sample<F>(
    score: F,
    background: &Matrix,
    row: &[f64],
    n_permutations: usize,
    seed: u64,
) -> Result<AttributionResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    shapley_sample_threaded(score, background, row, n_permutations, seed, 1)
}

pub fn shapley_sample_threaded<F>(
    score: F,
    background: &Matrix,
    row: &[f64],
    n_permutations: usize,
    seed: u64,
    threads: usize,
) -> Result<AttributionResult>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = row.len();
    if n_permutations == 0 {
        return Err(Error::invalid("n_permutations must be at least 1"));
    }
    if background.is_empty() {
        return Err(Error::EmptyTable);
    }
    if background.n_cols() != d {
        return Err(Error::WidthMismatch {
            expected: d,
            actual: background.n_cols(),
        });
    }

    let base_value = mean_score(&score, background);
    let per_permutation: Vec<Vec<f64>> = map_indexed(threads, n_permutations, |p| {
        use rand::seq::SliceRandom;
        let mut rng = rng_from(derive_seed(seed, "shapley-perm", p as u64));
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(&mut rng);

        let mut contributions = vec![0.0; d];
        let mut composite = background.clone();
        let mut previous = base_value;
        for &j in &order {
            for i in 0..composite.n_rows() {
                composite.set(i, j, row[j]);
            }
            let current = mean_score(&score, &composite);
            contributions[j] = current - previous;
            previous = current;
        }
        contributions
    });

    let mut values = vec![0.0; d];
    for contributions in &per_permutation {
        for (v, c) in values.iter_mut().zip(contributions) {
            *v += c;
        }
    }
    for v in values.iter_mut() {
        *v /= n_permutations as f64;
    }
    Ok(AttributionResult {
        values,
        base_value,
        explained_score: score(row),
    })
}

/// Features ranked by mean absolute attribution, descending; ties by index.
pub fn importance_summary(attributions: &Matrix) -> Result<Vec<(usize, f64)>> {
    if attributions.is_empty() {
        return Err(Error::EmptyTable);
    }
    let n = attributions.n_rows() as f64;
    let mut ranking: Vec<(usize, f64)> = (0..attributions.n_cols())
        .map(|j| {
            let mean_abs = (0..attributions.n_rows())
                .map(|i| attributions.get(i, j).abs())
                .sum::<f64>()
                / n;
            (j, mean_abs)
        })
        .collect();
    ranking.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite attributions").then(a.0.cmp(&b.0)));
    Ok(ranking)
}

/// Mean model score as one feature sweeps a grid with all other features
/// held at their observed values. When this feature's per-row attributions
/// are supplied, the most-interacting feature (highest absolute Pearson
/// correlation between attributions and that feature's values) is reported.
pub fn partial_dependence<F>(
    score: F,
    table: &Matrix,
    feature: usize,
    grid: &[f64],
    attributions_for_feature: Option<&[f64]>,
) -> Result<DependenceCurve>
where
    F: Fn(&[f64]) -> f64,
{
    if feature >= table.n_cols() {
        return Err(Error::UnknownColumn(format!("index {feature}")));
    }
    if grid.is_empty() {
        return Err(Error::invalid("grid must be non-empty"));
    }
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut sorted_grid = grid.to_vec();
    sorted_grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));

    let mut working = table.clone();
    let mean_scores: Vec<f64> = sorted_grid
        .iter()
        .map(|&g| {
            for i in 0..working.n_rows() {
                working.set(i, feature, g);
            }
            mean_score(&score, &working)
        })
        .collect();

    let interaction_feature = match attributions_for_feature {
        None => None,
        Some(attr) => {
            if attr.len() != table.n_rows() {
                return Err(Error::LengthMismatch {
                    left: attr.len(),
                    right: table.n_rows(),
                });
            }
            (0..table.n_cols())
                .filter(|&k| k != feature)
                .map(|k| (k, pearson_abs(attr, &table.column(k))))
                .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite correlations").then(b.0.cmp(&a.0)))
                .map(|(k, _)| k)
        }
    };
    Ok(DependenceCurve {
        feature,
        grid: sorted_grid,
        mean_scores,
        interaction_feature,
    })
}

fn pearson_abs(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_a = 0.0;
    let mut var_b = 0.0;
    for (x, y) in a.iter().zip(b) {
        let da = x - mean_a;
        let db = y - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if var_a == 0.0 || var_b == 0.0 {
        0.0
    } else {
        (cov / (var_a.sqrt() * var_b.sqrt())).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeros_background(d: usize) -> Matrix {
        Matrix::from_rows(&[vec![0.0; d]]).unwrap()
    }

    #[test]
    fn constant_model_attributes_nothing() {
        let score = |_: &[f64]| 0.7;
        let out = shapley_exact(score, &zeros_background(3), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(out.base_value, 0.7);
        assert!(out.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn additive_model_splits_by_terms() {
        let score = |r: &[f64]| r[0] + r[1];
        let out = shapley_exact(score, &zeros_background(2), &[1.0, 1.0]).unwrap();
        assert!((out.values[0] - 1.0).abs() < 1e-12);
        assert!((out.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multiplicative_model_splits_evenly() {
        // orderings (1,2) and (2,1) contribute (0,1) and (1,0)
        let score = |r: &[f64]| r[0] * r[1];
        let out = shapley_exact(score, &zeros_background(2), &[1.0, 1.0]).unwrap();
        assert!((out.values[0] - 0.5).abs() < 1e-12);
        assert!((out.values[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exact_efficiency_and_symmetry() {
        let score = |r: &[f64]| (r[0] * 0.3 + r[1] * 0.3 + r[2]).tanh();
        let background = Matrix::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![0.5, 0.5, 0.0],
            vec![1.0, 1.0, 0.5],
        ])
        .unwrap();
        // features 0 and 1 are identical in row and background -> equal phi
        let row = [2.0, 2.0, 0.25];
        let out = shapley_exact(score, &background, &row).unwrap();
        let total: f64 = out.values.iter().sum();
        assert!((out.base_value + total - out.explained_score).abs() < 1e-12);
        assert!((out.values[0] - out.values[1]).abs() < 1e-12);
    }

    #[test]
    fn null_player_gets_zero() {
        let score = |r: &[f64]| r[1] * 2.0;
        let background =
            Matrix::from_rows(&[vec![0.3, 0.0, 0.9], vec![0.7, 0.5, 0.1]]).unwrap();
        let out = shapley_exact(score, &background, &[5.0, 1.0, 5.0]).unwrap();
        assert_eq!(out.values[0], 0.0);
        assert_eq!(out.values[2], 0.0);
    }

    #[test]
    fn sampled_matches_exact_on_additive_models_for_any_n() {
        let score = |r: &[f64]| 0.25 * r[0] - 0.5 * r[1] + 0.125 * r[2];
        let background = Matrix::from_rows(&[vec![0.1, 0.9, 0.4], vec![0.8, 0.2, 0.6]]).unwrap();
        let row = [1.0, 0.0, 0.5];
        let exact = shapley_exact(score, &background, &row).unwrap();
        let sampled = shapley_sample(score, &background, &row, 1, 42).unwrap();
        for (a, b) in exact.values.iter().zip(&sampled.values) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn sampled_efficiency_holds_every_run() {
        let score = |r: &[f64]| (r[0] * r[1] + r[2]).sin().abs();
        let background = Matrix::from_rows(&[
            vec![0.1, 0.9, 0.4],
            vec![0.8, 0.2, 0.6],
            vec![0.4, 0.4, 0.4],
        ])
        .unwrap();
        let row = [0.9, 0.7, 0.2];
        for seed in 0..5 {
            let out = shapley_sample(&score, &background, &row, 7, seed).unwrap();
            let total: f64 = out.values.iter().sum();
            assert!((out.base_value + total - out.explained_score).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_threaded_identical_to_sequential() {
        let score = |r: &[f64]| (r[0] - r[1]).max(0.0);
        let background = Matrix::from_rows(&[vec![0.0, 0.5], vec![1.0, 0.1]]).unwrap();
        let row = [0.8, 0.3];
        let seq = shapley_sample_threaded(&score, &background, &row, 64, 3, 1).unwrap();
        let par = shapley_sample_threaded(&score, &background, &row, 64, 3, 4).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn importance_ranks_by_mean_abs() {
        let attr = Matrix::from_rows(&[vec![0.1, -0.9, 0.0], vec![-0.3, 0.7, 0.0]]).unwrap();
        let ranking = importance_summary(&attr).unwrap();
        assert_eq!(ranking[0].0, 1);
        assert_eq!(ranking[1].0, 0);
        assert_eq!(ranking[2], (2, 0.0));
    }

    #[test]
    fn dependence_flat_for_ignored_feature_and_exact_for_identity() {
        let table = Matrix::from_rows(&[vec![0.2, 1.0], vec![0.8, 2.0]]).unwrap();
        let ignores = |r: &[f64]| r[1] * 0.1;
        let flat = partial_dependence(ignores, &table, 0, &[0.0, 0.5, 1.0], None).unwrap();
        assert!(flat.mean_scores.windows(2).all(|w| w[0] == w[1]));

        let identity = |r: &[f64]| r[0];
        let curve = partial_dependence(identity, &table, 0, &[1.0, 0.0], None).unwrap();
        assert_eq!(curve.grid, vec![0.0, 1.0]);
        assert_eq!(curve.mean_scores, vec![0.0, 1.0]);
    }

    #[test]
    fn monotone_model_gives_monotone_curve() {
        let table = Matrix::from_rows(&[vec![0.1, 0.4], vec![0.9, 0.6]]).unwrap();
        let score = |r: &[f64]| (2.0 * r[0]).tanh();
        let curve =
            partial_dependence(score, &table, 0, &[0.0, 0.25, 0.5, 0.75, 1.0], None).unwrap();
        assert!(curve.mean_scores.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn interaction_feature_found_from_attributions() {
        // attributions of feature 0 correlate exactly with feature 2
        let table = Matrix::from_rows(&[
            vec![0.0, 5.0, 1.0],
            vec![0.5, 5.0, 2.0],
            vec![1.0, 5.0, 3.0],
        ])
        .unwrap();
        let attr = [1.0, 2.0, 3.0];
        let score = |r: &[f64]| r[0];
        let curve = partial_dependence(score, &table, 0, &[0.5], Some(&attr)).unwrap();
        assert_eq!(curve.interaction_feature, Some(2));
    }
}
