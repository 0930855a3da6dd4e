//! Linear models: logistic regression and a linear SVM.
//!
//! Both standardize their inputs internally (mean 0, variance 1 per column;
//! constant columns are left centered at zero) and fold the standardization
//! back into the stored weights, so the public contract stays "score a raw
//! row". Training is plain full-batch (sub)gradient descent with a fixed
//! step and an epoch budget, weights initialized to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tabular::LabeledTable;

use super::boosting::sigmoid;
use super::spec::{ClassifierKind, ClassifierSpec};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearKind {
    Logistic,
    Svm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kind: LinearKind,
    /// Original-space weights (standardization already folded in).
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn margin_row(&self, row: &[f64]) -> f64 {
        self.weights.iter().zip(row).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }

    /// Probability for the logistic model; SVM margins are rescaled per
    /// batch elsewhere.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match self.kind {
            LinearKind::Logistic => sigmoid(self.margin_row(row)),
            LinearKind::Svm => sigmoid(self.margin_row(row)),
        }
    }

    /// SVM labels come from the margin sign; logistic from the 0.5 cut.
    pub fn predict_label(&self, row: &[f64]) -> u8 {
        match self.kind {
            LinearKind::Logistic => u8::from(self.predict_row(row) >= 0.5),
            LinearKind::Svm => u8::from(self.margin_row(row) > 0.0),
        }
    }

    /// Min-max rescaling of margins over a batch: monotone, so every
    /// ranking metric is unaffected. A constant-margin batch maps to 0.5.
    pub fn batch_scores(&self, rows: &Matrix) -> Vec<f64> {
        let margins: Vec<f64> = (0..rows.n_rows()).map(|i| self.margin_row(rows.row(i))).collect();
        match self.kind {
            LinearKind::Logistic => margins.into_iter().map(sigmoid).collect(),
            LinearKind::Svm => {
                let lo = margins.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = margins.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi - lo <= 0.0 {
                    vec![0.5; margins.len()]
                } else {
                    margins.into_iter().map(|m| (m - lo) / (hi - lo)).collect()
                }
            }
        }
    }
}

/// Mean logistic loss plus `l2/2 * ||w||^2`, with its exact gradient.
/// Returns `(loss, grad_w, grad_b)`.
pub fn logistic_loss_and_gradient(
    x: &Matrix,
    labels: &[u8],
    weights: &[f64],
    bias: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.n_rows() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for i in 0..x.n_rows() {
        let row = x.row(i);
        let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + bias;
        let y = labels[i] as f64;
        let signed = if labels[i] == 1 { z } else { -z };
        loss += if signed > 0.0 {
            (-signed).exp().ln_1p()
        } else {
            -signed + signed.exp().ln_1p()
        };
        let err = sigmoid(z) - y;
        for (g, v) in grad_w.iter_mut().zip(row) {
            *g += err * v;
        }
        grad_b += err;
    }
    loss /= n;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    let l2_term: f64 = weights.iter().map(|w| w * w).sum::<f64>() * l2 / 2.0;
    (loss + l2_term, grad_w, grad_b / n)
}

/// Mean hinge loss plus `l2/2 * ||w||^2`, with a subgradient (the hinge is
/// treated as active strictly below margin 1). Returns `(loss, grad_w,
/// grad_b)`.
pub fn hinge_loss_and_gradient(
    x: &Matrix,
    labels: &[u8],
    weights: &[f64],
    bias: f64,
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = x.n_rows() as f64;
    let mut loss = 0.0;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for i in 0..x.n_rows() {
        let row = x.row(i);
        let z: f64 = weights.iter().zip(row).map(|(w, v)| w * v).sum::<f64>() + bias;
        let m = if labels[i] == 1 { 1.0 } else { -1.0 };
        let margin = m * z;
        if margin < 1.0 {
            loss += 1.0 - margin;
            for (g, v) in grad_w.iter_mut().zip(row) {
                *g -= m * v;
            }
            grad_b -= m;
        }
    }
    loss /= n;
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    let l2_term: f64 = weights.iter().map(|w| w * w).sum::<f64>() * l2 / 2.0;
    (loss + l2_term, grad_w, grad_b / n)
}

struct Standardizer {
    means: Vec<f64>,
    scales: Vec<f64>,
}

impl Standardizer {
    fn fit(x: &Matrix) -> Standardizer {
        let n = x.n_rows() as f64;
        let d = x.n_cols();
        let mut means = vec![0.0; d];
        for i in 0..x.n_rows() {
            for (m, v) in means.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        for m in means.iter_mut() {
            *m /= n;
        }
        let mut scales = vec![0.0; d];
        for i in 0..x.n_rows() {
            for (j, v) in x.row(i).iter().enumerate() {
                let c = v - means[j];
                scales[j] += c * c;
            }
        }
        for s in scales.iter_mut() {
            let var = *s / n;
            *s = if var > 0.0 { var.sqrt() } else { 1.0 };
        }
        Standardizer { means, scales }
    }

    fn transform(&self, x: &Matrix) -> Matrix {
        let mut out = x.clone();
        for i in 0..out.n_rows() {
            let row = out.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.means[j]) / self.scales[j];
            }
        }
        out
    }

    /// Folds standardized-space parameters back to the original space.
    fn fold(&self, weights: &[f64], bias: f64) -> (Vec<f64>, f64) {
        let folded: Vec<f64> = weights
            .iter()
            .zip(&self.scales)
            .map(|(w, s)| w / s)
            .collect();
        let shift: f64 = weights
            .iter()
            .zip(&self.means)
            .zip(&self.scales)
            .map(|((w, m), s)| w * m / s)
            .sum();
        (folded, bias - shift)
    }
}

fn fit_linear(
    table: &LabeledTable,
    spec: &ClassifierSpec,
    kind: LinearKind,
) -> Result<LinearModel> {
    spec.validate()?;
    if table.n_rows() == 0 {
        return Err(Error::EmptyTable);
    }
    if !table.matrix.all_finite() {
        return Err(Error::NonFinite("feature matrix".into()));
    }
    let standardizer = Standardizer::fit(&table.matrix);
    let x = standardizer.transform(&table.matrix);
    let mut weights = vec![0.0; x.n_cols()];
    let mut bias = 0.0;
    for _ in 0..spec.epochs {
        let (_, grad_w, grad_b) = match kind {
            LinearKind::Logistic => {
                logistic_loss_and_gradient(&x, &table.labels, &weights, bias, spec.l2_penalty)
            }
            LinearKind::Svm => {
                hinge_loss_and_gradient(&x, &table.labels, &weights, bias, spec.l2_penalty)
            }
        };
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= spec.learning_rate * g;
        }
        bias -= spec.learning_rate * grad_b;
    }
    let (weights, bias) = standardizer.fold(&weights, bias);
    Ok(LinearModel {
        kind,
        weights,
        bias,
    })
}

pub fn fit_logistic_regression(
    table: &LabeledTable,
    spec: &ClassifierSpec,
) -> Result<LinearModel> {
    if spec.kind != ClassifierKind::LogisticRegression {
        return Err(Error::invalid("spec kind must be logistic_regression"));
    }
    fit_linear(table, spec, LinearKind::Logistic)
}

pub fn fit_linear_svm(table: &LabeledTable, spec: &ClassifierSpec) -> Result<LinearModel> {
    if spec.kind != ClassifierKind::LinearSvm {
        return Err(Error::invalid("spec kind must be linear_svm"));
    }
    fit_linear(table, spec, LinearKind::Svm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from;
    use rand::Rng;

    fn table(rows: Vec<Vec<f64>>, labels: Vec<u8>) -> LabeledTable {
        let d = rows[0].len();
        LabeledTable::new(
            (0..d).map(|j| format!("f{j}")).collect(),
            Matrix::from_rows(&rows).unwrap(),
            labels,
        )
        .unwrap()
    }

    #[test]
    fn zero_weights_score_half() {
        let model = LinearModel {
            kind: LinearKind::Logistic,
            weights: vec![0.0; 3],
            bias: 0.0,
        };
        assert_eq!(model.predict_row(&[5.0, -2.0, 9.0]), 0.5);
    }

    #[test]
    fn logistic_separable_1d_perfect_holdout() {
        let train: Vec<f64> = (0..40).map(|i| i as f64 / 39.0).collect();
        let rows: Vec<Vec<f64>> = train.iter().map(|&v| vec![v]).collect();
        let labels: Vec<u8> = train.iter().map(|&v| u8::from(v > 0.5)).collect();
        let mut spec = ClassifierSpec::new(ClassifierKind::LogisticRegression);
        spec.epochs = 2000;
        spec.learning_rate = 0.5;
        spec.l2_penalty = 0.0;
        let model = fit_logistic_regression(&table(rows, labels), &spec).unwrap();
        for &v in &[0.05, 0.2, 0.45] {
            assert!(model.predict_row(&[v]) < 0.5, "x={v}");
        }
        for &v in &[0.55, 0.8, 0.95] {
            assert!(model.predict_row(&[v]) >= 0.5, "x={v}");
        }
    }

    fn random_problem(seed: u64, n: usize, d: usize) -> (Matrix, Vec<u8>) {
        let mut rng = rng_from(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let labels: Vec<u8> = (0..n).map(|_| u8::from(rng.gen::<bool>())).collect();
        (Matrix::from_rows(&rows).unwrap(), labels)
    }

    fn central_difference(
        f: &dyn Fn(&[f64], f64) -> f64,
        weights: &[f64],
        bias: f64,
        step: f64,
    ) -> (Vec<f64>, f64) {
        let mut grad_w = vec![0.0; weights.len()];
        let mut w = weights.to_vec();
        for j in 0..w.len() {
            w[j] = weights[j] + step;
            let hi = f(&w, bias);
            w[j] = weights[j] - step;
            let lo = f(&w, bias);
            w[j] = weights[j];
            grad_w[j] = (hi - lo) / (2.0 * step);
        }
        let grad_b = (f(weights, bias + step) - f(weights, bias - step)) / (2.0 * step);
        (grad_w, grad_b)
    }

    fn relative_error(a: f64, b: f64) -> f64 {
        (a - b).abs() / (a.abs() + 1e-8)
    }

    #[test]
    fn logistic_gradient_matches_finite_differences() {
        let (x, labels) = random_problem(11, 30, 4);
        let mut rng = rng_from(12);
        for _ in 0..5 {
            let weights: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() - 0.5).collect();
            let bias: f64 = rng.gen::<f64>() - 0.5;
            let (_, grad_w, grad_b) =
                logistic_loss_and_gradient(&x, &labels, &weights, bias, 0.01);
            let f = |w: &[f64], b: f64| logistic_loss_and_gradient(&x, &labels, w, b, 0.01).0;
            let (fd_w, fd_b) = central_difference(&f, &weights, bias, 1e-5);
            for (a, e) in grad_w.iter().zip(&fd_w) {
                assert!(relative_error(*a, *e) <= 1e-4, "{a} vs {e}");
            }
            assert!(relative_error(grad_b, fd_b) <= 1e-4);
        }
    }

    #[test]
    fn hinge_gradient_matches_finite_differences_off_kink() {
        let (x, labels) = random_problem(21, 30, 4);
        let mut rng = rng_from(22);
        let mut checked = 0;
        while checked < 5 {
            let weights: Vec<f64> = (0..4).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let bias: f64 = rng.gen::<f64>() - 0.5;
            // skip parameter points near any hinge kink
            let near_kink = (0..x.n_rows()).any(|i| {
                let z: f64 = weights
                    .iter()
                    .zip(x.row(i))
                    .map(|(w, v)| w * v)
                    .sum::<f64>()
                    + bias;
                let m = if labels[i] == 1 { 1.0 } else { -1.0 };
                (m * z - 1.0).abs() < 1e-3
            });
            if near_kink {
                continue;
            }
            checked += 1;
            let (_, grad_w, grad_b) = hinge_loss_and_gradient(&x, &labels, &weights, bias, 0.01);
            let f = |w: &[f64], b: f64| hinge_loss_and_gradient(&x, &labels, w, b, 0.01).0;
            let (fd_w, fd_b) = central_difference(&f, &weights, bias, 1e-5);
            for (a, e) in grad_w.iter().zip(&fd_w) {
                assert!(relative_error(*a, *e) <= 1e-4, "{a} vs {e}");
            }
            assert!(relative_error(grad_b, fd_b) <= 1e-4);
        }
    }

    #[test]
    fn svm_separable_blobs_training_accuracy_one() {
        let mut rng = rng_from(9);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..30 {
            rows.push(vec![rng.gen::<f64>(), rng.gen::<f64>()]);
            labels.push(0);
            rows.push(vec![3.0 + rng.gen::<f64>(), 3.0 + rng.gen::<f64>()]);
            labels.push(1);
        }
        let t = table(rows, labels);
        let mut spec = ClassifierSpec::new(ClassifierKind::LinearSvm);
        spec.epochs = 500;
        spec.learning_rate = 0.2;
        spec.l2_penalty = 1e-4;
        let model = fit_linear_svm(&t, &spec).unwrap();
        for i in 0..t.n_rows() {
            assert_eq!(model.predict_label(t.row(i)), t.label(i));
        }
    }

    #[test]
    fn feature_scaling_leaves_labels_unchanged() {
        let mut rng = rng_from(33);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| vec![rng.gen::<f64>() * 4.0, rng.gen::<f64>()])
            .collect();
        let labels: Vec<u8> = rows
            .iter()
            .map(|r| u8::from(r[0] - 2.0 * r[1] + 0.2 * (rng.gen::<f64>() - 0.5) > 0.0))
            .collect();
        let t = table(rows.clone(), labels.clone());
        let scaled_rows: Vec<Vec<f64>> = rows.iter().map(|r| vec![2.0 * r[0], 2.0 * r[1]]).collect();
        let t2 = table(scaled_rows, labels);
        let mut spec = ClassifierSpec::new(ClassifierKind::LinearSvm);
        spec.epochs = 300;
        let a = fit_linear_svm(&t, &spec).unwrap();
        let b = fit_linear_svm(&t2, &spec).unwrap();
        for i in 0..t.n_rows() {
            let la = a.predict_label(t.row(i));
            let lb = b.predict_label(t2.row(i));
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn svm_batch_scores_rescale_to_unit_interval() {
        let model = LinearModel {
            kind: LinearKind::Svm,
            weights: vec![1.0],
            bias: 0.0,
        };
        let rows = Matrix::from_rows(&[vec![-3.0], vec![0.0], vec![5.0]]).unwrap();
        let scores = model.batch_scores(&rows);
        assert_eq!(scores[0], 0.0);
        assert_eq!(scores[2], 1.0);
        assert!((scores[1] - 0.375).abs() < 1e-12);
        let constant = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        assert_eq!(model.batch_scores(&constant), vec![0.5, 0.5]);
    }
}
