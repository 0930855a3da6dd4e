//! The common fit/score contract over every classifier kind.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tabular::LabeledTable;

use super::boosting::{fit_gradient_boosting, GradientBoosted};
use super::forest::{fit_random_forest_threaded, RandomForest};
use super::linear::{fit_linear_svm, fit_logistic_regression, LinearKind, LinearModel};
use super::spec::{ClassifierKind, ClassifierSpec};
use super::tree::{fit_decision_tree, DecisionTree};
use super::wrappers::{fit_rusboost_threaded, fit_underbagging_threaded, RusboostModel, UnderbaggingModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FittedClassifier {
    Tree(DecisionTree),
    Forest(RandomForest),
    Boosted(GradientBoosted),
    Linear(LinearModel),
    Underbagging(UnderbaggingModel),
    Rusboost(RusboostModel),
}

impl FittedClassifier {
    /// Probability-like score for one row. The row must already have the
    /// model's feature width; batch entry points check it.
    pub fn score_row(&self, row: &[f64]) -> f64 {
        match self {
            FittedClassifier::Tree(m) => m.predict_row(row),
            FittedClassifier::Forest(m) => m.predict_row(row),
            FittedClassifier::Boosted(m) => m.predict_row(row),
            FittedClassifier::Linear(m) => m.predict_row(row),
            FittedClassifier::Underbagging(m) => m.predict_row(row),
            FittedClassifier::Rusboost(m) => m.predict_row(row),
        }
    }

    /// Hard 0/1 decision: margin sign for the SVM, the 0.5 score cut for
    /// everything else.
    pub fn predict_label_row(&self, row: &[f64]) -> u8 {
        match self {
            FittedClassifier::Linear(m) if m.kind == LinearKind::Svm => m.predict_label(row),
            other => u8::from(other.score_row(row) >= 0.5),
        }
    }
}

/// A fitted scorer plus the spec that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub spec: ClassifierSpec,
    pub feature_count: usize,
    pub fitted: FittedClassifier,
}

impl ClassifierModel {
    /// Scores every row to a finite value in [0, 1]. SVM margins are
    /// min-max rescaled over this batch; all other models score row by row.
    pub fn score(&self, rows: &Matrix) -> Result<Vec<f64>> {
        if rows.n_cols() != self.feature_count {
            return Err(Error::WidthMismatch {
                expected: self.feature_count,
                actual: rows.n_cols(),
            });
        }
        let scores = match &self.fitted {
            FittedClassifier::Linear(m) if m.kind == LinearKind::Svm => m.batch_scores(rows),
            fitted => (0..rows.n_rows()).map(|i| fitted.score_row(rows.row(i))).collect(),
        };
        debug_assert!(scores.iter().all(|s| s.is_finite() && (0.0..=1.0).contains(s)));
        Ok(scores)
    }

    /// Single-row score. For the SVM this is the logistic squashing of the
    /// margin (monotone in the margin, like the batch rescaling).
    pub fn score_row(&self, row: &[f64]) -> f64 {
        self.fitted.score_row(row)
    }

    /// Hard labels: `score >= threshold` when a threshold is supplied,
    /// otherwise the model's native decision rule (margin sign for the SVM,
    /// 0.5 elsewhere).
    pub fn predict_labels(&self, rows: &Matrix, threshold: Option<f64>) -> Result<Vec<u8>> {
        match threshold {
            Some(t) => Ok(self.score(rows)?.into_iter().map(|s| u8::from(s >= t)).collect()),
            None => {
                if rows.n_cols() != self.feature_count {
                    return Err(Error::WidthMismatch {
                        expected: self.feature_count,
                        actual: rows.n_cols(),
                    });
                }
                Ok((0..rows.n_rows())
                    .map(|i| self.fitted.predict_label_row(rows.row(i)))
                    .collect())
            }
        }
    }
}

/// Fits any classifier kind behind the shared contract.
pub fn fit_classifier(table: &LabeledTable, spec: &ClassifierSpec) -> Result<ClassifierModel> {
    fit_classifier_threaded(table, spec, 1)
}

pub fn fit_classifier_threaded(
    table: &LabeledTable,
    spec: &ClassifierSpec,
    threads: usize,
) -> Result<ClassifierModel> {
    let fitted = match spec.kind {
        ClassifierKind::DecisionTree => FittedClassifier::Tree(fit_decision_tree(table, spec)?),
        ClassifierKind::RandomForest => {
            FittedClassifier::Forest(fit_random_forest_threaded(table, spec, threads)?)
        }
        ClassifierKind::GradientBoosting => {
            FittedClassifier::Boosted(fit_gradient_boosting(table, spec)?)
        }
        ClassifierKind::LogisticRegression => {
            FittedClassifier::Linear(fit_logistic_regression(table, spec)?)
        }
        ClassifierKind::LinearSvm => FittedClassifier::Linear(fit_linear_svm(table, spec)?),
        ClassifierKind::Underbagging => {
            FittedClassifier::Underbagging(fit_underbagging_threaded(table, spec, threads)?)
        }
        ClassifierKind::Rusboost => {
            FittedClassifier::Rusboost(fit_rusboost_threaded(table, spec, threads)?)
        }
    };
    Ok(ClassifierModel {
        spec: spec.clone(),
        feature_count: table.width(),
        fitted,
    })
}
