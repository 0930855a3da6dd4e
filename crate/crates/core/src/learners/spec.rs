//! Classifier configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ParamValue;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    DecisionTree,
    RandomForest,
    GradientBoosting,
    LogisticRegression,
    LinearSvm,
    Underbagging,
    Rusboost,
}

impl ClassifierKind {
    pub fn is_wrapper(self) -> bool {
        matches!(self, ClassifierKind::Underbagging | ClassifierKind::Rusboost)
    }

    /// Short CLI spelling.
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "dt" | "decision_tree" => ClassifierKind::DecisionTree,
            "rf" | "random_forest" => ClassifierKind::RandomForest,
            "xgb" | "gradient_boosting" => ClassifierKind::GradientBoosting,
            "lr" | "logistic_regression" => ClassifierKind::LogisticRegression,
            "svm" | "linear_svm" => ClassifierKind::LinearSvm,
            "ub" | "underbagging" => ClassifierKind::Underbagging,
            "rusboost" => ClassifierKind::Rusboost,
            other => return Err(Error::invalid(format!("unknown classifier '{other}'"))),
        })
    }
}

/// Hyperparameters for any classifier kind. Fields that do not apply to a
/// kind are ignored by it; `validate` checks the ones that do.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSpec {
    pub kind: ClassifierKind,
    /// Tree depth limit (trees, forest members, boosting stages).
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Ensemble size (forest, boosting, wrappers).
    pub n_estimators: usize,
    /// Boosting shrinkage, and the gradient step for the linear models.
    pub learning_rate: f64,
    pub l2_penalty: f64,
    /// Gradient-descent epochs for the linear models.
    pub epochs: usize,
    /// Features considered per tree split; `None` means every feature for a
    /// single tree and ceil(sqrt(d)) inside a forest.
    pub subsample_features: Option<usize>,
    /// Forest members train on bootstrap samples unless disabled.
    pub bootstrap: bool,
    /// Base learner for the wrapper ensembles.
    pub base_kind: Option<ClassifierKind>,
    /// Minority/majority ratio for the wrappers' internal undersampling.
    pub resample_ratio: f64,
    /// RUSBoost redraws per stage before the stage is discarded.
    pub retry_budget: usize,
    pub seed: u64,
}

impl ClassifierSpec {
    pub fn new(kind: ClassifierKind) -> Self {
        ClassifierSpec {
            kind,
            max_depth: 6,
            min_samples_leaf: 1,
            n_estimators: 25,
            learning_rate: 0.1,
            l2_penalty: 1e-3,
            epochs: 200,
            subsample_features: None,
            bootstrap: true,
            base_kind: match kind {
                ClassifierKind::Underbagging | ClassifierKind::Rusboost => {
                    Some(ClassifierKind::DecisionTree)
                }
                _ => None,
            },
            resample_ratio: 1.0,
            retry_budget: 3,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::invalid("learning_rate must be positive"));
        }
        if self.l2_penalty < 0.0 {
            return Err(Error::invalid("l2_penalty must be non-negative"));
        }
        if self.min_samples_leaf < 1 {
            return Err(Error::invalid("min_samples_leaf must be at least 1"));
        }
        match self.kind {
            ClassifierKind::DecisionTree => {
                if self.max_depth < 1 {
                    return Err(Error::invalid("max_depth must be at least 1"));
                }
            }
            ClassifierKind::RandomForest => {
                if self.n_estimators < 1 {
                    return Err(Error::invalid("n_estimators must be at least 1"));
                }
            }
            ClassifierKind::GradientBoosting => {
                // n_estimators = 0 is allowed and yields the prior-only model
                if self.learning_rate > 1.0 {
                    return Err(Error::invalid("boosting learning_rate must lie in (0, 1]"));
                }
            }
            ClassifierKind::LogisticRegression | ClassifierKind::LinearSvm => {
                if self.epochs < 1 {
                    return Err(Error::invalid("epochs must be at least 1"));
                }
            }
            ClassifierKind::Underbagging | ClassifierKind::Rusboost => {
                if self.n_estimators < 1 {
                    return Err(Error::invalid("n_estimators must be at least 1"));
                }
                match self.base_kind {
                    None => return Err(Error::invalid("wrapper ensembles need base_kind")),
                    Some(base) if base.is_wrapper() => {
                        return Err(Error::invalid("wrapper ensembles cannot nest"));
                    }
                    Some(_) => {}
                }
                if !(self.resample_ratio > 0.0 && self.resample_ratio <= 1.0) {
                    return Err(Error::invalid("resample_ratio must lie in (0, 1]"));
                }
                if self.kind == ClassifierKind::Rusboost && self.retry_budget < 1 {
                    return Err(Error::invalid("retry_budget must be at least 1"));
                }
            }
        }
        Ok(())
    }

    /// Spec for a wrapper's base learner: same hyperparameters, the base
    /// kind, and a member-specific seed.
    pub fn base_spec(&self, seed: u64) -> Result<ClassifierSpec> {
        let base = self
            .base_kind
            .ok_or_else(|| Error::invalid("wrapper ensembles need base_kind"))?;
        let mut spec = self.clone();
        spec.kind = base;
        spec.base_kind = None;
        spec.seed = seed;
        Ok(spec)
    }

    /// Applies a named hyperparameter, the hook used by random search.
    pub fn apply_param(&mut self, name: &str, value: &ParamValue) -> Result<()> {
        fn as_usize(name: &str, value: &ParamValue) -> Result<usize> {
            match value {
                ParamValue::Int(v) if *v >= 0 => Ok(*v as usize),
                _ => Err(Error::invalid(format!(
                    "'{name}' needs a non-negative integer, got {value}"
                ))),
            }
        }
        fn as_f64(name: &str, value: &ParamValue) -> Result<f64> {
            match value {
                ParamValue::Real(v) => Ok(*v),
                ParamValue::Int(v) => Ok(*v as f64),
                _ => Err(Error::invalid(format!("'{name}' needs a number, got {value}"))),
            }
        }
        match name {
            "max_depth" => self.max_depth = as_usize(name, value)?,
            "min_samples_leaf" => self.min_samples_leaf = as_usize(name, value)?,
            "n_estimators" => self.n_estimators = as_usize(name, value)?,
            "learning_rate" => self.learning_rate = as_f64(name, value)?,
            "l2_penalty" => self.l2_penalty = as_f64(name, value)?,
            "epochs" => self.epochs = as_usize(name, value)?,
            "subsample_features" => {
                self.subsample_features = Some(as_usize(name, value)?);
            }
            "resample_ratio" => self.resample_ratio = as_f64(name, value)?,
            "base_kind" => {
                self.base_kind = Some(match value {
                    ParamValue::Text(t) => ClassifierKind::parse(t)?,
                    _ => return Err(Error::invalid("'base_kind' needs a classifier name")),
                });
            }
            other => {
                return Err(Error::invalid(format!("unknown hyperparameter '{other}'")));
            }
        }
        Ok(())
    }

    /// Applies a whole search candidate and revalidates.
    pub fn with_candidate(
        &self,
        candidate: &std::collections::BTreeMap<String, ParamValue>,
    ) -> Result<ClassifierSpec> {
        let mut spec = self.clone();
        for (name, value) in candidate {
            spec.apply_param(name, value)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}
