//! Imbalance-aware evaluation: confusion matrices, precision/recall/TNR,
//! balanced accuracy, ROC-AUC, repeated stratified k-fold, and random
//! hyperparameter search.

mod folds;
mod metrics;
mod search;

pub use folds::stratified_kfold;
pub use metrics::{confusion, metrics, roc_auc, ConfusionMatrix, MetricReport};
pub use search::{
    random_search, Candidate, Objective, ParamRange, ParamValue, SearchOutcome, SearchSpec,
    TraceEntry,
};
