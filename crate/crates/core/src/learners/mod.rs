//! Supervised classifiers sharing one fit/score contract: CART decision
//! trees, random forests, first-order gradient-boosted trees, logistic
//! regression, a linear SVM, and the imbalance-aware ensemble wrappers
//! UnderBagging and RUSBoost.
//!
//! Every fitted model scores a row to a finite probability-like value in
//! [0, 1]; fitting with the same seed reproduces identical parameters.

mod boosting;
mod forest;
mod linear;
mod model;
mod spec;
mod tree;
mod wrappers;

pub use boosting::fit_gradient_boosting;
pub use forest::fit_random_forest;
pub use linear::{
    fit_linear_svm, fit_logistic_regression, hinge_loss_and_gradient,
    logistic_loss_and_gradient, LinearModel,
};
pub use model::{fit_classifier, FittedClassifier, ClassifierModel};
pub use spec::{ClassifierKind, ClassifierSpec};
pub use tree::{fit_decision_tree, DecisionTree, TreeNode};
pub use wrappers::{fit_rusboost, fit_underbagging, underbagging_member_seed, StageRecord};
