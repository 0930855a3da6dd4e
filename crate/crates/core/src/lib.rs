//! Prediction toolkit for rare positive events (lost parcels) in highly
//! imbalanced tabular data.
//!
//! The crate covers two modeling routes plus the machinery around them:
//!
//! * **DBSL** — rebalance the training data (random undersampling,
//!   NearMiss-1, or the ensemble wrappers UnderBagging and RUSBoost) and fit
//!   a standard supervised classifier ([`learners`], [`resample`]).
//! * **DHEL** — train a dense autoencoder on normal rows only, map every row
//!   to its per-feature reconstruction-error vector, and feed those vectors
//!   to a tuned supervised classifier ([`autonet`], [`dhel`]).
//!
//! Supporting modules: [`tabular`] (encoding, splits, a synthetic parcel
//! generator), [`eval`] (imbalance-aware metrics, stratified CV, random
//! search), [`insurance`] (business-rule baseline and misclassification
//! costs in integer cents), and [`explain`] (Shapley attributions and
//! partial dependence).
//!
//! Everything is deterministic under explicit seeds: refitting with the same
//! seed reproduces the same model bit for bit.

pub mod autonet;
pub mod dhel;
pub mod error;
pub mod eval;
pub mod explain;
pub mod insurance;
pub mod learners;
pub mod matrix;
pub mod model_io;
pub mod parallel;
pub mod resample;
pub mod seed;
pub mod tabular;

pub use error::{Error, Result};
pub use matrix::Matrix;

pub use autonet::{AutoencoderModel, NetworkSpec, NetworkVariant, ThresholdRule, TrainConfig};
pub use dhel::{DhelModel, DhelSpec};
pub use eval::{ConfusionMatrix, MetricReport, Objective, SearchSpec};
pub use insurance::{Cents, CostReport, InsuranceRuleTable, ParcelEconomics};
pub use learners::{ClassifierKind, ClassifierModel, ClassifierSpec};
pub use resample::{ResampleMethod, ResampleSpec};
pub use tabular::{
    FeatureKind, FeatureSchema, LabeledTable, RawTable, SplitSpec, SyntheticConfig,
};
