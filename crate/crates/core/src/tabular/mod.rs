//! Dataset representation and preprocessing: feature schemas, raw and
//! encoded tables, one-hot encoding with a category cap, log transforms,
//! stratified three-way splits, CSV interchange, and a synthetic parcel-data
//! generator.

mod csv_io;
mod encode;
mod schema;
mod split;
mod synthetic;
mod table;

pub use encode::{encode_one_hot, inverse_log_transform, log_transform};
pub use schema::{FeatureKind, FeatureSchema, RawTable, RawValue};
pub use split::{stratified_split, SplitSpec};
pub use synthetic::{generate_synthetic, SyntheticConfig};
pub use table::{ColumnGroup, LabeledTable};
