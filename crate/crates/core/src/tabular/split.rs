//! Stratified three-way splitting.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from;

use super::table::LabeledTable;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub test_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train: f64, validation: f64, test: f64, seed: u64) -> Result<Self> {
        let spec = SplitSpec {
            train_fraction: train,
            validation_fraction: validation,
            test_fraction: test,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for f in [
            self.train_fraction,
            self.validation_fraction,
            self.test_fraction,
        ] {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::invalid("each split fraction must lie in (0,1)"));
            }
        }
        let sum = self.train_fraction + self.validation_fraction + self.test_fraction;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("split fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    fn fractions(&self) -> [f64; 3] {
        [
            self.train_fraction,
            self.validation_fraction,
            self.test_fraction,
        ]
    }
}

/// Splits a table into train/validation/test parts whose per-class counts
/// match exact proportionality within one row (largest-remainder rounding per
/// class per part). The partition is exact and deterministic under the seed.
pub fn stratified_split(
    table: &LabeledTable,
    spec: &SplitSpec,
) -> Result<(LabeledTable, LabeledTable, LabeledTable)> {
    spec.validate()?;
    if !table.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let (pos, neg) = table.class_indices();
    let pos_counts = largest_remainder(pos.len(), spec.fractions());
    let neg_counts = largest_remainder(neg.len(), spec.fractions());
    if pos_counts.iter().any(|&c| c == 0) {
        return Err(Error::ClassTooSmall(
            "a split fraction is too small to receive one positive".into(),
        ));
    }

    let mut rng = rng_from(spec.seed);
    let mut pos = pos;
    let mut neg = neg;
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);

    let mut parts: [Vec<usize>; 3] = Default::default();
    let mut p_off = 0;
    let mut n_off = 0;
    for part in 0..3 {
        let mut indices = Vec::with_capacity(pos_counts[part] + neg_counts[part]);
        indices.extend_from_slice(&pos[p_off..p_off + pos_counts[part]]);
        indices.extend_from_slice(&neg[n_off..n_off + neg_counts[part]]);
        p_off += pos_counts[part];
        n_off += neg_counts[part];
        indices.sort_unstable();
        parts[part] = indices;
    }
    let [train, validation, test] = parts;
    Ok((
        table.take_rows(&train),
        table.take_rows(&validation),
        table.take_rows(&test),
    ))
}

/// Allocates `n` items to three parts by largest-remainder rounding, which
/// keeps every part within one item of `n * fraction`.
fn largest_remainder(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let ideals: Vec<f64> = fractions.iter().map(|f| f * n as f64).collect();
    let mut counts: Vec<usize> = ideals.iter().map(|&x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&a, &b| {
        let ra = ideals[a] - counts[a] as f64;
        let rb = ideals[b] - counts[b] as f64;
        rb.partial_cmp(&ra).expect("finite remainders").then(a.cmp(&b))
    });
    for i in 0..(n - assigned) {
        counts[order[i]] += 1;
    }
    [counts[0], counts[1], counts[2]]
}
