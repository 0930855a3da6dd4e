//! Majority-class undersampling.
//!
//! Both strategies keep every minority row and cut the majority down to
//! `ceil(minority / target_ratio)` rows: uniformly at random, or by the
//! NearMiss-1 rule (retain the majority rows with the smallest mean
//! Euclidean distance to their k nearest minority rows).

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from;
use crate::tabular::LabeledTable;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMethod {
    RandomUndersample,
    NearMiss1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResampleSpec {
    pub method: ResampleMethod,
    /// Desired minority/majority count ratio after resampling.
    pub target_ratio: f64,
    /// Neighbors considered per majority row (NearMiss only).
    pub k_neighbors: usize,
    pub seed: u64,
}

impl ResampleSpec {
    pub fn random(target_ratio: f64, seed: u64) -> Self {
        ResampleSpec {
            method: ResampleMethod::RandomUndersample,
            target_ratio,
            k_neighbors: 3,
            seed,
        }
    }

    pub fn near_miss(target_ratio: f64, k_neighbors: usize) -> Self {
        ResampleSpec {
            method: ResampleMethod::NearMiss1,
            target_ratio,
            k_neighbors,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_ratio > 0.0 && self.target_ratio <= 1.0) {
            return Err(Error::invalid("target_ratio must lie in (0, 1]"));
        }
        if self.k_neighbors < 1 {
            return Err(Error::invalid("k_neighbors must be at least 1"));
        }
        Ok(())
    }
}

pub fn resample(table: &LabeledTable, spec: &ResampleSpec) -> Result<LabeledTable> {
    match spec.method {
        ResampleMethod::RandomUndersample => random_undersample(table, spec),
        ResampleMethod::NearMiss1 => near_miss_1(table, spec),
    }
}

fn majority_target(minority: usize, ratio: f64) -> usize {
    (minority as f64 / ratio).ceil() as usize
}

/// Uniform majority undersampling without replacement; all minority rows are
/// retained and output rows keep their original order.
pub fn random_undersample(table: &LabeledTable, spec: &ResampleSpec) -> Result<LabeledTable> {
    spec.validate()?;
    if !table.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let (minority, majority) = minority_majority(table);
    let keep = majority_target(minority.len(), spec.target_ratio);
    if keep > majority.len() {
        return Err(Error::ClassTooSmall(format!(
            "ratio {} needs {keep} majority rows, only {} exist",
            spec.target_ratio,
            majority.len()
        )));
    }
    let mut rng = rng_from(spec.seed);
    let mut pool = majority;
    pool.shuffle(&mut rng);
    let mut retained: Vec<usize> = pool[..keep].to_vec();
    retained.extend_from_slice(&minority);
    retained.sort_unstable();
    Ok(table.take_rows(&retained))
}

/// NearMiss-1: for every majority row compute the mean Euclidean distance to
/// its `k_neighbors` nearest minority rows, then retain the majority rows
/// with the smallest mean distance. Ties break toward the lower original row
/// index, so the result is fully deterministic with no seed involved.
pub fn near_miss_1(table: &LabeledTable, spec: &ResampleSpec) -> Result<LabeledTable> {
    spec.validate()?;
    if !table.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let (minority, majority) = minority_majority(table);
    if minority.len() < spec.k_neighbors {
        return Err(Error::ClassTooSmall(format!(
            "{} minority rows but k_neighbors = {}",
            minority.len(),
            spec.k_neighbors
        )));
    }
    let keep = majority_target(minority.len(), spec.target_ratio);
    if keep > majority.len() {
        return Err(Error::ClassTooSmall(format!(
            "ratio {} needs {keep} majority rows, only {} exist",
            spec.target_ratio,
            majority.len()
        )));
    }

    let k = spec.k_neighbors;
    let mut scored: Vec<(f64, usize)> = majority
        .iter()
        .map(|&m| {
            let row = table.row(m);
            // squared distances to every minority row; k smallest kept
            let mut nearest = vec![f64::INFINITY; k];
            for &p in &minority {
                let d2 = squared_distance(row, table.row(p));
                let mut candidate = d2;
                for slot in nearest.iter_mut() {
                    if candidate < *slot {
                        std::mem::swap(slot, &mut candidate);
                    }
                }
            }
            let mean: f64 = nearest.iter().map(|d2| d2.sqrt()).sum::<f64>() / k as f64;
            (mean, m)
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances").then(a.1.cmp(&b.1)));

    let mut retained: Vec<usize> = scored[..keep].iter().map(|&(_, m)| m).collect();
    retained.extend_from_slice(&minority);
    retained.sort_unstable();
    Ok(table.take_rows(&retained))
}

fn minority_majority(table: &LabeledTable) -> (Vec<usize>, Vec<usize>) {
    let (pos, neg) = table.class_indices();
    if pos.len() <= neg.len() {
        (pos, neg)
    } else {
        (neg, pos)
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}
