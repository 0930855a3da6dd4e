//! Random hyperparameter search over declared parameter ranges.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from;

/// A single sampled hyperparameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Real(v) => write!(f, "{v}"),
            ParamValue::Text(v) => write!(f, "{v}"),
        }
    }
}

/// Sampling range for one named parameter.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamRange {
    /// Uniform choice from an explicit set.
    Choice { values: Vec<ParamValue> },
    /// Uniform integer in `lo..=hi`.
    IntRange { lo: i64, hi: i64 },
    /// Log-uniform real in `[lo, hi]`; both bounds must be positive.
    LogUniform { lo: f64, hi: f64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    BalancedAccuracy,
    RocAuc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchSpec {
    /// Parameter ranges, sampled in declaration order.
    pub params: Vec<(String, ParamRange)>,
    pub n_candidates: usize,
    pub folds: usize,
    pub repeats: usize,
    pub objective: Objective,
    pub seed: u64,
}

impl SearchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_candidates < 1 {
            return Err(Error::invalid("n_candidates must be at least 1"));
        }
        if self.folds < 2 {
            return Err(Error::invalid("folds must be at least 2"));
        }
        if self.repeats < 1 {
            return Err(Error::invalid("repeats must be at least 1"));
        }
        for (name, range) in &self.params {
            match range {
                ParamRange::Choice { values } if values.is_empty() => {
                    return Err(Error::invalid(format!("empty choice set for '{name}'")));
                }
                ParamRange::IntRange { lo, hi } if lo > hi => {
                    return Err(Error::invalid(format!("inverted range for '{name}'")));
                }
                ParamRange::LogUniform { lo, hi } if *lo <= 0.0 || hi < lo => {
                    return Err(Error::invalid(format!(
                        "log-uniform range for '{name}' needs 0 < lo <= hi"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

pub type Candidate = BTreeMap<String, ParamValue>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub index: usize,
    pub candidate: Candidate,
    pub score: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub best_index: usize,
    pub best: Candidate,
    pub best_score: f64,
    pub trace: Vec<TraceEntry>,
}

/// Samples `n_candidates` configurations and keeps the best by the supplied
/// evaluation (higher is better). Ties go to the earlier-sampled candidate;
/// per-candidate failures are recorded in the trace and the search only
/// errors out when every candidate fails.
pub fn random_search<F>(space: &SearchSpec, mut evaluate: F) -> Result<SearchOutcome>
where
    F: FnMut(&Candidate) -> Result<f64>,
{
    space.validate()?;
    let mut rng = rng_from(space.seed);
    let candidates: Vec<Candidate> = (0..space.n_candidates)
        .map(|_| {
            space
                .params
                .iter()
                .map(|(name, range)| (name.clone(), sample(range, &mut rng)))
                .collect()
        })
        .collect();

    let mut trace = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    for (index, candidate) in candidates.into_iter().enumerate() {
        match evaluate(&candidate) {
            Ok(score) => {
                if !score.is_finite() {
                    trace.push(TraceEntry {
                        index,
                        candidate,
                        score: None,
                        error: Some("non-finite objective".into()),
                    });
                    continue;
                }
                if best.map_or(true, |(_, s)| score > s) {
                    best = Some((index, score));
                }
                trace.push(TraceEntry {
                    index,
                    candidate,
                    score: Some(score),
                    error: None,
                });
            }
            Err(err) => trace.push(TraceEntry {
                index,
                candidate,
                score: None,
                error: Some(err.to_string()),
            }),
        }
    }

    let (best_index, best_score) = best.ok_or_else(|| {
        Error::SearchFailed("every sampled candidate failed evaluation".into())
    })?;
    Ok(SearchOutcome {
        best_index,
        best: trace[best_index].candidate.clone(),
        best_score,
        trace,
    })
}

fn sample(range: &ParamRange, rng: &mut impl Rng) -> ParamValue {
    match range {
        ParamRange::Choice { values } => values[rng.gen_range(0..values.len())].clone(),
        ParamRange::IntRange { lo, hi } => ParamValue::Int(rng.gen_range(*lo..=*hi)),
        ParamRange::LogUniform { lo, hi } => {
            if lo == hi {
                ParamValue::Real(*lo)
            } else {
                ParamValue::Real((rng.gen_range(lo.ln()..hi.ln())).exp())
            }
        }
    }
}
