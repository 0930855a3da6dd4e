//! Binary classification metrics under the "positive = lost" convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outcome counts of a binary classifier.
///
/// Field names follow the count convention: `tpc` true positives, `fpc`
/// false positives, `fnc` false negatives, `tnc` true negatives.
#[derive(Copy, Clone, Debug, Eq, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tpc: u64,
    pub fpc: u64,
    pub fnc: u64,
    pub tnc: u64,
}

impl ConfusionMatrix {
    pub fn from_counts(tpc: u64, fpc: u64, fnc: u64, tnc: u64) -> Self {
        ConfusionMatrix { tpc, fpc, fnc, tnc }
    }

    /// Actual positives (P).
    pub fn positives(&self) -> u64 {
        self.tpc + self.fnc
    }

    /// Actual negatives (N).
    pub fn negatives(&self) -> u64 {
        self.fpc + self.tnc
    }

    pub fn total(&self) -> u64 {
        self.positives() + self.negatives()
    }
}

/// Derived metrics. A `None` entry means the metric is undefined for the
/// given counts (for example precision when nothing was predicted positive).
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub tnr: Option<f64>,
    pub balanced_accuracy: Option<f64>,
    pub roc_auc: Option<f64>,
}

impl MetricReport {
    pub fn with_auc(mut self, auc: f64) -> Self {
        self.roc_auc = Some(auc);
        self
    }
}

/// Counts prediction outcomes against reference labels.
pub fn confusion(labels: &[u8], predictions: &[u8]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: predictions.len(),
        });
    }
    let mut cm = ConfusionMatrix::from_counts(0, 0, 0, 0);
    for (&y, &p) in labels.iter().zip(predictions) {
        match (y != 0, p != 0) {
            (true, true) => cm.tpc += 1,
            (true, false) => cm.fnc += 1,
            (false, true) => cm.fpc += 1,
            (false, false) => cm.tnc += 1,
        }
    }
    Ok(cm)
}

/// Derives precision, recall, TNR, and balanced accuracy from counts.
///
/// Balanced accuracy is the mean of recall and TNR; it needs both classes
/// present. Undefined entries come back as `None` rather than 0 so a
/// never-positive model is not silently scored as maximally imprecise.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricReport> {
    if cm.total() == 0 {
        return Err(Error::EmptyTable);
    }
    let precision = match cm.tpc + cm.fpc {
        0 => None,
        d => Some(cm.tpc as f64 / d as f64),
    };
    let recall = match cm.positives() {
        0 => None,
        p => Some(cm.tpc as f64 / p as f64),
    };
    let tnr = match cm.negatives() {
        0 => None,
        n => Some(cm.tnc as f64 / n as f64),
    };
    let balanced_accuracy = match (recall, tnr) {
        (Some(r), Some(t)) => Some((r + t) / 2.0),
        _ => None,
    };
    Ok(MetricReport {
        precision,
        recall,
        tnr,
        balanced_accuracy,
        roc_auc: None,
    })
}

/// Probability that a uniformly random positive outranks a uniformly random
/// negative, counting ties as one half (the Mann-Whitney convention,
/// equivalent to trapezoidal integration of the ROC curve).
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let n_pos = labels.iter().filter(|&&y| y != 0).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("score passed to roc_auc".into()));
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));

    // Rank-sum with average ranks over tied groups.
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1 ..= j averaged over the tied block
        let avg_rank = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            if labels[idx] != 0 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j;
    }
    let n_pos = n_pos as f64;
    let n_neg = n_neg as f64;
    Ok((rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round3(x: f64) -> f64 {
        (x * 1000.0).round() / 1000.0
    }

    #[test]
    fn all_correct_positive() {
        let cm = confusion(&[1, 1, 1, 1, 1], &[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(cm, ConfusionMatrix::from_counts(5, 0, 0, 0));
    }

    #[test]
    fn complement_predictions_have_no_hits() {
        let cm = confusion(&[1, 0, 1, 0], &[0, 1, 0, 1]).unwrap();
        assert_eq!(cm.tpc, 0);
        assert_eq!(cm.tnc, 0);
        assert_eq!(cm.fpc, 2);
        assert_eq!(cm.fnc, 2);
    }

    #[test]
    fn business_rule_reference_counts() {
        // Reference confusion matrix of a stock-value rule evaluated on an
        // 85,490-row test set: 92 TP, 25,567 FP, 125 FN, 59,706 TN.
        let report = metrics(&ConfusionMatrix::from_counts(92, 25567, 125, 59706)).unwrap();
        assert_eq!(round3(report.precision.unwrap()), 0.004);
        assert_eq!(round3(report.recall.unwrap()), 0.424);
        assert_eq!(round3(report.tnr.unwrap()), 0.700);
        assert_eq!(round3(report.balanced_accuracy.unwrap()), 0.562);
    }

    #[test]
    fn undersampled_forest_reference_counts() {
        let report = metrics(&ConfusionMatrix::from_counts(106, 7476, 111, 77797)).unwrap();
        assert_eq!(round3(report.recall.unwrap()), 0.488);
        assert_eq!(round3(report.tnr.unwrap()), 0.912);
        assert_eq!(round3(report.precision.unwrap()), 0.014);
        assert_eq!(round3(report.balanced_accuracy.unwrap()), 0.700);
    }

    #[test]
    fn perfect_classifier_scores_one() {
        let report = metrics(&ConfusionMatrix::from_counts(10, 0, 0, 20)).unwrap();
        assert_eq!(report.precision, Some(1.0));
        assert_eq!(report.recall, Some(1.0));
        assert_eq!(report.tnr, Some(1.0));
        assert_eq!(report.balanced_accuracy, Some(1.0));
    }

    #[test]
    fn never_positive_precision_absent() {
        let report = metrics(&ConfusionMatrix::from_counts(0, 0, 5, 5)).unwrap();
        assert_eq!(report.precision, None);
        assert_eq!(report.recall, Some(0.0));
    }

    #[test]
    fn auc_perfect_separation() {
        let auc = roc_auc(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0]).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn auc_all_ties_is_half() {
        let auc = roc_auc(&[0.3; 6], &[1, 0, 1, 0, 1, 0]).unwrap();
        assert_eq!(auc, 0.5);
    }

    #[test]
    fn auc_three_of_four_concordant() {
        // pairs: (0.9 vs 0.8) ok, (0.9 vs 0.1) ok, (0.3 vs 0.8) wrong,
        // (0.3 vs 0.1) ok -> 3/4
        let auc = roc_auc(&[0.9, 0.8, 0.3, 0.1], &[1, 0, 1, 0]).unwrap();
        assert_eq!(auc, 0.75);
    }

    #[test]
    fn auc_rejects_single_class() {
        assert!(roc_auc(&[0.1, 0.2], &[1, 1]).is_err());
    }

    #[test]
    fn auc_matches_exhaustive_pair_count_with_ties() {
        let scores = [0.5, 0.5, 0.7, 0.2, 0.5, 0.9, 0.1];
        let labels = [1u8, 0, 1, 0, 0, 1, 0];
        let fast = roc_auc(&scores, &labels).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if labels[i] == 1 && labels[j] == 0 {
                    den += 1.0;
                    if scores[i] > scores[j] {
                        num += 1.0;
                    } else if scores[i] == scores[j] {
                        num += 0.5;
                    }
                }
            }
        }
        assert!((fast - num / den).abs() < 1e-12);
    }
}
