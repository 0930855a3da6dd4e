//! Business-rule baseline and the misclassification-cost model.
//!
//! Currency is integer cents throughout, so cost totals are exact and
//! order-independent. The cost convention: a false positive pays the wasted
//! premium IC(stock value, partner), a false negative loses the full stock
//! value, and correct predictions cost nothing.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Currency amount in integer cents.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Cents(pub i64);

impl Cents {
    pub fn from_euros(euros: f64) -> Cents {
        Cents((euros * 100.0).round() as i64)
    }

    pub fn as_euros(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl Add for Cents {
    type Output = Cents;
    fn add(self, rhs: Cents) -> Cents {
        Cents(self.0 + rhs.0)
    }
}

impl AddAssign for Cents {
    fn add_assign(&mut self, rhs: Cents) {
        self.0 += rhs.0;
    }
}

impl Sum for Cents {
    fn sum<I: Iterator<Item = Cents>>(iter: I) -> Cents {
        Cents(iter.map(|c| c.0).sum())
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, (self.0 % 100).abs())
    }
}

/// One insurance tier: parcels with stock value at or above the lower bound
/// (and below the next tier's bound) are covered up to `insured_value` for a
/// `premium_cost`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsuranceTier {
    pub stock_value_lower_bound: Cents,
    pub insured_value: Cents,
    pub premium_cost: Cents,
}

/// Configurable tiered insurance rules, per delivery partner. Stock values
/// below `uninsured_threshold` are never insured; the threshold boundary
/// itself is insured.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InsuranceRuleTable {
    pub partners: Vec<(String, Vec<InsuranceTier>)>,
    pub uninsured_threshold: Cents,
    /// When set, the stock-value rule additionally requires one of these
    /// category flags on the parcel.
    pub gated_categories: Option<BTreeSet<String>>,
}

impl Default for InsuranceRuleTable {
    fn default() -> Self {
        InsuranceRuleTable {
            partners: Vec::new(),
            uninsured_threshold: Cents(250_00),
            gated_categories: None,
        }
    }
}

impl InsuranceRuleTable {
    /// A documented example configuration with synthetic premiums for the
    /// three carriers of the synthetic generator.
    pub fn example() -> Self {
        let tiers = |base: i64| {
            vec![
                InsuranceTier {
                    stock_value_lower_bound: Cents(250_00),
                    insured_value: Cents(500_00),
                    premium_cost: Cents(base),
                },
                InsuranceTier {
                    stock_value_lower_bound: Cents(500_00),
                    insured_value: Cents(1_000_00),
                    premium_cost: Cents(2 * base),
                },
                InsuranceTier {
                    stock_value_lower_bound: Cents(1_000_00),
                    insured_value: Cents(5_000_00),
                    premium_cost: Cents(4 * base),
                },
            ]
        };
        InsuranceRuleTable {
            partners: vec![
                ("OwnDN".into(), tiers(90)),
                ("ExtD1".into(), tiers(120)),
                ("ExtD2".into(), tiers(150)),
            ],
            uninsured_threshold: Cents(250_00),
            gated_categories: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.uninsured_threshold < Cents(0) {
            return Err(Error::invalid("uninsured_threshold must be non-negative"));
        }
        for (partner, tiers) in &self.partners {
            if tiers.is_empty() {
                return Err(Error::invalid(format!("partner '{partner}' has no tiers")));
            }
            for pair in tiers.windows(2) {
                if pair[1].stock_value_lower_bound <= pair[0].stock_value_lower_bound {
                    return Err(Error::invalid(format!(
                        "partner '{partner}' tiers must be sorted by lower bound, non-overlapping"
                    )));
                }
            }
            for tier in tiers {
                if tier.premium_cost < Cents(0) {
                    return Err(Error::invalid(format!(
                        "partner '{partner}' has a negative premium"
                    )));
                }
                if tier.stock_value_lower_bound < self.uninsured_threshold {
                    return Err(Error::invalid(format!(
                        "partner '{partner}' tier starts below the uninsured threshold"
                    )));
                }
            }
        }
        Ok(())
    }

    fn tiers_for(&self, partner: &str) -> Result<&[InsuranceTier]> {
        self.partners
            .iter()
            .find(|(name, _)| name == partner)
            .map(|(_, tiers)| tiers.as_slice())
            .ok_or_else(|| Error::UnknownPartner(partner.to_string()))
    }
}

/// The stock-value rule: insure (predict lost) iff the value is at or above
/// the uninsured threshold, optionally gated by product-category flags.
pub fn business_rule_predict(
    stock_value: Cents,
    category_flags: &BTreeSet<String>,
    rules: &InsuranceRuleTable,
) -> u8 {
    if stock_value < rules.uninsured_threshold {
        return 0;
    }
    match &rules.gated_categories {
        None => 1,
        Some(gate) => u8::from(gate.intersection(category_flags).next().is_some()),
    }
}

/// Premium of the tier containing the stock value; zero below the uninsured
/// threshold.
pub fn insurance_cost(
    stock_value: Cents,
    partner: &str,
    rules: &InsuranceRuleTable,
) -> Result<Cents> {
    let tiers = rules.tiers_for(partner)?;
    if stock_value < rules.uninsured_threshold {
        return Ok(Cents(0));
    }
    let tier = tiers
        .iter()
        .rev()
        .find(|t| stock_value >= t.stock_value_lower_bound);
    Ok(tier.map_or(Cents(0), |t| t.premium_cost))
}

/// One parcel's economics: its stock value, delivery partner, the model's
/// prediction, and the actual outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParcelEconomics {
    pub stock_value: Cents,
    pub partner: String,
    pub predicted: u8,
    pub actual: u8,
}

/// Cost accounting for one decision scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub scenario: String,
    pub tpc: u64,
    pub fpc: u64,
    pub fnc: u64,
    pub tnc: u64,
    pub fp_cost: Cents,
    pub fn_cost: Cents,
    pub total_cost: Cents,
}

/// Sums per-parcel misclassification costs: false positives pay the wasted
/// premium, false negatives the stock value, correct predictions nothing.
pub fn misclassification_cost(
    parcels: &[ParcelEconomics],
    rules: &InsuranceRuleTable,
) -> Result<CostReport> {
    rules.validate()?;
    let mut report = CostReport {
        scenario: String::new(),
        tpc: 0,
        fpc: 0,
        fnc: 0,
        tnc: 0,
        fp_cost: Cents(0),
        fn_cost: Cents(0),
        total_cost: Cents(0),
    };
    for parcel in parcels {
        match (parcel.actual != 0, parcel.predicted != 0) {
            (true, true) => report.tpc += 1,
            (false, false) => report.tnc += 1,
            (false, true) => {
                report.fpc += 1;
                report.fp_cost += insurance_cost(parcel.stock_value, &parcel.partner, rules)?;
            }
            (true, false) => {
                report.fnc += 1;
                report.fn_cost += parcel.stock_value;
            }
        }
    }
    report.total_cost = report.fp_cost + report.fn_cost;
    Ok(report)
}

/// Cost reports for a set of decision scenarios over the same parcels.
///
/// `insure_all` and `insure_nothing` are synthesized here; the caller must
/// supply at least a `business_rules` prediction vector (it owns the gating
/// configuration) and may add any number of model columns. Reports come back
/// sorted by total cost ascending, ties by name.
pub fn scenario_costs(
    parcels: &[ParcelEconomics],
    rules: &InsuranceRuleTable,
    model_predictions: &[(String, Vec<u8>)],
) -> Result<Vec<CostReport>> {
    if !model_predictions
        .iter()
        .any(|(name, _)| name == "business_rules")
    {
        return Err(Error::invalid(
            "scenario set must include 'business_rules' predictions",
        ));
    }
    let mut scenarios: Vec<(String, Vec<u8>)> = vec![
        ("insure_all".into(), vec![1; parcels.len()]),
        ("insure_nothing".into(), vec![0; parcels.len()]),
    ];
    scenarios.extend_from_slice(model_predictions);

    let mut reports = Vec::with_capacity(scenarios.len());
    for (name, predictions) in &scenarios {
        if predictions.len() != parcels.len() {
            return Err(Error::LengthMismatch {
                left: predictions.len(),
                right: parcels.len(),
            });
        }
        let relabeled: Vec<ParcelEconomics> = parcels
            .iter()
            .zip(predictions)
            .map(|(p, &pred)| ParcelEconomics {
                predicted: pred,
                ..p.clone()
            })
            .collect();
        let mut report = misclassification_cost(&relabeled, rules)?;
        report.scenario = name.clone();
        reports.push(report);
    }
    reports.sort_by(|a, b| a.total_cost.cmp(&b.total_cost).then(a.scenario.cmp(&b.scenario)));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn stock_below_threshold_not_insured() {
        let rules = InsuranceRuleTable::example();
        assert_eq!(business_rule_predict(Cents(200_00), &flags(&[]), &rules), 0);
    }

    #[test]
    fn threshold_boundary_is_insured() {
        let rules = InsuranceRuleTable::example();
        assert_eq!(business_rule_predict(Cents(250_00), &flags(&[]), &rules), 1);
    }

    #[test]
    fn category_gate_blocks_ungated_products() {
        let mut rules = InsuranceRuleTable::example();
        rules.gated_categories = Some(flags(&["phones", "tablets", "laptops"]));
        assert_eq!(
            business_rule_predict(Cents(300_00), &flags(&["household"]), &rules),
            0
        );
        assert_eq!(
            business_rule_predict(Cents(300_00), &flags(&["phones"]), &rules),
            1
        );
    }

    #[test]
    fn insurance_cost_tier_lookup() {
        let rules = InsuranceRuleTable::example();
        assert_eq!(insurance_cost(Cents(200_00), "ExtD1", &rules).unwrap(), Cents(0));
        assert_eq!(
            insurance_cost(Cents(300_00), "ExtD1", &rules).unwrap(),
            Cents(120)
        );
        assert_eq!(
            insurance_cost(Cents(600_00), "ExtD1", &rules).unwrap(),
            Cents(240)
        );
        assert!(insurance_cost(Cents(300_00), "Nobody", &rules).is_err());
    }

    #[test]
    fn partners_with_distinct_premiums_cost_differently() {
        let rules = InsuranceRuleTable::example();
        let a = insurance_cost(Cents(300_00), "ExtD1", &rules).unwrap();
        let b = insurance_cost(Cents(300_00), "ExtD2", &rules).unwrap();
        assert_ne!(a, b);
    }

    fn parcel(stock: i64, partner: &str, predicted: u8, actual: u8) -> ParcelEconomics {
        ParcelEconomics {
            stock_value: Cents(stock),
            partner: partner.into(),
            predicted,
            actual,
        }
    }

    #[test]
    fn single_false_negative_costs_stock_value() {
        let rules = InsuranceRuleTable::example();
        let report = misclassification_cost(&[parcel(500_00, "ExtD1", 0, 1)], &rules).unwrap();
        assert_eq!(report.total_cost, Cents(500_00));
        assert_eq!(report.fnc, 1);
    }

    #[test]
    fn all_correct_costs_nothing() {
        let rules = InsuranceRuleTable::example();
        let report = misclassification_cost(
            &[parcel(500_00, "ExtD1", 1, 1), parcel(90_00, "ExtD2", 0, 0)],
            &rules,
        )
        .unwrap();
        assert_eq!(report.total_cost, Cents(0));
    }

    #[test]
    fn mixed_batch_matches_hand_sum() {
        let rules = InsuranceRuleTable::example();
        let parcels = [
            parcel(300_00, "ExtD1", 1, 0), // FP: premium 120
            parcel(600_00, "ExtD2", 1, 0), // FP: premium 300
            parcel(450_00, "OwnDN", 0, 1), // FN: stock 45000
            parcel(120_00, "ExtD1", 0, 0), // TN: 0
        ];
        let report = misclassification_cost(&parcels, &rules).unwrap();
        assert_eq!(report.fp_cost, Cents(120 + 300));
        assert_eq!(report.fn_cost, Cents(450_00));
        assert_eq!(report.total_cost, Cents(120 + 300 + 450_00));
    }

    #[test]
    fn scenario_invariants() {
        let rules = InsuranceRuleTable::example();
        let parcels = vec![
            parcel(300_00, "ExtD1", 1, 0),
            parcel(600_00, "ExtD2", 0, 1),
            parcel(120_00, "OwnDN", 0, 0),
            parcel(900_00, "ExtD1", 1, 1),
        ];
        let br: Vec<u8> = parcels
            .iter()
            .map(|p| business_rule_predict(p.stock_value, &BTreeSet::new(), &rules))
            .collect();
        let reports = scenario_costs(&parcels, &rules, &[("business_rules".into(), br)]).unwrap();

        let by_name = |name: &str| reports.iter().find(|r| r.scenario == name).unwrap();
        // insure_nothing pays exactly the lost parcels' stock values
        let lost_stock: Cents = parcels
            .iter()
            .filter(|p| p.actual == 1)
            .map(|p| p.stock_value)
            .sum();
        assert_eq!(by_name("insure_nothing").total_cost, lost_stock);
        // insure_all pays exactly the premiums of not-lost parcels
        let premiums: Cents = parcels
            .iter()
            .filter(|p| p.actual == 0)
            .map(|p| insurance_cost(p.stock_value, &p.partner, &rules).unwrap())
            .sum();
        assert_eq!(by_name("insure_all").total_cost, premiums);
        // sorted ascending by total
        for pair in reports.windows(2) {
            assert!(pair[0].total_cost <= pair[1].total_cost);
        }
    }

    #[test]
    fn scenario_requires_business_rules_column() {
        let rules = InsuranceRuleTable::example();
        let parcels = vec![parcel(300_00, "ExtD1", 1, 0)];
        assert!(scenario_costs(&parcels, &rules, &[]).is_err());
    }

    #[test]
    fn no_lost_parcels_insure_nothing_is_free() {
        let rules = InsuranceRuleTable::example();
        let parcels = vec![parcel(300_00, "ExtD1", 1, 0), parcel(500_00, "ExtD2", 0, 0)];
        let br = vec![0, 0];
        let reports = scenario_costs(&parcels, &rules, &[("business_rules".into(), br)]).unwrap();
        let nothing = reports.iter().find(|r| r.scenario == "insure_nothing").unwrap();
        assert_eq!(nothing.total_cost, Cents(0));
    }

    #[test]
    fn cost_additivity_over_concatenation() {
        let rules = InsuranceRuleTable::example();
        let a = vec![parcel(300_00, "ExtD1", 1, 0), parcel(600_00, "ExtD2", 0, 1)];
        let b = vec![parcel(900_00, "OwnDN", 1, 0)];
        let whole: Vec<ParcelEconomics> = a.iter().chain(&b).cloned().collect();
        let ra = misclassification_cost(&a, &rules).unwrap();
        let rb = misclassification_cost(&b, &rules).unwrap();
        let rw = misclassification_cost(&whole, &rules).unwrap();
        assert_eq!(rw.total_cost, ra.total_cost + rb.total_cost);
    }

    #[test]
    fn raising_premiums_never_lowers_costs_except_insure_nothing() {
        let rules = InsuranceRuleTable::example();
        let mut dearer = rules.clone();
        for (_, tiers) in dearer.partners.iter_mut() {
            for tier in tiers.iter_mut() {
                tier.premium_cost += Cents(50);
            }
        }
        let parcels = vec![
            parcel(300_00, "ExtD1", 1, 0),
            parcel(600_00, "ExtD2", 0, 1),
            parcel(900_00, "OwnDN", 1, 0),
        ];
        let br = vec![1u8, 1, 0];
        let base =
            scenario_costs(&parcels, &rules, &[("business_rules".into(), br.clone())]).unwrap();
        let up = scenario_costs(&parcels, &dearer, &[("business_rules".into(), br)]).unwrap();
        for a in &base {
            let matching = up.iter().find(|r| r.scenario == a.scenario).unwrap();
            if a.scenario == "insure_nothing" {
                assert_eq!(a.total_cost, matching.total_cost);
            } else {
                assert!(matching.total_cost >= a.total_cost);
            }
        }
    }
}
