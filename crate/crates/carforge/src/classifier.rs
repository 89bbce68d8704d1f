//! Multi-rule classification with weighted chi-square group scoring.
//!
//! A model holds the selected rules in order plus each rule's cached score
//! contribution. Prediction collects the rules matching an instance: one
//! unanimous class wins outright, otherwise the class groups compete on the
//! sum of chi-squared^2 / max-chi-squared over their rules.

use crate::dataset::{AttributeSchema, Dataset, Instance};
use crate::error::{Error, Result};
use crate::measures::{chi_square, max_chi_square, MeasureValue};
use crate::mining::CARRule;
use crate::ordering::compare_csa;

/// How a prediction was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionBasis {
    /// Every matched rule agreed on the class.
    Unanimous,
    /// Matched rules disagreed; weighted chi-square scores decided.
    WeightedChi2,
    /// No rule matched; the default class was used.
    Default,
}

impl PredictionBasis {
    pub fn name(&self) -> &'static str {
        match self {
            PredictionBasis::Unanimous => "unanimous",
            PredictionBasis::WeightedChi2 => "weighted-chi2",
            PredictionBasis::Default => "default",
        }
    }
}

/// Predicted class for one instance. `class_scores` is populated only on
/// the weighted path, ordered by class index.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    pub basis: PredictionBasis,
    pub class_scores: Vec<(usize, f64)>,
}

/// An ordered rule list ready to classify instances.
#[derive(Debug, Clone)]
pub struct ClassifierModel {
    rules: Vec<CARRule>,
    weights: Vec<f64>,
    default_class: usize,
    schema: AttributeSchema,
}

impl ClassifierModel {
    /// Builds a model from selected rules and an explicit default class.
    pub fn new(rules: Vec<CARRule>, default_class: usize, schema: AttributeSchema) -> Result<Self> {
        if default_class >= schema.num_classes() {
            return Err(Error::Config(format!(
                "default class {} out of range for {} classes",
                default_class,
                schema.num_classes()
            )));
        }
        for r in &rules {
            if r.consequent >= schema.num_classes() {
                return Err(Error::Input(format!(
                    "rule class {} out of range for {} classes",
                    r.consequent,
                    schema.num_classes()
                )));
            }
        }
        let weights = rules.iter().map(rule_weight).collect();
        Ok(ClassifierModel {
            rules,
            weights,
            default_class,
            schema,
        })
    }

    /// Builds a model with the training majority class as the default.
    pub fn fit(rules: Vec<CARRule>, train: &Dataset) -> Result<Self> {
        let default_class = train.majority_class()?;
        ClassifierModel::new(rules, default_class, train.schema().clone())
    }

    pub fn rules(&self) -> &[CARRule] {
        &self.rules
    }

    pub fn default_class(&self) -> usize {
        self.default_class
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    /// Cached chi-squared^2 / max-chi-squared contribution of one rule.
    pub fn rule_weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    fn check_instance(&self, instance: &Instance) -> Result<()> {
        if instance.values().len() != self.schema.num_attributes() {
            return Err(Error::Input(format!(
                "instance has {} values, schema has {} attributes",
                instance.values().len(),
                self.schema.num_attributes()
            )));
        }
        for (a, &v) in instance.values().iter().enumerate() {
            if v >= self.schema.attribute(a).values.len() {
                return Err(Error::Input(format!(
                    "value index {} out of range for attribute '{}'",
                    v,
                    self.schema.attribute(a).name
                )));
            }
        }
        Ok(())
    }

    /// Predicts the class of an instance. Only antecedent attributes are
    /// read, so the class slot of `instance` is ignored.
    pub fn predict(&self, instance: &Instance) -> Result<Prediction> {
        self.check_instance(instance)?;
        let matched: Vec<usize> = (0..self.rules.len())
            .filter(|&i| self.rules[i].matches(instance))
            .collect();

        if matched.is_empty() {
            return Ok(Prediction {
                label: self.default_class,
                basis: PredictionBasis::Default,
                class_scores: Vec::new(),
            });
        }

        let first_class = self.rules[matched[0]].consequent;
        if matched
            .iter()
            .all(|&i| self.rules[i].consequent == first_class)
        {
            return Ok(Prediction {
                label: first_class,
                basis: PredictionBasis::Unanimous,
                class_scores: Vec::new(),
            });
        }

        let mut scores = vec![0.0f64; self.schema.num_classes()];
        let mut present = vec![false; self.schema.num_classes()];
        for &i in &matched {
            let c = self.rules[i].consequent;
            scores[c] += self.weights[i];
            present[c] = true;
        }

        let best = scores
            .iter()
            .zip(&present)
            .filter(|(_, p)| **p)
            .map(|(s, _)| *s)
            .fold(f64::NEG_INFINITY, f64::max);
        let tied: Vec<usize> = (0..scores.len())
            .filter(|&c| present[c] && scores[c] == best)
            .collect();

        let label = if tied.len() == 1 {
            tied[0]
        } else {
            // equal scores: the group whose best rule wins under CSA takes it;
            // tied ranges over ascending class index, so remaining ties fall
            // to the lower class
            *tied
                .iter()
                .min_by(|&&a, &&b| {
                    let top_a = self.group_top_rule(&matched, a);
                    let top_b = self.group_top_rule(&matched, b);
                    compare_csa(top_a, top_b)
                })
                .unwrap()
        };

        let class_scores = (0..scores.len())
            .filter(|&c| present[c])
            .map(|c| (c, scores[c]))
            .collect();
        Ok(Prediction {
            label,
            basis: PredictionBasis::WeightedChi2,
            class_scores,
        })
    }

    fn group_top_rule(&self, matched: &[usize], class: usize) -> &CARRule {
        matched
            .iter()
            .filter(|&&i| self.rules[i].consequent == class)
            .map(|&i| &self.rules[i])
            .min_by(|a, b| compare_csa(a, b))
            .expect("class group is non-empty")
    }

    /// Counts correct predictions over a labeled dataset.
    pub fn evaluate_accuracy(&self, test: &Dataset) -> Result<(u64, u64)> {
        let mut correct = 0u64;
        for inst in test.instances() {
            let p = self.predict(inst)?;
            if p.label == test.class_label(inst) {
                correct += 1;
            }
        }
        Ok((correct, test.len() as u64))
    }
}

/// Weighted chi-square score of a rule group: the sum over rules of
/// chi-squared^2 / max-chi-squared. Rules with a degenerate table (any zero
/// marginal) contribute nothing.
pub fn weighted_chi2_score(group: &[CARRule]) -> f64 {
    group.iter().map(rule_weight).sum()
}

fn rule_weight(rule: &CARRule) -> f64 {
    match (chi_square(&rule.table), max_chi_square(&rule.table)) {
        (MeasureValue::Finite(chi), MeasureValue::Finite(max)) if max > 0.0 => chi * chi / max,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Item};
    use crate::mining::{count_table, mine_cars, MiningConfig};

    const WEATHER_CSV: &str = include_str!("../data/weather.csv");

    fn weather() -> Dataset {
        Dataset::parse_csv(WEATHER_CSV, "Play").unwrap()
    }

    fn rule(d: &Dataset, items: &[(&str, &str)], class: &str) -> CARRule {
        let antecedent: Vec<Item> = items
            .iter()
            .map(|(attr, value)| {
                let a = d
                    .schema()
                    .attributes()
                    .iter()
                    .position(|x| x.name == *attr)
                    .unwrap();
                Item::new(a, d.schema().attribute(a).value_index(value).unwrap())
            })
            .collect();
        let c = d.schema().class_attribute().value_index(class).unwrap();
        let table = count_table(&antecedent, c, d);
        CARRule::new(antecedent, c, table).unwrap()
    }

    fn close(a: f64, b: f64) {
        assert!(
            (a - b).abs() <= 1e-9 * f64::max(1.0, f64::max(a.abs(), b.abs())),
            "{a} vs {b}"
        );
    }

    #[test]
    fn weighted_score_single_rules() {
        let d = weather();
        close(
            weighted_chi2_score(&[rule(&d, &[("Outlook", "overcast")], "yes")]),
            28.0 / 9.0,
        );
        close(
            weighted_chi2_score(&[rule(
                &d,
                &[("Outlook", "sunny"), ("Temperature", "hot")],
                "no",
            )]),
            4.2,
        );
    }

    #[test]
    fn weighted_score_worked_group() {
        let d = weather();
        let yes_group = vec![
            rule(&d, &[("Humidity", "normal"), ("Windy", "false")], "yes"),
            rule(&d, &[("Outlook", "sunny"), ("Humidity", "normal")], "yes"),
        ];
        close(weighted_chi2_score(&yes_group), 28.0 / 9.0 + 35.0 / 27.0);
    }

    #[test]
    fn weighted_score_additive_and_order_free() {
        let d = weather();
        let a = rule(&d, &[("Outlook", "overcast")], "yes");
        let b = rule(&d, &[("Outlook", "sunny"), ("Humidity", "normal")], "yes");
        let c = rule(&d, &[("Outlook", "rainy"), ("Windy", "false")], "yes");
        let joined = weighted_chi2_score(&[a.clone(), b.clone(), c.clone()]);
        close(
            joined,
            weighted_chi2_score(&[a.clone(), b.clone()])
                + weighted_chi2_score(std::slice::from_ref(&c)),
        );
        close(joined, weighted_chi2_score(&[c, a, b]));
    }

    #[test]
    fn degenerate_rule_contributes_zero() {
        let d = weather();
        // antecedent covering every instance: nX = N, zero marginal
        let all = CARRule::new(vec![], 1, count_table(&[], 1, &d)).unwrap();
        assert_eq!(weighted_chi2_score(&[all]), 0.0);
    }

    #[test]
    fn predict_weighted_worked_example() {
        let d = weather();
        let rules = vec![
            rule(&d, &[("Humidity", "normal"), ("Windy", "false")], "yes"),
            rule(&d, &[("Outlook", "sunny"), ("Temperature", "hot")], "no"),
            rule(&d, &[("Outlook", "sunny"), ("Humidity", "normal")], "yes"),
        ];
        let model = ClassifierModel::fit(rules, &d).unwrap();
        // sunny, hot, normal, windy=false
        let instance = encode(&d, &["sunny", "hot", "normal", "false"], "no");
        let p = model.predict(&instance).unwrap();
        assert_eq!(p.basis, PredictionBasis::WeightedChi2);
        assert_eq!(d.schema().class_value_name(p.label), "yes");
        let yes = d.schema().class_attribute().value_index("yes").unwrap();
        let no = d.schema().class_attribute().value_index("no").unwrap();
        let score = |c: usize| p.class_scores.iter().find(|(k, _)| *k == c).unwrap().1;
        close(score(yes), 119.0 / 27.0);
        close(score(no), 4.2);
    }

    #[test]
    fn predict_unanimous() {
        let d = weather();
        let rules = vec![
            rule(&d, &[("Outlook", "overcast")], "yes"),
            rule(
                &d,
                &[("Outlook", "overcast"), ("Temperature", "hot")],
                "yes",
            ),
        ];
        let model = ClassifierModel::fit(rules, &d).unwrap();
        let instance = encode(&d, &["overcast", "hot", "high", "false"], "yes");
        let p = model.predict(&instance).unwrap();
        assert_eq!(p.basis, PredictionBasis::Unanimous);
        assert_eq!(d.schema().class_value_name(p.label), "yes");
        assert!(p.class_scores.is_empty());
    }

    #[test]
    fn predict_default_when_nothing_matches() {
        let d = weather();
        let rules = vec![rule(&d, &[("Outlook", "overcast")], "yes")];
        let model = ClassifierModel::fit(rules, &d).unwrap();
        let instance = encode(&d, &["sunny", "hot", "high", "true"], "no");
        let p = model.predict(&instance).unwrap();
        assert_eq!(p.basis, PredictionBasis::Default);
        assert_eq!(d.schema().class_value_name(p.label), "yes"); // weather majority
    }

    #[test]
    fn predict_is_deterministic() {
        let d = weather();
        let rules = mine_cars(
            &d,
            &MiningConfig {
                min_support: 0.10,
                min_confidence: 0.50,
                max_antecedent_len: None,
                max_rules: None,
            },
        )
        .unwrap();
        let model = ClassifierModel::fit(rules, &d).unwrap();
        for inst in d.instances() {
            assert_eq!(model.predict(inst).unwrap(), model.predict(inst).unwrap());
        }
    }

    #[test]
    fn confident_narrow_rule_weight_equals_chi_square() {
        let d = weather();
        // confidence 1 and nX <= nY: contribution equals the chi-square itself
        let r = rule(&d, &[("Outlook", "overcast")], "yes");
        let model = ClassifierModel::fit(vec![r], &d).unwrap();
        close(model.rule_weight(0), 28.0 / 9.0);
    }

    #[test]
    fn accuracy_on_single_class_data() {
        let d = Dataset::parse_csv("x,c\n1,a\n2,a\n3,a\n", "c").unwrap();
        let rules = mine_cars(
            &d,
            &MiningConfig {
                min_support: 0.5,
                min_confidence: 0.5,
                max_antecedent_len: None,
                max_rules: None,
            },
        )
        .unwrap();
        let model = ClassifierModel::fit(rules, &d).unwrap();
        assert_eq!(model.evaluate_accuracy(&d).unwrap(), (3, 3));
    }

    #[test]
    fn accuracy_on_empty_test_is_zero_zero() {
        let d = weather();
        let model = ClassifierModel::fit(vec![], &d).unwrap();
        let empty = Dataset::new(d.schema().clone(), vec![]).unwrap();
        assert_eq!(model.evaluate_accuracy(&empty).unwrap(), (0, 0));
    }

    #[test]
    fn predict_rejects_malformed_instance() {
        let d = weather();
        let model = ClassifierModel::fit(vec![], &d).unwrap();
        assert!(model.predict(&Instance::new(vec![0, 0])).is_err());
        assert!(model.predict(&Instance::new(vec![99, 0, 0, 0, 0])).is_err());
    }

    fn encode(d: &Dataset, values: &[&str], class: &str) -> Instance {
        let mut v: Vec<usize> = values
            .iter()
            .enumerate()
            .map(|(a, s)| d.schema().attribute(a).value_index(s).unwrap())
            .collect();
        v.push(d.schema().class_attribute().value_index(class).unwrap());
        Instance::new(v)
    }
}
