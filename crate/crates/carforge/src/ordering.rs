//! Rule ranking, sorting, and pruning.
//!
//! Every comparator ends with a canonical tie-break on (sorted antecedent,
//! class index), so all orderings are total and the downstream coverage pass
//! is deterministic. Confidence and support ties are decided by exact
//! integer cross-multiplication, never by rounded floats.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::measures::{evaluate, MeasureId, MeasureValue};
use crate::mining::CARRule;

/// How a rule list gets ordered before selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingStrategy {
    /// Confidence desc, support desc, antecedent size asc.
    Csa,
    /// Antecedent size desc, confidence desc, support desc.
    Acs,
    /// Measure desc, then the CSA keys.
    Mcsa(MeasureId),
    /// Measure desc only.
    Sm(MeasureId),
    /// Measure desc, keep the top k, re-sort those by CSA.
    Hybrid { measure: MeasureId, top_k: usize },
}

impl fmt::Display for OrderingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingStrategy::Csa => f.write_str("csa"),
            OrderingStrategy::Acs => f.write_str("acs"),
            OrderingStrategy::Mcsa(m) => write!(f, "mcsa:{}", m),
            OrderingStrategy::Sm(m) => write!(f, "sm:{}", m),
            OrderingStrategy::Hybrid { measure, top_k } => {
                write!(f, "hybrid:{}:{}", measure, top_k)
            }
        }
    }
}

impl FromStr for OrderingStrategy {
    type Err = Error;

    /// Accepts `csa`, `acs`, `mcsa:<measure>`, `sm:<measure>`,
    /// `hybrid:<measure>:<k>`; measure names are case-insensitive.
    fn from_str(s: &str) -> Result<Self, Error> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or("").to_ascii_lowercase();
        let rest: Vec<&str> = parts.collect();
        match (head.as_str(), rest.as_slice()) {
            ("csa", []) => Ok(OrderingStrategy::Csa),
            ("acs", []) => Ok(OrderingStrategy::Acs),
            ("mcsa", [m]) => Ok(OrderingStrategy::Mcsa(m.parse()?)),
            ("sm", [m]) => Ok(OrderingStrategy::Sm(m.parse()?)),
            ("hybrid", [m, k]) => {
                let top_k: usize = k
                    .parse()
                    .map_err(|_| Error::Config(format!("bad hybrid k '{}'", k)))?;
                if top_k == 0 {
                    return Err(Error::Config("hybrid k must be positive".into()));
                }
                Ok(OrderingStrategy::Hybrid {
                    measure: m.parse()?,
                    top_k,
                })
            }
            _ => Err(Error::Config(format!("unknown ordering strategy '{}'", s))),
        }
    }
}

/// Cached sort key for one rule, recomputable from its contingency table.
#[derive(Debug, Clone, Copy)]
pub struct RankKey {
    joint: u64,
    antecedent: u64,
    total: u64,
    anti_size: usize,
    measure: Option<MeasureValue>,
}

impl RankKey {
    pub fn of(rule: &CARRule) -> Self {
        RankKey {
            joint: rule.table.n11,
            antecedent: rule.table.antecedent_count(),
            total: rule.table.total(),
            anti_size: rule.anti_size(),
            measure: None,
        }
    }

    pub fn with_measure(rule: &CARRule, m: MeasureId) -> Self {
        RankKey {
            measure: Some(evaluate(m, &rule.table)),
            ..RankKey::of(rule)
        }
    }

    pub fn confidence(&self) -> f64 {
        if self.antecedent == 0 {
            0.0
        } else {
            self.joint as f64 / self.antecedent as f64
        }
    }

    pub fn support(&self) -> f64 {
        self.joint as f64 / self.total as f64
    }

    pub fn measure(&self) -> Option<MeasureValue> {
        self.measure
    }

    fn cmp_confidence(&self, other: &RankKey) -> Ordering {
        cmp_ratio(self.joint, self.antecedent, other.joint, other.antecedent)
    }

    fn cmp_support(&self, other: &RankKey) -> Ordering {
        cmp_ratio(self.joint, self.total, other.joint, other.total)
    }

    fn cmp_csa(&self, other: &RankKey) -> Ordering {
        other
            .cmp_confidence(self)
            .then_with(|| other.cmp_support(self))
            .then_with(|| self.anti_size.cmp(&other.anti_size))
    }

    fn cmp_acs(&self, other: &RankKey) -> Ordering {
        other
            .anti_size
            .cmp(&self.anti_size)
            .then_with(|| other.cmp_confidence(self))
            .then_with(|| other.cmp_support(self))
    }

    fn cmp_mcsa(&self, other: &RankKey) -> Ordering {
        other
            .measure
            .cmp(&self.measure)
            .then_with(|| self.cmp_csa(other))
    }

    fn cmp_sm(&self, other: &RankKey) -> Ordering {
        other.measure.cmp(&self.measure)
    }
}

/// Exact comparison of a/b vs c/d; a zero denominator counts as ratio 0.
fn cmp_ratio(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    let (a, b) = if b == 0 { (0, 1) } else { (a, b) };
    let (c, d) = if d == 0 { (0, 1) } else { (c, d) };
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

/// Canonical identity order: sorted antecedent items, then class index.
pub fn canonical_cmp(a: &CARRule, b: &CARRule) -> Ordering {
    a.antecedent
        .cmp(&b.antecedent)
        .then_with(|| a.consequent.cmp(&b.consequent))
}

/// Confidence desc, support desc, antecedent size asc, canonical.
/// `Ordering::Less` means the first rule ranks higher.
pub fn compare_csa(a: &CARRule, b: &CARRule) -> Ordering {
    RankKey::of(a)
        .cmp_csa(&RankKey::of(b))
        .then_with(|| canonical_cmp(a, b))
}

/// Antecedent size desc, confidence desc, support desc, canonical.
pub fn compare_acs(a: &CARRule, b: &CARRule) -> Ordering {
    RankKey::of(a)
        .cmp_acs(&RankKey::of(b))
        .then_with(|| canonical_cmp(a, b))
}

/// Measure desc, then the CSA keys, canonical.
pub fn compare_mcsa(m: MeasureId, a: &CARRule, b: &CARRule) -> Ordering {
    RankKey::with_measure(a, m)
        .cmp_mcsa(&RankKey::with_measure(b, m))
        .then_with(|| canonical_cmp(a, b))
}

/// Measure desc, canonical.
pub fn compare_sm(m: MeasureId, a: &CARRule, b: &CARRule) -> Ordering {
    RankKey::with_measure(a, m)
        .cmp_sm(&RankKey::with_measure(b, m))
        .then_with(|| canonical_cmp(a, b))
}

/// Returns the rules sorted under a strategy. For `Hybrid` the result is the
/// top-k prefix of the single-measure order, re-sorted by CSA; otherwise a
/// full permutation of the input.
pub fn order(rules: &[CARRule], strategy: &OrderingStrategy) -> Vec<CARRule> {
    let mut idx: Vec<usize> = (0..rules.len()).collect();
    match strategy {
        OrderingStrategy::Csa => sort_keyed(rules, &mut idx, RankKey::of, RankKey::cmp_csa),
        OrderingStrategy::Acs => sort_keyed(rules, &mut idx, RankKey::of, RankKey::cmp_acs),
        OrderingStrategy::Mcsa(m) => sort_keyed(
            rules,
            &mut idx,
            |r| RankKey::with_measure(r, *m),
            RankKey::cmp_mcsa,
        ),
        OrderingStrategy::Sm(m) => sort_keyed(
            rules,
            &mut idx,
            |r| RankKey::with_measure(r, *m),
            RankKey::cmp_sm,
        ),
        OrderingStrategy::Hybrid { measure, top_k } => {
            sort_keyed(
                rules,
                &mut idx,
                |r| RankKey::with_measure(r, *measure),
                RankKey::cmp_sm,
            );
            idx.truncate(*top_k);
            sort_keyed(rules, &mut idx, RankKey::of, RankKey::cmp_csa);
        }
    }
    idx.into_iter().map(|i| rules[i].clone()).collect()
}

fn sort_keyed(
    rules: &[CARRule],
    idx: &mut [usize],
    key: impl Fn(&CARRule) -> RankKey,
    cmp: impl Fn(&RankKey, &RankKey) -> Ordering,
) {
    let keys: Vec<RankKey> = rules.iter().map(key).collect();
    idx.sort_by(|&i, &j| cmp(&keys[i], &keys[j]).then_with(|| canonical_cmp(&rules[i], &rules[j])));
}

/// Removes every rule that has a strictly higher-ranked generalization in
/// the input: some rule whose antecedent is a subset of its own and that
/// wins under CSA. Class labels are not compared. Survivor order follows
/// the input.
pub fn prune_specific(rules: &[CARRule]) -> Vec<CARRule> {
    rules
        .iter()
        .filter(|specific| {
            !rules.iter().any(|general| {
                general.anti_size() <= specific.anti_size()
                    && is_subset(&general.antecedent, &specific.antecedent)
                    && compare_csa(general, specific) == Ordering::Less
            })
        })
        .cloned()
        .collect()
}

/// True when `small` is a subset of `big`; both sorted.
fn is_subset(small: &[crate::dataset::Item], big: &[crate::dataset::Item]) -> bool {
    let mut bi = big.iter();
    'outer: for s in small {
        for b in bi.by_ref() {
            match b.cmp(s) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Keeps rules whose measure value reaches the threshold; order preserved.
pub fn prune_threshold(rules: &[CARRule], m: MeasureId, threshold: MeasureValue) -> Vec<CARRule> {
    rules
        .iter()
        .filter(|r| evaluate(m, &r.table) >= threshold)
        .cloned()
        .collect()
}

/// The first `k` rules of the single-measure order.
pub fn prune_top_k(rules: &[CARRule], m: MeasureId, k: usize) -> Vec<CARRule> {
    let mut ordered = order(rules, &OrderingStrategy::Sm(m));
    ordered.truncate(k);
    ordered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, Item};
    use crate::mining::{mine_cars, ContingencyTable, MiningConfig};

    const WEATHER_CSV: &str = include_str!("../data/weather.csv");

    fn weather_rules() -> (Dataset, Vec<CARRule>) {
        let d = Dataset::parse_csv(WEATHER_CSV, "Play").unwrap();
        let rules = mine_cars(
            &d,
            &MiningConfig {
                min_support: 0.10,
                min_confidence: 0.90,
                max_antecedent_len: None,
                max_rules: None,
            },
        )
        .unwrap();
        (d, rules)
    }

    fn find<'a>(d: &Dataset, rules: &'a [CARRule], line: &str) -> &'a CARRule {
        rules
            .iter()
            .find(|r| r.export_line(d) == line)
            .unwrap_or_else(|| panic!("no rule {line}"))
    }

    #[test]
    fn csa_prefers_higher_support_at_equal_confidence() {
        let (d, rules) = weather_rules();
        let overcast = find(&d, &rules, "Outlook=overcast => yes ; 4 4 9 14");
        let sunny_high = find(&d, &rules, "Outlook=sunny & Humidity=high => no ; 3 3 5 14");
        assert_eq!(compare_csa(overcast, sunny_high), Ordering::Less);
        assert_eq!(compare_csa(sunny_high, overcast), Ordering::Greater);
    }

    #[test]
    fn csa_prefers_smaller_antecedent_at_equal_conf_sup() {
        let (d, rules) = weather_rules();
        let pair = find(
            &d,
            &rules,
            "Outlook=sunny & Temperature=hot => no ; 2 2 5 14",
        );
        let triple = find(
            &d,
            &rules,
            "Outlook=sunny & Temperature=hot & Humidity=high => no ; 2 2 5 14",
        );
        assert_eq!(compare_csa(pair, triple), Ordering::Less);
    }

    #[test]
    fn csa_is_reflexive_tie() {
        let (d, rules) = weather_rules();
        let r = find(&d, &rules, "Outlook=overcast => yes ; 4 4 9 14");
        assert_eq!(compare_csa(r, r), Ordering::Equal);
    }

    #[test]
    fn acs_prefers_larger_antecedent() {
        let (d, rules) = weather_rules();
        let pair = find(
            &d,
            &rules,
            "Outlook=sunny & Temperature=hot => no ; 2 2 5 14",
        );
        let triple = find(
            &d,
            &rules,
            "Outlook=sunny & Temperature=hot & Humidity=high => no ; 2 2 5 14",
        );
        assert_eq!(compare_acs(triple, pair), Ordering::Less);
    }

    #[test]
    fn acs_breaks_size_ties_by_confidence_then_support() {
        let t = |n11, n10, n00| ContingencyTable::new(n11, n10, 0, n00);
        let low_conf = CARRule::new(vec![Item::new(0, 0)], 0, t(9, 1, 10)).unwrap();
        let high_conf = CARRule::new(vec![Item::new(0, 1)], 0, t(4, 0, 16)).unwrap();
        assert_eq!(compare_acs(&high_conf, &low_conf), Ordering::Less);

        let small_sup = CARRule::new(vec![Item::new(0, 0)], 0, t(3, 0, 17)).unwrap();
        let big_sup = CARRule::new(vec![Item::new(0, 1)], 0, t(4, 0, 16)).unwrap();
        assert_eq!(compare_acs(&big_sup, &small_sup), Ordering::Less);
    }

    #[test]
    fn mcsa_confidence_equals_csa() {
        let (_, rules) = weather_rules();
        let csa = order(&rules, &OrderingStrategy::Csa);
        let mcsa = order(&rules, &OrderingStrategy::Mcsa(MeasureId::Confidence));
        assert_eq!(csa, mcsa);
    }

    #[test]
    fn hybrid_with_full_k_equals_csa() {
        let (_, rules) = weather_rules();
        let csa = order(&rules, &OrderingStrategy::Csa);
        for m in [MeasureId::ChiSquare, MeasureId::Lift, MeasureId::GiniIndex] {
            let hybrid = order(
                &rules,
                &OrderingStrategy::Hybrid {
                    measure: m,
                    top_k: rules.len(),
                },
            );
            assert_eq!(csa, hybrid, "{m}");
        }
    }

    #[test]
    fn sm_sorts_by_measure_descending() {
        let (d, rules) = weather_rules();
        let picks = vec![
            find(&d, &rules, "Outlook=overcast => yes ; 4 4 9 14").clone(),
            find(
                &d,
                &rules,
                "Humidity=normal & Windy=false => yes ; 4 4 9 14",
            )
            .clone(),
            find(&d, &rules, "Outlook=sunny & Humidity=high => no ; 3 3 5 14").clone(),
        ];
        let ordered = order(&picks, &OrderingStrategy::Sm(MeasureId::ChiSquare));
        // chi-square: sunny&high->no is 378/55 ~ 6.87, the other two tie at 28/9
        assert_eq!(
            ordered[0].export_line(&d),
            "Outlook=sunny & Humidity=high => no ; 3 3 5 14"
        );
        // tie broken canonically: Outlook (attr 0) before Humidity (attr 2)
        assert_eq!(
            ordered[1].export_line(&d),
            "Outlook=overcast => yes ; 4 4 9 14"
        );
        assert_eq!(
            ordered[2].export_line(&d),
            "Humidity=normal & Windy=false => yes ; 4 4 9 14"
        );
    }

    #[test]
    fn sm_equals_mcsa_when_measure_values_are_distinct() {
        // distinct supports at a shared N: the measure key alone decides both
        let rules: Vec<CARRule> = (0..10u64)
            .map(|i| {
                CARRule::new(
                    vec![Item::new(0, i as usize)],
                    (i % 2) as usize,
                    ContingencyTable::new(i + 1, 10 - i, 20, 50 - 2 * i),
                )
                .unwrap()
            })
            .collect();
        let sm = order(&rules, &OrderingStrategy::Sm(MeasureId::Support));
        let mcsa = order(&rules, &OrderingStrategy::Mcsa(MeasureId::Support));
        assert_eq!(sm, mcsa);
    }

    #[test]
    fn order_is_idempotent() {
        let (_, rules) = weather_rules();
        for s in [
            OrderingStrategy::Csa,
            OrderingStrategy::Acs,
            OrderingStrategy::Mcsa(MeasureId::Lift),
            OrderingStrategy::Sm(MeasureId::GiniIndex),
        ] {
            let once = order(&rules, &s);
            let twice = order(&once, &s);
            assert_eq!(once, twice, "{s}");
        }
    }

    #[test]
    fn prune_specific_drops_dominated_specializations() {
        let (d, rules) = weather_rules();
        let pruned = prune_specific(&rules);
        let kept: Vec<String> = pruned.iter().map(|r| r.export_line(&d)).collect();
        assert!(!kept.contains(
            &"Outlook=sunny & Temperature=hot & Humidity=high => no ; 2 2 5 14".to_string()
        ));
        assert!(!kept
            .contains(&"Outlook=sunny & Humidity=high & Windy=false => no ; 2 2 5 14".to_string()));
        assert!(kept.contains(&"Outlook=sunny & Temperature=hot => no ; 2 2 5 14".to_string()));
        assert!(kept.contains(&"Outlook=sunny & Humidity=high => no ; 3 3 5 14".to_string()));
        // idempotent
        assert_eq!(prune_specific(&pruned), pruned);
    }

    #[test]
    fn prune_specific_single_rule_unchanged() {
        let (_, rules) = weather_rules();
        let single = vec![rules[0].clone()];
        assert_eq!(prune_specific(&single), single);
    }

    #[test]
    fn prune_threshold_bounds() {
        let (_, rules) = weather_rules();
        assert_eq!(
            prune_threshold(&rules, MeasureId::Support, MeasureValue::NegInf),
            rules
        );
        assert!(prune_threshold(&rules, MeasureId::Support, MeasureValue::PosInf).is_empty());
    }

    #[test]
    fn prune_threshold_support_quarter() {
        let (d, rules) = weather_rules();
        let kept = prune_threshold(&rules, MeasureId::Support, MeasureValue::Finite(0.25));
        let lines: Vec<String> = kept.iter().map(|r| r.export_line(&d)).collect();
        assert_eq!(
            lines,
            vec![
                "Outlook=overcast => yes ; 4 4 9 14".to_string(),
                "Humidity=normal & Windy=false => yes ; 4 4 9 14".to_string(),
            ]
        );
    }

    #[test]
    fn prune_top_k_takes_sm_prefix() {
        let (_, rules) = weather_rules();
        let sm = order(&rules, &OrderingStrategy::Sm(MeasureId::Support));
        assert_eq!(prune_top_k(&rules, MeasureId::Support, 1), sm[..1].to_vec());
        assert_eq!(prune_top_k(&rules, MeasureId::Support, 500), sm);
    }

    #[test]
    fn strategy_syntax_round_trips() {
        for s in [
            "csa",
            "acs",
            "mcsa:ChiSquare",
            "sm:Kulczynski",
            "hybrid:WRA:30000",
        ] {
            let parsed: OrderingStrategy = s.parse().unwrap();
            assert_eq!(parsed.to_string().to_lowercase(), s.to_lowercase());
        }
        assert!("mcsa".parse::<OrderingStrategy>().is_err());
        assert!("hybrid:Lift:0".parse::<OrderingStrategy>().is_err());
        assert!("sm:NoSuchMeasure".parse::<OrderingStrategy>().is_err());
        let ci: OrderingStrategy = "SM:chisquare".parse().unwrap();
        assert_eq!(ci, OrderingStrategy::Sm(MeasureId::ChiSquare));
    }

    #[test]
    fn subset_check() {
        let items = |v: &[(usize, usize)]| -> Vec<Item> {
            v.iter().map(|&(a, b)| Item::new(a, b)).collect()
        };
        assert!(is_subset(&items(&[(0, 1)]), &items(&[(0, 1), (2, 0)])));
        assert!(is_subset(&items(&[]), &items(&[(0, 1)])));
        assert!(!is_subset(&items(&[(1, 0)]), &items(&[(0, 1), (2, 0)])));
        assert!(!is_subset(&items(&[(0, 1), (2, 0)]), &items(&[(0, 1)])));
    }
}
