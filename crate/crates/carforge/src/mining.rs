//! Level-wise mining of class association rules.
//!
//! Candidate antecedents grow one item at a time; an antecedent survives a
//! level only if its cover count meets the minimum, which also bounds the
//! joint count of every extension. Each emitted rule carries the exact
//! contingency counts for its antecedent/consequent pair.

use std::collections::HashSet;

use crate::dataset::{Dataset, Instance, Item};
use crate::error::{Error, Result};

/// Joint counts of antecedent (X) and consequent (Y) over a dataset.
///
/// `n11` counts instances matching both, `n10` matching X but not Y,
/// `n01` matching Y but not X, `n00` matching neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ContingencyTable {
    pub n11: u64,
    pub n10: u64,
    pub n01: u64,
    pub n00: u64,
}

impl ContingencyTable {
    pub fn new(n11: u64, n10: u64, n01: u64, n00: u64) -> Self {
        ContingencyTable { n11, n10, n01, n00 }
    }

    /// Number of instances matching the antecedent (nX).
    pub fn antecedent_count(&self) -> u64 {
        self.n11 + self.n10
    }

    /// Number of instances matching the consequent (nY).
    pub fn consequent_count(&self) -> u64 {
        self.n11 + self.n01
    }

    /// Total instance count (N).
    pub fn total(&self) -> u64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    pub fn support(&self) -> f64 {
        self.n11 as f64 / self.total() as f64
    }

    /// Rule confidence; 0 when the antecedent matches nothing.
    pub fn confidence(&self) -> f64 {
        let nx = self.antecedent_count();
        if nx == 0 {
            0.0
        } else {
            self.n11 as f64 / nx as f64
        }
    }

    /// Cell-wise scaling by an integer factor, for invariance tests.
    pub fn scaled(&self, k: u64) -> ContingencyTable {
        ContingencyTable::new(self.n11 * k, self.n10 * k, self.n01 * k, self.n00 * k)
    }
}

/// A class association rule: antecedent items, class value index, and the
/// exact counts measured on the mining dataset.
///
/// The antecedent is kept sorted by (attribute, value) and uses each
/// attribute at most once; `(antecedent, consequent)` identifies the rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CARRule {
    pub antecedent: Vec<Item>,
    pub consequent: usize,
    pub table: ContingencyTable,
}

impl CARRule {
    /// Canonicalizes the item list and rejects antecedents that reuse an
    /// attribute.
    pub fn new(
        mut antecedent: Vec<Item>,
        consequent: usize,
        table: ContingencyTable,
    ) -> Result<Self> {
        antecedent.sort_unstable();
        for pair in antecedent.windows(2) {
            if pair[0].attribute == pair[1].attribute {
                return Err(Error::Input(format!(
                    "antecedent uses attribute {} twice",
                    pair[0].attribute
                )));
            }
        }
        Ok(CARRule {
            antecedent,
            consequent,
            table,
        })
    }

    /// Number of attribute-value pairs in the antecedent.
    pub fn anti_size(&self) -> usize {
        self.antecedent.len()
    }

    pub fn confidence(&self) -> f64 {
        self.table.confidence()
    }

    pub fn support(&self) -> f64 {
        self.table.support()
    }

    /// True when every antecedent item matches the instance.
    pub fn matches(&self, instance: &Instance) -> bool {
        self.antecedent.iter().all(|it| it.matches(instance))
    }

    /// Renders `item=value & ... => class ; n11 nX nY N`, the line format of
    /// rule-set exports.
    pub fn export_line(&self, d: &Dataset) -> String {
        let lhs = if self.antecedent.is_empty() {
            String::from("(true)")
        } else {
            self.antecedent
                .iter()
                .map(|it| {
                    format!(
                        "{}={}",
                        d.schema().attribute(it.attribute).name,
                        d.schema().value_name(it.attribute, it.value)
                    )
                })
                .collect::<Vec<_>>()
                .join(" & ")
        };
        format!(
            "{} => {} ; {} {} {} {}",
            lhs,
            d.schema().class_value_name(self.consequent),
            self.table.n11,
            self.table.antecedent_count(),
            self.table.consequent_count(),
            self.table.total()
        )
    }
}

/// Thresholds and caps controlling rule generation.
#[derive(Debug, Clone)]
pub struct MiningConfig {
    /// Minimum rule support as a fraction of the dataset, in (0, 1].
    pub min_support: f64,
    /// Minimum rule confidence, in (0, 1].
    pub min_confidence: f64,
    /// Antecedent size cap; `None` means unbounded.
    pub max_antecedent_len: Option<usize>,
    /// Rule count cap applied after generation; `None` means unbounded.
    pub max_rules: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_support: 0.10,
            min_confidence: 0.50,
            max_antecedent_len: None,
            max_rules: Some(100_000),
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(Error::Config(format!(
                "min support {} outside (0, 1]",
                self.min_support
            )));
        }
        if !(self.min_confidence > 0.0 && self.min_confidence <= 1.0) {
            return Err(Error::Config(format!(
                "min confidence {} outside (0, 1]",
                self.min_confidence
            )));
        }
        if self.max_antecedent_len == Some(0) {
            return Err(Error::Config(
                "max antecedent length must be positive".into(),
            ));
        }
        if self.max_rules == Some(0) {
            return Err(Error::Config("max rules must be positive".into()));
        }
        Ok(())
    }

    /// Minimum joint count implied by `min_support` on a dataset of `n`
    /// instances: the smallest integer count reaching the fraction.
    pub fn min_count(&self, n: u64) -> u64 {
        (self.min_support * n as f64).ceil() as u64
    }
}

/// Exact contingency counts for one antecedent/consequent pair, from a
/// single pass over the dataset. An empty antecedent matches everything.
pub fn count_table(antecedent: &[Item], consequent: usize, d: &Dataset) -> ContingencyTable {
    let mut t = ContingencyTable::new(0, 0, 0, 0);
    for inst in d.instances() {
        let x = antecedent.iter().all(|it| it.matches(inst));
        let y = d.class_label(inst) == consequent;
        match (x, y) {
            (true, true) => t.n11 += 1,
            (true, false) => t.n10 += 1,
            (false, true) => t.n01 += 1,
            (false, false) => t.n00 += 1,
        }
    }
    t
}

/// Mines every rule meeting the support and confidence thresholds, with
/// antecedents of one item up to the configured cap.
///
/// The support threshold applies to the rule's joint count; antecedent
/// candidates are pruned on their cover count, which bounds the joint count
/// of every rule and extension built from them. Rules come out in ascending
/// antecedent-size order, canonically sorted within each size, so a finite
/// `max_rules` truncates deterministically.
pub fn mine_cars(d: &Dataset, cfg: &MiningConfig) -> Result<Vec<CARRule>> {
    cfg.validate()?;
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = d.len() as u64;
    let min_count = cfg.min_count(n);
    let class_counts = d.class_counts();
    let class_index = d.schema().class_index();
    let max_len = cfg.max_antecedent_len.unwrap_or(usize::MAX);

    let mut rules = Vec::new();

    // Level 1 candidates: every non-class attribute value.
    let mut candidates: Vec<Vec<Item>> = Vec::new();
    for (a, attr) in d.schema().attributes().iter().enumerate() {
        if a == class_index {
            continue;
        }
        for v in 0..attr.values.len() {
            candidates.push(vec![Item::new(a, v)]);
        }
    }

    while !candidates.is_empty() {
        let counts = count_candidates(d, &candidates, class_counts.len());
        let mut frequent: Vec<Vec<Item>> = Vec::new();

        for (cand, (n_x, joint)) in candidates.iter().zip(&counts) {
            if *n_x < min_count {
                continue;
            }
            frequent.push(cand.clone());
            for (c, &n11) in joint.iter().enumerate() {
                if n11 < min_count {
                    continue;
                }
                if (n11 as f64 / *n_x as f64) < cfg.min_confidence {
                    continue;
                }
                let table = ContingencyTable::new(
                    n11,
                    *n_x - n11,
                    class_counts[c] - n11,
                    n + n11 - *n_x - class_counts[c],
                );
                rules.push(CARRule {
                    antecedent: cand.clone(),
                    consequent: c,
                    table,
                });
            }
        }

        let size = frequent.first().map_or(0, |c| c.len());
        if size >= max_len {
            break;
        }
        candidates = grow_candidates(&frequent);
    }

    if let Some(cap) = cfg.max_rules {
        rules.truncate(cap);
    }
    Ok(rules)
}

/// Counts, for each candidate antecedent, its cover count and per-class
/// joint counts in one pass over the instances.
fn count_candidates(
    d: &Dataset,
    candidates: &[Vec<Item>],
    num_classes: usize,
) -> Vec<(u64, Vec<u64>)> {
    let mut counts: Vec<(u64, Vec<u64>)> = candidates
        .iter()
        .map(|_| (0u64, vec![0u64; num_classes]))
        .collect();
    for inst in d.instances() {
        let label = d.class_label(inst);
        for (cand, entry) in candidates.iter().zip(counts.iter_mut()) {
            if cand.iter().all(|it| it.matches(inst)) {
                entry.0 += 1;
                entry.1[label] += 1;
            }
        }
    }
    counts
}

/// Apriori join + prune: combines frequent antecedents sharing all but the
/// last item, keeps attribute sets distinct, and drops any candidate with an
/// infrequent sub-antecedent. `frequent` is canonically sorted, so output
/// order is canonical too.
fn grow_candidates(frequent: &[Vec<Item>]) -> Vec<Vec<Item>> {
    let known: HashSet<&[Item]> = frequent.iter().map(|c| c.as_slice()).collect();
    let mut next = Vec::new();
    for i in 0..frequent.len() {
        for j in (i + 1)..frequent.len() {
            let (a, b) = (&frequent[i], &frequent[j]);
            let k = a.len();
            if a[..k - 1] != b[..k - 1] {
                break; // sorted input: later j cannot share the prefix either
            }
            let last = b[k - 1];
            if a[k - 1].attribute == last.attribute {
                continue;
            }
            let mut cand = a.clone();
            cand.push(last);
            if all_subsets_frequent(&cand, &known) {
                next.push(cand);
            }
        }
    }
    next
}

fn all_subsets_frequent(cand: &[Item], known: &HashSet<&[Item]>) -> bool {
    if cand.len() <= 2 {
        return true; // 1-item subsets were the level-1 frequent set by construction
    }
    let mut sub = Vec::with_capacity(cand.len() - 1);
    for skip in 0..cand.len() {
        sub.clear();
        sub.extend(
            cand.iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, it)| *it),
        );
        if !known.contains(sub.as_slice()) {
            return false;
        }
    }
    true
}
