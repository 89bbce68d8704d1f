//! Database rule coverage: pick the final classifier rules from an ordered
//! list by walking it once over the training instances.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::mining::CARRule;

/// Coverage selection parameters.
#[derive(Debug, Clone)]
pub struct CoverageConfig {
    /// How many selected rules must cover an instance before it retires.
    pub cover_threshold: u64,
    /// When set, a rule only covers instances that carry its class label.
    /// Off by default: matching is on the antecedent alone.
    pub require_class_match: bool,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        CoverageConfig {
            cover_threshold: 3,
            require_class_match: false,
        }
    }
}

/// Walks `ordered` from the top. A rule is selected iff it matches at least
/// one instance still in the working set; every matched instance's cover
/// count goes up, and instances reaching the threshold leave the set. Stops
/// when either the rules or the instances run out. Selected rules keep
/// their input order; rejected rules are never revisited.
pub fn select_by_coverage(
    ordered: &[CARRule],
    train: &Dataset,
    cfg: &CoverageConfig,
) -> Result<Vec<CARRule>> {
    if cfg.cover_threshold < 1 {
        return Err(Error::Config("cover threshold must be at least 1".into()));
    }
    let instances = train.instances();
    let mut counts = vec![0u64; instances.len()];
    let mut live: Vec<usize> = (0..instances.len()).collect();
    let mut selected = Vec::new();

    for rule in ordered {
        if live.is_empty() {
            break;
        }
        let mut covered_any = false;
        live.retain(|&i| {
            let hit = rule.matches(&instances[i])
                && (!cfg.require_class_match
                    || train.class_label(&instances[i]) == rule.consequent);
            if hit {
                covered_any = true;
                counts[i] += 1;
            }
            counts[i] < cfg.cover_threshold
        });
        if covered_any {
            selected.push(rule.clone());
        }
    }
    Ok(selected)
}
