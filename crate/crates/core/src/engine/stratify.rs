use std::collections::{BTreeMap, BTreeSet};

use super::program::Program;
use super::EngineError;

/// Predicates grouped into strata, lowest first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stratification {
    pub strata: Vec<BTreeSet<String>>,
}

impl Stratification {
    pub fn stratum_of(&self, pred: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.contains(pred))
    }
}

/// Assigns each predicate the least stratum such that positive dependencies
/// stay in the same or a lower stratum and negative ones in a strictly lower one.
pub fn stratify<C: Ord>(program: &Program<C>) -> Result<Stratification, EngineError> {
    let preds = program.predicates();
    let mut level: BTreeMap<&str, usize> = preds.iter().map(|p| (*p, 0)).collect();
    let limit = preds.len();
    let mut changed = true;
    while changed {
        changed = false;
        for rule in &program.rules {
            let mut need = level[rule.head.pred.as_str()];
            for a in &rule.pos {
                need = need.max(level[a.pred.as_str()]);
            }
            for a in &rule.neg {
                need = need.max(level[a.pred.as_str()] + 1);
            }
            if need > limit {
                return Err(EngineError::NotStratifiable(rule.head.pred.clone()));
            }
            if need > level[rule.head.pred.as_str()] {
                level.insert(&rule.head.pred, need);
                changed = true;
            }
        }
    }
    let mut by_level: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    for (p, l) in level {
        by_level.entry(l).or_default().insert(p.to_string());
    }
    Ok(Stratification { strata: by_level.into_values().collect() })
}
