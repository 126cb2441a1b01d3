//! Exhaustive reference classifier.
//!
//! Enumerates every non-empty subset of the item universe and measures it
//! directly against the database. No pruning of any kind.

use thiserror::Error;

use crate::model::{Item, Itemset, QuantitativeDatabase, Thresholds};
use crate::report::ClassificationReport;
use crate::scalar::Utility;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("item universe has {items} items; the oracle enumerates at most {limit}")]
    UniverseTooLarge { items: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_items: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        OracleLimit { max_items: 20 }
    }
}

/// Calls `visit` on every non-empty subset of `universe`, in lexicographic
/// order of the subsets.
fn for_each_subset(universe: &[Item], mut visit: impl FnMut(&[Item])) {
    fn grow(universe: &[Item], from: usize, current: &mut Vec<Item>, visit: &mut dyn FnMut(&[Item])) {
        for i in from..universe.len() {
            current.push(universe[i]);
            visit(current);
            grow(universe, i + 1, current, visit);
            current.pop();
        }
    }
    grow(universe, 0, &mut Vec::with_capacity(universe.len()), &mut visit);
}

/// Classifies every itemset that occurs in at least one transaction.
pub fn classify_all<M: Utility>(
    db: &QuantitativeDatabase<M>,
    th: &Thresholds<M>,
    limit: OracleLimit,
) -> Result<ClassificationReport<M>, OracleError> {
    let universe = db.utilities().items();
    if universe.len() > limit.max_items {
        return Err(OracleError::UniverseTooLarge { items: universe.len(), limit: limit.max_items });
    }
    let mut report = ClassificationReport::default();
    let mut enumerated = 0u64;
    for_each_subset(universe, |items| {
        enumerated += 1;
        let x = Itemset::from_sorted(items.to_vec());
        let support = db.itemset_support(&x);
        if support == 0 {
            return;
        }
        let utility = db.itemset_utility(&x);
        report.record(x, utility, support, th);
    });
    report.stats.enumerated = enumerated;
    report.normalize();
    Ok(report)
}
