use serde::Serialize;

use crate::model::{classify, Itemset, PatternClass, Thresholds};
use crate::scalar::Utility;

/// An itemset with its exact utility and support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifiedPattern<M> {
    pub itemset: Itemset,
    pub utility: M,
    pub support: u64,
    pub class: PatternClass,
}

/// Counters reported by a miner. Fields that do not apply to a miner stay 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MiningStats {
    /// Full passes over the transaction list.
    pub scans: u32,
    /// Itemsets measured per level (level-wise miner).
    pub level_sizes: Vec<u64>,
    /// Itemsets admitted to the Phase-I pool.
    pub candidates: u64,
    /// Non-empty FU-lists built, including the 1-item lists.
    pub fulists: u64,
    /// Deepest itemset length reached by the vertical search.
    pub max_depth: u32,
    /// Itemsets measured by the oracle.
    pub enumerated: u64,
}

/// The three reported classes. LFLUI is never materialized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport<M> {
    pub hfhui: Vec<ClassifiedPattern<M>>,
    pub hflui: Vec<ClassifiedPattern<M>>,
    pub lfhui: Vec<ClassifiedPattern<M>>,
    pub stats: MiningStats,
}

impl<M: Utility> Default for ClassificationReport<M> {
    fn default() -> Self {
        ClassificationReport { hfhui: Vec::new(), hflui: Vec::new(), lfhui: Vec::new(), stats: MiningStats::default() }
    }
}

impl<M: Utility> ClassificationReport<M> {
    /// Classifies and files `itemset`; returns the class. LFLUI is dropped.
    pub fn record(&mut self, itemset: Itemset, utility: M, support: u64, th: &Thresholds<M>) -> PatternClass {
        let class = classify(utility, support, th);
        let pattern = ClassifiedPattern { itemset, utility, support, class };
        match class {
            PatternClass::HighFreqHighUtil => self.hfhui.push(pattern),
            PatternClass::HighFreqLowUtil => self.hflui.push(pattern),
            PatternClass::LowFreqHighUtil => self.lfhui.push(pattern),
            PatternClass::LowFreqLowUtil => {}
        }
        class
    }

    /// Sorts every class by itemset in canonical lexicographic order.
    pub fn normalize(&mut self) {
        for set in [&mut self.hfhui, &mut self.hflui, &mut self.lfhui] {
            set.sort_by(|a, b| a.itemset.cmp(&b.itemset));
        }
    }

    pub fn class(&self, class: PatternClass) -> &[ClassifiedPattern<M>] {
        match class {
            PatternClass::HighFreqHighUtil => &self.hfhui,
            PatternClass::HighFreqLowUtil => &self.hflui,
            PatternClass::LowFreqHighUtil => &self.lfhui,
            PatternClass::LowFreqLowUtil => &[],
        }
    }

    /// `(|HFHUI|, |HFLUI|, |LFHUI|)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.hfhui.len(), self.hflui.len(), self.lfhui.len())
    }

    pub fn len(&self) -> usize {
        self.hfhui.len() + self.hflui.len() + self.lfhui.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn patterns(&self) -> impl Iterator<Item = &ClassifiedPattern<M>> {
        self.hfhui.iter().chain(&self.hflui).chain(&self.lfhui)
    }

    pub fn find(&self, itemset: &Itemset) -> Option<&ClassifiedPattern<M>> {
        self.patterns().find(|p| &p.itemset == itemset)
    }

    /// Same classified patterns, ignoring stats.
    pub fn same_patterns(&self, other: &Self) -> bool {
        self.hfhui == other.hfhui && self.hflui == other.hflui && self.lfhui == other.lfhui
    }
}

pub(crate) const REPORTED: [PatternClass; 3] =
    [PatternClass::HighFreqHighUtil, PatternClass::HighFreqLowUtil, PatternClass::LowFreqHighUtil];

/// Per-class set differences between two normalized reports.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClassDiff {
    pub class: Option<PatternClass>,
    pub only_left: Vec<Itemset>,
    pub only_right: Vec<Itemset>,
    /// Same itemset in both, with different utility or support.
    pub mismatched: Vec<Itemset>,
}

impl ClassDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty() && self.mismatched.is_empty()
    }
}

/// Compares two reports class by class. Both are normalized first.
pub fn diff_reports<M: Utility>(left: &ClassificationReport<M>, right: &ClassificationReport<M>) -> Vec<ClassDiff> {
    let (mut left, mut right) = (left.clone(), right.clone());
    left.normalize();
    right.normalize();
    REPORTED
        .iter()
        .map(|&class| {
            let (l, r) = (left.class(class), right.class(class));
            let mut diff = ClassDiff { class: Some(class), ..ClassDiff::default() };
            let (mut i, mut j) = (0, 0);
            while i < l.len() || j < r.len() {
                match (l.get(i), r.get(j)) {
                    (Some(a), Some(b)) if a.itemset == b.itemset => {
                        if a.utility != b.utility || a.support != b.support {
                            diff.mismatched.push(a.itemset.clone());
                        }
                        i += 1;
                        j += 1;
                    }
                    (Some(a), Some(b)) if a.itemset < b.itemset => {
                        diff.only_left.push(a.itemset.clone());
                        i += 1;
                    }
                    (Some(_), Some(b)) => {
                        diff.only_right.push(b.itemset.clone());
                        j += 1;
                    }
                    (Some(a), None) => {
                        diff.only_left.push(a.itemset.clone());
                        i += 1;
                    }
                    (None, Some(b)) => {
                        diff.only_right.push(b.itemset.clone());
                        j += 1;
                    }
                    (None, None) => unreachable!(),
                }
            }
            diff
        })
        .collect()
}
