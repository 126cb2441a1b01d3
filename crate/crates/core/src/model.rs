//! Domain types and exact measures shared by every miner and the oracle.
//!
//! Itemset measures follow min-quantity semantics: in a transaction that
//! contains every item of `X`, `X` occurs `min q(x, T)` times and each
//! occurrence is worth `Σ v(x)`. Hence `U(X) = S(X) × v(X)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Utility;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("item {item} is absent from transaction {tid}")]
    ItemNotInTransaction { item: Item, tid: u32 },
    #[error("item {0} has no external utility")]
    MissingUtility(Item),
    #[error("item {0} declared twice")]
    DuplicateItem(Item),
    #[error("item {item} appears twice in transaction {tid}")]
    DuplicateEntry { item: Item, tid: u32 },
    #[error("external utility of item {0} must be positive")]
    NonPositiveUtility(Item),
    #[error("quantity of item {item} in transaction {tid} must be at least 1")]
    ZeroQuantity { item: Item, tid: u32 },
    #[error("transaction ids must be strictly increasing (saw {prev} then {next})")]
    UnorderedTids { prev: u32, next: u32 },
    #[error("the item universe is empty")]
    EmptyUniverse,
    #[error("itemsets must be non-empty and duplicate-free")]
    InvalidItemset,
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
}

/// Item identifier. The natural order on ids is the canonical item order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Item(pub u32);

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// External utility `v(i)` per item, with optional display labels.
#[derive(Debug, Clone)]
pub struct UtilityTable<M> {
    items: Vec<Item>,
    values: Vec<M>,
    labels: Vec<Option<String>>,
    slots: HashMap<Item, usize>,
}

impl<M: Utility> Default for UtilityTable<M> {
    fn default() -> Self {
        Self::new()
    }
}

impl<M: Utility> UtilityTable<M> {
    pub fn new() -> Self {
        UtilityTable { items: Vec::new(), values: Vec::new(), labels: Vec::new(), slots: HashMap::new() }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Item, M)>) -> Result<Self, ModelError> {
        let mut table = Self::new();
        for (item, value) in pairs {
            table.insert(item, value, None)?;
        }
        Ok(table)
    }

    pub fn insert(&mut self, item: Item, value: M, label: Option<String>) -> Result<(), ModelError> {
        if self.slots.contains_key(&item) {
            return Err(ModelError::DuplicateItem(item));
        }
        if !value.is_positive() {
            return Err(ModelError::NonPositiveUtility(item));
        }
        let at = self.items.partition_point(|&i| i < item);
        self.items.insert(at, item);
        self.values.insert(at, value);
        self.labels.insert(at, label);
        if at + 1 == self.items.len() {
            self.slots.insert(item, at);
        } else {
            for (slot, &i) in self.items.iter().enumerate().skip(at) {
                self.slots.insert(i, slot);
            }
        }
        Ok(())
    }

    pub fn get(&self, item: Item) -> Option<M> {
        self.slots.get(&item).map(|&s| self.values[s])
    }

    pub fn label(&self, item: Item) -> Option<&str> {
        self.slots.get(&item).and_then(|&s| self.labels[s].as_deref())
    }

    /// Dense position of `item` in canonical order.
    pub fn slot(&self, item: Item) -> Option<usize> {
        self.slots.get(&item).copied()
    }

    pub fn value_at(&self, slot: usize) -> M {
        self.values[slot]
    }

    /// Items in canonical order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, M, Option<&str>)> + '_ {
        (0..self.items.len()).map(move |s| (self.items[s], self.values[s], self.labels[s].as_deref()))
    }

    /// `v(X) = Σ v(x)`.
    pub fn sum_of(&self, items: &[Item]) -> Option<M> {
        items.iter().map(|&i| self.get(i)).sum()
    }
}

impl<M: PartialEq> PartialEq for UtilityTable<M> {
    fn eq(&self, other: &Self) -> bool {
        self.items == other.items && self.values == other.values && self.labels == other.labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub item: Item,
    pub quantity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    tid: u32,
    entries: Vec<Entry>,
}

impl Transaction {
    /// Sorts entries into canonical order and rejects duplicates and zero
    /// quantities.
    pub fn new(tid: u32, mut entries: Vec<Entry>) -> Result<Self, ModelError> {
        entries.sort_unstable_by_key(|e| e.item);
        for w in entries.windows(2) {
            if w[0].item == w[1].item {
                return Err(ModelError::DuplicateEntry { item: w[0].item, tid });
            }
        }
        if let Some(e) = entries.iter().find(|e| e.quantity == 0) {
            return Err(ModelError::ZeroQuantity { item: e.item, tid });
        }
        Ok(Transaction { tid, entries })
    }

    pub fn from_pairs(tid: u32, pairs: &[(u32, u32)]) -> Result<Self, ModelError> {
        Self::new(tid, pairs.iter().map(|&(i, q)| Entry { item: Item(i), quantity: q }).collect())
    }

    pub fn tid(&self) -> u32 {
        self.tid
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn quantity_of(&self, item: Item) -> Option<u32> {
        self.entries.binary_search_by_key(&item, |e| e.item).ok().map(|i| self.entries[i].quantity)
    }

    /// Minimum quantity over `items` (canonical order) when the transaction
    /// contains all of them.
    pub fn occurrence(&self, items: &[Item]) -> Option<u32> {
        let mut min_q = u32::MAX;
        let mut rest = self.entries.as_slice();
        for &item in items {
            let at = rest.partition_point(|e| e.item < item);
            match rest.get(at) {
                Some(e) if e.item == item => {
                    min_q = min_q.min(e.quantity);
                    rest = &rest[at + 1..];
                }
                _ => return None,
            }
        }
        Some(min_q)
    }
}

/// Sorted, duplicate-free, non-empty set of items in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    pub fn new(mut items: Vec<Item>) -> Result<Self, ModelError> {
        items.sort_unstable();
        let len = items.len();
        items.dedup();
        if items.is_empty() || items.len() != len {
            return Err(ModelError::InvalidItemset);
        }
        Ok(Itemset(items))
    }

    pub fn of(ids: &[u32]) -> Self {
        Self::new(ids.iter().copied().map(Item).collect()).expect("non-empty distinct ids")
    }

    /// Caller guarantees canonical order.
    pub(crate) fn from_sorted(items: Vec<Item>) -> Self {
        debug_assert!(!items.is_empty() && items.windows(2).all(|w| w[0] < w[1]));
        Itemset(items)
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Item {
        self.0[self.0.len() - 1]
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        let mut rest = other.0.as_slice();
        self.0.iter().all(|i| match rest.binary_search(i) {
            Ok(at) => {
                rest = &rest[at + 1..];
                true
            }
            Err(_) => false,
        })
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, item) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

/// Transactions plus the external-utility table.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantitativeDatabase<M> {
    transactions: Vec<Transaction>,
    utilities: UtilityTable<M>,
}

impl<M: Utility> QuantitativeDatabase<M> {
    pub fn new(transactions: Vec<Transaction>, utilities: UtilityTable<M>) -> Result<Self, ModelError> {
        if utilities.is_empty() {
            return Err(ModelError::EmptyUniverse);
        }
        for w in transactions.windows(2) {
            if w[0].tid >= w[1].tid {
                return Err(ModelError::UnorderedTids { prev: w[0].tid, next: w[1].tid });
            }
        }
        for t in &transactions {
            if let Some(e) = t.entries.iter().find(|e| utilities.get(e.item).is_none()) {
                return Err(ModelError::MissingUtility(e.item));
            }
        }
        Ok(QuantitativeDatabase { transactions, utilities })
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn utilities(&self) -> &UtilityTable<M> {
        &self.utilities
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// The first `n` transactions, same utility table.
    pub fn prefix(&self, n: usize) -> Self {
        QuantitativeDatabase {
            transactions: self.transactions[..n.min(self.transactions.len())].to_vec(),
            utilities: self.utilities.clone(),
        }
    }

    /// `u(i, T) = q(i, T) × v(i)`.
    pub fn item_utility(&self, item: Item, t: &Transaction) -> Result<M, ModelError> {
        let q = t.quantity_of(item).ok_or(ModelError::ItemNotInTransaction { item, tid: t.tid })?;
        let v = self.utilities.get(item).ok_or(ModelError::MissingUtility(item))?;
        Ok(M::from_count(q as u64) * v)
    }

    /// `TU(T)`: sum of item utilities in `t`.
    pub fn transaction_utility(&self, t: &Transaction) -> M {
        t.entries.iter().map(|e| M::from_count(e.quantity as u64) * self.utilities.get(e.item).unwrap_or_else(M::zero)).sum()
    }

    /// `Σ_T TU(T)`.
    pub fn total_utility(&self) -> M {
        self.transactions.iter().map(|t| self.transaction_utility(t)).sum()
    }

    /// `U(X)`: sum over containing transactions of min quantity × `v(X)`.
    pub fn itemset_utility(&self, x: &Itemset) -> M {
        let v = self.utilities.sum_of(x.items()).unwrap_or_else(M::zero);
        self.transactions.iter().filter_map(|t| t.occurrence(x.items())).map(|q| M::from_count(q as u64) * v).sum()
    }

    /// `S(X)`: sum over containing transactions of the min quantity.
    pub fn itemset_support(&self, x: &Itemset) -> u64 {
        self.transactions.iter().filter_map(|t| t.occurrence(x.items())).map(u64::from).sum()
    }

    /// `TWU(X)`: sum of TU over containing transactions.
    pub fn twu(&self, x: &Itemset) -> M {
        self.transactions.iter().filter(|t| t.occurrence(x.items()).is_some()).map(|t| self.transaction_utility(t)).sum()
    }

    pub fn label_of(&self, x: &Itemset) -> Option<String> {
        x.items().iter().map(|&i| self.utilities.label(i)).collect::<Option<Vec<_>>>().map(|l| l.concat())
    }
}

/// A threshold given either in absolute units or as a fraction of a base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold<T> {
    Absolute(T),
    Relative(f64),
}

/// User-facing thresholds, resolved against a database with
/// [`ThresholdSpec::resolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec<M> {
    pub min_util: Threshold<M>,
    pub min_fre: Threshold<u64>,
}

/// Absolute `min_util` / `min_fre`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds<M> {
    pub min_util: M,
    pub min_fre: u64,
}

impl<M: Utility> Thresholds<M> {
    pub fn new(min_util: M, min_fre: u64) -> Self {
        Thresholds { min_util, min_fre }
    }
}

impl<M: Utility> ThresholdSpec<M> {
    pub fn absolute(min_util: M, min_fre: u64) -> Self {
        ThresholdSpec { min_util: Threshold::Absolute(min_util), min_fre: Threshold::Absolute(min_fre) }
    }

    /// Relative utility resolves to `ceil(f × Σ TU)`, relative frequency to
    /// `ceil(f × |D|)`.
    pub fn resolve(&self, db: &QuantitativeDatabase<M>) -> Result<Thresholds<M>, ModelError> {
        let check = |f: f64| {
            if f.is_finite() && f >= 0.0 {
                Ok(f)
            } else {
                Err(ModelError::InvalidThreshold(format!("fraction {f} must be finite and non-negative")))
            }
        };
        let min_util = match self.min_util {
            Threshold::Absolute(v) if v < M::zero() => return Err(ModelError::InvalidThreshold(format!("min_util {v} is negative"))),
            Threshold::Absolute(v) => v,
            Threshold::Relative(f) => M::fraction_of(db.total_utility(), check(f)?),
        };
        let min_fre = match self.min_fre {
            Threshold::Absolute(n) => n,
            Threshold::Relative(f) => (check(f)? * db.len() as f64).ceil() as u64,
        };
        Ok(Thresholds { min_util, min_fre })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternClass {
    #[serde(rename = "HFHUI")]
    HighFreqHighUtil,
    #[serde(rename = "HFLUI")]
    HighFreqLowUtil,
    #[serde(rename = "LFHUI")]
    LowFreqHighUtil,
    #[serde(rename = "LFLUI")]
    LowFreqLowUtil,
}

impl PatternClass {
    pub fn code(self) -> &'static str {
        match self {
            PatternClass::HighFreqHighUtil => "HFHUI",
            PatternClass::HighFreqLowUtil => "HFLUI",
            PatternClass::LowFreqHighUtil => "LFHUI",
            PatternClass::LowFreqLowUtil => "LFLUI",
        }
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

pub fn classify<M: Utility>(utility: M, support: u64, th: &Thresholds<M>) -> PatternClass {
    let high_util = utility >= th.min_util;
    let high_fre = support >= th.min_fre;
    match (high_fre, high_util) {
        (true, true) => PatternClass::HighFreqHighUtil,
        (true, false) => PatternClass::HighFreqLowUtil,
        (false, true) => PatternClass::LowFreqHighUtil,
        (false, false) => PatternClass::LowFreqLowUtil,
    }
}
