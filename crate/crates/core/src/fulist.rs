//! Vertical classifier over frequency-utility lists.
//!
//! Two scans build one FU-list per promising item. The first scan measures
//! TWU and support of every item; items failing both thresholds are removed
//! from every transaction (all their supersets are LFLUI). The second scan
//! sorts each remaining transaction by ascending TWU and records, for every
//! item occurrence, its quantity and the utility of the items that follow it.
//!
//! The search then classifies each itemset straight from its list
//! (`S = Σ fre`, `U = S × v(X)`) and joins lists of siblings to reach longer
//! itemsets. A subtree is skipped when `U + Σ rutil < min_util` and
//! `S < min_fre`: no descendant can then reach either threshold.

use std::collections::HashMap;

use crate::control::{Budget, MiningError};
use crate::model::{classify, Entry, Item, Itemset, PatternClass, QuantitativeDatabase, Thresholds};
use crate::report::ClassificationReport;
use crate::scalar::Utility;

const POLL_EVERY: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuEntry<M> {
    pub tid: u32,
    /// Occurrences of the itemset in this transaction (its min quantity).
    pub fre: u32,
    /// Utility of the items after the itemset in the revised transaction.
    pub rutil: M,
}

/// FU-list of one itemset. Items are kept in TWU order; entries by tid.
#[derive(Debug, Clone, PartialEq)]
pub struct FuList<M> {
    items: Vec<Item>,
    pub entries: Vec<FuEntry<M>>,
    /// `v(X)`, the summed external utility of the itemset.
    pub ext_util: M,
    last_util: M,
}

impl<M: Utility> FuList<M> {
    /// Empty list for a single item with external utility `v`.
    pub fn for_item(item: Item, v: M) -> Self {
        FuList { items: vec![item], entries: Vec::new(), ext_util: v, last_util: v }
    }

    /// Items in TWU order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn last(&self) -> Item {
        self.items[self.items.len() - 1]
    }

    /// The itemset in canonical order.
    pub fn itemset(&self) -> Itemset {
        let mut items = self.items.clone();
        items.sort_unstable();
        Itemset::from_sorted(items)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Global processing order: ascending TWU on the original database, ties by
/// ascending item id.
#[derive(Debug, Clone, PartialEq)]
pub struct TwuOrder {
    items: Vec<Item>,
    rank: HashMap<Item, u32>,
}

impl TwuOrder {
    /// Surviving items in order.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn rank(&self, item: Item) -> Option<u32> {
        self.rank.get(&item).copied()
    }

    pub fn precedes(&self, a: Item, b: Item) -> bool {
        matches!((self.rank(a), self.rank(b)), (Some(x), Some(y)) if x < y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevisedTransaction<M> {
    pub tid: u32,
    /// Surviving entries in TWU order.
    pub entries: Vec<Entry>,
    /// Utility of the surviving entries.
    pub tu: M,
}

/// Transactions after item removal and reordering. Transactions left empty
/// are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct RevisedDatabase<M> {
    pub transactions: Vec<RevisedTransaction<M>>,
}

#[derive(Debug, Clone)]
pub struct Revision<M> {
    pub database: RevisedDatabase<M>,
    /// One non-empty list per surviving item, in TWU order.
    pub lists: Vec<FuList<M>>,
    pub order: TwuOrder,
}

/// First scan: TWU and support per item slot, then the surviving order.
/// Also returns, per surviving rank, how many transactions hold the item.
fn rank_items<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> (TwuOrder, Vec<Option<u32>>, Vec<usize>) {
    let table = db.utilities();
    let mut twu = vec![M::zero(); table.len()];
    let mut support = vec![0u64; table.len()];
    let mut holders = vec![0usize; table.len()];
    let mut slots = Vec::new();
    for t in db.transactions() {
        slots.clear();
        let mut tu = M::zero();
        for e in t.entries() {
            let slot = table.slot(e.item).expect("validated database");
            tu = tu + M::from_count(e.quantity as u64) * table.value_at(slot);
            support[slot] += e.quantity as u64;
            holders[slot] += 1;
            slots.push(slot);
        }
        for &slot in &slots {
            twu[slot] = twu[slot] + tu;
        }
    }
    let mut kept: Vec<usize> =
        (0..table.len()).filter(|&s| support[s] > 0 && (twu[s] >= th.min_util || support[s] >= th.min_fre)).collect();
    // Slots follow canonical order, so a stable sort breaks TWU ties by id.
    kept.sort_by(|&a, &b| twu[a].partial_cmp(&twu[b]).expect("comparable utilities"));
    let mut slot_rank = vec![None; table.len()];
    let mut rank = HashMap::with_capacity(kept.len());
    let items: Vec<Item> = kept.iter().map(|&s| table.items()[s]).collect();
    for (r, &s) in kept.iter().enumerate() {
        slot_rank[s] = Some(r as u32);
        rank.insert(table.items()[s], r as u32);
    }
    let sizes = kept.iter().map(|&s| holders[s]).collect();
    (TwuOrder { items, rank }, slot_rank, sizes)
}

/// Second scan: builds the 1-item FU-lists, handing each non-empty revised
/// transaction to `sink`.
fn build_lists<M: Utility>(
    db: &QuantitativeDatabase<M>,
    order: &TwuOrder,
    slot_rank: &[Option<u32>],
    sizes: &[usize],
    mut sink: impl FnMut(RevisedTransaction<M>),
) -> Vec<FuList<M>> {
    let table = db.utilities();
    let mut lists: Vec<FuList<M>> = order
        .items()
        .iter()
        .zip(sizes)
        .map(|(&i, &n)| {
            let mut list = FuList::for_item(i, table.get(i).expect("validated database"));
            list.entries.reserve_exact(n);
            list
        })
        .collect();
    let mut row: Vec<(u32, Entry, M)> = Vec::new();
    for t in db.transactions() {
        row.clear();
        for e in t.entries() {
            let slot = table.slot(e.item).expect("validated database");
            if let Some(r) = slot_rank[slot] {
                row.push((r, *e, M::from_count(e.quantity as u64) * table.value_at(slot)));
            }
        }
        if row.is_empty() {
            continue;
        }
        row.sort_unstable_by_key(|&(r, _, _)| r);
        let mut after = M::zero();
        for &(r, e, u) in row.iter().rev() {
            lists[r as usize].entries.push(FuEntry { tid: t.tid(), fre: e.quantity, rutil: after });
            after = after + u;
        }
        sink(RevisedTransaction { tid: t.tid(), entries: row.iter().map(|&(_, e, _)| e).collect(), tu: after });
    }
    lists
}

/// Two scans: item measures and removal, then revised transactions and the
/// 1-item FU-lists.
pub fn build_revised<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> Revision<M> {
    let (order, slot_rank, sizes) = rank_items(db, th);
    let mut transactions = Vec::new();
    let lists = build_lists(db, &order, &slot_rank, &sizes, |t| transactions.push(t));
    Revision { database: RevisedDatabase { transactions }, lists, order }
}

/// Merge-joins two sibling lists without checking the sibling contract.
fn join<M: Utility>(ex: &FuList<M>, ey: &FuList<M>) -> FuList<M> {
    let (a, b) = (&ex.entries, &ey.entries);
    let mut entries = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].tid.cmp(&b[j].tid) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                entries.push(FuEntry { tid: a[i].tid, fre: a[i].fre.min(b[j].fre), rutil: b[j].rutil });
                i += 1;
                j += 1;
            }
        }
    }
    let mut items = Vec::with_capacity(ex.items.len() + 1);
    items.extend_from_slice(&ex.items);
    items.push(ey.last());
    FuList { items, entries, ext_util: ex.ext_util + ey.last_util, last_util: ey.last_util }
}

/// 1-extension of `ex` by `ey`: both share every item but their last, and
/// the last item of `ey` comes after that of `ex` in the TWU order.
pub fn extend<M: Utility>(ex: &FuList<M>, ey: &FuList<M>, order: &TwuOrder) -> Result<FuList<M>, MiningError> {
    let k = ex.items.len();
    if k != ey.items.len() || ex.items[..k - 1] != ey.items[..k - 1] {
        return Err(MiningError::Contract("lists do not share a prefix".into()));
    }
    if !order.precedes(ex.last(), ey.last()) {
        return Err(MiningError::Contract(format!("item {} does not come after {}", ey.last(), ex.last())));
    }
    Ok(join(ex, ey))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measures<M> {
    pub utility: M,
    pub support: u64,
    pub rutil_total: M,
}

pub fn measures_of<M: Utility>(list: &FuList<M>) -> Measures<M> {
    let support: u64 = list.entries.iter().map(|e| e.fre as u64).sum();
    let rutil_total = list.entries.iter().map(|e| e.rutil).sum();
    Measures { utility: M::from_count(support) * list.ext_util, support, rutil_total }
}

/// Whether any extension of the list's itemset can still be non-LFLUI.
pub fn should_extend<M: Utility>(list: &FuList<M>, th: &Thresholds<M>) -> bool {
    let m = measures_of(list);
    m.support > 0 && (m.utility + m.rutil_total >= th.min_util || m.support >= th.min_fre)
}

struct Search<'a, M> {
    th: &'a Thresholds<M>,
    budget: &'a Budget,
    report: ClassificationReport<M>,
    visited: Option<Vec<Itemset>>,
    nodes: u64,
}

impl<M: Utility> Search<'_, M> {
    fn descend(&mut self, lists: &[FuList<M>], depth: u32) -> Result<(), MiningError> {
        self.report.stats.max_depth = self.report.stats.max_depth.max(depth);
        for (i, x) in lists.iter().enumerate() {
            self.nodes += 1;
            if self.nodes.is_multiple_of(POLL_EVERY) {
                self.budget.check()?;
            }
            let m = measures_of(x);
            if let Some(log) = &mut self.visited {
                log.push(x.itemset());
            }
            if classify(m.utility, m.support, self.th) != PatternClass::LowFreqLowUtil {
                self.report.record(x.itemset(), m.utility, m.support, self.th);
            }
            if !should_extend(x, self.th) {
                continue;
            }
            let extensions: Vec<FuList<M>> = lists[i + 1..].iter().map(|y| join(x, y)).filter(|l| !l.is_empty()).collect();
            if !extensions.is_empty() {
                self.report.stats.fulists += extensions.len() as u64;
                self.descend(&extensions, depth + 1)?;
            }
        }
        Ok(())
    }
}

/// Classifies every itemset reachable from `lists` (siblings sharing one
/// prefix, in TWU order) into `report`.
pub fn search<M: Utility>(lists: &[FuList<M>], th: &Thresholds<M>, report: &mut ClassificationReport<M>) {
    let mut s = Search { th, budget: &Budget::unlimited(), report: std::mem::take(report), visited: None, nodes: 0 };
    let depth = lists.first().map_or(0, |l| l.items.len() as u32);
    s.descend(lists, depth).expect("unlimited budget");
    *report = s.report;
}

fn run<M: Utility>(
    db: &QuantitativeDatabase<M>,
    th: &Thresholds<M>,
    budget: &Budget,
    trace: bool,
) -> Result<(ClassificationReport<M>, Option<Vec<Itemset>>), MiningError> {
    budget.check()?;
    let (order, slot_rank, sizes) = rank_items(db, th);
    let lists = build_lists(db, &order, &slot_rank, &sizes, |_| {});
    drop(slot_rank);
    let lists: Vec<FuList<M>> = lists.into_iter().filter(|l| !l.is_empty()).collect();
    let mut s = Search { th, budget, report: ClassificationReport::default(), visited: trace.then(Vec::new), nodes: 0 };
    s.report.stats.fulists = lists.len() as u64;
    if !lists.is_empty() {
        s.descend(&lists, 1)?;
    }
    let mut report = s.report;
    report.stats.scans = 2;
    report.normalize();
    Ok((report, s.visited))
}

/// Builds the FU-lists and searches from the empty prefix. Exactly two scans.
pub fn run_fast<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> ClassificationReport<M> {
    run_fast_within(db, th, &Budget::unlimited()).expect("unlimited budget")
}

pub fn run_fast_within<M: Utility>(
    db: &QuantitativeDatabase<M>,
    th: &Thresholds<M>,
    budget: &Budget,
) -> Result<ClassificationReport<M>, MiningError> {
    run(db, th, budget, false).map(|(r, _)| r)
}

/// [`run_fast`] plus every itemset visited by the search, in visit order.
pub fn run_fast_traced<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> (ClassificationReport<M>, Vec<Itemset>) {
    let (report, visited) = run(db, th, &Budget::unlimited(), true).expect("unlimited budget");
    (report, visited.unwrap_or_default())
}
