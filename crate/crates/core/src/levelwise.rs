//! Level-wise two-phase classifier.
//!
//! Phase I walks the lattice one itemset length at a time. Every level is
//! measured with a single database scan that yields the exact TWU and support
//! of each itemset. An itemset with `TWU < min_util` and `S < min_fre` is
//! guaranteed LFLUI together with all of its supersets (both measures are
//! anti-monotone and `TWU ≥ U`), so it is dropped. The rest enter the
//! candidate pool and are joined pairwise into the next level. Phase II scans
//! once more to obtain exact utilities and classifies the pool.

use std::collections::HashMap;

use crate::control::{Budget, MiningError};
use crate::model::{Entry, Item, Itemset, QuantitativeDatabase, Thresholds};
use crate::report::ClassificationReport;
use crate::scalar::Utility;

/// Budget is polled once per this many transactions.
const POLL_EVERY: usize = 1024;

/// Joins two k-itemsets sharing their first k-1 items.
///
/// `first` must precede `second` in lexicographic order; the result keeps
/// canonical order. Returns `None` when the prefixes differ or the itemsets
/// are identical.
pub fn connect(first: &Itemset, second: &Itemset) -> Result<Option<Itemset>, MiningError> {
    let k = first.len();
    if k != second.len() {
        return Err(MiningError::Contract(format!("cannot connect {first} and {second}: lengths differ")));
    }
    let (a, b) = (first.items(), second.items());
    if a[..k - 1] != b[..k - 1] || a[k - 1] == b[k - 1] {
        return Ok(None);
    }
    if a[k - 1] > b[k - 1] {
        return Err(MiningError::Contract(format!("{first} does not precede {second}")));
    }
    let mut items = a.to_vec();
    items.push(b[k - 1]);
    Ok(Some(Itemset::from_sorted(items)))
}

/// One measured itemset of a level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCandidate<M> {
    pub itemset: Itemset,
    pub twu: M,
    pub fre: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSummary {
    pub length: usize,
    pub measured: usize,
    pub admitted: usize,
}

/// Output of Phase I.
#[derive(Debug, Clone)]
pub struct CandidatePool<M> {
    /// Admitted itemsets in level order, lexicographic within a level.
    pub members: Vec<LevelCandidate<M>>,
    pub levels: Vec<LevelSummary>,
    pub scans: u32,
}

impl<M> CandidatePool<M> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, itemset: &Itemset) -> bool {
        self.members.iter().any(|m| &m.itemset == itemset)
    }
}

/// Minimum quantity of `items` inside `entries`, both in canonical order.
fn occurrence_in(entries: &[Entry], items: &[Item]) -> Option<u32> {
    let mut min_q = u32::MAX;
    let mut rest = entries;
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

/// `n choose k`, saturating.
fn choose(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut c: u64 = 1;
    for i in 0..k {
        c = c.saturating_mul(n as u64 - i) / (i + 1);
        if c == u64::MAX {
            break;
        }
    }
    c
}

/// Visits every `k`-subset of `entries` with its minimum quantity.
fn each_subset(entries: &[Entry], k: usize, buf: &mut Vec<Item>, min_q: u32, visit: &mut dyn FnMut(&[Item], u32)) {
    if buf.len() == k {
        visit(buf, min_q);
        return;
    }
    let need = k - buf.len();
    for p in 0..entries.len() {
        if entries.len() - p < need {
            break;
        }
        buf.push(entries[p].item);
        each_subset(&entries[p + 1..], k, buf, min_q.min(entries[p].quantity), visit);
        buf.pop();
    }
}

/// Single pass over the database: calls `hit(index, min_quantity, tu)` for
/// every itemset contained in every transaction.
///
/// Per transaction, whichever is cheaper: test the itemsets that start with
/// one of its items (indexed by first item), or enumerate its subsets of each
/// candidate length and look them up.
fn scan<'a, M, I>(db: &QuantitativeDatabase<M>, itemsets: I, budget: &Budget, mut hit: impl FnMut(usize, u32, M)) -> Result<(), MiningError>
where
    M: Utility,
    I: IntoIterator<Item = &'a Itemset>,
{
    let mut by_first: HashMap<Item, Vec<(u32, &'a [Item])>> = HashMap::new();
    let mut exact: HashMap<&'a [Item], u32> = HashMap::new();
    let mut lengths: Vec<usize> = Vec::new();
    for (n, x) in itemsets.into_iter().enumerate() {
        by_first.entry(x.items()[0]).or_default().push((n as u32, &x.items()[1..]));
        exact.insert(x.items(), n as u32);
        if !lengths.contains(&x.len()) {
            lengths.push(x.len());
        }
    }
    if by_first.is_empty() {
        return Ok(());
    }
    let mut buf = Vec::new();
    for (n, t) in db.transactions().iter().enumerate() {
        if n % POLL_EVERY == 0 {
            budget.check()?;
        }
        let entries = t.entries();
        let mut tu = None;
        let probes: u64 = entries.iter().map(|e| by_first.get(&e.item).map_or(0, |g| g.len() as u64)).sum();
        let subsets = lengths.iter().fold(0u64, |acc, &k| acc.saturating_add(choose(entries.len(), k)));
        if subsets < probes {
            for &k in &lengths {
                each_subset(entries, k, &mut buf, u32::MAX, &mut |items, q| {
                    if let Some(&idx) = exact.get(items) {
                        let tu = *tu.get_or_insert_with(|| db.transaction_utility(t));
                        hit(idx as usize, q, tu);
                    }
                });
            }
            continue;
        }
        for (p, e) in entries.iter().enumerate() {
            let Some(group) = by_first.get(&e.item) else { continue };
            let tail = &entries[p + 1..];
            for &(idx, rest) in group {
                if let Some(q) = occurrence_in(tail, rest) {
                    let tu = *tu.get_or_insert_with(|| db.transaction_utility(t));
                    hit(idx as usize, q.min(e.quantity), tu);
                }
            }
        }
    }
    Ok(())
}

/// Exact TWU and support for every itemset of one level, in one scan.
pub fn measure_level<M: Utility>(db: &QuantitativeDatabase<M>, level: &[Itemset]) -> Result<Vec<LevelCandidate<M>>, MiningError> {
    measure_level_within(db, level, &Budget::unlimited())
}

fn measure_level_within<M: Utility>(
    db: &QuantitativeDatabase<M>,
    level: &[Itemset],
    budget: &Budget,
) -> Result<Vec<LevelCandidate<M>>, MiningError> {
    if let Some(first) = level.first() {
        if level.iter().any(|x| x.len() != first.len()) {
            return Err(MiningError::Contract("level mixes itemset lengths".into()));
        }
    }
    let mut twu = vec![M::zero(); level.len()];
    let mut fre = vec![0u64; level.len()];
    scan(db, level, budget, |i, q, tu| {
        twu[i] = twu[i] + tu;
        fre[i] += q as u64;
    })?;
    Ok(level.iter().zip(twu.into_iter().zip(fre)).map(|(x, (twu, fre))| LevelCandidate { itemset: x.clone(), twu, fre }).collect())
}

/// An itemset that fails both thresholds on TWU and support is LFLUI along
/// with every superset. Itemsets that never occur are skipped as well.
fn admissible<M: Utility>(c: &LevelCandidate<M>, th: &Thresholds<M>) -> bool {
    c.fre > 0 && (c.twu >= th.min_util || c.fre >= th.min_fre)
}

/// Joins every pair of admitted itemsets that share a prefix. `admitted` is
/// lexicographically sorted, so each prefix group is a contiguous run.
fn next_level<M>(admitted: &[LevelCandidate<M>]) -> Vec<Itemset> {
    let mut next = Vec::new();
    let mut start = 0;
    while start < admitted.len() {
        let head = admitted[start].itemset.items();
        let prefix = &head[..head.len() - 1];
        let mut end = start + 1;
        while end < admitted.len() && &admitted[end].itemset.items()[..prefix.len()] == prefix {
            end += 1;
        }
        for i in start..end {
            for j in i + 1..end {
                let (a, b) = (&admitted[i].itemset, &admitted[j].itemset);
                let mut items = Vec::with_capacity(a.len() + 1);
                items.extend_from_slice(a.items());
                items.push(b.last());
                next.push(Itemset::from_sorted(items));
            }
        }
        start = end;
    }
    next
}

/// Phase I: level-wise candidate generation under TWU/support pruning.
pub fn phase1<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> Result<CandidatePool<M>, MiningError> {
    phase1_within(db, th, &Budget::unlimited())
}

pub fn phase1_within<M: Utility>(
    db: &QuantitativeDatabase<M>,
    th: &Thresholds<M>,
    budget: &Budget,
) -> Result<CandidatePool<M>, MiningError> {
    let mut pool = CandidatePool { members: Vec::new(), levels: Vec::new(), scans: 0 };
    let mut level: Vec<Itemset> = db.utilities().items().iter().map(|&i| Itemset::from_sorted(vec![i])).collect();
    while !level.is_empty() {
        let length = level[0].len();
        let measured = measure_level_within(db, &level, budget)?;
        pool.scans += 1;
        drop(level);
        let start = pool.members.len();
        let measured_count = measured.len();
        pool.members.extend(measured.into_iter().filter(|c| admissible(c, th)));
        pool.levels.push(LevelSummary { length, measured: measured_count, admitted: pool.members.len() - start });
        level = next_level(&pool.members[start..]);
    }
    Ok(pool)
}

/// Phase II: one more scan for exact utilities, then classification.
///
/// A member admitted through its TWU overestimate whose exact utility and
/// support both fall short is LFLUI and is discarded.
pub fn phase2<M: Utility>(
    db: &QuantitativeDatabase<M>,
    pool: &CandidatePool<M>,
    th: &Thresholds<M>,
) -> Result<ClassificationReport<M>, MiningError> {
    phase2_within(db, pool, th, &Budget::unlimited())
}

pub fn phase2_within<M: Utility>(
    db: &QuantitativeDatabase<M>,
    pool: &CandidatePool<M>,
    th: &Thresholds<M>,
    budget: &Budget,
) -> Result<ClassificationReport<M>, MiningError> {
    let table = db.utilities();
    let unit: Vec<M> = pool.members.iter().map(|m| table.sum_of(m.itemset.items()).unwrap_or_else(M::zero)).collect();
    let mut utility = vec![M::zero(); pool.members.len()];
    scan(db, pool.members.iter().map(|m| &m.itemset), budget, |i, q, _| {
        utility[i] = utility[i] + M::from_count(q as u64) * unit[i];
    })?;

    let mut report = ClassificationReport::default();
    for (member, u) in pool.members.iter().zip(utility) {
        report.record(member.itemset.clone(), u, member.fre, th);
    }
    report.normalize();
    report.stats.scans = 1;
    Ok(report)
}

/// Phase I followed by Phase II. Performs `levels + 1` scans.
pub fn run_gen<M: Utility>(db: &QuantitativeDatabase<M>, th: &Thresholds<M>) -> ClassificationReport<M> {
    run_gen_within(db, th, &Budget::unlimited()).expect("unlimited budget")
}

pub fn run_gen_within<M: Utility>(
    db: &QuantitativeDatabase<M>,
    th: &Thresholds<M>,
    budget: &Budget,
) -> Result<ClassificationReport<M>, MiningError> {
    let pool = phase1_within(db, th, budget)?;
    let mut report = phase2_within(db, &pool, th, budget)?;
    report.stats.scans += pool.scans;
    report.stats.level_sizes = pool.levels.iter().map(|l| l.measured as u64).collect();
    report.stats.candidates = pool.len() as u64;
    Ok(report)
}
