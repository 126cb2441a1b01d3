//! Seeded synthetic databases with Zipf-distributed item popularity.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};

use super::DatasetError;
use crate::model::{Entry, Item, QuantitativeDatabase, Transaction, UtilityTable};
use crate::scalar::Utility;

/// Exponent of the item popularity distribution.
pub const ZIPF_EXPONENT: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub transaction_count: usize,
    pub item_universe_size: u32,
    pub average_transaction_length: u32,
    pub max_quantity: u32,
    /// Inclusive range of external utilities.
    pub external_utility_range: (u64, u64),
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(transaction_count: usize, item_universe_size: u32, average_transaction_length: u32, seed: u64) -> Self {
        GeneratorConfig {
            transaction_count,
            item_universe_size,
            average_transaction_length,
            max_quantity: 5,
            external_utility_range: (1, 100),
            seed,
        }
    }

    fn validate(&self) -> Result<(), DatasetError> {
        let (lo, hi) = self.external_utility_range;
        let fail = |m: &str| Err(DatasetError::Config(m.to_string()));
        if self.transaction_count == 0 || self.item_universe_size == 0 || self.average_transaction_length == 0 {
            return fail("counts and lengths must be positive");
        }
        if self.average_transaction_length > self.item_universe_size {
            return fail("average transaction length exceeds the item universe");
        }
        if self.max_quantity == 0 {
            return fail("max_quantity must be positive");
        }
        if lo == 0 || lo > hi {
            return fail("external utility range must be positive and ordered");
        }
        Ok(())
    }
}

/// Item ids are `1..=item_universe_size`; popularity ranks are assigned to
/// ids by a seeded shuffle. Transaction lengths are `1 + Poisson(avg - 1)`
/// capped at the universe size. Quantities and utilities are uniform.
pub fn generate<M: Utility>(cfg: &GeneratorConfig) -> Result<QuantitativeDatabase<M>, DatasetError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_items = cfg.item_universe_size;
    let (lo, hi) = cfg.external_utility_range;

    let mut by_rank: Vec<u32> = (1..=n_items).collect();
    by_rank.shuffle(&mut rng);
    let table = UtilityTable::from_pairs((1..=n_items).map(|i| (Item(i), M::from_count(rng.random_range(lo..=hi)))))?;

    let zipf = Zipf::new(n_items as f64, ZIPF_EXPONENT).map_err(|e| DatasetError::Config(e.to_string()))?;
    let extra = cfg.average_transaction_length - 1;
    let poisson = if extra > 0 { Some(Poisson::new(extra as f64).map_err(|e| DatasetError::Config(e.to_string()))?) } else { None };

    let mut taken = vec![false; n_items as usize];
    let mut transactions = Vec::with_capacity(cfg.transaction_count);
    for tid in 1..=cfg.transaction_count as u32 {
        let extra_len = poisson.as_ref().map_or(0, |p| p.sample(&mut rng) as u32);
        let len = (1 + extra_len).min(n_items) as usize;
        let mut ranks = Vec::with_capacity(len);
        let mut attempts = 0;
        while ranks.len() < len && attempts < 64 * len {
            attempts += 1;
            let rank = zipf.sample(&mut rng) as usize - 1;
            if !taken[rank] {
                taken[rank] = true;
                ranks.push(rank);
            }
        }
        // Rare when len approaches the universe size: fill uniformly.
        while ranks.len() < len {
            let rank = rng.random_range(0..n_items as usize);
            if !taken[rank] {
                taken[rank] = true;
                ranks.push(rank);
            }
        }
        let entries = ranks
            .iter()
            .map(|&r| {
                taken[r] = false;
                Entry { item: Item(by_rank[r]), quantity: rng.random_range(1..=cfg.max_quantity) }
            })
            .collect();
        transactions.push(Transaction::new(tid, entries)?);
    }
    Ok(QuantitativeDatabase::new(transactions, table)?)
}
