//! Small reference databases used by tests, examples and the CLI self-checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Entry, Item, QuantitativeDatabase, Transaction, UtilityTable};
use crate::scalar::Utility;

pub const A: Item = Item(1);
pub const B: Item = Item(2);
pub const C: Item = Item(3);
pub const D: Item = Item(4);
pub const E: Item = Item(5);
pub const F: Item = Item(6);
pub const G: Item = Item(7);

/// Seven items `A..G` (ids 1..7) over five transactions.
///
/// | tid | transaction                     | TU  |
/// |-----|---------------------------------|-----|
/// | 1   | (A,1) (B,2) (C,1)               | 13  |
/// | 2   | (A,2) (B,3) (F,2)               | 23  |
/// | 3   | (B,2) (D,2) (E,2)               | 16  |
/// | 4   | (C,2) (D,1) (F,1) (G,3)         | 10  |
/// | 5   | (B,1) (C,2) (F,2) (G,1)         | 12  |
///
/// External utilities: A=5 B=3 C=2 D=1 E=4 F=2 G=1.
pub fn running_example() -> QuantitativeDatabase<u64> {
    running_example_in()
}

/// [`running_example`] over any money scalar.
pub fn running_example_in<M: Utility>() -> QuantitativeDatabase<M> {
    let mut table = UtilityTable::new();
    for (item, v, label) in [(A, 5, "A"), (B, 3, "B"), (C, 2, "C"), (D, 1, "D"), (E, 4, "E"), (F, 2, "F"), (G, 1, "G")] {
        table.insert(item, M::from_count(v), Some(label.to_string())).expect("distinct items");
    }
    let rows: [&[(Item, u32)]; 5] = [
        &[(A, 1), (B, 2), (C, 1)],
        &[(A, 2), (B, 3), (F, 2)],
        &[(B, 2), (D, 2), (E, 2)],
        &[(C, 2), (D, 1), (F, 1), (G, 3)],
        &[(B, 1), (C, 2), (F, 2), (G, 1)],
    ];
    let transactions = rows
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let entries = row.iter().map(|&(item, quantity)| Entry { item, quantity }).collect();
            Transaction::new(n as u32 + 1, entries).expect("valid row")
        })
        .collect();
    QuantitativeDatabase::new(transactions, table).expect("valid example")
}

/// Shape of a small random database for differential testing.
#[derive(Debug, Clone, Copy)]
pub struct SmallDbShape {
    pub max_items: u32,
    pub max_transactions: u32,
    pub max_quantity: u32,
    pub max_utility: u64,
}

impl Default for SmallDbShape {
    fn default() -> Self {
        SmallDbShape { max_items: 8, max_transactions: 12, max_quantity: 5, max_utility: 10 }
    }
}

/// Uniformly random database: 1..=max_items items, 1..=max_transactions
/// transactions, each item present with probability 1/2.
pub fn random_database(seed: u64, shape: SmallDbShape) -> QuantitativeDatabase<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_items = rng.random_range(1..=shape.max_items);
    let n_txns = rng.random_range(1..=shape.max_transactions);
    let table =
        UtilityTable::from_pairs((1..=n_items).map(|i| (Item(i), rng.random_range(1..=shape.max_utility)))).expect("distinct items");
    let transactions = (1..=n_txns)
        .map(|tid| {
            let mut entries = Vec::new();
            for i in 1..=n_items {
                if rng.random_bool(0.5) {
                    entries.push(Entry { item: Item(i), quantity: rng.random_range(1..=shape.max_quantity) });
                }
            }
            Transaction::new(tid, entries).expect("distinct items")
        })
        .collect();
    QuantitativeDatabase::new(transactions, table).expect("valid database")
}
