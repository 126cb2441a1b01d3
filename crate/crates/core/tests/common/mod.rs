#![allow(dead_code)]

use patclass_core::model::{Entry, Item, QuantitativeDatabase, Transaction, UtilityTable};
use patclass_core::Itemset;
use proptest::prelude::*;

/// Random database with up to `max_items` items and `max_txns` transactions,
/// quantities in 1..=5 and utilities in 1..=10.
pub fn arb_database(max_items: u32, max_txns: usize) -> impl Strategy<Value = QuantitativeDatabase<u64>> {
    (1..=max_items).prop_flat_map(move |n| {
        let utils = prop::collection::vec(1u64..=10, n as usize);
        let row = prop::collection::vec(prop::option::of(1u32..=5), n as usize);
        let rows = prop::collection::vec(row, 0..=max_txns);
        (utils, rows).prop_map(|(utils, rows)| {
            let table = UtilityTable::from_pairs(utils.iter().enumerate().map(|(i, &v)| (Item(i as u32 + 1), v))).unwrap();
            let transactions = rows
                .iter()
                .enumerate()
                .map(|(t, row)| {
                    let entries = row
                        .iter()
                        .enumerate()
                        .filter_map(|(i, q)| q.map(|quantity| Entry { item: Item(i as u32 + 1), quantity }))
                        .collect();
                    Transaction::new(t as u32 + 1, entries).unwrap()
                })
                .collect();
            QuantitativeDatabase::new(transactions, table).unwrap()
        })
    })
}

/// Every non-empty subset of the database's item universe.
pub fn all_itemsets<M: patclass_core::Utility>(db: &QuantitativeDatabase<M>) -> Vec<Itemset> {
    let universe = db.utilities().items();
    (1u64..(1 << universe.len()))
        .map(|mask| Itemset::new((0..universe.len()).filter(|b| mask >> b & 1 == 1).map(|b| universe[b]).collect()).unwrap())
        .collect()
}
