//! SPMF high-utility transaction format.
//!
//! Each line is `items : TU : utilities`, where `utilities[i]` is the
//! utility `q × v` of `items[i]` in that transaction. The format does not
//! carry quantities, so importing needs the external-utility table that
//! produced the file.

use std::fs;
use std::path::Path;

use super::DatasetError;
use crate::model::{Entry, Item, QuantitativeDatabase, Transaction, UtilityTable};
use crate::scalar::Utility;

fn is_metadata(line: &str) -> bool {
    line.is_empty() || line.starts_with('#') || line.starts_with('%') || line.starts_with('@')
}

pub fn import_spmf_huim<M: Utility>(path: impl AsRef<Path>, table: &UtilityTable<M>) -> Result<QuantitativeDatabase<M>, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    import_spmf_huim_str(&text, table)
}

pub fn import_spmf_huim_str<M: Utility>(text: &str, table: &UtilityTable<M>) -> Result<QuantitativeDatabase<M>, DatasetError> {
    let mut transactions = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if is_metadata(line) {
            continue;
        }
        let fields: Vec<&str> = line.split(':').collect();
        let [items, tu, utils] = fields.as_slice() else {
            return Err(DatasetError::parse(line_no, "expected `items : TU : utilities`"));
        };
        let items: Vec<&str> = items.split_whitespace().collect();
        let utils: Vec<&str> = utils.split_whitespace().collect();
        if items.len() != utils.len() {
            return Err(DatasetError::parse(line_no, format!("{} items but {} utilities", items.len(), utils.len())));
        }
        let declared_tu = M::parse_money(tu.trim(), 0)
            .ok_or_else(|| DatasetError::parse(line_no, format!("invalid transaction utility `{}`", tu.trim())))?;
        let mut entries = Vec::with_capacity(items.len());
        let mut recomputed = M::zero();
        for (id, util) in items.iter().zip(&utils) {
            let item = Item(id.parse().map_err(|_| DatasetError::parse(line_no, format!("invalid item id `{id}`")))?);
            let util = M::parse_money(util, 0).ok_or_else(|| DatasetError::parse(line_no, format!("invalid utility `{util}`")))?;
            let v = table.get(item).ok_or_else(|| DatasetError::parse(line_no, format!("item {item} missing from the utility table")))?;
            let quantity = util
                .exact_quotient(v)
                .and_then(|q| u32::try_from(q).ok())
                .ok_or_else(|| DatasetError::parse(line_no, format!("utility {util} of item {item} is not a multiple of {v}")))?;
            recomputed = recomputed + M::from_count(quantity as u64) * v;
            entries.push(Entry { item, quantity });
        }
        if recomputed != declared_tu {
            return Err(DatasetError::parse(line_no, format!("TU field {declared_tu} but utilities sum to {recomputed}")));
        }
        let tid = transactions.len() as u32 + 1;
        transactions.push(Transaction::new(tid, entries).map_err(|e| DatasetError::parse(line_no, e.to_string()))?);
    }
    Ok(QuantitativeDatabase::new(transactions, table.clone())?)
}

/// Reads `<item> <utility> [label]` lines; `#` starts a comment line.
pub fn parse_utility_table<M: Utility>(path: impl AsRef<Path>) -> Result<UtilityTable<M>, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_utility_table_str(&text)
}

pub fn parse_utility_table_str<M: Utility>(text: &str) -> Result<UtilityTable<M>, DatasetError> {
    let mut table = UtilityTable::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(id), Some(value)) = (tokens.next(), tokens.next()) else {
            return Err(DatasetError::parse(line_no, "expected `<item> <utility> [label]`"));
        };
        let item = Item(id.parse().map_err(|_| DatasetError::parse(line_no, format!("invalid item id `{id}`")))?);
        let value = M::parse_money(value, 0).ok_or_else(|| DatasetError::parse(line_no, format!("invalid utility `{value}`")))?;
        table.insert(item, value, tokens.next().map(str::to_string)).map_err(|e| DatasetError::parse(line_no, e.to_string()))?;
    }
    Ok(table)
}
