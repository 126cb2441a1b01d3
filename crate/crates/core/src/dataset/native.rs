//! Line-oriented native format.
//!
//! ```text
//! @SCALE 2            optional; money tokens carry up to 2 decimals
//! @ITEM 1 5 A         item id, external utility, optional label
//! @ITEM 2 3 B
//! 1:1 2:2             one transaction per line: item:quantity ...
//!
//! 2:2                 an empty line is an empty transaction
//! ```
//!
//! Header lines precede all transactions. Lines starting with `#` are
//! comments. Transactions get tids `1..=n` in file order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::DatasetError;
use crate::model::{Entry, Item, ModelError, QuantitativeDatabase, Transaction, UtilityTable};
use crate::scalar::Utility;

pub fn parse_native<M: Utility>(path: impl AsRef<Path>) -> Result<QuantitativeDatabase<M>, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DatasetError::io(path, e))?;
    parse_native_str(&text)
}

fn parse_number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, DatasetError> {
    token.parse().map_err(|_| DatasetError::parse(line, format!("invalid {what} `{token}`")))
}

pub fn parse_native_str<M: Utility>(text: &str) -> Result<QuantitativeDatabase<M>, DatasetError> {
    let mut table = UtilityTable::new();
    let mut scale = 0u32;
    let mut transactions: Vec<Transaction> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('@') {
            if !transactions.is_empty() {
                return Err(DatasetError::parse(line_no, "header line after the first transaction"));
            }
            let mut tokens = rest.split_whitespace();
            match tokens.next() {
                Some("SCALE") => {
                    if !table.is_empty() {
                        return Err(DatasetError::parse(line_no, "@SCALE must precede @ITEM lines"));
                    }
                    let digits = tokens.next().ok_or_else(|| DatasetError::parse(line_no, "@SCALE needs a digit count"))?;
                    scale = parse_number(digits, line_no, "scale")?;
                    if scale > 18 {
                        return Err(DatasetError::parse(line_no, "@SCALE is limited to 18 digits"));
                    }
                }
                Some("ITEM") => {
                    let (Some(id), Some(value)) = (tokens.next(), tokens.next()) else {
                        return Err(DatasetError::parse(line_no, "expected `@ITEM <id> <utility> [label]`"));
                    };
                    let item = Item(parse_number(id, line_no, "item id")?);
                    let value =
                        M::parse_money(value, scale).ok_or_else(|| DatasetError::parse(line_no, format!("invalid utility `{value}`")))?;
                    let label = tokens.next().map(str::to_string);
                    if tokens.next().is_some() {
                        return Err(DatasetError::parse(line_no, "trailing tokens after label"));
                    }
                    table.insert(item, value, label).map_err(|e| DatasetError::parse(line_no, e.to_string()))?;
                }
                _ => return Err(DatasetError::parse(line_no, format!("unknown directive `{line}`"))),
            }
            continue;
        }
        let tid = transactions.len() as u32 + 1;
        let mut entries = Vec::new();
        for token in line.split_whitespace() {
            let (id, qty) =
                token.split_once(':').ok_or_else(|| DatasetError::parse(line_no, format!("expected `item:quantity`, got `{token}`")))?;
            let item = Item(parse_number(id, line_no, "item id")?);
            let quantity: u32 = parse_number(qty, line_no, "quantity")?;
            if table.get(item).is_none() {
                return Err(DatasetError::parse(line_no, format!("item {item} is not declared")));
            }
            entries.push(Entry { item, quantity });
        }
        transactions.push(Transaction::new(tid, entries).map_err(|e| DatasetError::parse(line_no, e.to_string()))?);
    }
    if table.is_empty() {
        return Err(ModelError::EmptyUniverse.into());
    }
    Ok(QuantitativeDatabase::new(transactions, table)?)
}

/// Renders a database in the native format, money at scale 0.
pub fn to_native_string<M: Utility>(db: &QuantitativeDatabase<M>) -> String {
    let mut out = String::new();
    for (item, value, label) in db.utilities().iter() {
        let _ = write!(out, "@ITEM {item} {}", value.format_money(0));
        if let Some(label) = label {
            let _ = write!(out, " {label}");
        }
        out.push('\n');
    }
    for t in db.transactions() {
        for (n, e) in t.entries().iter().enumerate() {
            if n > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}:{}", e.item, e.quantity);
        }
        out.push('\n');
    }
    out
}

pub fn write_native<M: Utility>(db: &QuantitativeDatabase<M>, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    fs::write(path, to_native_string(db)).map_err(|e| DatasetError::io(path, e))
}
