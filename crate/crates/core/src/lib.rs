//! Classification of itemsets in quantitative transaction databases by
//! frequency and utility.
//!
//! Every itemset `X` falls into one of four classes by crossing its utility
//! `U(X)` with `min_util` and its support `S(X)` with `min_fre`:
//! high-frequency/high-utility (HFHUI), high-frequency/low-utility (HFLUI),
//! low-frequency/high-utility (LFHUI) and the discarded LFLUI.
//!
//! Two miners produce the three reported classes:
//!
//! * [`levelwise::run_gen`] generates candidates level by level under TWU and
//!   support pruning, then rescans for exact utilities.
//! * [`fulist::run_fast`] builds frequency-utility lists in two scans and
//!   searches depth-first without candidate generation.
//!
//! [`oracle::classify_all`] enumerates every itemset and serves as ground
//! truth for small databases.
//!
//! Core types are generic over the money scalar ([`Utility`]); the aliases
//! below fix it to `u64` smallest currency units.

pub mod control;
pub mod dataset;
pub mod fixtures;
pub mod fulist;
pub mod levelwise;
pub mod model;
pub mod oracle;
pub mod report;
pub mod scalar;

pub use control::{Budget, MiningError};
pub use model::{classify, Entry, Item, Itemset, ModelError, PatternClass, Threshold, ThresholdSpec, Thresholds, Transaction};
pub use report::{diff_reports, ClassDiff, ClassificationReport, ClassifiedPattern, MiningStats};
pub use scalar::Utility;

/// Money in integer smallest currency units.
pub type Money = u64;
pub type Database = model::QuantitativeDatabase<Money>;
pub type UtilityTable = model::UtilityTable<Money>;
pub type Report = ClassificationReport<Money>;
pub type Pattern = ClassifiedPattern<Money>;
pub type MinThresholds = Thresholds<Money>;
