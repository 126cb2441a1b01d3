//! JSON reports and CSV grid rows.

use patclass_core::{ClassDiff, Database, Pattern, Report};
use serde::Serialize;

use crate::bench::{Algo, RunStats};

#[derive(Debug, Clone, Serialize)]
pub struct RunParams {
    pub dataset: String,
    pub algo: Algo,
    pub min_util: String,
    pub min_fre: String,
    pub min_util_abs: u64,
    pub min_fre_abs: u64,
    pub transactions: usize,
    pub items: usize,
    pub timeout_secs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternOut {
    pub items: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub utility: u64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternLists {
    #[serde(rename = "HFHUI")]
    pub hfhui: Vec<PatternOut>,
    #[serde(rename = "HFLUI")]
    pub hflui: Vec<PatternOut>,
    #[serde(rename = "LFHUI")]
    pub lfhui: Vec<PatternOut>,
}

impl PatternLists {
    pub fn from_report(report: &Report, db: &Database) -> Self {
        let convert = |ps: &[Pattern]| {
            ps.iter()
                .map(|p| PatternOut {
                    items: p.itemset.items().iter().map(|i| i.0).collect(),
                    label: db.label_of(&p.itemset),
                    utility: p.utility,
                    support: p.support,
                })
                .collect()
        };
        PatternLists { hfhui: convert(&report.hfhui), hflui: convert(&report.hflui), lfhui: convert(&report.lfhui) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub params: RunParams,
    pub status: &'static str,
    pub stats: RunStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patterns: Option<PatternLists>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRun {
    pub algo: Algo,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<RunStats>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairDiff {
    pub left: Algo,
    pub right: Algo,
    pub classes: Vec<ClassDiff>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareFile {
    pub dataset: String,
    pub min_util_abs: u64,
    pub min_fre_abs: u64,
    pub runs: Vec<CompareRun>,
    pub diffs: Vec<PairDiff>,
    pub identical: bool,
}

/// One CSV row of a sweep or scale grid.
#[derive(Debug, Clone, Serialize)]
pub struct GridRow {
    pub algo: Algo,
    pub transactions: usize,
    pub min_util: String,
    pub min_fre: String,
    pub min_util_abs: u64,
    pub min_fre_abs: u64,
    pub status: &'static str,
    pub wall_time_ms: f64,
    pub peak_memory_bytes: u64,
    pub peak_rss_bytes: u64,
    pub scan_count: u32,
    pub candidate_count: u64,
    pub fulist_count: u64,
    pub hfhui: usize,
    pub hflui: usize,
    pub lfhui: usize,
}

impl GridRow {
    pub fn new(
        algo: Algo,
        transactions: usize,
        min_util: &str,
        min_fre: &str,
        abs: (u64, u64),
        status: &'static str,
        stats: &RunStats,
    ) -> Self {
        GridRow {
            algo,
            transactions,
            min_util: min_util.to_string(),
            min_fre: min_fre.to_string(),
            min_util_abs: abs.0,
            min_fre_abs: abs.1,
            status,
            wall_time_ms: stats.wall_time_ms,
            peak_memory_bytes: stats.peak_memory_bytes,
            peak_rss_bytes: stats.peak_rss_bytes,
            scan_count: stats.scan_count,
            candidate_count: stats.candidate_count,
            fulist_count: stats.fulist_count,
            hfhui: stats.hfhui,
            hflui: stats.hflui,
            lfhui: stats.lfhui,
        }
    }
}

pub fn grid_csv(rows: &[GridRow]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
