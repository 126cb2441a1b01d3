//! Timed, memory-metered algorithm runs.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use patclass_core::fulist::run_fast_within;
use patclass_core::levelwise::run_gen_within;
use patclass_core::oracle::{classify_all, OracleError, OracleLimit};
use patclass_core::{Budget, Database, MinThresholds, MiningError, Report};
use serde::Serialize;

use crate::alloc::HeapMeter;
use crate::rss::RssSampler;

/// Default per-run time budget in seconds.
pub const DEFAULT_TIMEOUT_SECS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Gen,
    Fast,
    Oracle,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Gen => "gen",
            Algo::Fast => "fast",
            Algo::Oracle => "oracle",
        })
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "gen" => Ok(Algo::Gen),
            "fast" => Ok(Algo::Fast),
            "oracle" => Ok(Algo::Oracle),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub wall_time_ms: f64,
    /// Peak heap growth during the run when heap accounting is active,
    /// otherwise peak RSS growth.
    pub peak_memory_bytes: u64,
    /// Highest resident set size sampled during the run.
    pub peak_rss_bytes: u64,
    /// Memory figures are best-effort measurements.
    pub memory_best_effort: bool,
    pub memory_source: &'static str,
    pub scan_count: u32,
    pub candidate_count: u64,
    pub fulist_count: u64,
    pub max_depth: u32,
    pub level_sizes: Vec<u64>,
    pub hfhui: usize,
    pub hflui: usize,
    pub lfhui: usize,
}

#[derive(Debug)]
pub enum RunFailure {
    TimedOut { stats: RunStats },
    OracleRefused(OracleError),
}

pub struct Measured {
    pub report: Report,
    pub stats: RunStats,
}

/// Runs `algo` once, recording wall time, heap growth and sampled RSS.
pub fn measure(db: &Database, algo: Algo, th: &MinThresholds, timeout: Duration, limit: OracleLimit) -> Result<Measured, RunFailure> {
    if algo == Algo::Oracle && db.utilities().len() > limit.max_items {
        return Err(RunFailure::OracleRefused(OracleError::UniverseTooLarge { items: db.utilities().len(), limit: limit.max_items }));
    }
    let budget = Budget::with_timeout(timeout);
    let rss_before = crate::rss::current_rss().unwrap_or(0);
    let sampler = RssSampler::start();
    let heap = HeapMeter::start();
    let started = Instant::now();
    let outcome: Result<Report, MiningError> = match algo {
        Algo::Gen => run_gen_within(db, th, &budget),
        Algo::Fast => run_fast_within(db, th, &budget),
        Algo::Oracle => Ok(classify_all(db, th, limit).expect("universe size checked above")),
    };
    let elapsed = started.elapsed();
    let heap_peak = heap.peak_growth();
    let rss_peak = sampler.finish();

    let mut stats =
        RunStats { wall_time_ms: elapsed.as_secs_f64() * 1e3, peak_rss_bytes: rss_peak, memory_best_effort: true, ..RunStats::default() };
    if HeapMeter::active() {
        stats.peak_memory_bytes = heap_peak;
        stats.memory_source = "heap";
    } else {
        stats.peak_memory_bytes = rss_peak.saturating_sub(rss_before);
        stats.memory_source = "rss";
    }

    match outcome {
        Ok(report) => {
            fill_counts(&mut stats, &report);
            Ok(Measured { report, stats })
        }
        Err(MiningError::TimedOut) => Err(RunFailure::TimedOut { stats }),
        Err(other) => panic!("miner contract violated: {other}"),
    }
}

fn fill_counts(stats: &mut RunStats, report: &Report) {
    let s = &report.stats;
    stats.scan_count = s.scans;
    stats.candidate_count = s.candidates;
    stats.fulist_count = s.fulists;
    stats.max_depth = s.max_depth;
    stats.level_sizes = s.level_sizes.clone();
    (stats.hfhui, stats.hflui, stats.lfhui) = report.counts();
}
