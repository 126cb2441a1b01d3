//! Subcommands and their exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use patclass_core::dataset::{self, DatasetError, GeneratorConfig};
use patclass_core::oracle::{OracleError, OracleLimit};
use patclass_core::{diff_reports, Database, MinThresholds, Report, Threshold, ThresholdSpec, Utility};
use rayon::prelude::*;
use thiserror::Error;

use crate::bench::{measure, Algo, Measured, RunFailure, RunStats, DEFAULT_TIMEOUT_SECS};
use crate::output::{grid_csv, CompareFile, CompareRun, GridRow, PairDiff, PatternLists, ReportFile, RunParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DIFF: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;
pub const EXIT_ORACLE_REFUSED: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "patclass", version, about = "Frequency/utility pattern classification benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine one dataset with one algorithm and write a JSON report.
    Run(RunArgs),
    /// Run every algorithm on one dataset and diff their outputs.
    Compare(CompareArgs),
    /// Run a grid of thresholds and write a CSV.
    Sweep(SweepArgs),
    /// Run growing prefixes of a dataset and write a CSV.
    Scale(ScaleArgs),
    /// Write a synthetic dataset in the native format.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Dataset path (native format, or SPMF with --spmf-utilities).
    pub dataset: PathBuf,
    /// Read `dataset` as SPMF utility-mining input, with item utilities from this file.
    #[arg(long, value_name = "PATH")]
    pub spmf_utilities: Option<PathBuf>,
    /// Per-run time budget in seconds.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT_SECS)]
    pub timeout: u64,
    /// Largest item universe the oracle will enumerate.
    #[arg(long, default_value_t = OracleLimit::default().max_items)]
    pub oracle_limit: usize,
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, default_value_t = Algo::Fast)]
    pub algo: Algo,
    /// Absolute utility (`120`) or share of total utility (`2.5%`).
    #[arg(long)]
    pub min_util: String,
    /// Absolute support (`4`) or share of transactions (`10%`).
    #[arg(long)]
    pub min_fre: String,
    #[arg(long)]
    pub emit_patterns: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long)]
    pub min_util: String,
    #[arg(long)]
    pub min_fre: String,
    /// Drop one pattern from the fast result before diffing.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gen,fast")]
    pub algo: Vec<Algo>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub min_util_list: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub min_fre_list: Vec<String>,
    /// Run grid cells concurrently. Memory figures become unreliable.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScaleArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "gen,fast")]
    pub algo: Vec<Algo>,
    #[arg(long)]
    pub min_util: String,
    #[arg(long)]
    pub min_fre: String,
    /// Ascending prefix sizes, e.g. `20000,40000,60000`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub slices: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub transactions: usize,
    #[arg(long)]
    pub items: u32,
    #[arg(long, default_value_t = 10)]
    pub avg_len: u32,
    #[arg(long, default_value_t = 5)]
    pub max_quantity: u32,
    #[arg(long, default_value_t = 1)]
    pub utility_min: u64,
    #[arg(long, default_value_t = 100)]
    pub utility_max: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    OracleRefused(#[from] OracleError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Dataset(DatasetError::Config(_)) => EXIT_USAGE,
            CliError::Dataset(_) => EXIT_PARSE,
            CliError::Write { .. } => EXIT_USAGE,
            CliError::OracleRefused(_) => EXIT_ORACLE_REFUSED,
        }
    }
}

/// `120` is absolute, `2.5%` is relative.
pub fn parse_util(token: &str) -> Result<Threshold<u64>, CliError> {
    parse_threshold(token, "min-util", |t| u64::parse_money(t, 0))
}

pub fn parse_fre(token: &str) -> Result<Threshold<u64>, CliError> {
    parse_threshold(token, "min-fre", |t| t.parse().ok())
}

fn parse_threshold(token: &str, flag: &str, absolute: impl Fn(&str) -> Option<u64>) -> Result<Threshold<u64>, CliError> {
    let token = token.trim();
    let bad = || CliError::Usage(format!("--{flag}: `{token}` is neither a non-negative integer nor a percentage"));
    match token.strip_suffix('%') {
        Some(pct) => {
            let f: f64 = pct.trim().parse().map_err(|_| bad())?;
            if !f.is_finite() || f < 0.0 {
                return Err(bad());
            }
            Ok(Threshold::Relative(f / 100.0))
        }
        None => absolute(token).map(Threshold::Absolute).ok_or_else(bad),
    }
}

fn resolve(db: &Database, min_util: &str, min_fre: &str) -> Result<MinThresholds, CliError> {
    let spec = ThresholdSpec { min_util: parse_util(min_util)?, min_fre: parse_fre(min_fre)? };
    spec.resolve(db).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn load(input: &Input) -> Result<Database, CliError> {
    Ok(match &input.spmf_utilities {
        Some(table) => {
            let table = dataset::parse_utility_table(table)?;
            dataset::import_spmf_huim(&input.dataset, &table)?
        }
        None => dataset::parse_native(&input.dataset)?,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn limit(input: &Input) -> OracleLimit {
    OracleLimit { max_items: input.oracle_limit }
}

fn timeout(input: &Input) -> Duration {
    Duration::from_secs(input.timeout)
}

/// Dispatches a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Run(a) => run(&a),
        Command::Compare(a) => compare(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Scale(a) => scale(&a),
        Command::Generate(a) => generate(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(a: &RunArgs) -> Result<i32, CliError> {
    let db = load(&a.input)?;
    let th = resolve(&db, &a.min_util, &a.min_fre)?;
    let params = RunParams {
        dataset: a.input.dataset.display().to_string(),
        algo: a.algo,
        min_util: a.min_util.clone(),
        min_fre: a.min_fre.clone(),
        min_util_abs: th.min_util,
        min_fre_abs: th.min_fre,
        transactions: db.len(),
        items: db.utilities().len(),
        timeout_secs: a.input.timeout,
    };
    let (file, code) = match measure(&db, a.algo, &th, timeout(&a.input), limit(&a.input)) {
        Ok(Measured { report, stats }) => {
            let patterns = a.emit_patterns.then(|| PatternLists::from_report(&report, &db));
            (ReportFile { params, status: "ok", stats, patterns }, EXIT_OK)
        }
        Err(RunFailure::TimedOut { stats }) => (ReportFile { params, status: "timeout", stats, patterns: None }, EXIT_TIMEOUT),
        Err(RunFailure::OracleRefused(e)) => return Err(e.into()),
    };
    emit(a.input.out.as_deref(), &to_json(&file))?;
    if code == EXIT_TIMEOUT {
        eprintln!("error: {} exceeded {}s", a.algo, a.input.timeout);
    }
    Ok(code)
}

pub fn compare(a: &CompareArgs) -> Result<i32, CliError> {
    let db = load(&a.input)?;
    let th = resolve(&db, &a.min_util, &a.min_fre)?;
    let mut runs = Vec::new();
    let mut reports: Vec<(Algo, Report)> = Vec::new();
    let mut timed_out = false;
    for algo in [Algo::Gen, Algo::Fast, Algo::Oracle] {
        match measure(&db, algo, &th, timeout(&a.input), limit(&a.input)) {
            Ok(Measured { mut report, stats }) => {
                if a.inject_fault && algo == Algo::Fast {
                    drop_one(&mut report);
                }
                runs.push(CompareRun { algo, status: "ok", stats: Some(stats) });
                reports.push((algo, report));
            }
            Err(RunFailure::TimedOut { stats }) => {
                timed_out = true;
                runs.push(CompareRun { algo, status: "timeout", stats: Some(stats) });
            }
            Err(RunFailure::OracleRefused(_)) => runs.push(CompareRun { algo, status: "skipped", stats: None }),
        }
    }
    let mut diffs = Vec::new();
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            let mut classes = diff_reports(&reports[i].1, &reports[j].1);
            classes.retain(|d| !d.is_empty());
            if !classes.is_empty() {
                diffs.push(PairDiff { left: reports[i].0, right: reports[j].0, classes });
            }
        }
    }
    let identical = diffs.is_empty();
    let file = CompareFile {
        dataset: a.input.dataset.display().to_string(),
        min_util_abs: th.min_util,
        min_fre_abs: th.min_fre,
        runs,
        diffs,
        identical,
    };
    emit(a.input.out.as_deref(), &to_json(&file))?;
    Ok(if !identical {
        EXIT_DIFF
    } else if timed_out {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    })
}

fn drop_one(report: &mut Report) {
    for class in [&mut report.hfhui, &mut report.hflui, &mut report.lfhui] {
        if class.pop().is_some() {
            return;
        }
    }
}

fn cell(db: &Database, algo: Algo, th: &MinThresholds, input: &Input) -> Result<(&'static str, RunStats), CliError> {
    match measure(db, algo, th, timeout(input), limit(input)) {
        Ok(m) => Ok(("ok", m.stats)),
        Err(RunFailure::TimedOut { stats }) => Ok(("timeout", stats)),
        Err(RunFailure::OracleRefused(e)) => Err(e.into()),
    }
}

pub fn sweep(a: &SweepArgs) -> Result<i32, CliError> {
    if a.algo.is_empty() || a.min_util_list.is_empty() || a.min_fre_list.is_empty() {
        return Err(CliError::Usage("sweep needs at least one algorithm, utility and frequency".into()));
    }
    let db = load(&a.input)?;
    let mut cells = Vec::new();
    for mu in &a.min_util_list {
        for mf in &a.min_fre_list {
            let th = resolve(&db, mu, mf)?;
            for &algo in &a.algo {
                cells.push((algo, mu.as_str(), mf.as_str(), th));
            }
        }
    }
    let one = |&(algo, mu, mf, th): &(Algo, &str, &str, MinThresholds)| {
        cell(&db, algo, &th, &a.input)
            .map(|(status, stats)| GridRow::new(algo, db.len(), mu, mf, (th.min_util, th.min_fre), status, &stats))
    };
    let rows: Vec<GridRow> =
        if a.parallel { cells.par_iter().map(one).collect::<Result<_, _>>()? } else { cells.iter().map(one).collect::<Result<_, _>>()? };
    finish_grid(a.input.out.as_deref(), &rows)
}

pub fn scale(a: &ScaleArgs) -> Result<i32, CliError> {
    if a.algo.is_empty() {
        return Err(CliError::Usage("scale needs at least one algorithm".into()));
    }
    let db = load(&a.input)?;
    let ascending = a.slices.windows(2).all(|w| w[0] < w[1]);
    if a.slices.is_empty() || !ascending || a.slices[0] == 0 || *a.slices.last().unwrap() > db.len() {
        return Err(CliError::Usage(format!("--slices must be strictly ascending, positive and at most {} (the dataset size)", db.len())));
    }
    let mut rows = Vec::new();
    for &n in &a.slices {
        let slice = db.prefix(n);
        let th = resolve(&slice, &a.min_util, &a.min_fre)?;
        for &algo in &a.algo {
            let (status, stats) = cell(&slice, algo, &th, &a.input)?;
            rows.push(GridRow::new(algo, n, &a.min_util, &a.min_fre, (th.min_util, th.min_fre), status, &stats));
        }
    }
    finish_grid(a.input.out.as_deref(), &rows)
}

fn finish_grid(out: Option<&Path>, rows: &[GridRow]) -> Result<i32, CliError> {
    let text = grid_csv(rows).map_err(|e| CliError::Usage(e.to_string()))?;
    emit(out, &text)?;
    Ok(if rows.iter().any(|r| r.status == "timeout") { EXIT_TIMEOUT } else { EXIT_OK })
}

pub fn generate(a: &GenerateArgs) -> Result<i32, CliError> {
    let cfg = GeneratorConfig {
        transaction_count: a.transactions,
        item_universe_size: a.items,
        average_transaction_length: a.avg_len,
        max_quantity: a.max_quantity,
        external_utility_range: (a.utility_min, a.utility_max),
        seed: a.seed,
    };
    let db: Database = dataset::generate(&cfg)?;
    dataset::write_native(&db, &a.out).map_err(|e| match e {
        DatasetError::Io { path, source } => CliError::Write { path, source },
        other => other.into(),
    })?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_parse() {
        assert_eq!(parse_util("120").unwrap(), Threshold::Absolute(120));
        assert_eq!(parse_util(" 2.5% ").unwrap(), Threshold::Relative(0.025));
        assert_eq!(parse_fre("200%").unwrap(), Threshold::Relative(2.0));
        assert_eq!(parse_fre("4").unwrap(), Threshold::Absolute(4));
        for bad in ["", "-1", "1.5", "x%", "-3%", "inf%"] {
            assert!(parse_fre(bad).is_err(), "{bad}");
        }
        assert!(parse_util("abc").is_err());
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Dataset(DatasetError::Config("x".into())).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Dataset(DatasetError::Parse { line: 1, message: "x".into() }).exit_code(), EXIT_PARSE);
        let refused = OracleError::UniverseTooLarge { items: 30, limit: 20 };
        assert_eq!(CliError::OracleRefused(refused).exit_code(), EXIT_ORACLE_REFUSED);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
