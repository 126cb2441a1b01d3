//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use patclass_core::fixtures::{random_database, running_example, SmallDbShape, A, B, C, D, E, G};
use patclass_core::fulist::{build_revised, extend, measures_of, run_fast, run_fast_traced, FuList, TwuOrder};
use patclass_core::levelwise::{phase1, run_gen};
use patclass_core::model::Item;
use patclass_core::oracle::{classify_all, OracleLimit};
use patclass_core::{diff_reports, ClassDiff, Database, Itemset, PatternClass, Report, Thresholds};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_patclass");

/// Generated benchmark dataset.
const GEN_TRANSACTIONS: usize = 100_000;
const GEN_ITEMS: u32 = 1_000;
const GEN_AVG_LEN: u32 = 10;
const GEN_SEED: u64 = 42;
/// Both miners finish well inside the timeout here, and the level-wise
/// candidate pool is large enough to matter.
const BENCH_MIN_UTIL: &str = "0.2%";
const BENCH_MIN_FRE: &str = "2%";
const BENCH_TIMEOUT_SECS: u64 = 300;
const SLICES: &str = "20000,40000,60000,80000";

const FAST_TO_GEN_MAX_RATIO: f64 = 0.5;
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const BENCH_BUDGET: Duration = Duration::from_secs(600);
const CORPUS_SEEDS: u64 = 200;

type Verdict = Result<String, String>;
/// tid, (item, quantity) entries, transaction utility.
type RevisedRow = (u32, Vec<(Item, u32)>, u64);

fn set(items: &[Item]) -> Itemset {
    Itemset::new(items.to_vec()).unwrap()
}

fn thresholds_for(db: &Database) -> [Thresholds<u64>; 3] {
    let total = db.total_utility();
    let n = db.len() as u64;
    [Thresholds::new(total / 10, (n / 4).max(1)), Thresholds::new(total / 4, n / 2 + 1), Thresholds::new(total / 30 + 1, 2)]
}

fn corpus() -> impl Iterator<Item = (u64, Database)> {
    (0..CORPUS_SEEDS).map(|seed| (seed, random_database(seed, SmallDbShape::default())))
}

fn identical(a: &Report, b: &Report) -> bool {
    diff_reports(a, b).iter().all(ClassDiff::is_empty)
}

fn within(started: Instant, budget: Duration, detail: String) -> Verdict {
    let took = started.elapsed();
    if took < budget {
        Ok(format!("{detail}; {:.2}s", took.as_secs_f64()))
    } else {
        Err(format!("{detail}; took {:.2}s, budget {:.0}s", took.as_secs_f64(), budget.as_secs_f64()))
    }
}

fn golden_running_example() -> Verdict {
    let started = Instant::now();
    let db = running_example();
    let th = Thresholds::new(15, 3);
    let oracle = classify_all(&db, &th, OracleLimit::default()).map_err(|e| e.to_string())?;
    let fast = run_fast(&db, &th);
    let gen = run_gen(&db, &th);
    let anchors = [
        (set(&[A]), 15, 3, PatternClass::HighFreqHighUtil),
        (set(&[B]), 24, 8, PatternClass::HighFreqHighUtil),
        (set(&[A, B]), 24, 3, PatternClass::HighFreqHighUtil),
        (set(&[B, D, E]), 16, 2, PatternClass::LowFreqHighUtil),
    ];
    for (x, u, s, class) in anchors {
        for (name, r) in [("fast", &fast), ("gen", &gen)] {
            match r.find(&x) {
                Some(p) if (p.utility, p.support, p.class) == (u, s, class) => {}
                other => return Err(format!("{name}: {x} expected (${u}, {s}, {}), got {other:?}", class.code())),
            }
        }
    }
    if !identical(&fast, &oracle) || !identical(&gen, &oracle) {
        return Err("miner output differs from the oracle".into());
    }
    within(started, GOLDEN_BUDGET, format!("counts {:?} match oracle", oracle.counts()))
}

fn revised_transactions() -> Verdict {
    let started = Instant::now();
    let db = running_example();
    let rev = build_revised(&db, &Thresholds::new(30, 4));
    let expected: Vec<RevisedRow> = vec![
        (1, vec![(C, 1), (A, 1), (B, 2)], 13),
        (2, vec![(A, 2), (B, 3)], 19),
        (3, vec![(B, 2)], 6),
        (4, vec![(G, 3), (C, 2)], 7),
        (5, vec![(G, 1), (C, 2), (B, 1)], 8),
    ];
    let got: Vec<RevisedRow> =
        rev.database.transactions.iter().map(|t| (t.tid, t.entries.iter().map(|e| (e.item, e.quantity)).collect(), t.tu)).collect();
    let mut mismatches = Vec::new();
    for (n, (tid, entries, tu)) in expected.iter().enumerate() {
        match got.get(n) {
            Some((gt, ge, gu)) if gt == tid && ge == entries && gu == tu => {}
            Some((gt, ge, gu)) => mismatches.push(format!("T{tid}: expected {} ${tu}, got T{gt} {} ${gu}", render(entries), render(ge))),
            None => mismatches.push(format!("T{tid}: missing")),
        }
    }
    if got.len() != expected.len() {
        mismatches.push(format!("{} revised transactions, expected {}", got.len(), expected.len()));
    }
    if !mismatches.is_empty() {
        return Err(mismatches.join("; "));
    }
    within(started, GOLDEN_BUDGET, "all five rows match".into())
}

fn render(entries: &[(Item, u32)]) -> String {
    let names = ["?", "A", "B", "C", "D", "E", "F", "G"];
    entries.iter().map(|(i, q)| format!("({},{q})", names.get(i.0 as usize).unwrap_or(&"?"))).collect::<Vec<_>>().join("")
}

fn differential_equivalence() -> Verdict {
    let started = Instant::now();
    let mut runs = 0;
    for (seed, db) in corpus() {
        for th in thresholds_for(&db) {
            let oracle = classify_all(&db, &th, OracleLimit::default()).map_err(|e| e.to_string())?;
            if !identical(&run_gen(&db, &th), &oracle) {
                return Err(format!("seed {seed}: gen differs from oracle at {th:?}"));
            }
            if !identical(&run_fast(&db, &th), &oracle) {
                return Err(format!("seed {seed}: fast differs from oracle at {th:?}"));
            }
            runs += 1;
        }
    }
    within(started, CORPUS_BUDGET, format!("{runs} (database, thresholds) pairs agree"))
}

fn pruning_safety() -> Verdict {
    let mut checked = 0;
    for (seed, db) in corpus() {
        for th in thresholds_for(&db) {
            let oracle = classify_all(&db, &th, OracleLimit::default()).map_err(|e| e.to_string())?;
            let pool = phase1(&db, &th).map_err(|e| e.to_string())?;
            let pooled: HashSet<&Itemset> = pool.members.iter().map(|m| &m.itemset).collect();
            let (_, visited) = run_fast_traced(&db, &th);
            let visited: HashSet<Itemset> = visited.into_iter().collect();
            for p in oracle.patterns() {
                if !pooled.contains(&p.itemset) {
                    return Err(format!("seed {seed} {th:?}: {} missing from the level-wise pool", p.itemset));
                }
                if !visited.contains(&p.itemset) {
                    return Err(format!("seed {seed} {th:?}: {} never visited by the FU-list search", p.itemset));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} reported itemsets, zero misses"))
}

fn all_itemsets(items: &[Item]) -> Vec<Itemset> {
    (1u32..1 << items.len())
        .map(|mask| Itemset::new(items.iter().enumerate().filter(|(n, _)| mask >> n & 1 == 1).map(|(_, &i)| i).collect()).unwrap())
        .collect()
}

fn reachable(
    lists: &[FuList<u64>],
    order: &TwuOrder,
    out: &mut Vec<(FuList<u64>, Option<usize>)>,
    parent: Option<usize>,
) -> Result<(), String> {
    for (i, x) in lists.iter().enumerate() {
        out.push((x.clone(), parent));
        let me = out.len() - 1;
        let mut ext = Vec::new();
        for y in &lists[i + 1..] {
            let l = extend(x, y, order).map_err(|e| e.to_string())?;
            if !l.is_empty() {
                ext.push(l);
            }
        }
        reachable(&ext, order, out, Some(me))?;
    }
    Ok(())
}

fn bound_properties() -> Verdict {
    let (mut twu_checks, mut rutil_checks, mut support_checks) = (0u64, 0u64, 0u64);
    for (seed, db) in corpus() {
        let items = db.utilities().items().to_vec();
        for x in all_itemsets(&items) {
            let (u, s) = (db.itemset_utility(&x), db.itemset_support(&x));
            if db.twu(&x) < u {
                return Err(format!("seed {seed}: TWU({x}) < U({x})"));
            }
            twu_checks += 1;
            for &i in &items {
                if x.items().contains(&i) {
                    continue;
                }
                let mut bigger = x.items().to_vec();
                bigger.push(i);
                let sup = Itemset::new(bigger).unwrap();
                if db.itemset_support(&sup) > s {
                    return Err(format!("seed {seed}: S({sup}) > S({x})"));
                }
                support_checks += 1;
            }
        }
        let mut grid = thresholds_for(&db).to_vec();
        grid.push(Thresholds::new(0, 0));
        for th in grid {
            let rev = build_revised(&db, &th);
            let mut nodes = Vec::new();
            reachable(&rev.lists, &rev.order, &mut nodes, None)?;
            for (list, parent) in &nodes {
                let Some(p) = parent else { continue };
                let pm = measures_of(&nodes[*p].0);
                let m = measures_of(list);
                if pm.utility + pm.rutil_total < m.utility {
                    return Err(format!("seed {seed} {th:?}: U+rutil of {} below U of {}", nodes[*p].0.itemset(), list.itemset()));
                }
                rutil_checks += 1;
            }
        }
    }
    Ok(format!("{twu_checks} TWU, {rutil_checks} remaining-utility, {support_checks} support checks, zero violations"))
}

fn patclass(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(BIN).args(args).output().map_err(|e| format!("cannot launch {BIN}: {e}"))
}

fn expect_success(args: &[&str]) -> Result<(), String> {
    let out = patclass(args)?;
    if out.status.code() != Some(0) {
        return Err(format!(
            "`patclass {}` exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    Ok(())
}

fn generated_dataset(dir: &Path) -> Result<String, String> {
    let path = dir.join("generated.txt");
    let p = path.to_str().unwrap().to_string();
    expect_success(&[
        "generate",
        "--transactions",
        &GEN_TRANSACTIONS.to_string(),
        "--items",
        &GEN_ITEMS.to_string(),
        "--avg-len",
        &GEN_AVG_LEN.to_string(),
        "--seed",
        &GEN_SEED.to_string(),
        "--out",
        &p,
    ])?;
    Ok(p)
}

fn run_json(dataset: &str, algo: &str, dir: &Path) -> Result<Value, String> {
    let out = dir.join(format!("{algo}.json"));
    let timeout = BENCH_TIMEOUT_SECS.to_string();
    expect_success(&[
        "run",
        dataset,
        "--algo",
        algo,
        "--min-util",
        BENCH_MIN_UTIL,
        "--min-fre",
        BENCH_MIN_FRE,
        "--timeout",
        &timeout,
        "--out",
        out.to_str().unwrap(),
    ])?;
    let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn performance_trend(dataset: &str, dir: &Path) -> Verdict {
    let started = Instant::now();
    let gen = run_json(dataset, "gen", dir)?;
    let fast = run_json(dataset, "fast", dir)?;
    let stat = |v: &Value, k: &str| v["stats"][k].clone();
    let (tg, tf) = (stat(&gen, "wall_time_ms").as_f64().unwrap(), stat(&fast, "wall_time_ms").as_f64().unwrap());
    let gen_scans = stat(&gen, "scan_count").as_u64().unwrap();
    let levels = stat(&gen, "level_sizes").as_array().unwrap().len() as u64;
    let fast_scans = stat(&fast, "scan_count").as_u64().unwrap();
    let counts = |v: &Value| ["hfhui", "hflui", "lfhui"].map(|k| stat(v, k).as_u64().unwrap());
    if counts(&gen) != counts(&fast) {
        return Err(format!("class counts differ: gen {:?}, fast {:?}", counts(&gen), counts(&fast)));
    }
    if fast_scans != 2 {
        return Err(format!("fast performed {fast_scans} scans, expected 2"));
    }
    if gen_scans != levels + 1 {
        return Err(format!("gen performed {gen_scans} scans over {levels} levels, expected {}", levels + 1));
    }
    let detail = format!("fast {tf:.0} ms vs gen {tg:.0} ms (ratio {:.3}); scans 2 vs {levels}+1", tf / tg);
    if tf > FAST_TO_GEN_MAX_RATIO * tg {
        return Err(detail);
    }
    within(started, BENCH_BUDGET, detail)
}

#[derive(Debug, serde::Deserialize)]
struct Row {
    algo: String,
    transactions: usize,
    min_util: String,
    min_fre: String,
    status: String,
    peak_memory_bytes: u64,
    hfhui: u64,
    hflui: u64,
    lfhui: u64,
}

fn read_rows(path: &Path) -> Result<Vec<Row>, String> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    reader.deserialize().collect::<Result<Vec<Row>, _>>().map_err(|e| e.to_string())
}

fn scalability_shape(dataset: &str, dir: &Path) -> Verdict {
    let out = dir.join("scale.csv");
    let timeout = BENCH_TIMEOUT_SECS.to_string();
    expect_success(&[
        "scale",
        dataset,
        "--algo",
        "gen,fast",
        "--min-util",
        BENCH_MIN_UTIL,
        "--min-fre",
        BENCH_MIN_FRE,
        "--slices",
        SLICES,
        "--timeout",
        &timeout,
        "--out",
        out.to_str().unwrap(),
    ])?;
    let rows = read_rows(&out)?;
    let mut by_slice: BTreeMap<usize, (Option<u64>, Option<u64>)> = BTreeMap::new();
    for r in &rows {
        if r.status != "ok" {
            return Err(format!("{} at {} transactions: {}", r.algo, r.transactions, r.status));
        }
        let e = by_slice.entry(r.transactions).or_default();
        match r.algo.as_str() {
            "gen" => e.0 = Some(r.peak_memory_bytes),
            "fast" => e.1 = Some(r.peak_memory_bytes),
            other => return Err(format!("unexpected algorithm {other}")),
        }
    }
    let wanted: Vec<usize> = SLICES.split(',').map(|s| s.parse().unwrap()).collect();
    if by_slice.keys().copied().collect::<Vec<_>>() != wanted {
        return Err(format!("slices {:?}, expected {wanted:?}", by_slice.keys().collect::<Vec<_>>()));
    }
    let mut detail = Vec::new();
    for (n, (g, f)) in &by_slice {
        let (Some(g), Some(f)) = (g, f) else { return Err(format!("slice {n} lacks a row")) };
        detail.push(format!("{}k: {:.1}/{:.1} MB", n / 1000, *f as f64 / 1e6, *g as f64 / 1e6));
        if f >= g {
            return Err(format!("fast/gen peak memory not ordered at {n}: {}", detail.join(", ")));
        }
    }
    Ok(format!("fast/gen peak heap {}", detail.join(", ")))
}

fn parse_threshold(s: &str) -> f64 {
    match s.strip_suffix('%') {
        Some(p) => p.parse::<f64>().unwrap() / 100.0,
        None => s.parse().unwrap(),
    }
}

/// Zero violations of either monotonicity in one sweep grid.
fn monotone_violations(rows: &[Row]) -> Vec<String> {
    let mut violations = Vec::new();
    let mut algos: Vec<&str> = rows.iter().map(|r| r.algo.as_str()).collect();
    algos.sort();
    algos.dedup();
    for algo in algos {
        let mine: Vec<&Row> = rows.iter().filter(|r| r.algo == algo && r.status == "ok").collect();
        for a in &mine {
            for b in &mine {
                let (ua, ub) = (parse_threshold(&a.min_util), parse_threshold(&b.min_util));
                let (fa, fb) = (parse_threshold(&a.min_fre), parse_threshold(&b.min_fre));
                if fa == fb && ua < ub && a.hfhui + a.lfhui < b.hfhui + b.lfhui {
                    violations.push(format!("{algo}: HU count rises from min_util {} to {}", a.min_util, b.min_util));
                }
                if ua == ub && fa < fb && a.hfhui + a.hflui < b.hfhui + b.hflui {
                    violations.push(format!("{algo}: HF count rises from min_fre {} to {}", a.min_fre, b.min_fre));
                }
            }
        }
    }
    violations
}

fn threshold_monotonicity(dataset: &str, dir: &Path) -> Verdict {
    let example = dir.join("example.txt");
    std::fs::write(&example, patclass_core::dataset::to_native_string(&running_example())).map_err(|e| e.to_string())?;
    let grids = [
        (example.to_str().unwrap().to_string(), "gen,fast,oracle", "0,5,10,15,20,30,45,60,100", "0,1,2,3,4,5,8,10"),
        (dataset.to_string(), "fast", "0.1%,0.2%,0.5%,1%,2%,5%", "0.5%,1%,2%,5%,10%"),
    ];
    let mut cells = 0;
    for (n, (data, algos, mus, mfs)) in grids.iter().enumerate() {
        let out = dir.join(format!("sweep{n}.csv"));
        expect_success(&["sweep", data, "--algo", algos, "--min-util-list", mus, "--min-fre-list", mfs, "--out", out.to_str().unwrap()])?;
        let rows = read_rows(&out)?;
        let violations = monotone_violations(&rows);
        if !violations.is_empty() {
            return Err(violations.join("; "));
        }
        cells += rows.len();
    }
    Ok(format!("{cells} sweep cells, zero violations"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(u32, &str, Verdict)> = vec![
        (1, "golden running example", golden_running_example()),
        (2, "revised transactions at ($30, 4)", revised_transactions()),
        (3, "differential equivalence gen = fast = oracle", differential_equivalence()),
        (4, "pruning safety (pool and visit log)", pruning_safety()),
        (5, "bound properties", bound_properties()),
    ];
    match generated_dataset(dir.path()) {
        Ok(data) => {
            results.push((6, "performance trend and scan counts", performance_trend(&data, dir.path())));
            results.push((7, "scalability memory ordering", scalability_shape(&data, dir.path())));
            results.push((8, "threshold monotonicity", threshold_monotonicity(&data, dir.path())));
        }
        Err(e) => {
            for (n, name) in [(6, "performance trend and scan counts"), (7, "scalability memory ordering"), (8, "threshold monotonicity")] {
                results.push((n, name, Err(format!("dataset generation failed: {e}"))));
            }
        }
    }
    let mut failed = 0;
    for (n, name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS  {n}. {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {n}. {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
