//! The miners give the same classification for every money scalar.

use num_rational::Ratio;
use patclass_core::fixtures::{running_example, running_example_in};
use patclass_core::fulist::run_fast;
use patclass_core::levelwise::run_gen;
use patclass_core::oracle::{classify_all, OracleLimit};
use patclass_core::{Itemset, Thresholds, Utility};

fn shape<M: Utility>(th: Thresholds<M>) -> Vec<Vec<(Itemset, f64, u64)>> {
    let db = running_example_in::<M>();
    let gen = run_gen(&db, &th);
    let fast = run_fast(&db, &th);
    let oracle = classify_all(&db, &th, OracleLimit::default()).unwrap();
    assert!(gen.same_patterns(&oracle));
    assert!(fast.same_patterns(&oracle));
    [&oracle.hfhui, &oracle.hflui, &oracle.lfhui]
        .iter()
        .map(|class| class.iter().map(|p| (p.itemset.clone(), p.utility.to_f64(), p.support)).collect())
        .collect()
}

#[test]
fn integer_float_and_rational_agree() {
    let reference = shape::<u64>(Thresholds::new(15, 3));
    assert_eq!(shape::<u32>(Thresholds::new(15, 3)), reference);
    assert_eq!(shape::<u128>(Thresholds::new(15, 3)), reference);
    assert_eq!(shape::<i64>(Thresholds::new(15, 3)), reference);
    assert_eq!(shape::<f64>(Thresholds::new(15.0, 3)), reference);
    assert_eq!(shape::<Ratio<i64>>(Thresholds::new(Ratio::from_integer(15), 3)), reference);
    assert_eq!(running_example_in::<u64>(), running_example());
}

#[test]
fn fractional_utilities_classify_exactly() {
    // Halving every utility and the threshold leaves the classes unchanged.
    let half = Ratio::new(1i64, 2);
    let db = running_example_in::<Ratio<i64>>();
    let table = patclass_core::model::UtilityTable::from_pairs(db.utilities().iter().map(|(i, v, _)| (i, v * half))).unwrap();
    let halved = patclass_core::model::QuantitativeDatabase::new(db.transactions().to_vec(), table).unwrap();
    let a = run_fast(&db, &Thresholds::new(Ratio::from_integer(15), 3));
    let b = run_fast(&halved, &Thresholds::new(Ratio::new(15, 2), 3));
    assert_eq!(a.counts(), b.counts());
    assert_eq!(b.hfhui[0].utility, Ratio::new(15, 2));
}
