use std::collections::BTreeSet;

use super::*;
use crate::diagnose::{localize_bugassist, localize_sniper};
use crate::frontend::parse_program;

const MAX3: &str = include_str!("../../corpus/buggy/max3/program.c");

fn test(id: &str, inputs: &[i64], expected: &[i64]) -> TestCase {
    TestCase {
        id: id.into(),
        inputs: inputs.to_vec(),
        expected_output: expected.to_vec(),
    }
}

fn max3_tests() -> TestSuite {
    TestSuite::new(vec![
        test("t0", &[1, 2, 3], &[3]),
        test("t1", &[6, 2, 1], &[6]),
        test("t2", &[-1, 3, 1], &[3]),
    ])
}

fn quick() -> Config {
    Config {
        unwind: 1,
        ..Config::default()
    }
}

fn lines_of(table: &ComponentTable, lines: &[u32]) -> BTreeSet<CompId> {
    table
        .components
        .iter()
        .filter(|c| lines.contains(&c.line) && !c.kind.is_io())
        .map(|c| c.id)
        .collect()
}

const SUM: &str = "int main() {
    int n;
    int i;
    int s;
    scanf(\"%d\", &n);
    s = 1;
    for (i = 1; i <= n; i++) {
        s = s + i;
    }
    printf(\"%d\", s);
    return 0;
}
";

fn sum_suite() -> TestSuite {
    TestSuite::new(vec![
        test("t0", &[0], &[0]),
        test("t1", &[2], &[3]),
        test("t2", &[3], &[6]),
    ])
}

#[test]
fn max3_cfaults_finds_the_three_conditions() {
    let p = parse_program(MAX3).unwrap();
    let r = localize_cfaults(&p, &max3_tests(), &quick()).unwrap();
    assert_eq!(r.strategy, Strategy::Cfaults);
    assert_eq!(r.diagnoses.len(), 1);
    assert_eq!(r.diagnoses[0].lines, BTreeSet::from([5, 8, 11]));
    assert_eq!(r.optimum_cost, 3);
    assert_eq!(r.failing_tests, ["t0", "t1", "t2"]);
    assert!(r.stats.soft_clauses == 9 && r.stats.vars > 0);
}

#[test]
fn max3_validation_follows_the_definition() {
    let p = parse_program(MAX3).unwrap();
    let mut v = Validator::new(&p, &max3_tests(), &quick()).unwrap();
    let all = lines_of(v.table(), &[5, 8, 11]);
    assert!(v.is_consistent(&all).unwrap());
    for line in [5, 8, 11] {
        let mut fewer = all.clone();
        fewer.retain(|&c| v.table().get(c).line != line);
        assert!(!v.is_consistent(&fewer).unwrap(), "dropping line {line}");
    }
    assert!(!v.is_consistent(&lines_of(v.table(), &[5])).unwrap());
    assert!(!v.is_consistent(&BTreeSet::new()).unwrap());
    assert_eq!(
        v.is_consistent(&BTreeSet::from([99])).unwrap_err(),
        DiagnoseError::UnknownComponent(99)
    );
}

#[test]
fn max3_brute_force_agrees_with_cfaults() {
    let p = parse_program(MAX3).unwrap();
    let bf = brute_force_diagnoses(&p, &max3_tests(), 9, &quick()).unwrap();
    let min = bf.iter().map(|d| d.cost).min().unwrap();
    let best: Vec<_> = bf.iter().filter(|d| d.cost == min).collect();
    assert_eq!(best.len(), 1);
    assert_eq!(best[0].lines, BTreeSet::from([5, 8, 11]));
    for d in &bf {
        assert!(validate_diagnosis(&p, &max3_tests(), d, &quick()).unwrap());
    }
}

#[test]
fn max3_baselines() {
    let p = parse_program(MAX3).unwrap();
    let s = localize_sniper(&p, &max3_tests(), &quick()).unwrap();
    assert_eq!(s.diagnoses[0].lines, BTreeSet::from([5, 8, 11]));
    assert!(s.unique_aggregated_count > 1);
    assert_eq!(s.per_test_counts.len(), 3);
    assert!(s.per_test_counts.values().all(|&n| n > 0));
    let b = localize_bugassist(&p, &max3_tests(), &quick()).unwrap();
    assert_eq!(b.diagnoses.len(), 1);
    assert!(validate_diagnosis(&p, &max3_tests(), &b.diagnoses[0], &quick()).unwrap());
    assert_eq!(b.per_test_counts, s.per_test_counts);
}

#[test]
fn sniper_respects_the_product_cap() {
    let p = parse_program(MAX3).unwrap();
    let opts = Config {
        product_cap: 2,
        ..quick()
    };
    let err = localize_sniper(&p, &max3_tests(), &opts).unwrap_err();
    assert_eq!(err, DiagnoseError::ProductCap { cap: 2 });
    assert_eq!(err.class(), ErrorClass::Resource);
}

#[test]
fn correct_program_has_no_diagnoses() {
    let src = MAX3
        .replace("f < s && f >= t", "f >= s && f >= t")
        .replace("f > s && s <= t", "f < s && s >= t")
        .replace("f > t && s > t", "f < t && s < t");
    let p = parse_program(&src).unwrap();
    for strategy in [localize_cfaults, localize_bugassist, localize_sniper] {
        let r = strategy(&p, &max3_tests(), &quick()).unwrap();
        assert!(r.diagnoses.is_empty());
        assert_eq!(r.optimum_cost, 0);
    }
    let bf = brute_force_diagnoses(&p, &max3_tests(), 3, &quick()).unwrap();
    assert_eq!(bf.len(), 1);
    assert!(bf[0].is_empty());
    let empty = Diagnosis::new(&weighted_components(&p, &quick()), BTreeSet::new());
    assert!(validate_diagnosis(&p, &max3_tests(), &empty, &quick()).unwrap());
}

#[test]
fn wrong_initial_value_is_blamed() {
    let p = parse_program(SUM).unwrap();
    let opts = Config {
        unwind: 4,
        ..Config::default()
    };
    let r = localize_cfaults(&p, &sum_suite(), &opts).unwrap();
    let bf = brute_force_diagnoses(&p, &sum_suite(), 3, &opts).unwrap();
    let min = bf.iter().map(|d| d.cost).min().unwrap();
    let best: BTreeSet<_> = bf.into_iter().filter(|d| d.cost == min).collect();
    let got: BTreeSet<_> = r.diagnoses.iter().cloned().collect();
    assert_eq!(got, best);
    assert!(r.diagnoses.iter().any(|d| d.lines == BTreeSet::from([6])));
}

#[test]
fn cfaults_diagnoses_are_subset_minimal() {
    let p = parse_program(SUM).unwrap();
    let opts = Config {
        unwind: 4,
        ..Config::default()
    };
    let r = localize_cfaults(&p, &sum_suite(), &opts).unwrap();
    let mut v = Validator::new(&p, &sum_suite(), &opts).unwrap();
    for d in &r.diagnoses {
        assert!(v.is_consistent(&d.components).unwrap());
        for &c in &d.components {
            let mut smaller = d.components.clone();
            smaller.remove(&c);
            assert!(!v.is_consistent(&smaller).unwrap());
        }
    }
}

#[test]
fn refinement_lowers_the_max3_cost() {
    let p = parse_program(MAX3).unwrap();
    let opts = Config {
        refine: true,
        ..quick()
    };
    let r = localize_cfaults(&p, &max3_tests(), &opts).unwrap();
    assert_eq!(r.strategy, Strategy::CfaultsRefined);
    let base = r.unrefined.as_ref().unwrap();
    assert_eq!(base.optimum_cost, 3);
    assert_eq!(r.cost_scale, 2);
    assert!(!r.diagnoses.is_empty());
    assert!(r.optimum_cost < base.optimum_cost * r.cost_scale);
    for d in &r.diagnoses {
        assert!(d.lines.is_subset(&BTreeSet::from([5, 8, 11])));
    }
}

#[test]
fn error_classes() {
    let p = parse_program(MAX3).unwrap();
    let short = TestSuite::new(vec![test("t0", &[1], &[3])]);
    let err = localize_cfaults(&p, &short, &quick()).unwrap_err();
    assert_eq!(err.class(), ErrorClass::Input, "{err}");
    let opts = Config {
        bf_cap: 4,
        ..quick()
    };
    let err = brute_force_diagnoses(&p, &max3_tests(), 2, &opts).unwrap_err();
    assert_eq!(err, DiagnoseError::CapTooLarge { components: 9, cap: 4 });
}
