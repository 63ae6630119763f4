//! Per-test MCS enumeration with frequency ranking or Cartesian products.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use mbdfl_sat::{enumerate_mcses_with_stats, SolverStats};

use super::{
    by_cost, encode_tests, failing_tests, instance_stats, solve_err, weighted_components, Checker, Config,
    DiagnoseError, Diagnosis, DiagnosisReport, Stage, Strategy,
};
use crate::encode::Encoding;
use crate::frontend::{Program, TestCase, TestSuite};
use crate::transform::CompId;

struct PerTest {
    /// Encoding of all failing tests, used for validation.
    full: Encoding,
    /// Distinct MCSes of each failing test alone.
    mcses: Vec<(String, Vec<BTreeSet<CompId>>)>,
    stats: SolverStats,
}

fn per_test(program: &Program, failing: &[TestCase], opts: &Config) -> Result<PerTest, DiagnoseError> {
    let so = opts.solver_options();
    let mut stats = SolverStats::default();
    let mut mcses = Vec::new();
    for t in failing {
        let enc = encode_tests(program, std::slice::from_ref(t), opts, None)?;
        let (list, s) = enumerate_mcses_with_stats(&enc.wcnf, opts.mcs_limit, &so).map_err(solve_err(Stage::Baseline))?;
        stats += s;
        mcses.push((t.id.clone(), list.into_iter().map(|(set, _)| set).collect()));
    }
    let full = encode_tests(program, failing, opts, None)?;
    Ok(PerTest { full, mcses, stats })
}

fn base_report(strategy: Strategy, p: &PerTest) -> DiagnosisReport {
    let mut r = DiagnosisReport::empty(strategy, p.full.table.clone());
    r.per_test_counts = p.mcses.iter().map(|(id, m)| (id.clone(), m.len())).collect();
    r.failing_tests = p.mcses.iter().map(|(id, _)| id.clone()).collect();
    r
}

/// Returns the first candidate, in ranking order, that explains every test.
fn first_consistent(
    p: &PerTest,
    ranked: &[BTreeSet<CompId>],
    opts: &Config,
) -> Result<(Option<Diagnosis>, SolverStats), DiagnoseError> {
    let mut checker = Checker::new(&p.full, opts);
    for c in ranked {
        if checker.check(c)? {
            return Ok((Some(Diagnosis::new(&p.full.table, c.clone())), checker.stats()));
        }
    }
    Ok((None, checker.stats()))
}

/// Ranks every per-test MCS by the number of failing tests it occurs in and
/// returns the best ranked one that is consistent with all of them.
pub fn localize_bugassist(program: &Program, suite: &TestSuite, opts: &Config) -> Result<DiagnosisReport, DiagnoseError> {
    let start = Instant::now();
    let failing = failing_tests(program, suite, opts);
    if failing.is_empty() {
        return Ok(DiagnosisReport::empty(Strategy::BugAssist, weighted_components(program, opts)));
    }
    let p = per_test(program, &failing, opts)?;
    let mut votes: BTreeMap<BTreeSet<CompId>, usize> = BTreeMap::new();
    for (_, list) in &p.mcses {
        for m in list {
            *votes.entry(m.clone()).or_default() += 1;
        }
    }
    let table = &p.full.table;
    let mut ranked: Vec<BTreeSet<CompId>> = votes.keys().cloned().collect();
    let cost_order = by_cost(table);
    ranked.sort_by(|a, b| Reverse(votes[a]).cmp(&Reverse(votes[b])).then_with(|| cost_order(a, b)));
    let (found, check_stats) = first_consistent(&p, &ranked, opts)?;
    let d = found.ok_or(DiagnoseError::NoConsistentDiagnosis)?;
    let mut r = base_report(Strategy::BugAssist, &p);
    let mut solver = p.stats;
    solver += check_stats;
    r.stats = instance_stats(&p.full, solver);
    r.unique_aggregated_count = ranked.len();
    r.candidates = ranked;
    r.optimum_cost = d.cost;
    r.diagnoses = vec![d];
    r.wall_time = start.elapsed();
    Ok(r)
}

/// Aggregates one MCS per failing test in every combination and returns the
/// cheapest aggregate that is consistent with all tests.
pub fn localize_sniper(program: &Program, suite: &TestSuite, opts: &Config) -> Result<DiagnosisReport, DiagnoseError> {
    let start = Instant::now();
    let failing = failing_tests(program, suite, opts);
    if failing.is_empty() {
        return Ok(DiagnosisReport::empty(Strategy::Sniper, weighted_components(program, opts)));
    }
    let p = per_test(program, &failing, opts)?;
    let cap = opts.product_cap;
    let mut acc: BTreeSet<BTreeSet<CompId>> = BTreeSet::from([BTreeSet::new()]);
    for (_, list) in &p.mcses {
        if list.is_empty() {
            // The test is consistent as it stands.
            continue;
        }
        let mut next = BTreeSet::new();
        for a in &acc {
            for m in list {
                next.insert(a.union(m).copied().collect::<BTreeSet<_>>());
                if next.len() > cap {
                    return Err(DiagnoseError::ProductCap { cap });
                }
            }
        }
        acc = next;
    }
    acc.remove(&BTreeSet::new());
    let mut aggregated: Vec<BTreeSet<CompId>> = acc.into_iter().collect();
    aggregated.sort_by(by_cost(&p.full.table));
    let (found, check_stats) = first_consistent(&p, &aggregated, opts)?;
    let d = found.ok_or(DiagnoseError::NoConsistentDiagnosis)?;
    let mut r = base_report(Strategy::Sniper, &p);
    let mut solver = p.stats;
    solver += check_stats;
    r.stats = instance_stats(&p.full, solver);
    r.unique_aggregated_count = aggregated.len();
    r.candidates = aggregated;
    r.optimum_cost = d.cost;
    r.diagnoses = vec![d];
    r.wall_time = start.elapsed();
    Ok(r)
}
