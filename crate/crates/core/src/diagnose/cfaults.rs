use std::collections::BTreeSet;
use std::time::Instant;

use mbdfl_sat::{enumerate_optimal_solutions_with_stats, MaxSatSolver, SolveError};

use super::{
    by_cost, encode_tests, failing_tests, instance_stats, solve_err, weighted_components, Config, DiagnoseError,
    Diagnosis, DiagnosisReport, Stage, Strategy,
};
use crate::encode::Encoding;
use crate::frontend::{Program, TestSuite};
use crate::transform::CompId;

/// Every optimum-cost falsified healthy set of the multi-test instance.
///
/// With `opts.refine` the returned report holds the sub-expression level
/// diagnoses obtained by refining the first statement-level one, and the
/// statement-level report is kept in `unrefined`.
pub fn localize_cfaults(program: &Program, suite: &TestSuite, opts: &Config) -> Result<DiagnosisReport, DiagnoseError> {
    let start = Instant::now();
    let failing = failing_tests(program, suite, opts);
    if failing.is_empty() {
        let mut r = DiagnosisReport::empty(Strategy::Cfaults, weighted_components(program, opts));
        r.wall_time = start.elapsed();
        return Ok(r);
    }
    let ids: Vec<String> = failing.iter().map(|t| t.id.clone()).collect();
    let enc = encode_tests(program, &failing, opts, None)?;
    let mut report = solve_instance(Strategy::Cfaults, &enc, opts)?;
    report.failing_tests = ids.clone();
    report.wall_time = start.elapsed();
    let Some(first) = report.diagnoses.first() else {
        return Ok(report);
    };
    if !opts.refine {
        return Ok(report);
    }
    let refine_start = Instant::now();
    let first = first.components.clone();
    let renc = encode_tests(program, &failing, opts, Some((&first, &enc.table)))?;
    let mut refined = solve_instance(Strategy::CfaultsRefined, &renc, opts).map_err(|e| match e {
        DiagnoseError::Solve { source, .. } => DiagnoseError::Solve {
            stage: Stage::Refine,
            source,
        },
        e => e,
    })?;
    refined.failing_tests = ids;
    refined.wall_time = report.wall_time + refine_start.elapsed();
    refined.unrefined = Some(Box::new(report));
    Ok(refined)
}

fn solve_instance(strategy: Strategy, enc: &Encoding, opts: &Config) -> Result<DiagnosisReport, DiagnoseError> {
    let so = opts.solver_options();
    let mut solver = MaxSatSolver::new(&enc.wcnf, &so);
    let optimum = solver
        .solve()
        .map_err(solve_err(Stage::Solve))?
        .ok_or(DiagnoseError::Solve {
            stage: Stage::Solve,
            source: SolveError::HardUnsat,
        })?;
    let mut stats = solver.stats();
    let (sets, enum_stats) =
        enumerate_optimal_solutions_with_stats(&enc.wcnf, optimum.cost, &so).map_err(solve_err(Stage::Solve))?;
    stats += enum_stats;
    let mut sets: Vec<BTreeSet<CompId>> = sets.into_iter().filter(|s| !s.is_empty()).collect();
    sets.sort_by(by_cost(&enc.table));
    sets.dedup();
    let diagnoses: Vec<Diagnosis> = sets.iter().map(|s| Diagnosis::new(&enc.table, s.clone())).collect();
    let mut report = DiagnosisReport::empty(strategy, enc.table.clone());
    report.unique_aggregated_count = diagnoses.len();
    report.diagnoses = diagnoses;
    report.optimum_cost = optimum.cost;
    report.cost_scale = enc.table.cost_scale.max(1);
    report.stats = instance_stats(enc, stats);
    Ok(report)
}
