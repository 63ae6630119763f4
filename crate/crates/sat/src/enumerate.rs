//! Enumeration of optimum solutions and minimal correction subsets.

use std::collections::BTreeSet;

use crate::cdcl::{Solver, SolverOptions, SolverStats};
use crate::formula::Wcnf;
use crate::lit::Lit;
use crate::maxsat::{add_selectors, MaxSatSolver};
use crate::SolveError;

/// Minimal correction subsets with their costs, in non-decreasing cost order.
pub type McsList = Vec<(BTreeSet<usize>, u64)>;

/// Returns every distinct falsified soft set whose cost equals `optimum`.
///
/// After each solution the positive disjunction of its falsified soft
/// clauses is added as a hard clause; enumeration stops once the next
/// optimum exceeds `optimum` or the hard clauses become unsatisfiable.
pub fn enumerate_optimal_solutions(
    wcnf: &Wcnf,
    optimum: u64,
    options: &SolverOptions,
) -> Result<Vec<BTreeSet<usize>>, SolveError> {
    enumerate_optimal_solutions_with_stats(wcnf, optimum, options).map(|(sets, _)| sets)
}

pub fn enumerate_optimal_solutions_with_stats(
    wcnf: &Wcnf,
    optimum: u64,
    options: &SolverOptions,
) -> Result<(Vec<BTreeSet<usize>>, SolverStats), SolveError> {
    let mut solver = MaxSatSolver::new(wcnf, options);
    let mut found = Vec::new();
    loop {
        let Some(sol) = solver.solve()? else {
            if found.is_empty() {
                return Err(SolveError::HardUnsat);
            }
            break;
        };
        if sol.cost > optimum {
            break;
        }
        let more = solver.block(&sol.falsified);
        found.push(sol.falsified);
        if !more {
            break;
        }
    }
    Ok((found, solver.stats()))
}

/// Enumerates minimal correction subsets in non-decreasing cost order, up to
/// `limit` of them. The empty correction set is never reported.
pub fn enumerate_mcses(
    wcnf: &Wcnf,
    limit: Option<usize>,
    options: &SolverOptions,
) -> Result<McsList, SolveError> {
    enumerate_mcses_with_stats(wcnf, limit, options).map(|(list, _)| list)
}

pub fn enumerate_mcses_with_stats(
    wcnf: &Wcnf,
    limit: Option<usize>,
    options: &SolverOptions,
) -> Result<(McsList, SolverStats), SolveError> {
    let mut solver = MaxSatSolver::new(wcnf, options);
    let mut checker = McsChecker::new(wcnf, options);
    let mut out = McsList::new();
    let mut first = true;
    while limit.is_none_or(|n| out.len() < n) {
        let Some(sol) = solver.solve()? else {
            if first {
                return Err(SolveError::HardUnsat);
            }
            break;
        };
        first = false;
        if sol.falsified.is_empty() {
            break;
        }
        if checker.is_mcs(&sol.falsified)? {
            out.push((sol.falsified.clone(), sol.cost));
        }
        solver.block(&sol.falsified);
    }
    let mut stats = solver.stats();
    stats += checker.stats();
    Ok((out, stats))
}

/// Checks the defining property of a minimal correction subset against the
/// original instance: the remaining soft clauses are satisfiable together
/// with the hard clauses, and adding back any member makes them
/// unsatisfiable.
pub struct McsChecker {
    solver: Solver,
    selectors: Vec<Lit>,
}

impl McsChecker {
    pub fn new(wcnf: &Wcnf, options: &SolverOptions) -> McsChecker {
        let mut solver = Solver::from_cnf(&wcnf.hard, options.clone());
        solver.reserve_vars(wcnf.num_vars());
        let selectors = add_selectors(wcnf, &mut solver);
        McsChecker { solver, selectors }
    }

    pub fn stats(&self) -> SolverStats {
        self.solver.stats()
    }

    pub fn is_correction_set(&mut self, set: &BTreeSet<usize>) -> Result<bool, SolveError> {
        let rest: Vec<Lit> = self
            .selectors
            .iter()
            .enumerate()
            .filter(|(i, _)| !set.contains(i))
            .map(|(_, &l)| l)
            .collect();
        self.solver.solve_with(&rest)
    }

    pub fn is_mcs(&mut self, set: &BTreeSet<usize>) -> Result<bool, SolveError> {
        if !self.is_correction_set(set)? {
            return Ok(false);
        }
        let rest: Vec<Lit> = self
            .selectors
            .iter()
            .enumerate()
            .filter(|(i, _)| !set.contains(i))
            .map(|(_, &l)| l)
            .collect();
        for &c in set {
            let mut assumptions = rest.clone();
            assumptions.push(self.selectors[c]);
            if self.solver.solve_with(&assumptions)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Cnf;

    fn l(v: i64) -> Lit {
        Lit::from_dimacs(v)
    }

    fn symmetric() -> Wcnf {
        let mut hard = Cnf::new();
        hard.add_clause([l(1), l(2)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(-1)], 1);
        w.add_soft([l(-2)], 1);
        w
    }

    #[test]
    fn symmetric_optima() {
        let sets = enumerate_optimal_solutions(&symmetric(), 1, &SolverOptions::default()).unwrap();
        let sets: BTreeSet<_> = sets.into_iter().collect();
        assert_eq!(sets, BTreeSet::from([BTreeSet::from([0]), BTreeSet::from([1])]));
    }

    #[test]
    fn unique_optimum() {
        let mut w = symmetric();
        w.soft[1].1 = 2;
        let sets = enumerate_optimal_solutions(&w, 1, &SolverOptions::default()).unwrap();
        assert_eq!(sets, vec![BTreeSet::from([0])]);
    }

    #[test]
    fn symmetric_mcses_then_exhaustion() {
        let list = enumerate_mcses(&symmetric(), None, &SolverOptions::default()).unwrap();
        let sets: BTreeSet<_> = list.iter().map(|(s, _)| s.clone()).collect();
        assert_eq!(sets, BTreeSet::from([BTreeSet::from([0]), BTreeSet::from([1])]));
        assert!(list.iter().all(|(_, c)| *c == 1));
    }

    #[test]
    fn satisfiable_softs_have_no_mcs() {
        let mut hard = Cnf::new();
        hard.add_clause([l(1), l(2)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(1)], 1);
        assert!(enumerate_mcses(&w, None, &SolverOptions::default())
            .unwrap()
            .is_empty());
        assert_eq!(
            enumerate_optimal_solutions(&w, 0, &SolverOptions::default()).unwrap(),
            vec![BTreeSet::new()]
        );
    }

    #[test]
    fn limit_is_respected() {
        let list = enumerate_mcses(&symmetric(), Some(1), &SolverOptions::default()).unwrap();
        assert_eq!(list.len(), 1);
    }
}
