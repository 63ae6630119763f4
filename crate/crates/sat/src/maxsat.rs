//! Stratified core-guided weighted partial MaxSAT.
//!
//! Soft clauses are processed in strata of decreasing weight. Each
//! unsatisfiable core raises the lower bound by its minimum weight, lowers the
//! weights of its members by that amount and is relaxed by a totalizer whose
//! bound literals become new soft literals, activated one bound at a time.
//! Hard clauses may be added between calls, which is how solutions are
//! blocked during enumeration.

use std::collections::{BTreeMap, BTreeSet};

use crate::cdcl::{Solver, SolverOptions, SolverStats};
use crate::formula::Wcnf;
use crate::lit::Lit;
use crate::totalizer;
use crate::SolveError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumSolution {
    /// Sum of the weights of the falsified soft clauses.
    pub cost: u64,
    /// Assignment to the variables of the instance.
    pub model: Vec<bool>,
    /// Indices of the falsified soft clauses.
    pub falsified: BTreeSet<usize>,
}

struct SumBound {
    totalizer: usize,
    bound: usize,
}

struct Totalizer {
    outputs: Vec<Lit>,
    weight: u64,
    active_bound: usize,
}

/// Gives every soft clause a literal that is true only if the clause is.
/// Unit soft clauses use their own literal.
pub(crate) fn add_selectors(wcnf: &Wcnf, solver: &mut Solver) -> Vec<Lit> {
    wcnf.soft
        .iter()
        .map(|(clause, _)| {
            if clause.len() == 1 {
                clause[0]
            } else {
                let s = solver.new_var().pos();
                let mut c = clause.clone();
                c.push(!s);
                solver.add_clause(&c);
                s
            }
        })
        .collect()
}

pub struct MaxSatSolver {
    soft: Vec<(Vec<Lit>, u64)>,
    num_vars: usize,
    solver: Solver,
    selectors: Vec<Lit>,
    weights: BTreeMap<Lit, u64>,
    sums: BTreeMap<Lit, SumBound>,
    totalizers: Vec<Totalizer>,
    lower_bound: u64,
    threshold: Option<u64>,
}

impl MaxSatSolver {
    pub fn new(wcnf: &Wcnf, options: &SolverOptions) -> MaxSatSolver {
        let mut solver = Solver::from_cnf(&wcnf.hard, options.clone());
        solver.reserve_vars(wcnf.num_vars());
        let selectors = add_selectors(wcnf, &mut solver);
        let mut weights = BTreeMap::new();
        for (sel, (_, w)) in selectors.iter().zip(&wcnf.soft) {
            *weights.entry(*sel).or_insert(0) += *w;
        }
        MaxSatSolver {
            soft: wcnf.soft.clone(),
            num_vars: wcnf.num_vars(),
            solver,
            selectors,
            weights,
            sums: BTreeMap::new(),
            totalizers: Vec::new(),
            lower_bound: 0,
            threshold: None,
        }
    }

    pub fn stats(&self) -> SolverStats {
        self.solver.stats()
    }

    /// Current lower bound on the optimum cost.
    pub fn lower_bound(&self) -> u64 {
        self.lower_bound
    }

    /// Finds an optimum solution of the current instance, or `None` when the
    /// hard clauses (including any added blocking clauses) are unsatisfiable.
    pub fn solve(&mut self) -> Result<Option<OptimumSolution>, SolveError> {
        loop {
            let threshold = match self.threshold {
                Some(t) => t,
                None => {
                    let t = self.weights.values().copied().max().unwrap_or(0);
                    self.threshold = Some(t);
                    t
                }
            };
            let assumptions: Vec<Lit> = self
                .weights
                .iter()
                .filter(|(_, &w)| w >= threshold)
                .map(|(&l, _)| l)
                .collect();
            if self.solver.solve_with(&assumptions)? {
                let lower = self
                    .weights
                    .values()
                    .copied()
                    .filter(|&w| w < threshold)
                    .max();
                if let Some(next) = lower {
                    self.threshold = Some(next);
                    continue;
                }
                let model = self.solver.model()[..self.num_vars].to_vec();
                let mut falsified = BTreeSet::new();
                let mut cost = 0;
                for (i, (clause, w)) in self.soft.iter().enumerate() {
                    if !clause.iter().any(|l| model[l.var().index()] == l.is_positive()) {
                        falsified.insert(i);
                        cost += w;
                    }
                }
                debug_assert_eq!(cost, self.lower_bound);
                return Ok(Some(OptimumSolution {
                    cost,
                    model,
                    falsified,
                }));
            }
            let core = self.solver.core().to_vec();
            if core.is_empty() {
                return Ok(None);
            }
            self.process_core(&core);
        }
    }

    fn reduce(&mut self, l: Lit, by: u64) {
        let w = self.weights.get_mut(&l).expect("core literal without weight");
        *w -= by;
        if *w == 0 {
            self.weights.remove(&l);
        }
    }

    fn extend_sum(&mut self, l: Lit) {
        let Some(sum) = self.sums.get(&l) else {
            return;
        };
        let next = sum.bound + 1;
        let t = &mut self.totalizers[sum.totalizer];
        if next <= t.active_bound || next >= t.outputs.len() {
            return;
        }
        t.active_bound = next;
        let lit = !t.outputs[next];
        let weight = t.weight;
        let totalizer = sum.totalizer;
        *self.weights.entry(lit).or_insert(0) += weight;
        self.sums.insert(
            lit,
            SumBound {
                totalizer,
                bound: next,
            },
        );
    }

    fn process_core(&mut self, core: &[Lit]) {
        let min_weight = core.iter().map(|l| self.weights[l]).min().unwrap();
        self.lower_bound += min_weight;
        if core.len() == 1 {
            self.solver.add_clause(&[!core[0]]);
        }
        for &l in core {
            self.reduce(l, min_weight);
        }
        for &l in core {
            self.extend_sum(l);
        }
        if core.len() > 1 {
            let inputs: Vec<Lit> = core.iter().map(|&l| !l).collect();
            let outputs = totalizer::build(&inputs, &mut self.solver);
            let lit = !outputs[1];
            self.totalizers.push(Totalizer {
                outputs,
                weight: min_weight,
                active_bound: 1,
            });
            *self.weights.entry(lit).or_insert(0) += min_weight;
            self.sums.insert(
                lit,
                SumBound {
                    totalizer: self.totalizers.len() - 1,
                    bound: 1,
                },
            );
        }
    }

    /// Adds the hard clause requiring at least one soft clause of
    /// `falsified` to hold. Returns `false` if the set is empty, in which
    /// case nothing is added.
    pub fn block(&mut self, falsified: &BTreeSet<usize>) -> bool {
        if falsified.is_empty() {
            return false;
        }
        let clause: Vec<Lit> = falsified.iter().map(|&i| self.selectors[i]).collect();
        self.solver.add_clause(&clause);
        true
    }
}

/// Computes one optimum solution of `wcnf`.
pub fn maxsat_optimum(wcnf: &Wcnf, options: &SolverOptions) -> Result<OptimumSolution, SolveError> {
    MaxSatSolver::new(wcnf, options)
        .solve()?
        .ok_or(SolveError::HardUnsat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Cnf;

    fn l(v: i64) -> Lit {
        Lit::from_dimacs(v)
    }

    #[test]
    fn forced_by_weights() {
        let mut hard = Cnf::new();
        hard.add_clause([l(1), l(2)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(-1)], 1);
        w.add_soft([l(-2)], 2);
        let sol = maxsat_optimum(&w, &SolverOptions::default()).unwrap();
        assert_eq!(sol.cost, 1);
        assert_eq!(sol.falsified, BTreeSet::from([0]));
    }

    #[test]
    fn all_soft_satisfiable() {
        let mut hard = Cnf::new();
        hard.add_clause([l(1), l(2)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(1)], 4);
        w.add_soft([l(2)], 4);
        let sol = maxsat_optimum(&w, &SolverOptions::default()).unwrap();
        assert_eq!(sol.cost, 0);
        assert!(sol.falsified.is_empty());
    }

    #[test]
    fn hard_unsat_is_an_error() {
        let mut hard = Cnf::new();
        hard.add_clause([l(1)]);
        hard.add_clause([l(-1)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(2)], 1);
        assert_eq!(
            maxsat_optimum(&w, &SolverOptions::default()),
            Err(SolveError::HardUnsat)
        );
    }

    #[test]
    fn non_unit_and_empty_soft_clauses() {
        let mut hard = Cnf::new();
        hard.add_clause([l(-1)]);
        hard.add_clause([l(-2)]);
        let mut w = Wcnf::new(hard);
        w.add_soft([l(1), l(2)], 3);
        w.add_soft([l(1), l(3)], 5);
        w.add_soft(Vec::<Lit>::new(), 7);
        let sol = maxsat_optimum(&w, &SolverOptions::default()).unwrap();
        assert_eq!(sol.cost, 10);
        assert_eq!(sol.falsified, BTreeSet::from([0, 2]));
    }

    #[test]
    fn cardinality_cost() {
        // At least 3 of 5 variables must be true; each costs 1..5.
        let mut hard = Cnf::new();
        let vars: Vec<i64> = (1..=5).collect();
        // Encode "at most 2 false" as: every 3-subset contains a true variable.
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    hard.add_clause([l(vars[a]), l(vars[b]), l(vars[c])]);
                }
            }
        }
        let mut w = Wcnf::new(hard);
        for (i, &v) in vars.iter().enumerate() {
            w.add_soft([l(-v)], i as u64 + 1);
        }
        let sol = maxsat_optimum(&w, &SolverOptions::default()).unwrap();
        assert_eq!(sol.cost, 1 + 2 + 3);
    }
}
