//! SAT and weighted partial MaxSAT solving.
//!
//! The crate provides a conflict-driven clause-learning SAT solver with an
//! assumption interface, a stratified core-guided MaxSAT algorithm built on
//! totalizer encodings, enumeration of optimum solutions and of minimal
//! correction subsets, and DIMACS CNF/WCNF input and output.

pub mod cdcl;
pub mod dimacs;
pub mod enumerate;
pub mod formula;
pub mod lit;
pub mod maxsat;
mod totalizer;

pub use cdcl::{sat_solve, SatOutcome, Solver, SolverOptions, SolverStats};
pub use enumerate::{
    enumerate_mcses, enumerate_mcses_with_stats, enumerate_optimal_solutions,
    enumerate_optimal_solutions_with_stats, McsChecker, McsList,
};
pub use formula::{Cnf, Wcnf};
pub use lit::{Lit, Var};
pub use maxsat::{maxsat_optimum, MaxSatSolver, OptimumSolution};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The configured conflict budget ran out before an answer was found.
    #[error("conflict budget of {0} exhausted")]
    Budget(u64),
    /// The hard clauses are unsatisfiable even with every soft clause dropped.
    #[error("hard clauses are unsatisfiable")]
    HardUnsat,
}
