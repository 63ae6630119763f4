//! Localization strategies, diagnosis validation and a brute-force oracle.

mod baselines;
mod cfaults;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;

use mbdfl_sat::{Solver, SolverOptions, SolverStats, SolveError, Var};
use thiserror::Error;

use crate::encode::{compute_weights, encode, AssertMode, EncodeError, EncodeOptions, Encoding};
use crate::exec::{classify_tests, Limits};
use crate::frontend::{Program, TestCase, TestSuite};
use crate::transform::{
    component_table, instrument_with_cap, refine_instrument_with_cap, unroll, CompId, ComponentTable,
    TransformError, DEFAULT_VECTOR_CAP,
};

pub use baselines::{localize_bugassist, localize_sniper};
pub use cfaults::localize_cfaults;
pub use oracle::{brute_force_diagnoses, validate_diagnosis, Validator};

/// Engine options shared by all strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Re-run cfaults at sub-expression granularity on its first diagnosis.
    pub refine: bool,
    pub unwind: u32,
    pub width: u32,
    pub io_multiplier: u64,
    /// Weaken each output assertion by the loop-bound flag instead of
    /// forcing loops to exit within `unwind` iterations.
    pub unwind_assert: bool,
    /// Per-test MCS limit for the baselines; `None` is unlimited.
    pub mcs_limit: Option<usize>,
    /// Largest number of aggregated diagnoses SNIPER may build.
    pub product_cap: usize,
    pub conflict_budget: Option<u64>,
    pub seed: u64,
    /// Largest component count accepted by the brute-force oracle.
    pub bf_cap: usize,
    pub vector_cap: u64,
    /// Step limit for the concrete runs that classify tests.
    pub max_steps: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            refine: false,
            unwind: 8,
            width: 16,
            io_multiplier: 100,
            unwind_assert: false,
            mcs_limit: None,
            product_cap: 1_000_000,
            conflict_budget: None,
            seed: 0,
            bf_cap: 16,
            vector_cap: DEFAULT_VECTOR_CAP,
            max_steps: 1_000_000,
        }
    }
}

impl Config {
    pub fn encode_options(&self) -> EncodeOptions {
        EncodeOptions {
            unwind: self.unwind,
            width: self.width,
            io_multiplier: self.io_multiplier,
            unwind_assert: self.unwind_assert,
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            conflict_budget: self.conflict_budget,
            seed: self.seed,
        }
    }

    /// Limits for classifying tests. Loops are bounded only by the step
    /// limit so that a test's verdict does not depend on `unwind`.
    pub fn limits(&self) -> Limits {
        Limits {
            max_loop_iterations: u32::MAX,
            max_total_steps: self.max_steps,
            width: self.width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Cfaults,
    CfaultsRefined,
    BugAssist,
    Sniper,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Cfaults => "cfaults",
            Strategy::CfaultsRefined => "cfaults-refined",
            Strategy::BugAssist => "bugassist",
            Strategy::Sniper => "sniper",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of components whose relaxation explains the failing tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagnosis {
    pub components: BTreeSet<CompId>,
    pub lines: BTreeSet<u32>,
    pub cost: u64,
}

impl Diagnosis {
    pub fn new(table: &ComponentTable, components: BTreeSet<CompId>) -> Diagnosis {
        Diagnosis {
            lines: table.lines(&components),
            cost: table.cost(&components),
            components,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Size of the solved instance and the solver work spent on it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub vars: usize,
    pub clauses: usize,
    pub soft_clauses: usize,
    pub solver: SolverStats,
}

#[derive(Debug, Clone)]
pub struct DiagnosisReport {
    pub strategy: Strategy,
    /// Components the diagnoses refer to, with weights.
    pub table: ComponentTable,
    pub diagnoses: Vec<Diagnosis>,
    /// Number of MCSes found per failing test; baselines only.
    pub per_test_counts: BTreeMap<String, usize>,
    pub unique_aggregated_count: usize,
    /// Distinct candidate diagnoses the baselines considered, in the order
    /// they were ranked.
    pub candidates: Vec<BTreeSet<CompId>>,
    pub optimum_cost: u64,
    /// Factor relating `optimum_cost` to unrefined costs.
    pub cost_scale: u64,
    pub failing_tests: Vec<String>,
    pub wall_time: Duration,
    pub stats: Stats,
    /// The statement-level run a refined report started from.
    pub unrefined: Option<Box<DiagnosisReport>>,
}

impl DiagnosisReport {
    fn empty(strategy: Strategy, table: ComponentTable) -> DiagnosisReport {
        DiagnosisReport {
            strategy,
            table,
            diagnoses: vec![],
            per_test_counts: BTreeMap::new(),
            unique_aggregated_count: 0,
            candidates: vec![],
            optimum_cost: 0,
            cost_scale: 1,
            failing_tests: vec![],
            wall_time: Duration::ZERO,
            stats: Stats::default(),
            unrefined: None,
        }
    }
}

/// Pipeline stage an error is attributed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Unroll,
    Instrument,
    Encode,
    Solve,
    Refine,
    Baseline,
    Validate,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Unroll => "unroll",
            Stage::Instrument => "instrument",
            Stage::Encode => "encode",
            Stage::Solve => "solve",
            Stage::Refine => "refine",
            Stage::Baseline => "baseline",
            Stage::Validate => "validate",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnoseError {
    #[error("{stage}: {source}")]
    Transform {
        stage: Stage,
        #[source]
        source: TransformError,
    },
    #[error("{stage}: {source}")]
    Encode {
        stage: Stage,
        #[source]
        source: EncodeError,
    },
    #[error("{stage}: {source}")]
    Solve {
        stage: Stage,
        #[source]
        source: SolveError,
    },
    #[error("no candidate diagnosis is consistent with every failing test")]
    NoConsistentDiagnosis,
    #[error("more than {cap} aggregated diagnoses")]
    ProductCap { cap: usize },
    #[error("{components} components exceed the brute-force cap of {cap}")]
    CapTooLarge { components: usize, cap: usize },
    #[error("component {0} does not exist")]
    UnknownComponent(CompId),
}

/// Coarse classification of errors for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The instance has no explanation within the encoding.
    Localization,
    /// A budget or cap was exceeded.
    Resource,
    /// The program, tests or options are unusable.
    Input,
}

impl DiagnoseError {
    pub fn class(&self) -> ErrorClass {
        match self {
            DiagnoseError::Transform { source, .. } => match source {
                TransformError::Capacity { .. } => ErrorClass::Resource,
                _ => ErrorClass::Input,
            },
            DiagnoseError::Encode { .. } | DiagnoseError::UnknownComponent(_) => ErrorClass::Input,
            DiagnoseError::Solve { source, .. } => match source {
                SolveError::Budget(_) => ErrorClass::Resource,
                SolveError::HardUnsat => ErrorClass::Localization,
            },
            DiagnoseError::NoConsistentDiagnosis => ErrorClass::Localization,
            DiagnoseError::ProductCap { .. } | DiagnoseError::CapTooLarge { .. } => ErrorClass::Resource,
        }
    }
}

fn solve_err(stage: Stage) -> impl Fn(SolveError) -> DiagnoseError {
    move |source| DiagnoseError::Solve { stage, source }
}

/// Tests of `suite` that `program` fails, in suite order.
pub fn failing_tests(program: &Program, suite: &TestSuite, opts: &Config) -> Vec<TestCase> {
    classify_tests(program, suite, &opts.limits()).1
}

/// The weighted statement-level components of `program`.
pub fn weighted_components(program: &Program, opts: &Config) -> ComponentTable {
    compute_weights(&component_table(program), program, opts.io_multiplier)
}

/// The multi-test MaxSAT instance cfaults solves for `tests`.
pub fn encode_instance(program: &Program, tests: &[TestCase], opts: &Config) -> Result<Encoding, DiagnoseError> {
    encode_tests(program, tests, opts, None)
}

/// Encodes `tests` with every component relaxed, or with only the parts of
/// `refine.0` (ids into the weighted table `refine.1`) relaxed.
pub(crate) fn encode_tests(
    program: &Program,
    tests: &[TestCase],
    opts: &Config,
    refine: Option<(&BTreeSet<CompId>, &ComponentTable)>,
) -> Result<Encoding, DiagnoseError> {
    let transform = |stage| move |source| DiagnoseError::Transform { stage, source };
    let ip = match refine {
        None => {
            let u = unroll(program, tests).map_err(transform(Stage::Unroll))?;
            instrument_with_cap(&u, opts.unwind, opts.vector_cap).map_err(transform(Stage::Instrument))?
        }
        Some((diagnosis, base)) => {
            refine_instrument_with_cap(program, tests, diagnosis, base, opts.unwind, opts.vector_cap)
                .map_err(transform(Stage::Refine))?
        }
    };
    encode(program, &ip, &opts.encode_options(), AssertMode::Assert).map_err(|source| DiagnoseError::Encode {
        stage: Stage::Encode,
        source,
    })
}

fn instance_stats(e: &Encoding, solver: SolverStats) -> Stats {
    Stats {
        vars: e.wcnf.num_vars(),
        clauses: e.cnf.num_clauses(),
        soft_clauses: e.wcnf.soft.len(),
        solver,
    }
}

/// Incremental consistency check of component sets against one encoding.
pub(crate) struct Checker {
    solver: Solver,
    healthy: Vec<Var>,
}

impl Checker {
    pub(crate) fn new(e: &Encoding, opts: &Config) -> Checker {
        Checker {
            solver: Solver::from_cnf(&e.cnf.cnf, opts.solver_options()),
            healthy: e.cnf.healthy.clone(),
        }
    }

    /// Whether the hard clauses are satisfiable with exactly the components
    /// of `d` unhealthy.
    pub(crate) fn check(&mut self, d: &BTreeSet<CompId>) -> Result<bool, DiagnoseError> {
        if let Some(&c) = d.iter().find(|&&c| c >= self.healthy.len()) {
            return Err(DiagnoseError::UnknownComponent(c));
        }
        let assumptions: Vec<_> = self
            .healthy
            .iter()
            .enumerate()
            .map(|(c, v)| if d.contains(&c) { v.neg() } else { v.pos() })
            .collect();
        self.solver.solve_with(&assumptions).map_err(solve_err(Stage::Validate))
    }

    pub(crate) fn stats(&self) -> SolverStats {
        self.solver.stats()
    }
}

/// Orders candidate sets by cost, then lexicographically.
pub(crate) fn by_cost(table: &ComponentTable) -> impl Fn(&BTreeSet<CompId>, &BTreeSet<CompId>) -> std::cmp::Ordering + '_ {
    move |a, b| table.cost(a).cmp(&table.cost(b)).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests;
