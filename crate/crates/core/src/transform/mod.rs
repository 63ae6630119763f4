//! Unrolling over failing tests, relaxation-variable instrumentation and
//! sub-expression refinement.

mod components;
pub mod interp;
pub mod ir;
mod lower;
pub mod print;

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::frontend::{BinOp, Expr, ExprKind, Program, Stmt, StmtKind, TestCase};

pub use components::{Component, ComponentKind, ComponentTable, Refinement};
pub use ir::{CompId, IExpr, IFunction, IStmt, IStmtKind, Scope};

use components::{check_capacity, layout, Selection};
use lower::{lower_scope, Mode};

/// Default cap on the length of a flattened relaxation vector.
pub const DEFAULT_VECTOR_CAP: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("no failing tests to unroll")]
    NoTests,
    #[error("test {test} provides {available} inputs but every path reads at least {needed}")]
    InsufficientInputs {
        test: String,
        needed: usize,
        available: usize,
    },
    #[error("unwind bound must be at least 1")]
    ZeroUnwind,
    #[error("relaxation vectors of size {unwind}^{depth} exceed the cap of {cap}")]
    Capacity { unwind: u32, depth: usize, cap: u64 },
}

/// Expected output of one scope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertionItem {
    pub scope: usize,
    pub test_id: String,
    pub expected: Vec<i64>,
}

/// One scope per failing test, chained in order, followed by one assertion
/// over all scopes.
#[derive(Debug, Clone, PartialEq)]
pub struct UnrolledProgram {
    pub source: Program,
    pub scopes: Vec<Scope>,
    pub assertion: Vec<AssertionItem>,
}

impl UnrolledProgram {
    pub fn tests(&self) -> Vec<TestCase> {
        self.scopes.iter().map(|s| s.test.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstrumentedProgram {
    pub unrolled: UnrolledProgram,
    pub table: ComponentTable,
    pub unwind: u32,
}

fn build(program: &Program, tests: &[TestCase], lay: &components::Layout, mode: Mode) -> UnrolledProgram {
    let scopes = tests
        .iter()
        .enumerate()
        .map(|(i, t)| lower_scope(program, lay, mode, i, t))
        .collect();
    let assertion = tests
        .iter()
        .enumerate()
        .map(|(scope, t)| AssertionItem {
            scope,
            test_id: t.id.clone(),
            expected: t.expected_output.clone(),
        })
        .collect();
    UnrolledProgram {
        source: program.clone(),
        scopes,
        assertion,
    }
}

/// Components of `program` at statement granularity, unweighted.
pub fn component_table(program: &Program) -> ComponentTable {
    layout(program, Selection::All).table
}

/// Expands `program` into one scope per test.
pub fn unroll(program: &Program, failing: &[TestCase]) -> Result<UnrolledProgram, TransformError> {
    if failing.is_empty() {
        return Err(TransformError::NoTests);
    }
    let needed = min_reads(program);
    if let Some(t) = failing.iter().find(|t| t.inputs.len() < needed) {
        return Err(TransformError::InsufficientInputs {
            test: t.id.clone(),
            needed,
            available: t.inputs.len(),
        });
    }
    let lay = layout(program, Selection::All);
    Ok(build(program, failing, &lay, Mode::Plain))
}

/// Applies the relaxation rules to every component of every scope.
pub fn instrument(u: &UnrolledProgram, unwind: u32) -> Result<InstrumentedProgram, TransformError> {
    instrument_with_cap(u, unwind, DEFAULT_VECTOR_CAP)
}

pub fn instrument_with_cap(
    u: &UnrolledProgram,
    unwind: u32,
    cap: u64,
) -> Result<InstrumentedProgram, TransformError> {
    if unwind == 0 {
        return Err(TransformError::ZeroUnwind);
    }
    check_capacity(&u.source, unwind, cap)?;
    let lay = layout(&u.source, Selection::All);
    Ok(InstrumentedProgram {
        unrolled: build(&u.source, &u.tests(), &lay, Mode::Instrument),
        table: lay.table,
        unwind,
    })
}

/// Re-instruments `program` so that only the components of `diagnosis`
/// (ids into `base`) are relaxed, at sub-expression granularity and with
/// nondeterministic fallbacks.
pub fn refine_instrument(
    program: &Program,
    failing: &[TestCase],
    diagnosis: &BTreeSet<CompId>,
    base: &ComponentTable,
    unwind: u32,
) -> Result<InstrumentedProgram, TransformError> {
    refine_instrument_with_cap(program, failing, diagnosis, base, unwind, DEFAULT_VECTOR_CAP)
}

pub fn refine_instrument_with_cap(
    program: &Program,
    failing: &[TestCase],
    diagnosis: &BTreeSet<CompId>,
    base: &ComponentTable,
    unwind: u32,
    cap: u64,
) -> Result<InstrumentedProgram, TransformError> {
    let u = unroll(program, failing)?;
    if unwind == 0 {
        return Err(TransformError::ZeroUnwind);
    }
    check_capacity(program, unwind, cap)?;
    let lay = layout(program, Selection::Refine { base, diagnosis });
    Ok(InstrumentedProgram {
        unrolled: build(&u.source, &u.tests(), &lay, Mode::Refine),
        table: lay.table,
        unwind,
    })
}

/// Fewest input reads along any path through `main`.
fn min_reads(program: &Program) -> usize {
    struct Ctx<'a> {
        program: &'a Program,
        memo: HashMap<String, usize>,
    }
    impl Ctx<'_> {
        fn expr(&mut self, e: &Expr) -> usize {
            match &e.kind {
                ExprKind::Int(_) | ExprKind::Var(_) => 0,
                ExprKind::Index(_, i) | ExprKind::Unary(_, i) => self.expr(i),
                // The right operand of `&&`/`||` may be skipped.
                ExprKind::Binary(op, a, b) => {
                    let rhs = match op {
                        BinOp::And | BinOp::Or => 0,
                        _ => self.expr(b),
                    };
                    self.expr(a) + rhs
                }
                ExprKind::Call(f, args) => {
                    let mut n: usize = args.iter().map(|a| self.expr(a)).sum();
                    n += self.function(f);
                    n
                }
            }
        }

        fn function(&mut self, name: &str) -> usize {
            if let Some(&n) = self.memo.get(name) {
                return n;
            }
            let program = self.program;
            let n = program.function(name).map_or(0, |f| self.stmts(&f.body).0);
            self.memo.insert(name.to_string(), n);
            n
        }

        /// (reads, every path returned)
        fn stmts(&mut self, stmts: &[Stmt]) -> (usize, bool) {
            let mut total = 0;
            for s in stmts {
                let (n, ret) = self.stmt(s);
                total += n;
                if ret {
                    return (total, true);
                }
            }
            (total, false)
        }

        fn stmt(&mut self, s: &Stmt) -> (usize, bool) {
            match &s.kind {
                StmtKind::Decl { init, .. } => (init.as_ref().map_or(0, |e| self.expr(e)), false),
                StmtKind::Assign(a) => (
                    self.expr(&a.target) + a.value.as_ref().map_or(0, |v| self.expr(v)),
                    false,
                ),
                StmtKind::Call(e) => (self.expr(e), false),
                StmtKind::If {
                    cond,
                    then_branch,
                    else_branch,
                } => {
                    let c = self.expr(cond);
                    let (t, tr) = self.stmts(then_branch);
                    let (e, er) = match else_branch {
                        Some(b) => self.stmts(b),
                        None => (0, false),
                    };
                    (c + t.min(e), tr && er)
                }
                StmtKind::Loop { init, cond, .. } => {
                    let (i, _) = self.stmts(init);
                    (i + self.expr(cond), false)
                }
                StmtKind::Read { targets, .. } => (targets.len(), false),
                StmtKind::Write { args, .. } => (args.iter().map(|a| self.expr(a)).sum(), false),
                StmtKind::Return(e) => (e.as_ref().map_or(0, |e| self.expr(e)), true),
                StmtKind::Block(b) => self.stmts(b),
            }
        }
    }
    let mut ctx = Ctx {
        program,
        memo: HashMap::new(),
    };
    ctx.function("main")
}
