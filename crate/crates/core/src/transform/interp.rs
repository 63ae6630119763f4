//! Concrete execution of lowered scopes under a given assignment of
//! relaxation, branch and nondeterministic values.

use std::collections::HashMap;

use crate::exec::{apply_binop, apply_unop, coerce, wrap};
use crate::frontend::{AssignOp, BinOp, ReturnType, ScalarType, VarType};

use super::ir::{CompId, IExpr, IFunction, IStmt, IStmtKind, Scope};
use super::UnrolledProgram;

/// Supplies the values of the free variables of an instrumented program.
pub trait Choices {
    fn healthy(&mut self, comp: CompId, path: &[u32]) -> bool;
    fn else_branch(&mut self, scope: usize, comp: CompId, path: &[u32]) -> bool;
    fn nondet(&mut self, scope: usize, comp: CompId, path: &[u32], ty: ScalarType) -> i64;
}

/// Every component healthy; unused fallbacks are false or 0.
pub struct AllHealthy;

impl Choices for AllHealthy {
    fn healthy(&mut self, _: CompId, _: &[u32]) -> bool {
        true
    }
    fn else_branch(&mut self, _: usize, _: CompId, _: &[u32]) -> bool {
        false
    }
    fn nondet(&mut self, _: usize, _: CompId, _: &[u32], _: ScalarType) -> i64 {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeStatus {
    Completed,
    /// A loop would run past the unwind bound.
    UnwindExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeRun {
    pub status: ScopeStatus,
    pub output: Vec<i64>,
}

/// Runs every scope in order.
pub fn run_unrolled(u: &UnrolledProgram, unwind: u32, width: u32, choices: &mut dyn Choices) -> Vec<ScopeRun> {
    u.scopes
        .iter()
        .map(|s| run_scope(s, unwind, width, choices))
        .collect()
}

pub fn run_scope(scope: &Scope, unwind: u32, width: u32, choices: &mut dyn Choices) -> ScopeRun {
    let mut m = Machine {
        scope,
        unwind,
        width,
        choices,
        path: vec![],
        next_input: 0,
        output: vec![],
    };
    let mut frame = vec![HashMap::new()];
    let status = match m.block(&scope.body, &mut frame) {
        Ok(_) => ScopeStatus::Completed,
        Err(Unwound) => ScopeStatus::UnwindExceeded,
    };
    ScopeRun {
        status,
        output: m.output,
    }
}

#[derive(Clone)]
enum Slot {
    Scalar(ScalarType, i64),
    Array(ScalarType, Vec<i64>),
}

enum Flow {
    Normal,
    Return(i64),
    Exit,
}

struct Unwound;

type Frame = Vec<HashMap<String, Slot>>;

struct Machine<'a, 'c> {
    scope: &'a Scope,
    unwind: u32,
    width: u32,
    choices: &'c mut dyn Choices,
    path: Vec<u32>,
    next_input: usize,
    output: Vec<i64>,
}

impl<'a> Machine<'a, '_> {
    fn block(&mut self, stmts: &'a [IStmt], frame: &mut Frame) -> Result<Flow, Unwound> {
        frame.push(HashMap::new());
        let mut flow = Ok(Flow::Normal);
        for s in stmts {
            flow = self.stmt(s, frame);
            if !matches!(flow, Ok(Flow::Normal)) {
                break;
            }
        }
        frame.pop();
        flow
    }

    fn stmt(&mut self, s: &'a IStmt, frame: &mut Frame) -> Result<Flow, Unwound> {
        match &s.kind {
            IStmtKind::Decl { name, ty } => {
                let slot = match ty {
                    VarType::Array(t, n) => Slot::Array(*t, vec![0; *n as usize]),
                    t => Slot::Scalar(t.scalar(), 0),
                };
                frame.last_mut().expect("scope").insert(name.clone(), slot);
            }
            IStmtKind::Expr(e) => {
                self.expr(e, frame)?;
            }
            IStmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                return if self.expr(cond, frame)? != 0 {
                    self.block(then_branch, frame)
                } else {
                    self.block(else_branch, frame)
                };
            }
            IStmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                for i in init {
                    self.expr(i, frame)?;
                }
                let mut k = 0u32;
                loop {
                    self.path.push(k);
                    let c = self.expr(cond, frame);
                    let c = match c {
                        Ok(c) => c,
                        Err(e) => {
                            self.path.pop();
                            return Err(e);
                        }
                    };
                    if c == 0 {
                        self.path.pop();
                        break;
                    }
                    if k == self.unwind {
                        return Err(Unwound);
                    }
                    let flow = self.block(body, frame)?;
                    if !matches!(flow, Flow::Normal) {
                        self.path.pop();
                        return Ok(flow);
                    }
                    for u in update {
                        self.expr(u, frame)?;
                    }
                    self.path.pop();
                    k += 1;
                }
            }
            IStmtKind::Write { value, .. } => {
                let v = self.expr(value, frame)?;
                self.output.push(v);
            }
            IStmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.expr(e, frame)?,
                    None => 0,
                };
                return Ok(Flow::Return(v));
            }
            IStmtKind::Exit { .. } => return Ok(Flow::Exit),
            IStmtKind::Block(b) => return self.block(b, frame),
        }
        Ok(Flow::Normal)
    }

    fn slot<'f>(frame: &'f mut Frame, name: &str) -> &'f mut Slot {
        frame
            .iter_mut()
            .rev()
            .find_map(|s| s.get_mut(name))
            .expect("lowered program declares every variable")
    }

    fn store(&mut self, target: &'a IExpr, v: i64, frame: &mut Frame) -> Result<(), Unwound> {
        match target {
            IExpr::Var(n) => {
                if let Slot::Scalar(t, x) = Self::slot(frame, n) {
                    *x = coerce(*t, v);
                }
            }
            IExpr::Index(n, i) => {
                let idx = self.expr(i, frame)?;
                if let Slot::Array(t, xs) = Self::slot(frame, n) {
                    if let Some(x) = usize::try_from(idx).ok().and_then(|i| xs.get_mut(i)) {
                        *x = coerce(*t, v);
                    }
                }
            }
            _ => unreachable!("assignment target"),
        }
        Ok(())
    }

    fn call(&mut self, f: &'a IFunction, args: Vec<i64>) -> Result<i64, Unwound> {
        let mut frame: Frame = vec![HashMap::new()];
        for ((name, ty), v) in f.params.iter().zip(args) {
            frame[0].insert(name.clone(), Slot::Scalar(*ty, coerce(*ty, v)));
        }
        Ok(match (self.block(&f.body, &mut frame)?, f.ret) {
            (Flow::Return(v), ReturnType::Bool) => coerce(ScalarType::Bool, v),
            (Flow::Return(v), _) => v,
            _ => 0,
        })
    }

    fn expr(&mut self, e: &'a IExpr, frame: &mut Frame) -> Result<i64, Unwound> {
        let w = self.width;
        Ok(match e {
            IExpr::Const(n) => wrap(*n, w),
            IExpr::Var(n) => match Self::slot(frame, n) {
                Slot::Scalar(_, v) => *v,
                Slot::Array(..) => unreachable!("scalar use"),
            },
            IExpr::Index(n, i) => {
                let idx = self.expr(i, frame)?;
                match Self::slot(frame, n) {
                    Slot::Array(_, xs) => usize::try_from(idx)
                        .ok()
                        .and_then(|i| xs.get(i))
                        .copied()
                        .unwrap_or(0),
                    Slot::Scalar(..) => unreachable!("array use"),
                }
            }
            IExpr::Unary(op, a) => {
                let a = self.expr(a, frame)?;
                apply_unop(*op, a, w)
            }
            IExpr::Binary(BinOp::And, a, b) => {
                (self.expr(a, frame)? != 0 && self.expr(b, frame)? != 0) as i64
            }
            IExpr::Binary(BinOp::Or, a, b) => {
                (self.expr(a, frame)? != 0 || self.expr(b, frame)? != 0) as i64
            }
            IExpr::Binary(op, a, b) => {
                let a = self.expr(a, frame)?;
                let b = self.expr(b, frame)?;
                apply_binop(*op, a, b, w)
            }
            IExpr::Call(name, args) => {
                let f = self.scope.function(name).expect("lowered call");
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.expr(a, frame)?);
                }
                self.call(f, vals)?
            }
            IExpr::Ternary(c, a, b) => {
                if self.expr(c, frame)? != 0 {
                    self.expr(a, frame)?
                } else {
                    self.expr(b, frame)?
                }
            }
            IExpr::Assign { target, op, value } => {
                let old = match op {
                    AssignOp::Set => 0,
                    _ => self.expr(target, frame)?,
                };
                let rhs = match value {
                    Some(v) => self.expr(v, frame)?,
                    None => 1,
                };
                let v = match op.binop() {
                    None => rhs,
                    Some(b) => apply_binop(b, old, rhs, w),
                };
                self.store(target, v, frame)?;
                1
            }
            IExpr::Read { target, .. } => {
                let v = self
                    .scope
                    .test
                    .inputs
                    .get(self.next_input)
                    .map_or(0, |&v| wrap(v, w));
                self.next_input += 1;
                self.store(target, v, frame)?;
                1
            }
            IExpr::Healthy(c) => self.choices.healthy(*c, &self.path) as i64,
            IExpr::Else(c) => self.choices.else_branch(self.scope.index, *c, &self.path) as i64,
            IExpr::Nondet { comp, ty } => {
                let v = self.choices.nondet(self.scope.index, *comp, &self.path, *ty);
                coerce(*ty, wrap(v, w))
            }
        })
    }
}
