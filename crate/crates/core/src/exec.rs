//! Concrete interpretation of MiniC programs.

use std::collections::HashMap;

use crate::frontend::{
    AssignOp, BinOp, Expr, ExprKind, Function, Program, ReturnType, ScalarType, Stmt, StmtKind,
    TestCase, TestSuite, UnOp, VarType,
};

/// Bounds on a concrete run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of iterations one execution of a loop may perform.
    pub max_loop_iterations: u32,
    pub max_total_steps: u64,
    /// Bit width of `int`.
    pub width: u32,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_loop_iterations: 8,
            max_total_steps: 100_000,
            width: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    InputUnderrun,
    IndexOutOfBounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecStatus {
    Completed,
    StepLimitExceeded,
    RuntimeFault(FaultKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecResult {
    pub status: ExecStatus,
    pub output: Vec<i64>,
    pub steps: u64,
}

/// Two's-complement wraparound to `width` bits.
pub fn wrap(v: i64, width: u32) -> i64 {
    if width >= 64 {
        return v;
    }
    let shift = 64 - width;
    (v << shift) >> shift
}

pub fn min_value(width: u32) -> i64 {
    -(1i64 << (width - 1))
}

pub fn max_value(width: u32) -> i64 {
    (1i64 << (width - 1)) - 1
}

/// Binary operator on `width`-bit values. Division and remainder by zero
/// yield 0; `MIN / -1` wraps.
pub fn apply_binop(op: BinOp, a: i64, b: i64, width: u32) -> i64 {
    let v = match op {
        BinOp::Add => a.wrapping_add(b),
        BinOp::Sub => a.wrapping_sub(b),
        BinOp::Mul => a.wrapping_mul(b),
        BinOp::Div => {
            if b == 0 {
                0
            } else {
                a.wrapping_div(b)
            }
        }
        BinOp::Mod => {
            if b == 0 {
                0
            } else {
                a.wrapping_rem(b)
            }
        }
        BinOp::Lt => (a < b) as i64,
        BinOp::Le => (a <= b) as i64,
        BinOp::Gt => (a > b) as i64,
        BinOp::Ge => (a >= b) as i64,
        BinOp::Eq => (a == b) as i64,
        BinOp::Ne => (a != b) as i64,
        BinOp::And => (a != 0 && b != 0) as i64,
        BinOp::Or => (a != 0 || b != 0) as i64,
    };
    wrap(v, width)
}

pub fn apply_unop(op: UnOp, a: i64, width: u32) -> i64 {
    match op {
        UnOp::Neg => wrap(a.wrapping_neg(), width),
        UnOp::Not => (a == 0) as i64,
    }
}

/// Value stored into a variable of the given scalar type.
pub fn coerce(ty: ScalarType, v: i64) -> i64 {
    match ty {
        ScalarType::Int => v,
        ScalarType::Bool => (v != 0) as i64,
    }
}

#[derive(Debug, Clone)]
enum Slot {
    Scalar(ScalarType, i64),
    Array(ScalarType, Vec<i64>),
}

enum Flow {
    Normal,
    Return(i64),
}

struct StepLimit;

struct Interp<'a> {
    program: &'a Program,
    limits: Limits,
    inputs: &'a [i64],
    next_input: usize,
    output: Vec<i64>,
    steps: u64,
    fault: Option<FaultKind>,
}

type Frame = Vec<HashMap<String, Slot>>;

/// Runs `main` on `inputs`.
pub fn run_concrete(program: &Program, inputs: &[i64], limits: &Limits) -> ExecResult {
    let mut it = Interp {
        program,
        limits: *limits,
        inputs,
        next_input: 0,
        output: Vec::new(),
        steps: 0,
        fault: None,
    };
    let outcome = it.call(program.main(), vec![]);
    let status = match (outcome, it.fault) {
        (Err(StepLimit), _) => ExecStatus::StepLimitExceeded,
        (Ok(_), Some(f)) => ExecStatus::RuntimeFault(f),
        (Ok(_), None) => ExecStatus::Completed,
    };
    ExecResult {
        status,
        output: it.output,
        steps: it.steps,
    }
}

/// True iff the run completed and produced exactly the expected output.
pub fn passes(result: &ExecResult, test: &TestCase) -> bool {
    result.status == ExecStatus::Completed && result.output == test.expected_output
}

/// Splits a suite into passing and failing tests, preserving order.
pub fn classify_tests(
    program: &Program,
    suite: &TestSuite,
    limits: &Limits,
) -> (Vec<TestCase>, Vec<TestCase>) {
    suite
        .tests
        .iter()
        .cloned()
        .partition(|t| passes(&run_concrete(program, &t.inputs, limits), t))
}

impl<'a> Interp<'a> {
    fn call(&mut self, f: &'a Function, args: Vec<i64>) -> Result<i64, StepLimit> {
        let mut frame: Frame = vec![HashMap::new()];
        for (p, v) in f.params.iter().zip(args) {
            frame[0].insert(p.name.clone(), Slot::Scalar(p.ty, coerce(p.ty, v)));
        }
        let flow = self.block(&f.body, &mut frame)?;
        Ok(match (flow, f.ret) {
            (Flow::Return(v), ReturnType::Bool) => coerce(ScalarType::Bool, v),
            (Flow::Return(v), _) => v,
            (Flow::Normal, _) => 0,
        })
    }

    fn block(&mut self, stmts: &'a [Stmt], frame: &mut Frame) -> Result<Flow, StepLimit> {
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

    fn tick(&mut self) -> Result<(), StepLimit> {
        self.steps += 1;
        if self.steps > self.limits.max_total_steps {
            Err(StepLimit)
        } else {
            Ok(())
        }
    }

    fn stmt(&mut self, s: &'a Stmt, frame: &mut Frame) -> Result<Flow, StepLimit> {
        self.tick()?;
        match &s.kind {
            StmtKind::Decl { name, ty, init } => {
                let slot = match ty {
                    VarType::Array(t, n) => Slot::Array(*t, vec![0; *n as usize]),
                    t => Slot::Scalar(t.scalar(), 0),
                };
                // The initializer is evaluated before the name comes into scope.
                let v = init.as_ref().map(|e| self.expr(e, frame)).transpose()?;
                frame.last_mut().expect("scope").insert(name.clone(), slot);
                if let Some(v) = v {
                    self.store_var(name, v, frame);
                }
            }
            StmtKind::Assign(a) => {
                let old = match a.op {
                    AssignOp::Set => 0,
                    _ => self.expr(&a.target, frame)?,
                };
                let rhs = match &a.value {
                    Some(v) => self.expr(v, frame)?,
                    None => 1,
                };
                let v = match a.op.binop() {
                    None => rhs,
                    Some(op) => apply_binop(op, old, rhs, self.limits.width),
                };
                self.store(&a.target, v, frame)?;
            }
            StmtKind::Call(e) => {
                self.expr(e, frame)?;
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                if self.expr(cond, frame)? != 0 {
                    return self.block(then_branch, frame);
                } else if let Some(b) = else_branch {
                    return self.block(b, frame);
                }
            }
            StmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                for i in init {
                    self.stmt(i, frame)?;
                }
                let mut iterations = 0u32;
                while self.expr(cond, frame)? != 0 {
                    if iterations == self.limits.max_loop_iterations {
                        return Err(StepLimit);
                    }
                    iterations += 1;
                    if let Flow::Return(v) = self.block(body, frame)? {
                        return Ok(Flow::Return(v));
                    }
                    for u in update {
                        self.stmt(u, frame)?;
                    }
                }
            }
            StmtKind::Read { targets, .. } => {
                for t in targets {
                    let v = match self.inputs.get(self.next_input) {
                        Some(&v) => wrap(v, self.limits.width),
                        None => {
                            self.fault.get_or_insert(FaultKind::InputUnderrun);
                            0
                        }
                    };
                    self.next_input += 1;
                    self.store(t, v, frame)?;
                }
            }
            StmtKind::Write { args, .. } => {
                for a in args {
                    let v = self.expr(a, frame)?;
                    self.output.push(v);
                }
            }
            StmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.expr(e, frame)?,
                    None => 0,
                };
                return Ok(Flow::Return(v));
            }
            StmtKind::Block(b) => return self.block(b, frame),
        }
        Ok(Flow::Normal)
    }

    fn slot<'f>(frame: &'f mut Frame, name: &str) -> &'f mut Slot {
        frame
            .iter_mut()
            .rev()
            .find_map(|s| s.get_mut(name))
            .expect("validated program declares every variable")
    }

    fn store_var(&mut self, name: &str, v: i64, frame: &mut Frame) {
        if let Slot::Scalar(t, x) = Self::slot(frame, name) {
            *x = coerce(*t, v);
        }
    }

    fn store(&mut self, target: &'a Expr, v: i64, frame: &mut Frame) -> Result<(), StepLimit> {
        match &target.kind {
            ExprKind::Var(n) => self.store_var(n, v, frame),
            ExprKind::Index(n, i) => {
                let idx = self.expr(i, frame)?;
                if let Slot::Array(t, xs) = Self::slot(frame, n) {
                    match usize::try_from(idx).ok().filter(|&i| i < xs.len()) {
                        Some(i) => xs[i] = coerce(*t, v),
                        None => {
                            self.fault.get_or_insert(FaultKind::IndexOutOfBounds);
                        }
                    }
                }
            }
            _ => unreachable!("validated assignment target"),
        }
        Ok(())
    }

    fn expr(&mut self, e: &'a Expr, frame: &mut Frame) -> Result<i64, StepLimit> {
        let w = self.limits.width;
        Ok(match &e.kind {
            ExprKind::Int(n) => wrap(*n, w),
            ExprKind::Var(n) => match Self::slot(frame, n) {
                Slot::Scalar(_, v) => *v,
                Slot::Array(..) => unreachable!("validated scalar use"),
            },
            ExprKind::Index(n, i) => {
                let idx = self.expr(i, frame)?;
                let Slot::Array(_, xs) = Self::slot(frame, n) else {
                    unreachable!("validated array use")
                };
                match usize::try_from(idx).ok().and_then(|i| xs.get(i)) {
                    Some(&v) => v,
                    None => {
                        self.fault.get_or_insert(FaultKind::IndexOutOfBounds);
                        0
                    }
                }
            }
            ExprKind::Unary(op, a) => {
                let a = self.expr(a, frame)?;
                apply_unop(*op, a, w)
            }
            ExprKind::Binary(BinOp::And, a, b) => {
                (self.expr(a, frame)? != 0 && self.expr(b, frame)? != 0) as i64
            }
            ExprKind::Binary(BinOp::Or, a, b) => {
                (self.expr(a, frame)? != 0 || self.expr(b, frame)? != 0) as i64
            }
            ExprKind::Binary(op, a, b) => {
                let a = self.expr(a, frame)?;
                let b = self.expr(b, frame)?;
                apply_binop(*op, a, b, w)
            }
            ExprKind::Call(name, args) => {
                let f = self.program.function(name).expect("validated call");
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.expr(a, frame)?);
                }
                self.call(f, vals)?
            }
        })
    }
}
