//! Translation of instrumented scopes into guarded SSA definitions over the
//! term arena. Loops are unwound, calls inlined.

use std::collections::HashMap;

use crate::exec::{max_value, min_value};
use crate::frontend::{AssignOp, BinOp, ReturnType, ScalarType, UnOp, VarType};
use crate::transform::{CompId, ComponentTable, IExpr, IFunction, IStmt, IStmtKind, InstrumentedProgram, Scope};

use super::term::{BvOp, Sort, TermArena, TermId};
use super::EncodeError;

/// Output cells beyond the expected length before the buffer overflows.
pub const OUTPUT_SLACK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SsaOptions {
    pub unwind: u32,
    pub width: u32,
    /// Treat exceeding the unwind bound as satisfying the scope's assertion
    /// instead of assuming it away.
    pub unwind_assert: bool,
}

/// One named version of a program variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub term: TermId,
}

#[derive(Debug, Clone)]
pub struct ScopeSsa {
    pub test_id: String,
    pub definitions: Vec<Definition>,
    /// Output buffer cells; the capacity is the expected length plus slack.
    pub output: Vec<TermId>,
    pub output_len: TermId,
    pub overflow: TermId,
    /// Some loop ran past the unwind bound.
    pub exceeded: TermId,
    pub expected: Vec<i64>,
    /// Output length and contents match the expectation.
    pub assertion: TermId,
}

#[derive(Debug, Clone)]
pub struct SsaProgram {
    pub arena: TermArena,
    pub width: u32,
    pub unwind: u32,
    /// Healthy symbol of every component.
    pub healthy: Vec<TermId>,
    /// Unwinding assumptions and links from healthy symbols to their
    /// per-iteration activations.
    pub hard: Vec<TermId>,
    pub scopes: Vec<ScopeSsa>,
}

pub fn ssa_translate(p: &InstrumentedProgram, opts: &SsaOptions) -> Result<SsaProgram, EncodeError> {
    if !matches!(opts.width, 8 | 16 | 32) {
        return Err(EncodeError::Width(opts.width));
    }
    if opts.unwind == 0 {
        return Err(EncodeError::ZeroUnwind);
    }
    let mut arena = TermArena::new(opts.width);
    let healthy = p
        .table
        .components
        .iter()
        .map(|c| arena.fresh(c.healthy_var.clone(), Sort::Bool))
        .collect();
    let mut g = Global {
        arena,
        table: &p.table,
        opts: *opts,
        healthy,
        acts: HashMap::new(),
        hard: vec![],
    };
    let mut scopes = Vec::new();
    for scope in &p.unrolled.scopes {
        scopes.push(g.scope(scope)?);
    }
    Ok(SsaProgram {
        arena: g.arena,
        width: opts.width,
        unwind: opts.unwind,
        healthy: g.healthy,
        hard: g.hard,
        scopes,
    })
}

struct Global<'a> {
    arena: TermArena,
    table: &'a ComponentTable,
    opts: SsaOptions,
    healthy: Vec<TermId>,
    acts: HashMap<(CompId, Vec<u32>), TermId>,
    hard: Vec<TermId>,
}

fn check_range(v: i64, width: u32, what: &str, test: &str) -> Result<(), EncodeError> {
    if v < min_value(width) || v > max_value(width) {
        return Err(EncodeError::Range {
            test: test.to_string(),
            what: what.to_string(),
            value: v,
            width,
        });
    }
    Ok(())
}

impl<'a> Global<'a> {
    fn scope(&mut self, scope: &'a Scope) -> Result<ScopeSsa, EncodeError> {
        let w = self.opts.width;
        let test = &scope.test;
        for &v in &test.inputs {
            check_range(v, w, "input", &test.id)?;
        }
        for &v in &test.expected_output {
            check_range(v, w, "expected output", &test.id)?;
        }
        let input = test.inputs.iter().map(|&v| self.arena.constant(v)).collect();
        let zero = self.arena.constant(0);
        let ff = self.arena.ff();
        let cap = test.expected_output.len() + OUTPUT_SLACK;
        let mut s = ScopeTr {
            g: self,
            scope,
            path: vec![],
            input,
            ioff: zero,
            output: vec![zero; cap],
            output_len: zero,
            overflow: ff,
            exceeded: ff,
            definitions: vec![],
            versions: HashMap::new(),
            elses: HashMap::new(),
            nondets: 0,
        };
        let tt = s.g.arena.tt();
        let mut ctx = Ctx {
            guard: tt,
            alive: tt,
            ret: zero,
        };
        let mut frame = vec![HashMap::new()];
        s.block(&scope.body, &mut ctx, &mut frame);
        let unwind_assert = s.g.opts.unwind_assert;

        let a = &mut s.g.arena;
        let n = test.expected_output.len();
        let len_ok = {
            let k = a.constant(n as i64);
            a.eq(s.output_len, k)
        };
        let mut assertion = a.not(s.overflow);
        assertion = a.and(assertion, len_ok);
        for (cell, &v) in s.output.iter().zip(&test.expected_output) {
            let k = a.constant(v);
            let e = a.eq(*cell, k);
            assertion = a.and(assertion, e);
        }
        if unwind_assert {
            assertion = a.or(assertion, s.exceeded);
        }
        Ok(ScopeSsa {
            test_id: test.id.clone(),
            definitions: s.definitions,
            output: s.output,
            output_len: s.output_len,
            overflow: s.overflow,
            exceeded: s.exceeded,
            expected: test.expected_output.clone(),
            assertion,
        })
    }

    /// Health of component `c` at the current dynamic loop position.
    fn health(&mut self, c: CompId, path: &[u32]) -> TermId {
        let h = self.healthy[c];
        if path.is_empty() {
            return h;
        }
        if let Some(&t) = self.acts.get(&(c, path.to_vec())) {
            return t;
        }
        let idx: Vec<String> = path.iter().map(u32::to_string).collect();
        let name = format!("{}[{}]", self.table.get(c).healthy_var, idx.join("]["));
        let act = self.arena.fresh(name, Sort::Bool);
        let link = self.arena.implies(h, act);
        self.hard.push(link);
        self.acts.insert((c, path.to_vec()), act);
        act
    }
}

#[derive(Clone)]
enum Slot {
    Scalar(ScalarType, TermId),
    Array(ScalarType, Vec<TermId>),
}

type Frame = Vec<HashMap<String, Slot>>;

/// Control state of one (inlined) function body.
struct Ctx {
    /// Path condition inside the body.
    guard: TermId,
    /// The body has not returned yet.
    alive: TermId,
    ret: TermId,
}

struct ScopeTr<'g, 'a> {
    g: &'g mut Global<'a>,
    scope: &'a Scope,
    path: Vec<u32>,
    input: Vec<TermId>,
    ioff: TermId,
    output: Vec<TermId>,
    output_len: TermId,
    overflow: TermId,
    exceeded: TermId,
    definitions: Vec<Definition>,
    versions: HashMap<String, u32>,
    elses: HashMap<(CompId, Vec<u32>), TermId>,
    nondets: usize,
}

impl<'a> ScopeTr<'_, 'a> {
    fn a(&mut self) -> &mut TermArena {
        &mut self.g.arena
    }

    fn active(&mut self, ctx: &Ctx) -> TermId {
        let (g, alive) = (ctx.guard, ctx.alive);
        self.a().and(g, alive)
    }

    fn define(&mut self, name: &str, term: TermId) {
        let v = self.versions.entry(name.to_string()).or_insert(0);
        let name = format!("{name}#{v}");
        *v += 1;
        self.definitions.push(Definition { name, term });
    }

    fn coerce(&mut self, ty: ScalarType, v: TermId) -> TermId {
        match ty {
            ScalarType::Int => v,
            ScalarType::Bool => {
                let b = self.a().truthy(v);
                self.a().from_bool(b)
            }
        }
    }

    fn block(&mut self, stmts: &'a [IStmt], ctx: &mut Ctx, frame: &mut Frame) {
        frame.push(HashMap::new());
        for s in stmts {
            self.stmt(s, ctx, frame);
        }
        frame.pop();
    }

    fn stmt(&mut self, s: &'a IStmt, ctx: &mut Ctx, frame: &mut Frame) {
        match &s.kind {
            IStmtKind::Decl { name, ty } => {
                let slot = match ty {
                    VarType::Array(t, n) => Slot::Array(
                        *t,
                        (0..*n)
                            .map(|i| {
                                let sym = format!("{name}[{i}]#init");
                                self.a().fresh(sym, Sort::Bv)
                            })
                            .collect(),
                    ),
                    t => {
                        let v = self.versions.get(name).copied().unwrap_or(0);
                        let sym = self.a().fresh(format!("{name}?{v}"), Sort::Bv);
                        let sym = self.coerce(t.scalar(), sym);
                        self.define(name, sym);
                        Slot::Scalar(t.scalar(), sym)
                    }
                };
                frame.last_mut().expect("frame").insert(name.clone(), slot);
            }
            IStmtKind::Expr(e) => {
                self.expr(e, ctx, frame);
            }
            IStmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let c = self.expr(cond, ctx, frame);
                let c = self.a().truthy(c);
                let outer = ctx.guard;
                ctx.guard = self.a().and(outer, c);
                self.block(then_branch, ctx, frame);
                let nc = self.a().not(c);
                ctx.guard = self.a().and(outer, nc);
                self.block(else_branch, ctx, frame);
                ctx.guard = outer;
            }
            IStmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                for i in init {
                    self.expr(i, ctx, frame);
                }
                let outer = ctx.guard;
                for k in 0..self.g.opts.unwind {
                    self.path.push(k);
                    let c = self.expr(cond, ctx, frame);
                    let c = self.a().truthy(c);
                    ctx.guard = self.a().and(ctx.guard, c);
                    self.block(body, ctx, frame);
                    for u in update {
                        self.expr(u, ctx, frame);
                    }
                    self.path.pop();
                }
                self.path.push(self.g.opts.unwind);
                let c = self.expr(cond, ctx, frame);
                self.path.pop();
                let c = self.a().truthy(c);
                let act = self.active(ctx);
                let over = self.a().and(act, c);
                if self.g.opts.unwind_assert {
                    let e = self.exceeded;
                    self.exceeded = self.a().or(e, over);
                } else {
                    let assume = self.a().not(over);
                    self.g.hard.push(assume);
                }
                ctx.guard = outer;
            }
            IStmtKind::Write { value, .. } => {
                let v = self.expr(value, ctx, frame);
                let act = self.active(ctx);
                self.write_output(act, v);
            }
            IStmtKind::Return(e) => {
                let v = match e {
                    Some(e) => self.expr(e, ctx, frame),
                    None => self.a().constant(0),
                };
                self.leave(ctx, Some(v));
            }
            IStmtKind::Exit { .. } => self.leave(ctx, None),
            IStmtKind::Block(b) => self.block(b, ctx, frame),
        }
    }

    fn leave(&mut self, ctx: &mut Ctx, value: Option<TermId>) {
        let act = self.active(ctx);
        if let Some(v) = value {
            ctx.ret = self.a().ite(act, v, ctx.ret);
        }
        let ng = self.a().not(ctx.guard);
        ctx.alive = self.a().and(ctx.alive, ng);
    }

    fn write_output(&mut self, act: TermId, v: TermId) {
        let cap = self.output.len();
        let a = &mut self.g.arena;
        for j in 0..cap {
            let k = a.constant(j as i64);
            let at = a.eq(self.output_len, k);
            let hit = a.and(act, at);
            self.output[j] = a.ite(hit, v, self.output[j]);
        }
        let capk = a.constant(cap as i64);
        let full = a.eq(self.output_len, capk);
        let spill = a.and(act, full);
        self.overflow = a.or(self.overflow, spill);
        let nf = a.not(full);
        let grow = a.and(act, nf);
        let one = a.constant(1);
        let next = a.bin(BvOp::Add, self.output_len, one);
        self.output_len = a.ite(grow, next, self.output_len);
        let len = self.output_len;
        self.define("_ooff", len);
    }

    fn slot<'f>(frame: &'f mut Frame, name: &str) -> &'f mut Slot {
        frame
            .iter_mut()
            .rev()
            .find_map(|s| s.get_mut(name))
            .expect("lowered program declares every variable")
    }

    fn store(&mut self, target: &'a IExpr, v: TermId, ctx: &mut Ctx, frame: &mut Frame) {
        let act = self.active(ctx);
        match target {
            IExpr::Var(n) => {
                let Slot::Scalar(t, old) = Self::slot(frame, n).clone() else {
                    unreachable!("scalar target")
                };
                let v = self.coerce(t, v);
                let new = self.a().ite(act, v, old);
                if let Slot::Scalar(_, x) = Self::slot(frame, n) {
                    *x = new;
                }
                self.define(n, new);
            }
            IExpr::Index(n, i) => {
                let idx = self.expr(i, ctx, frame);
                let act = self.active(ctx);
                let Slot::Array(t, mut cells) = Self::slot(frame, n).clone() else {
                    unreachable!("array target")
                };
                let v = self.coerce(t, v);
                for (j, cell) in cells.iter_mut().enumerate() {
                    let a = &mut self.g.arena;
                    let k = a.constant(j as i64);
                    let at = a.eq(idx, k);
                    let hit = a.and(act, at);
                    *cell = a.ite(hit, v, *cell);
                }
                *Self::slot(frame, n) = Slot::Array(t, cells);
            }
            _ => unreachable!("assignment target"),
        }
    }

    fn call(&mut self, f: &'a IFunction, args: Vec<TermId>, caller: &Ctx) -> TermId {
        let mut frame: Frame = vec![HashMap::new()];
        for ((name, ty), v) in f.params.iter().zip(args) {
            let v = self.coerce(*ty, v);
            self.define(name, v);
            frame[0].insert(name.clone(), Slot::Scalar(*ty, v));
        }
        let guard = self.active(caller);
        let zero = self.a().constant(0);
        let tt = self.a().tt();
        let mut ctx = Ctx {
            guard,
            alive: tt,
            ret: zero,
        };
        self.block(&f.body, &mut ctx, &mut frame);
        match f.ret {
            ReturnType::Bool => self.coerce(ScalarType::Bool, ctx.ret),
            _ => ctx.ret,
        }
    }

    fn expr(&mut self, e: &'a IExpr, ctx: &mut Ctx, frame: &mut Frame) -> TermId {
        match e {
            IExpr::Const(n) => self.a().constant(*n),
            IExpr::Var(n) => match Self::slot(frame, n) {
                Slot::Scalar(_, v) => *v,
                Slot::Array(..) => unreachable!("scalar use"),
            },
            IExpr::Index(n, i) => {
                let idx = self.expr(i, ctx, frame);
                let Slot::Array(_, cells) = Self::slot(frame, n).clone() else {
                    unreachable!("array use")
                };
                self.select(&cells, idx)
            }
            IExpr::Unary(op, x) => {
                let x = self.expr(x, ctx, frame);
                match op {
                    UnOp::Neg => self.a().neg(x),
                    UnOp::Not => {
                        let t = self.a().truthy(x);
                        let n = self.a().not(t);
                        self.a().from_bool(n)
                    }
                }
            }
            IExpr::Binary(op @ (BinOp::And | BinOp::Or), x, y) => {
                let x = self.expr(x, ctx, frame);
                let x = self.a().truthy(x);
                let outer = ctx.guard;
                let taken = match op {
                    BinOp::And => x,
                    _ => self.a().not(x),
                };
                ctx.guard = self.a().and(outer, taken);
                let y = self.expr(y, ctx, frame);
                ctx.guard = outer;
                let y = self.a().truthy(y);
                let r = match op {
                    BinOp::And => self.a().and(x, y),
                    _ => self.a().or(x, y),
                };
                self.a().from_bool(r)
            }
            IExpr::Binary(op, x, y) => {
                let x = self.expr(x, ctx, frame);
                let y = self.expr(y, ctx, frame);
                self.binary(*op, x, y)
            }
            IExpr::Call(name, args) => {
                let f = self.scope.function(name).expect("lowered call");
                let vals = args.iter().map(|a| self.expr(a, ctx, frame)).collect();
                self.call(f, vals, ctx)
            }
            IExpr::Ternary(c, x, y) => {
                let c = self.expr(c, ctx, frame);
                let c = self.a().truthy(c);
                let outer = ctx.guard;
                ctx.guard = self.a().and(outer, c);
                let x = self.expr(x, ctx, frame);
                let nc = self.a().not(c);
                ctx.guard = self.a().and(outer, nc);
                let y = self.expr(y, ctx, frame);
                ctx.guard = outer;
                self.a().ite(c, x, y)
            }
            IExpr::Assign { target, op, value } => {
                let old = match op {
                    AssignOp::Set => None,
                    _ => Some(self.expr(target, ctx, frame)),
                };
                let rhs = match value {
                    Some(v) => self.expr(v, ctx, frame),
                    None => self.a().constant(1),
                };
                let v = match (op.binop(), old) {
                    (Some(b), Some(old)) => self.binary(b, old, rhs),
                    _ => rhs,
                };
                self.store(target, v, ctx, frame);
                self.a().constant(1)
            }
            IExpr::Read { target, .. } => {
                let v = self.select(&self.input.clone(), self.ioff);
                self.store(target, v, ctx, frame);
                let act = self.active(ctx);
                let a = &mut self.g.arena;
                let one = a.constant(1);
                let next = a.bin(BvOp::Add, self.ioff, one);
                self.ioff = a.ite(act, next, self.ioff);
                let off = self.ioff;
                self.define("_ioff", off);
                self.a().constant(1)
            }
            IExpr::Healthy(c) => {
                let path = self.path.clone();
                let h = self.g.health(*c, &path);
                self.a().from_bool(h)
            }
            IExpr::Else(c) => {
                let key = (*c, self.path.clone());
                let t = match self.elses.get(&key) {
                    Some(&t) => t,
                    None => {
                        let name = format!(
                            "{}@s{}{}",
                            self.g.table.get(*c).else_var.as_deref().unwrap_or("_ev"),
                            self.scope.index,
                            path_suffix(&self.path)
                        );
                        let t = self.a().fresh(name, Sort::Bool);
                        self.elses.insert(key, t);
                        t
                    }
                };
                self.a().from_bool(t)
            }
            IExpr::Nondet { comp, ty } => {
                let name = format!(
                    "nondet_{}@s{}{}#{}",
                    self.g.table.get(*comp).healthy_var,
                    self.scope.index,
                    path_suffix(&self.path),
                    self.nondets
                );
                self.nondets += 1;
                match ty {
                    ScalarType::Bool => {
                        let b = self.a().fresh(name, Sort::Bool);
                        self.a().from_bool(b)
                    }
                    ScalarType::Int => self.a().fresh(name, Sort::Bv),
                }
            }
        }
    }

    fn binary(&mut self, op: BinOp, x: TermId, y: TermId) -> TermId {
        let a = self.a();
        let b = match op {
            BinOp::Add => return a.bin(BvOp::Add, x, y),
            BinOp::Sub => return a.bin(BvOp::Sub, x, y),
            BinOp::Mul => return a.bin(BvOp::Mul, x, y),
            BinOp::Div => return a.bin(BvOp::Div, x, y),
            BinOp::Mod => return a.bin(BvOp::Rem, x, y),
            BinOp::Lt => a.slt(x, y),
            BinOp::Gt => a.slt(y, x),
            BinOp::Le => {
                let l = a.slt(y, x);
                a.not(l)
            }
            BinOp::Ge => {
                let l = a.slt(x, y);
                a.not(l)
            }
            BinOp::Eq => a.eq(x, y),
            BinOp::Ne => {
                let e = a.eq(x, y);
                a.not(e)
            }
            BinOp::And | BinOp::Or => unreachable!("short-circuit operators are handled by the caller"),
        };
        a.from_bool(b)
    }

    /// `cells[idx]`, 0 when out of range.
    fn select(&mut self, cells: &[TermId], idx: TermId) -> TermId {
        let a = &mut self.g.arena;
        let mut v = a.constant(0);
        for (j, &cell) in cells.iter().enumerate().rev() {
            let k = a.constant(j as i64);
            let at = a.eq(idx, k);
            v = a.ite(at, cell, v);
        }
        v
    }
}

fn path_suffix(path: &[u32]) -> String {
    path.iter().map(|k| format!("[{k}]")).collect()
}
