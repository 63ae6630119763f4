//! Lowering of the source tree into per-scope IR, applying the relaxation
//! rules of the selected mode.

use std::collections::HashMap;

use crate::frontend::{
    AssignOp, BinOp, Expr, ExprKind, Function, NodeId, Program, ScalarType, Stmt, StmtKind,
    TestCase, UnOp, VarType,
};

use super::components::{chain_operands, Layout};
use super::ir::{IExpr, IFunction, IStmt, IStmtKind, Scope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// No relaxation: the plain unrolled program.
    Plain,
    /// The four relaxation rules on every component.
    Instrument,
    /// Nondeterministic fallbacks on the components of the layout only.
    Refine,
}

pub(crate) fn lower_scope(program: &Program, layout: &Layout, mode: Mode, index: usize, test: &TestCase) -> Scope {
    let mut l = Lowerer {
        layout,
        mode,
        scope: index,
        vars: vec![],
        in_main: false,
    };
    let functions = program
        .functions
        .iter()
        .filter(|f| f.name != "main")
        .map(|f| l.function(f))
        .collect();
    l.in_main = true;
    l.vars = vec![HashMap::new()];
    let mut body = l.stmts(&program.main().body);
    body.push(IStmt::new(0, IStmtKind::Exit { scope: index }));
    Scope {
        index,
        test: test.clone(),
        functions,
        body,
    }
}

struct Lowerer<'a> {
    layout: &'a Layout,
    mode: Mode,
    scope: usize,
    vars: Vec<HashMap<String, VarType>>,
    in_main: bool,
}

impl Lowerer<'_> {
    fn name(&self, n: &str) -> String {
        format!("{n}_{}", self.scope)
    }

    fn comp(&self, node: NodeId) -> Option<usize> {
        match self.mode {
            Mode::Plain => None,
            _ => self.layout.by_node.get(&node).copied(),
        }
    }

    fn scalar_of(&self, target: &Expr) -> ScalarType {
        let name = match &target.kind {
            ExprKind::Var(n) | ExprKind::Index(n, _) => n,
            _ => unreachable!("validated assignment target"),
        };
        self.vars
            .iter()
            .rev()
            .find_map(|s| s.get(name))
            .map_or(ScalarType::Int, |t| t.scalar())
    }

    fn function(&mut self, f: &Function) -> IFunction {
        self.vars = vec![f.params.iter().map(|p| (p.name.clone(), p.ty.into())).collect()];
        let body = self.stmts(&f.body);
        IFunction {
            name: self.name(&f.name),
            original: f.name.clone(),
            ret: f.ret,
            params: f.params.iter().map(|p| (self.name(&p.name), p.ty)).collect(),
            body,
        }
    }

    fn stmts(&mut self, stmts: &[Stmt]) -> Vec<IStmt> {
        let mut out = Vec::new();
        for s in stmts {
            self.stmt(s, &mut out);
        }
        out
    }

    fn scoped(&mut self, stmts: &[Stmt]) -> Vec<IStmt> {
        self.vars.push(HashMap::new());
        let out = self.stmts(stmts);
        self.vars.pop();
        out
    }

    /// Rule 1: `if (_rv) S`.
    fn guarded(&self, comp: usize, origin: NodeId, s: IStmtKind) -> IStmt {
        IStmt::new(
            origin,
            IStmtKind::If {
                cond: IExpr::Healthy(comp),
                then_branch: vec![IStmt::new(origin, s)],
                else_branch: vec![],
            },
        )
    }

    /// `target op value` as an assignment expression under the current mode.
    fn assignment(&self, node: NodeId, target: &Expr, op: AssignOp, value: Option<&Expr>, list_item: bool) -> IExpr {
        let t = self.expr(target);
        let v = value.map(|v| self.expr(v));
        let plain = IExpr::Assign {
            target: t.clone().boxed(),
            op,
            value: v.clone().map(IExpr::boxed),
        };
        match (self.mode, self.comp(node)) {
            (Mode::Instrument, Some(c)) if list_item => {
                // Rule 3: `_rv ? e : 1`.
                IExpr::ternary(IExpr::Healthy(c), plain, IExpr::Const(1))
            }
            (Mode::Refine, Some(c)) => {
                let new_value = match (op.binop(), v) {
                    (None, Some(v)) => v,
                    (Some(b), v) => IExpr::binary(b, t.clone(), v.unwrap_or(IExpr::Const(1))),
                    (None, None) => unreachable!("plain assignment has a value"),
                };
                let ty = self.scalar_of(target);
                IExpr::Assign {
                    target: t.boxed(),
                    op: AssignOp::Set,
                    value: Some(
                        IExpr::ternary(IExpr::Healthy(c), new_value, IExpr::Nondet { comp: c, ty }).boxed(),
                    ),
                }
            }
            _ => plain,
        }
    }

    /// Call used as a statement or list item.
    fn call_item(&self, node: NodeId, call: &Expr, list_item: bool) -> Option<IExpr> {
        let e = self.expr(call);
        match (self.mode, self.comp(node)) {
            (Mode::Plain, _) | (_, None) => Some(e),
            (_, Some(c)) if list_item => Some(IExpr::ternary(IExpr::Healthy(c), e, IExpr::Const(1))),
            // Statement calls keep rule 1; the caller wraps them.
            _ => None,
        }
    }

    fn list_item(&self, s: &Stmt) -> IExpr {
        match &s.kind {
            StmtKind::Assign(a) => self.assignment(s.id, &a.target, a.op, a.value.as_ref(), true),
            StmtKind::Call(e) => self.call_item(s.id, e, true).expect("list items never need rule 1"),
            _ => unreachable!("validated loop item"),
        }
    }

    fn condition(&self, cond: &Expr, loop_cond: bool) -> IExpr {
        let e = self.expr(cond);
        match self.mode {
            Mode::Plain => e,
            Mode::Instrument => {
                let c = self.comp(cond.id).expect("every condition is a component");
                if loop_cond {
                    // Rule 4: `!_rv[_los] || c`.
                    IExpr::binary(BinOp::Or, IExpr::Unary(UnOp::Not, IExpr::Healthy(c).boxed()), e)
                } else {
                    // Rule 2: `_rv ? c : _ev`.
                    IExpr::ternary(IExpr::Healthy(c), e, IExpr::Else(c))
                }
            }
            Mode::Refine => {
                let split = self.layout.split_conditions.get(&cond.id);
                if split.is_none() && self.comp(cond.id).is_none() {
                    return e;
                }
                let (op, operands) = chain_operands(cond);
                let relaxed: Vec<IExpr> = operands
                    .into_iter()
                    .map(|o| {
                        let c = self.comp(o.id).expect("refined operand is a component");
                        IExpr::ternary(
                            IExpr::Healthy(c),
                            self.expr(o),
                            IExpr::Nondet {
                                comp: c,
                                ty: ScalarType::Bool,
                            },
                        )
                    })
                    .collect();
                let op = op.unwrap_or(BinOp::And);
                relaxed
                    .into_iter()
                    .reduce(|a, b| IExpr::binary(op, a, b))
                    .expect("at least one operand")
            }
        }
    }

    fn stmt(&mut self, s: &Stmt, out: &mut Vec<IStmt>) {
        match &s.kind {
            StmtKind::Decl { name, ty, init } => {
                out.push(IStmt::new(
                    s.id,
                    IStmtKind::Decl {
                        name: self.name(name),
                        ty: *ty,
                    },
                ));
                self.vars.last_mut().expect("scope").insert(name.clone(), *ty);
                if let Some(e) = init {
                    let target = Expr {
                        id: 0,
                        line: s.line,
                        kind: ExprKind::Var(name.clone()),
                    };
                    let a = self.assignment(s.id, &target, AssignOp::Set, Some(e), false);
                    self.push_effect(s.id, a, out);
                }
            }
            StmtKind::Assign(a) => {
                let e = self.assignment(s.id, &a.target, a.op, a.value.as_ref(), false);
                self.push_effect(s.id, e, out);
            }
            StmtKind::Call(call) => match self.call_item(s.id, call, false) {
                Some(e) => out.push(IStmt::new(s.id, IStmtKind::Expr(e))),
                None => {
                    let c = self.comp(s.id).expect("checked by call_item");
                    out.push(self.guarded(c, s.id, IStmtKind::Expr(self.expr(call))));
                }
            },
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let cond = self.condition(cond, false);
                let then_branch = self.scoped(then_branch);
                let else_branch = else_branch.as_ref().map_or(vec![], |b| self.scoped(b));
                out.push(IStmt::new(
                    s.id,
                    IStmtKind::If {
                        cond,
                        then_branch,
                        else_branch,
                    },
                ));
            }
            StmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                let init = init.iter().map(|i| self.list_item(i)).collect();
                let cond = self.condition(cond, true);
                let body = self.scoped(body);
                let update = update.iter().map(|u| self.list_item(u)).collect();
                out.push(IStmt::new(
                    s.id,
                    IStmtKind::Loop {
                        number: self.layout.loop_numbers[&s.id],
                        init,
                        cond,
                        update,
                        body,
                    },
                ));
            }
            StmtKind::Read { targets, .. } => {
                for t in targets {
                    let read = IExpr::Read {
                        target: self.expr(t).boxed(),
                        scope: self.scope,
                    };
                    match (self.mode, self.comp(t.id)) {
                        (Mode::Instrument, Some(c)) => {
                            out.push(self.guarded(c, s.id, IStmtKind::Expr(read)))
                        }
                        (Mode::Refine, Some(c)) => {
                            let ty = self.scalar_of(t);
                            let fallback = IExpr::Assign {
                                target: self.expr(t).boxed(),
                                op: AssignOp::Set,
                                value: Some(IExpr::Nondet { comp: c, ty }.boxed()),
                            };
                            let e = IExpr::ternary(IExpr::Healthy(c), read, fallback);
                            out.push(IStmt::new(s.id, IStmtKind::Expr(e)));
                        }
                        _ => out.push(IStmt::new(s.id, IStmtKind::Expr(read))),
                    }
                }
            }
            StmtKind::Write { args, .. } => {
                for a in args {
                    let w = IStmtKind::Write {
                        scope: self.scope,
                        value: self.expr(a),
                    };
                    match self.comp(a.id) {
                        Some(c) => out.push(self.guarded(c, s.id, w)),
                        None => out.push(IStmt::new(s.id, w)),
                    }
                }
            }
            StmtKind::Return(e) => {
                let e = e.as_ref().map(|e| self.expr(e));
                if self.in_main {
                    if let Some(e) = e.filter(has_call) {
                        out.push(IStmt::new(s.id, IStmtKind::Expr(e)));
                    }
                    out.push(IStmt::new(s.id, IStmtKind::Exit { scope: self.scope }));
                } else {
                    out.push(IStmt::new(s.id, IStmtKind::Return(e)));
                }
            }
            StmtKind::Block(b) => {
                let b = self.scoped(b);
                out.push(IStmt::new(s.id, IStmtKind::Block(b)));
            }
        }
    }

    /// Emits an assignment statement, applying rule 1 when instrumenting.
    fn push_effect(&self, origin: NodeId, e: IExpr, out: &mut Vec<IStmt>) {
        match (self.mode, self.comp(origin)) {
            (Mode::Instrument, Some(c)) => out.push(self.guarded(c, origin, IStmtKind::Expr(e))),
            _ => out.push(IStmt::new(origin, IStmtKind::Expr(e))),
        }
    }

    fn expr(&self, e: &Expr) -> IExpr {
        match &e.kind {
            ExprKind::Int(n) => IExpr::Const(*n),
            ExprKind::Var(v) => IExpr::Var(self.name(v)),
            ExprKind::Index(a, i) => IExpr::Index(self.name(a), self.expr(i).boxed()),
            ExprKind::Unary(op, a) => IExpr::Unary(*op, self.expr(a).boxed()),
            ExprKind::Binary(op, a, b) => IExpr::binary(*op, self.expr(a), self.expr(b)),
            ExprKind::Call(f, args) => {
                IExpr::Call(self.name(f), args.iter().map(|a| self.expr(a)).collect())
            }
        }
    }
}

fn has_call(e: &IExpr) -> bool {
    let mut found = false;
    e.walk(&mut |x| found |= matches!(x, IExpr::Call(..)));
    found
}
