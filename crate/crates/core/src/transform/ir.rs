//! Lowered program form shared by the unrolled and instrumented programs.

use crate::frontend::{AssignOp, BinOp, NodeId, ReturnType, ScalarType, TestCase, UnOp, VarType};

pub type CompId = usize;

#[derive(Debug, Clone, PartialEq)]
pub enum IExpr {
    Const(i64),
    Var(String),
    Index(String, Box<IExpr>),
    Unary(UnOp, Box<IExpr>),
    Binary(BinOp, Box<IExpr>, Box<IExpr>),
    Call(String, Vec<IExpr>),
    Ternary(Box<IExpr>, Box<IExpr>, Box<IExpr>),
    /// Assignment used as an expression; evaluates to 1.
    Assign {
        target: Box<IExpr>,
        op: AssignOp,
        value: Option<Box<IExpr>>,
    },
    /// `target = _input_f<scope>[_ioff_f<scope>++]`; evaluates to 1.
    Read { target: Box<IExpr>, scope: usize },
    /// Relaxation variable of a component, indexed by the current loop offsets.
    Healthy(CompId),
    /// Scope-local branch choice of a relaxed if-condition.
    Else(CompId),
    /// Fresh unconstrained value per scope, component and iteration.
    Nondet { comp: CompId, ty: ScalarType },
}

impl IExpr {
    pub fn boxed(self) -> Box<IExpr> {
        Box::new(self)
    }

    pub fn ternary(c: IExpr, a: IExpr, b: IExpr) -> IExpr {
        IExpr::Ternary(c.boxed(), a.boxed(), b.boxed())
    }

    pub fn binary(op: BinOp, a: IExpr, b: IExpr) -> IExpr {
        IExpr::Binary(op, a.boxed(), b.boxed())
    }

    /// Pre-order walk over sub-expressions.
    pub fn walk(&self, f: &mut impl FnMut(&IExpr)) {
        f(self);
        match self {
            IExpr::Const(_)
            | IExpr::Var(_)
            | IExpr::Healthy(_)
            | IExpr::Else(_)
            | IExpr::Nondet { .. } => {}
            IExpr::Index(_, i) => i.walk(f),
            IExpr::Unary(_, a) => a.walk(f),
            IExpr::Binary(_, a, b) => {
                a.walk(f);
                b.walk(f);
            }
            IExpr::Call(_, args) => args.iter().for_each(|a| a.walk(f)),
            IExpr::Ternary(c, a, b) => {
                c.walk(f);
                a.walk(f);
                b.walk(f);
            }
            IExpr::Assign { target, value, .. } => {
                target.walk(f);
                if let Some(v) = value {
                    v.walk(f);
                }
            }
            IExpr::Read { target, .. } => target.walk(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IStmt {
    /// Node id of the originating source statement; 0 for scaffolding.
    pub origin: NodeId,
    pub kind: IStmtKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IStmtKind {
    Decl {
        name: String,
        ty: VarType,
    },
    Expr(IExpr),
    If {
        cond: IExpr,
        then_branch: Vec<IStmt>,
        else_branch: Vec<IStmt>,
    },
    Loop {
        /// Program-wide loop number; names the offset `_los<number>`.
        number: usize,
        init: Vec<IExpr>,
        cond: IExpr,
        update: Vec<IExpr>,
        body: Vec<IStmt>,
    },
    /// Appends one value to the scope's output buffer.
    Write { scope: usize, value: IExpr },
    Return(Option<IExpr>),
    /// Exit point of a scope: control moves on to the next scope.
    Exit { scope: usize },
    Block(Vec<IStmt>),
}

impl IStmt {
    pub fn new(origin: NodeId, kind: IStmtKind) -> IStmt {
        IStmt { origin, kind }
    }

    /// Pre-order walk over statements.
    pub fn walk(&self, f: &mut impl FnMut(&IStmt)) {
        f(self);
        match &self.kind {
            IStmtKind::If {
                then_branch,
                else_branch,
                ..
            } => then_branch.iter().chain(else_branch).for_each(|s| s.walk(f)),
            IStmtKind::Loop { body, .. } | IStmtKind::Block(body) => {
                body.iter().for_each(|s| s.walk(f))
            }
            _ => {}
        }
    }

    /// Expressions appearing directly in this statement.
    pub fn exprs(&self) -> Vec<&IExpr> {
        match &self.kind {
            IStmtKind::Decl { .. } | IStmtKind::Exit { .. } | IStmtKind::Block(_) => vec![],
            IStmtKind::Expr(e) | IStmtKind::Write { value: e, .. } => vec![e],
            IStmtKind::If { cond, .. } => vec![cond],
            IStmtKind::Loop {
                init, cond, update, ..
            } => init.iter().chain([cond]).chain(update).collect(),
            IStmtKind::Return(e) => e.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IFunction {
    /// Name inside the scope, e.g. `max_0`.
    pub name: String,
    pub original: String,
    pub ret: ReturnType,
    pub params: Vec<(String, ScalarType)>,
    pub body: Vec<IStmt>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scope {
    pub index: usize,
    pub test: TestCase,
    pub functions: Vec<IFunction>,
    pub body: Vec<IStmt>,
}

impl Scope {
    pub fn function(&self, name: &str) -> Option<&IFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    /// Every statement of the scope, including auxiliary function bodies.
    pub fn walk(&self, f: &mut impl FnMut(&IStmt)) {
        for s in self.body.iter().chain(self.functions.iter().flat_map(|f| &f.body)) {
            s.walk(f);
        }
    }
}
