//! Abstract syntax of MiniC.

use std::fmt;

pub type NodeId = u32;

/// Type of a declared variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarType {
    Int,
    Bool,
    Array(ScalarType, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarType {
    Int,
    Bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReturnType {
    Int,
    Bool,
    Void,
}

impl VarType {
    pub fn scalar(self) -> ScalarType {
        match self {
            VarType::Int => ScalarType::Int,
            VarType::Bool => ScalarType::Bool,
            VarType::Array(s, _) => s,
        }
    }

    pub fn is_array(self) -> bool {
        matches!(self, VarType::Array(..))
    }
}

impl From<ScalarType> for VarType {
    fn from(s: ScalarType) -> VarType {
        match s {
            ScalarType::Int => VarType::Int,
            ScalarType::Bool => VarType::Bool,
        }
    }
}

impl fmt::Display for ScalarType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarType::Int => "int",
            ScalarType::Bool => "bool",
        })
    }
}

impl fmt::Display for ReturnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReturnType::Int => "int",
            ReturnType::Bool => "bool",
            ReturnType::Void => "void",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    /// Binding strength; larger binds tighter.
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne => 3,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul | BinOp::Div | BinOp::Mod => 6,
        }
    }

    pub fn is_boolean(self) -> bool {
        !matches!(
            self,
            BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div | BinOp::Mod
        )
    }
}

/// Assignment operator. `Inc` and `Dec` carry no right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssignOp {
    Set,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Inc,
    Dec,
}

impl AssignOp {
    /// The arithmetic operator a compound assignment applies, if any.
    pub fn binop(self) -> Option<BinOp> {
        match self {
            AssignOp::Set => None,
            AssignOp::Add | AssignOp::Inc => Some(BinOp::Add),
            AssignOp::Sub | AssignOp::Dec => Some(BinOp::Sub),
            AssignOp::Mul => Some(BinOp::Mul),
            AssignOp::Div => Some(BinOp::Div),
            AssignOp::Mod => Some(BinOp::Mod),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            AssignOp::Set => "=",
            AssignOp::Add => "+=",
            AssignOp::Sub => "-=",
            AssignOp::Mul => "*=",
            AssignOp::Div => "/=",
            AssignOp::Mod => "%=",
            AssignOp::Inc => "++",
            AssignOp::Dec => "--",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub id: NodeId,
    pub line: u32,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Int(i64),
    Var(String),
    Index(String, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

/// Structural equality: node ids and lines are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assign {
    /// A `Var` or `Index` expression.
    pub target: Expr,
    pub op: AssignOp,
    pub value: Option<Expr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    For,
    While,
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub id: NodeId,
    pub line: u32,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Stmt) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Decl {
        name: String,
        ty: VarType,
        init: Option<Expr>,
    },
    Assign(Assign),
    /// A call evaluated for its effects.
    Call(Expr),
    If {
        cond: Expr,
        then_branch: Vec<Stmt>,
        else_branch: Option<Vec<Stmt>>,
    },
    /// `for` and `while`. Init and update items are `Assign` or `Call` statements.
    Loop {
        kind: LoopKind,
        init: Vec<Stmt>,
        cond: Expr,
        update: Vec<Stmt>,
        body: Vec<Stmt>,
    },
    /// `scanf`: each target is a `Var` or `Index` expression.
    Read { format: String, targets: Vec<Expr> },
    /// `printf`: one integer emitted per argument.
    Write { format: String, args: Vec<Expr> },
    Return(Option<Expr>),
    Block(Vec<Stmt>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: ScalarType,
}

#[derive(Debug, Clone)]
pub struct Function {
    pub id: NodeId,
    pub line: u32,
    pub name: String,
    pub ret: ReturnType,
    pub params: Vec<Param>,
    pub body: Vec<Stmt>,
}

impl PartialEq for Function {
    fn eq(&self, other: &Function) -> bool {
        self.name == other.name
            && self.ret == other.ret
            && self.params == other.params
            && self.body == other.body
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub functions: Vec<Function>,
}

impl Program {
    pub fn function(&self, name: &str) -> Option<&Function> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn main(&self) -> &Function {
        self.function("main").expect("validated program has main")
    }

    /// Largest node id in the tree.
    pub fn max_node_id(&self) -> NodeId {
        let mut max = 0;
        visit_program(self, &mut |n| max = max.max(n.id()));
        max
    }
}

/// A borrowed view of any node, for generic traversals.
#[derive(Debug, Clone, Copy)]
pub enum NodeRef<'a> {
    Function(&'a Function),
    Stmt(&'a Stmt),
    Expr(&'a Expr),
}

impl NodeRef<'_> {
    pub fn id(&self) -> NodeId {
        match self {
            NodeRef::Function(f) => f.id,
            NodeRef::Stmt(s) => s.id,
            NodeRef::Expr(e) => e.id,
        }
    }

    pub fn line(&self) -> u32 {
        match self {
            NodeRef::Function(f) => f.line,
            NodeRef::Stmt(s) => s.line,
            NodeRef::Expr(e) => e.line,
        }
    }
}

/// Pre-order traversal over every node.
pub fn visit_program<'a>(p: &'a Program, f: &mut impl FnMut(NodeRef<'a>)) {
    for func in &p.functions {
        f(NodeRef::Function(func));
        for s in &func.body {
            visit_stmt(s, f);
        }
    }
}

pub fn visit_stmt<'a>(s: &'a Stmt, f: &mut impl FnMut(NodeRef<'a>)) {
    f(NodeRef::Stmt(s));
    match &s.kind {
        StmtKind::Decl { init, .. } => {
            if let Some(e) = init {
                visit_expr(e, f);
            }
        }
        StmtKind::Assign(a) => visit_assign(a, f),
        StmtKind::Call(e) => visit_expr(e, f),
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            visit_expr(cond, f);
            then_branch.iter().for_each(|s| visit_stmt(s, f));
            if let Some(b) = else_branch {
                b.iter().for_each(|s| visit_stmt(s, f));
            }
        }
        StmtKind::Loop {
            init,
            cond,
            update,
            body,
            ..
        } => {
            init.iter().for_each(|s| visit_stmt(s, f));
            visit_expr(cond, f);
            update.iter().for_each(|s| visit_stmt(s, f));
            body.iter().for_each(|s| visit_stmt(s, f));
        }
        StmtKind::Read { targets, .. } => targets.iter().for_each(|e| visit_expr(e, f)),
        StmtKind::Write { args, .. } => args.iter().for_each(|e| visit_expr(e, f)),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                visit_expr(e, f);
            }
        }
        StmtKind::Block(b) => b.iter().for_each(|s| visit_stmt(s, f)),
    }
}

fn visit_assign<'a>(a: &'a Assign, f: &mut impl FnMut(NodeRef<'a>)) {
    visit_expr(&a.target, f);
    if let Some(v) = &a.value {
        visit_expr(v, f);
    }
}

pub fn visit_expr<'a>(e: &'a Expr, f: &mut impl FnMut(NodeRef<'a>)) {
    f(NodeRef::Expr(e));
    match &e.kind {
        ExprKind::Int(_) | ExprKind::Var(_) => {}
        ExprKind::Index(_, i) => visit_expr(i, f),
        ExprKind::Unary(_, a) => visit_expr(a, f),
        ExprKind::Binary(_, a, b) => {
            visit_expr(a, f);
            visit_expr(b, f);
        }
        ExprKind::Call(_, args) => args.iter().for_each(|a| visit_expr(a, f)),
    }
}

/// Reassigns node ids in pre-order starting at 1, in the same order as
/// [`visit_program`].
pub fn renumber(p: &mut Program) {
    let mut next = 1;
    for func in &mut p.functions {
        func.id = take(&mut next);
        for s in &mut func.body {
            renumber_stmt(s, &mut next);
        }
    }
}

fn take(next: &mut NodeId) -> NodeId {
    let id = *next;
    *next += 1;
    id
}

fn renumber_stmt(s: &mut Stmt, next: &mut NodeId) {
    s.id = take(next);
    match &mut s.kind {
        StmtKind::Decl { init, .. } => {
            if let Some(e) = init {
                renumber_expr(e, next);
            }
        }
        StmtKind::Assign(a) => {
            renumber_expr(&mut a.target, next);
            if let Some(v) = &mut a.value {
                renumber_expr(v, next);
            }
        }
        StmtKind::Call(e) => renumber_expr(e, next),
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            renumber_expr(cond, next);
            then_branch.iter_mut().for_each(|s| renumber_stmt(s, next));
            if let Some(b) = else_branch {
                b.iter_mut().for_each(|s| renumber_stmt(s, next));
            }
        }
        StmtKind::Loop {
            init,
            cond,
            update,
            body,
            ..
        } => {
            init.iter_mut().for_each(|s| renumber_stmt(s, next));
            renumber_expr(cond, next);
            update.iter_mut().for_each(|s| renumber_stmt(s, next));
            body.iter_mut().for_each(|s| renumber_stmt(s, next));
        }
        StmtKind::Read { targets, .. } => targets.iter_mut().for_each(|e| renumber_expr(e, next)),
        StmtKind::Write { args, .. } => args.iter_mut().for_each(|e| renumber_expr(e, next)),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                renumber_expr(e, next);
            }
        }
        StmtKind::Block(b) => b.iter_mut().for_each(|s| renumber_stmt(s, next)),
    }
}

fn renumber_expr(e: &mut Expr, next: &mut NodeId) {
    e.id = take(next);
    match &mut e.kind {
        ExprKind::Int(_) | ExprKind::Var(_) => {}
        ExprKind::Index(_, i) => renumber_expr(i, next),
        ExprKind::Unary(_, a) => renumber_expr(a, next),
        ExprKind::Binary(_, a, b) => {
            renumber_expr(a, next);
            renumber_expr(b, next);
        }
        ExprKind::Call(_, args) => args.iter_mut().for_each(|a| renumber_expr(a, next)),
    }
}
