//! Diagnosable components and their relaxation variables.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::frontend::{BinOp, Expr, ExprKind, NodeId, Program, Stmt, StmtKind};

use super::ir::CompId;
use super::TransformError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Statement,
    IfCondition,
    LoopCondition,
    ExprListItem,
    InputStmt,
    OutputStmt,
}

impl ComponentKind {
    pub fn is_io(self) -> bool {
        matches!(self, ComponentKind::InputStmt | ComponentKind::OutputStmt)
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Statement => "Statement",
            ComponentKind::IfCondition => "IfCondition",
            ComponentKind::LoopCondition => "LoopCondition",
            ComponentKind::ExprListItem => "ExprListItem",
            ComponentKind::InputStmt => "InputStmt",
            ComponentKind::OutputStmt => "OutputStmt",
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Origin of a component produced by refinement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Refinement {
    /// Component of the unrefined table that was split.
    pub parent: CompId,
    /// Number of parts the parent was split into.
    pub parts: u64,
    pub parent_weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub id: CompId,
    /// Source node the component relaxes.
    pub node_id: NodeId,
    pub line: u32,
    pub kind: ComponentKind,
    pub function: String,
    /// Shared relaxation variable, e.g. `_rv4`.
    pub healthy_var: String,
    /// Scope-local branch variable of an unrefined if-condition, e.g. `_ev5`.
    pub else_var: Option<String>,
    /// Offsets of the enclosing loops of the same function, outermost first.
    pub loop_offsets: Vec<String>,
    /// Soft-clause weight; 0 until weights are computed.
    pub weight: u64,
    pub refinement: Option<Refinement>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentTable {
    pub components: Vec<Component>,
    /// Factor by which refined weights are scaled relative to the unrefined
    /// ones; 1 for unrefined tables.
    pub cost_scale: u64,
}

impl ComponentTable {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, id: CompId) -> &Component {
        &self.components[id]
    }

    pub fn by_node(&self, node: NodeId) -> Option<&Component> {
        self.components.iter().find(|c| c.node_id == node)
    }

    pub fn lines(&self, comps: &BTreeSet<CompId>) -> BTreeSet<u32> {
        comps.iter().map(|&c| self.components[c].line).collect()
    }

    pub fn cost(&self, comps: &BTreeSet<CompId>) -> u64 {
        comps.iter().map(|&c| self.components[c].weight).sum()
    }

    pub fn weights(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.weight).collect()
    }
}

/// Which nodes become components.
pub(crate) enum Selection<'a> {
    All,
    /// Only nodes of the given unrefined components, split into parts.
    Refine {
        base: &'a ComponentTable,
        diagnosis: &'a BTreeSet<CompId>,
    },
}

/// Component numbering plus the lookups the lowering pass needs.
pub(crate) struct Layout {
    pub table: ComponentTable,
    pub by_node: HashMap<NodeId, CompId>,
    /// Condition nodes whose operands were split by refinement.
    pub split_conditions: HashMap<NodeId, BinOp>,
    pub loop_numbers: HashMap<NodeId, usize>,
}

/// Operands of the top-level `&&`/`||` chain of a condition.
pub(crate) fn chain_operands(cond: &Expr) -> (Option<BinOp>, Vec<&Expr>) {
    fn flatten<'a>(e: &'a Expr, op: BinOp, out: &mut Vec<&'a Expr>) {
        match &e.kind {
            ExprKind::Binary(o, a, b) if *o == op => {
                flatten(a, op, out);
                flatten(b, op, out);
            }
            _ => out.push(e),
        }
    }
    match &cond.kind {
        ExprKind::Binary(op @ (BinOp::And | BinOp::Or), ..) => {
            let mut out = Vec::new();
            flatten(cond, *op, &mut out);
            (Some(*op), out)
        }
        _ => (None, vec![cond]),
    }
}

struct Builder<'a> {
    selection: Selection<'a>,
    base_nodes: HashMap<NodeId, CompId>,
    layout: Layout,
    counter: usize,
    next_loop: usize,
    loops: Vec<usize>,
    function: String,
}

pub(crate) fn layout(program: &Program, selection: Selection<'_>) -> Layout {
    let base_nodes = match &selection {
        Selection::All => HashMap::new(),
        Selection::Refine { base, diagnosis } => diagnosis
            .iter()
            .map(|&c| (base.components[c].node_id, c))
            .collect(),
    };
    let mut b = Builder {
        selection,
        base_nodes,
        layout: Layout {
            table: ComponentTable {
                components: vec![],
                cost_scale: 1,
            },
            by_node: HashMap::new(),
            split_conditions: HashMap::new(),
            loop_numbers: HashMap::new(),
        },
        counter: 1,
        next_loop: 1,
        loops: vec![],
        function: String::new(),
    };
    for f in &program.functions {
        b.function = f.name.clone();
        b.stmts(&f.body);
    }
    b.layout
}

impl Builder<'_> {
    fn push(&mut self, node: NodeId, line: u32, kind: ComponentKind, with_else: bool, refinement: Option<Refinement>) {
        let id = self.layout.table.components.len();
        let healthy_var = format!("_rv{}", self.counter);
        self.counter += 1;
        let else_var = with_else.then(|| {
            let v = format!("_ev{}", self.counter);
            self.counter += 1;
            v
        });
        self.layout.table.components.push(Component {
            id,
            node_id: node,
            line,
            kind,
            function: self.function.clone(),
            healthy_var,
            else_var,
            loop_offsets: self.loops.iter().map(|n| format!("_los{n}")).collect(),
            weight: 0,
            refinement,
        });
        self.layout.by_node.insert(node, id);
    }

    /// A component for a whole node (never split).
    fn leaf(&mut self, node: NodeId, line: u32, kind: ComponentKind) {
        match &self.selection {
            Selection::All => self.push(node, line, kind, false, None),
            Selection::Refine { base, .. } => {
                if let Some(&parent) = self.base_nodes.get(&node) {
                    let r = Refinement {
                        parent,
                        parts: 1,
                        parent_weight: base.components[parent].weight,
                    };
                    self.push(node, line, kind, false, Some(r));
                }
            }
        }
    }

    fn condition(&mut self, cond: &Expr, kind: ComponentKind) {
        match &self.selection {
            Selection::All => {
                self.push(cond.id, cond.line, kind, kind == ComponentKind::IfCondition, None)
            }
            Selection::Refine { base, .. } => {
                let Some(&parent) = self.base_nodes.get(&cond.id) else {
                    return;
                };
                let parent_weight = base.components[parent].weight;
                let (op, operands) = chain_operands(cond);
                if let Some(op) = op {
                    self.layout.split_conditions.insert(cond.id, op);
                }
                let parts = operands.len() as u64;
                for o in operands {
                    let r = Refinement {
                        parent,
                        parts,
                        parent_weight,
                    };
                    self.push(o.id, o.line, kind, false, Some(r));
                }
            }
        }
    }

    fn stmts(&mut self, stmts: &[Stmt]) {
        for s in stmts {
            self.stmt(s);
        }
    }

    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::Decl { init, .. } => {
                if init.is_some() {
                    self.leaf(s.id, s.line, ComponentKind::Statement);
                }
            }
            StmtKind::Assign(_) | StmtKind::Call(_) => {
                self.leaf(s.id, s.line, ComponentKind::Statement)
            }
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.condition(cond, ComponentKind::IfCondition);
                self.stmts(then_branch);
                if let Some(b) = else_branch {
                    self.stmts(b);
                }
            }
            StmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                let number = self.next_loop;
                self.next_loop += 1;
                self.layout.loop_numbers.insert(s.id, number);
                for i in init {
                    self.leaf(i.id, i.line, ComponentKind::ExprListItem);
                }
                self.loops.push(number);
                self.condition(cond, ComponentKind::LoopCondition);
                self.stmts(body);
                for u in update {
                    self.leaf(u.id, u.line, ComponentKind::ExprListItem);
                }
                self.loops.pop();
            }
            StmtKind::Read { targets, .. } => {
                for t in targets {
                    self.leaf(t.id, t.line, ComponentKind::InputStmt);
                }
            }
            StmtKind::Write { args, .. } => {
                for a in args {
                    self.leaf(a.id, a.line, ComponentKind::OutputStmt);
                }
            }
            StmtKind::Return(_) => {}
            StmtKind::Block(b) => self.stmts(b),
        }
    }
}

/// Deepest dynamic loop nesting, following calls made inside loops.
pub(crate) fn max_loop_depth(program: &Program) -> usize {
    fn calls_in(e: &Expr, out: &mut Vec<String>) {
        crate::frontend::visit_expr(e, &mut |n| {
            if let crate::frontend::NodeRef::Expr(Expr {
                kind: ExprKind::Call(f, _),
                ..
            }) = n
            {
                out.push(f.clone());
            }
        });
    }
    fn stmts_depth(
        stmts: &[Stmt],
        program: &Program,
        memo: &mut HashMap<String, usize>,
    ) -> usize {
        let mut best = 0;
        for s in stmts {
            let mut calls = Vec::new();
            let mut nested = 0;
            match &s.kind {
                StmtKind::Decl { init: Some(e), .. } | StmtKind::Call(e) => calls_in(e, &mut calls),
                StmtKind::Decl { .. } => {}
                StmtKind::Assign(a) => {
                    calls_in(&a.target, &mut calls);
                    if let Some(v) = &a.value {
                        calls_in(v, &mut calls);
                    }
                }
                StmtKind::If {
                    cond,
                    then_branch,
                    else_branch,
                } => {
                    calls_in(cond, &mut calls);
                    nested = stmts_depth(then_branch, program, memo);
                    if let Some(b) = else_branch {
                        nested = nested.max(stmts_depth(b, program, memo));
                    }
                }
                StmtKind::Loop {
                    init,
                    cond,
                    update,
                    body,
                    ..
                } => {
                    let mut inner = Vec::new();
                    calls_in(cond, &mut inner);
                    let mut d = stmts_depth(body, program, memo).max(stmts_depth(update, program, memo));
                    for f in inner {
                        d = d.max(function_depth(&f, program, memo));
                    }
                    nested = 1 + d;
                    nested = nested.max(stmts_depth(init, program, memo));
                }
                StmtKind::Read { targets, .. } => targets.iter().for_each(|t| calls_in(t, &mut calls)),
                StmtKind::Write { args, .. } => args.iter().for_each(|a| calls_in(a, &mut calls)),
                StmtKind::Return(e) => {
                    if let Some(e) = e {
                        calls_in(e, &mut calls);
                    }
                }
                StmtKind::Block(b) => nested = stmts_depth(b, program, memo),
            }
            for f in calls {
                nested = nested.max(function_depth(&f, program, memo));
            }
            best = best.max(nested);
        }
        best
    }
    fn function_depth(name: &str, program: &Program, memo: &mut HashMap<String, usize>) -> usize {
        if let Some(&d) = memo.get(name) {
            return d;
        }
        let d = program
            .function(name)
            .map_or(0, |f| stmts_depth(&f.body, program, memo));
        memo.insert(name.to_string(), d);
        d
    }
    function_depth("main", program, &mut HashMap::new())
}

/// Rejects programs whose relaxation vectors would exceed `cap` entries.
pub(crate) fn check_capacity(program: &Program, unwind: u32, cap: u64) -> Result<(), TransformError> {
    let depth = max_loop_depth(program);
    let size = (0..depth).try_fold(1u64, |acc, _| acc.checked_mul(unwind as u64));
    match size {
        Some(s) if s <= cap => Ok(()),
        _ => Err(TransformError::Capacity {
            unwind,
            depth,
            cap,
        }),
    }
}
