//! Hierarchical soft-clause weights.

use std::collections::HashMap;

use crate::frontend::{NodeId, Program, Stmt, StmtKind};
use crate::transform::ComponentTable;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Returns `table` with every weight filled in.
///
/// Leaves weigh 1. A condition weighs the summed weight of everything nested
/// under it (I/O counted as 1 there), at least 1. Reads and writes weigh
/// `io_multiplier` times the total weight of the non-I/O components.
///
/// Components produced by refinement inherit their parent's weight, split
/// evenly among the parts; all weights are scaled by the least common
/// multiple of the part counts, which is recorded as `cost_scale`.
pub fn compute_weights(table: &ComponentTable, program: &Program, io_multiplier: u64) -> ComponentTable {
    let mut out = table.clone();
    if out.components.iter().any(|c| c.refinement.is_some()) {
        let scale = out
            .components
            .iter()
            .filter_map(|c| c.refinement.map(|r| r.parts))
            .fold(1, |l, p| l / gcd(l, p) * p);
        for c in &mut out.components {
            let r = c.refinement.expect("refined tables only hold refined components");
            c.weight = (r.parent_weight * scale / r.parts).max(1);
        }
        out.cost_scale = scale;
        return out;
    }
    let by_node: HashMap<NodeId, usize> = out.components.iter().map(|c| (c.node_id, c.id)).collect();
    let mut w = Weigher {
        by_node: &by_node,
        weights: vec![1; out.len()],
    };
    for f in &program.functions {
        w.block(&f.body);
    }
    let non_io: u64 = out
        .components
        .iter()
        .filter(|c| !c.kind.is_io())
        .map(|c| w.weights[c.id])
        .sum();
    for c in &mut out.components {
        c.weight = if c.kind.is_io() {
            io_multiplier.max(1) * non_io.max(1)
        } else {
            w.weights[c.id]
        };
    }
    out.cost_scale = 1;
    out
}

struct Weigher<'a> {
    by_node: &'a HashMap<NodeId, usize>,
    /// Non-I/O weights; I/O entries stay at their base weight 1.
    weights: Vec<u64>,
}

impl Weigher<'_> {
    fn node(&self, id: NodeId) -> u64 {
        self.by_node.get(&id).map_or(0, |&c| self.weights[c])
    }

    /// Summed weight of the components in `stmts`, nested ones included.
    fn block(&mut self, stmts: &[Stmt]) -> u64 {
        stmts.iter().map(|s| self.stmt(s)).sum()
    }

    fn stmt(&mut self, s: &Stmt) -> u64 {
        match &s.kind {
            StmtKind::Decl { .. } | StmtKind::Assign(_) | StmtKind::Call(_) => self.node(s.id),
            StmtKind::Read { targets, .. } => targets.iter().map(|t| self.node(t.id)).sum(),
            StmtKind::Write { args, .. } => args.iter().map(|a| self.node(a.id)).sum(),
            StmtKind::Return(_) => 0,
            StmtKind::Block(b) => self.block(b),
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let inner = self.block(then_branch) + else_branch.as_ref().map_or(0, |b| self.block(b));
                self.set(cond.id, inner.max(1)) + inner
            }
            StmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                let init = self.block(init);
                let inner = self.block(body) + self.block(update);
                init + self.set(cond.id, inner.max(1)) + inner
            }
        }
    }

    fn set(&mut self, node: NodeId, w: u64) -> u64 {
        match self.by_node.get(&node) {
            Some(&c) => {
                self.weights[c] = w;
                w
            }
            None => 0,
        }
    }
}
