//! Hash-consed bit-vector and Boolean terms with local simplification.

use std::collections::HashMap;

use crate::exec::{apply_binop, wrap};
use crate::frontend::BinOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Bv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BvOp {
    Add,
    Sub,
    Mul,
    /// Signed division, 0 on a zero divisor.
    Div,
    /// Signed remainder, 0 on a zero divisor.
    Rem,
}

impl BvOp {
    fn binop(self) -> BinOp {
        match self {
            BvOp::Add => BinOp::Add,
            BvOp::Sub => BinOp::Sub,
            BvOp::Mul => BinOp::Mul,
            BvOp::Div => BinOp::Div,
            BvOp::Rem => BinOp::Mod,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Bool(bool),
    Const(i64),
    Sym(u32),
    Not(TermId),
    And(TermId, TermId),
    Or(TermId, TermId),
    /// Works on both sorts; the branches share a sort.
    Ite(TermId, TermId, TermId),
    Eq(TermId, TermId),
    Slt(TermId, TermId),
    Neg(TermId),
    Bin(BvOp, TermId, TermId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub sort: Sort,
}

#[derive(Debug, Clone)]
pub struct TermArena {
    width: u32,
    terms: Vec<Term>,
    sorts: Vec<Sort>,
    index: HashMap<Term, TermId>,
    symbols: Vec<Symbol>,
    symbol_terms: Vec<TermId>,
}

impl TermArena {
    pub fn new(width: u32) -> TermArena {
        TermArena {
            width,
            terms: vec![],
            sorts: vec![],
            index: HashMap::new(),
            symbols: vec![],
            symbol_terms: vec![],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, t: TermId) -> Term {
        self.terms[t.index()]
    }

    pub fn sort(&self, t: TermId) -> Sort {
        self.sorts[t.index()]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: u32) -> &Symbol {
        &self.symbols[id as usize]
    }

    fn intern(&mut self, t: Term, sort: Sort) -> TermId {
        if let Some(&id) = self.index.get(&t) {
            return id;
        }
        let id = TermId(self.terms.len() as u32);
        self.terms.push(t);
        self.sorts.push(sort);
        self.index.insert(t, id);
        id
    }

    pub fn as_bool_const(&self, t: TermId) -> Option<bool> {
        match self.term(t) {
            Term::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_const(&self, t: TermId) -> Option<i64> {
        match self.term(t) {
            Term::Const(v) => Some(v),
            _ => None,
        }
    }

    /// A fresh unconstrained symbol.
    pub fn fresh(&mut self, name: impl Into<String>, sort: Sort) -> TermId {
        let id = self.symbols.len() as u32;
        self.symbols.push(Symbol {
            name: name.into(),
            sort,
        });
        let t = self.intern(Term::Sym(id), sort);
        self.symbol_terms.push(t);
        t
    }

    pub fn symbol_term(&self, id: u32) -> TermId {
        self.symbol_terms[id as usize]
    }

    pub fn bool(&mut self, b: bool) -> TermId {
        self.intern(Term::Bool(b), Sort::Bool)
    }

    pub fn tt(&mut self) -> TermId {
        self.bool(true)
    }

    pub fn ff(&mut self) -> TermId {
        self.bool(false)
    }

    pub fn constant(&mut self, v: i64) -> TermId {
        let v = wrap(v, self.width);
        self.intern(Term::Const(v), Sort::Bv)
    }

    pub fn not(&mut self, a: TermId) -> TermId {
        match self.term(a) {
            Term::Bool(b) => self.bool(!b),
            Term::Not(x) => x,
            _ => self.intern(Term::Not(a), Sort::Bool),
        }
    }

    pub fn and(&mut self, a: TermId, b: TermId) -> TermId {
        match (self.as_bool_const(a), self.as_bool_const(b)) {
            (Some(false), _) | (_, Some(false)) => return self.ff(),
            (Some(true), _) => return b,
            (_, Some(true)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.term(a) == Term::Not(b) || self.term(b) == Term::Not(a) {
            return self.ff();
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.intern(Term::And(a, b), Sort::Bool)
    }

    pub fn or(&mut self, a: TermId, b: TermId) -> TermId {
        match (self.as_bool_const(a), self.as_bool_const(b)) {
            (Some(true), _) | (_, Some(true)) => return self.tt(),
            (Some(false), _) => return b,
            (_, Some(false)) => return a,
            _ => {}
        }
        if a == b {
            return a;
        }
        if self.term(a) == Term::Not(b) || self.term(b) == Term::Not(a) {
            return self.tt();
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.intern(Term::Or(a, b), Sort::Bool)
    }

    pub fn implies(&mut self, a: TermId, b: TermId) -> TermId {
        let na = self.not(a);
        self.or(na, b)
    }

    pub fn ite(&mut self, c: TermId, a: TermId, b: TermId) -> TermId {
        debug_assert_eq!(self.sort(a), self.sort(b));
        if let Some(v) = self.as_bool_const(c) {
            return if v { a } else { b };
        }
        if a == b {
            return a;
        }
        if let Term::Not(x) = self.term(c) {
            return self.ite(x, b, a);
        }
        if self.sort(a) == Sort::Bool {
            match (self.as_bool_const(a), self.as_bool_const(b)) {
                (Some(true), Some(false)) => return c,
                (Some(false), Some(true)) => return self.not(c),
                (Some(true), _) => return self.or(c, b),
                (Some(false), _) => {
                    let nc = self.not(c);
                    return self.and(nc, b);
                }
                (_, Some(true)) => {
                    let nc = self.not(c);
                    return self.or(nc, a);
                }
                (_, Some(false)) => return self.and(c, a),
                _ => {}
            }
        }
        let sort = self.sort(a);
        self.intern(Term::Ite(c, a, b), sort)
    }

    pub fn eq(&mut self, a: TermId, b: TermId) -> TermId {
        if a == b {
            return self.tt();
        }
        if let (Some(x), Some(y)) = (self.as_const(a), self.as_const(b)) {
            return self.bool(x == y);
        }
        // ite(c, k1, k2) == k with constants folds to a Boolean over c.
        for (x, y) in [(a, b), (b, a)] {
            if let (Term::Ite(c, t, e), Some(k)) = (self.term(x), self.as_const(y)) {
                if let (Some(tv), Some(ev)) = (self.as_const(t), self.as_const(e)) {
                    return match (tv == k, ev == k) {
                        (true, true) => self.tt(),
                        (true, false) => c,
                        (false, true) => self.not(c),
                        (false, false) => self.ff(),
                    };
                }
            }
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.intern(Term::Eq(a, b), Sort::Bool)
    }

    pub fn slt(&mut self, a: TermId, b: TermId) -> TermId {
        if a == b {
            return self.ff();
        }
        if let (Some(x), Some(y)) = (self.as_const(a), self.as_const(b)) {
            return self.bool(x < y);
        }
        self.intern(Term::Slt(a, b), Sort::Bool)
    }

    pub fn neg(&mut self, a: TermId) -> TermId {
        if let Some(x) = self.as_const(a) {
            return self.constant(x.wrapping_neg());
        }
        self.intern(Term::Neg(a), Sort::Bv)
    }

    pub fn bin(&mut self, op: BvOp, a: TermId, b: TermId) -> TermId {
        if let (Some(x), Some(y)) = (self.as_const(a), self.as_const(b)) {
            let v = apply_binop(op.binop(), x, y, self.width);
            return self.constant(v);
        }
        match (op, self.as_const(a), self.as_const(b)) {
            (BvOp::Add, Some(0), _) => return b,
            (BvOp::Add | BvOp::Sub, _, Some(0)) => return a,
            (BvOp::Mul, Some(0), _) | (BvOp::Mul, _, Some(0)) => return self.constant(0),
            (BvOp::Mul, Some(1), _) => return b,
            (BvOp::Mul | BvOp::Div, _, Some(1)) => return a,
            (BvOp::Div | BvOp::Rem, _, Some(0)) => return self.constant(0),
            _ => {}
        }
        let (a, b) = match op {
            BvOp::Add | BvOp::Mul if b < a => (b, a),
            _ => (a, b),
        };
        self.intern(Term::Bin(op, a, b), Sort::Bv)
    }

    /// Converts a Boolean to the 0/1 bit-vector.
    pub fn from_bool(&mut self, b: TermId) -> TermId {
        let one = self.constant(1);
        let zero = self.constant(0);
        self.ite(b, one, zero)
    }

    /// C truth value of a bit-vector.
    pub fn truthy(&mut self, v: TermId) -> TermId {
        let zero = self.constant(0);
        let z = self.eq(v, zero);
        self.not(z)
    }

    pub fn children(&self, t: TermId) -> Vec<TermId> {
        match self.term(t) {
            Term::Bool(_) | Term::Const(_) | Term::Sym(_) => vec![],
            Term::Not(a) | Term::Neg(a) => vec![a],
            Term::And(a, b) | Term::Or(a, b) | Term::Eq(a, b) | Term::Slt(a, b) | Term::Bin(_, a, b) => {
                vec![a, b]
            }
            Term::Ite(c, a, b) => vec![c, a, b],
        }
    }

    /// Terms reachable from `roots`, in creation order (children first).
    pub fn reachable(&self, roots: &[TermId]) -> Vec<TermId> {
        let mut seen = vec![false; self.terms.len()];
        let mut stack: Vec<TermId> = roots.to_vec();
        while let Some(t) = stack.pop() {
            if std::mem::replace(&mut seen[t.index()], true) {
                continue;
            }
            stack.extend(self.children(t));
        }
        (0..self.terms.len() as u32)
            .filter(|&i| seen[i as usize])
            .map(TermId)
            .collect()
    }

    /// Evaluates `roots` under `assignment` (indexed by symbol id), reporting
    /// Booleans as 0/1.
    pub fn eval(&self, roots: &[TermId], assignment: &dyn Fn(u32) -> i64) -> Vec<i64> {
        let w = self.width;
        let mut val: HashMap<TermId, i64> = HashMap::new();
        for t in self.reachable(roots) {
            let g = |x: TermId| val[&x];
            let v = match self.term(t) {
                Term::Bool(b) => b as i64,
                Term::Const(v) => v,
                Term::Sym(s) => match self.symbol(s).sort {
                    Sort::Bool => (assignment(s) != 0) as i64,
                    Sort::Bv => wrap(assignment(s), w),
                },
                Term::Not(a) => (g(a) == 0) as i64,
                Term::And(a, b) => (g(a) != 0 && g(b) != 0) as i64,
                Term::Or(a, b) => (g(a) != 0 || g(b) != 0) as i64,
                Term::Ite(c, a, b) => {
                    if g(c) != 0 {
                        g(a)
                    } else {
                        g(b)
                    }
                }
                Term::Eq(a, b) => (g(a) == g(b)) as i64,
                Term::Slt(a, b) => (g(a) < g(b)) as i64,
                Term::Neg(a) => wrap(g(a).wrapping_neg(), w),
                Term::Bin(op, a, b) => apply_binop(op.binop(), g(a), g(b), w),
            };
            val.insert(t, v);
        }
        roots.iter().map(|r| val[r]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing_shares_terms() {
        let mut a = TermArena::new(8);
        let x = a.fresh("x", Sort::Bv);
        let y = a.fresh("y", Sort::Bv);
        let s1 = a.bin(BvOp::Add, x, y);
        let s2 = a.bin(BvOp::Add, y, x);
        assert_eq!(s1, s2);
        assert_ne!(a.bin(BvOp::Sub, x, y), a.bin(BvOp::Sub, y, x));
    }

    #[test]
    fn constants_fold() {
        let mut a = TermArena::new(8);
        let one = a.constant(1);
        let two = a.constant(2);
        let lt = a.slt(one, two);
        assert_eq!(a.as_bool_const(lt), Some(true));
        let big = a.constant(127);
        let sum = a.bin(BvOp::Add, big, one);
        assert_eq!(a.as_const(sum), Some(-128));
        let zero = a.constant(0);
        let d = a.bin(BvOp::Div, big, zero);
        assert_eq!(a.as_const(d), Some(0));
    }

    #[test]
    fn boolean_views_cancel() {
        let mut a = TermArena::new(16);
        let p = a.fresh("p", Sort::Bool);
        let v = a.from_bool(p);
        assert_eq!(a.truthy(v), p);
        let q = a.fresh("q", Sort::Bool);
        let t = a.tt();
        let f = a.ff();
        assert_eq!(a.ite(q, t, f), q);
        let nq = a.not(q);
        assert_eq!(a.and(q, nq), f);
    }

    #[test]
    fn evaluation_follows_machine_semantics() {
        let mut a = TermArena::new(8);
        let x = a.fresh("x", Sort::Bv);
        let y = a.fresh("y", Sort::Bv);
        let q = a.bin(BvOp::Div, x, y);
        let r = a.bin(BvOp::Rem, x, y);
        let vals = [-128i64, -1];
        let f = |s: u32| vals[s as usize];
        assert_eq!(a.eval(&[q, r], &f), [-128, 0]);
    }
}
