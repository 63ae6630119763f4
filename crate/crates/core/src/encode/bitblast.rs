//! Bit-level CNF encoding of SSA terms.

use std::collections::HashMap;

use mbdfl_sat::{Cnf, Lit, Var};

use super::ssa::SsaProgram;
use super::term::{BvOp, Sort, Term, TermArena, TermId};

/// Whether the per-scope output assertions become hard constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssertMode {
    /// Every scope's assertion is a hard unit.
    Assert,
    /// Assertions are encoded but left unconstrained.
    Free,
}

#[derive(Debug, Clone)]
pub struct ScopeVars {
    pub test_id: String,
    pub output_len: Vec<Lit>,
    pub output: Vec<Vec<Lit>>,
    pub overflow: Lit,
    pub assertion: Lit,
}

#[derive(Debug, Clone)]
pub struct CnfFormula {
    pub cnf: Cnf,
    pub width: u32,
    /// CNF variable of each component's healthy symbol.
    pub healthy: Vec<Var>,
    pub scopes: Vec<ScopeVars>,
    /// Bits of every symbol that occurs in the formula, by name.
    pub symbols: Vec<(String, Vec<Lit>)>,
}

impl CnfFormula {
    pub fn num_vars(&self) -> usize {
        self.cnf.num_vars()
    }

    pub fn num_clauses(&self) -> usize {
        self.cnf.clauses().len()
    }
}

/// Two's-complement value of `bits` (least significant first) in `model`.
pub fn decode(model: &[bool], bits: &[Lit]) -> i64 {
    let value = |l: Lit| model[l.var().index()] == l.is_positive();
    let w = bits.len();
    let mut v: i64 = 0;
    for (i, &b) in bits.iter().enumerate() {
        if value(b) {
            v |= 1 << i;
        }
    }
    if w < 64 && value(bits[w - 1]) {
        v -= 1 << w;
    }
    v
}

pub fn bitblast(s: &SsaProgram, mode: AssertMode) -> CnfFormula {
    let mut b = Blaster::new(&s.arena);
    let healthy: Vec<Var> = s.healthy.iter().map(|&h| b.bool_lit(h).var()).collect();
    for &h in &s.hard {
        let l = b.bool_lit(h);
        b.cnf.add_clause([l]);
    }
    let mut scopes = Vec::new();
    for sc in &s.scopes {
        let assertion = b.bool_lit(sc.assertion);
        if mode == AssertMode::Assert {
            b.cnf.add_clause([assertion]);
        }
        scopes.push(ScopeVars {
            test_id: sc.test_id.clone(),
            output_len: b.bv(sc.output_len),
            output: sc.output.iter().map(|&o| b.bv(o)).collect(),
            overflow: b.bool_lit(sc.overflow),
            assertion,
        });
    }
    let mut symbols: Vec<(String, Vec<Lit>)> = Vec::new();
    for (id, sym) in s.arena.symbols().iter().enumerate() {
        if let Some(bits) = b.done.get(&s.arena.symbol_term(id as u32)) {
            symbols.push((sym.name.clone(), bits.clone()));
        }
    }
    CnfFormula {
        cnf: b.cnf,
        width: s.width,
        healthy,
        scopes,
        symbols,
    }
}

/// Tseitin encoder with structural hashing of gates.
pub(crate) struct Blaster<'a> {
    arena: &'a TermArena,
    pub(crate) cnf: Cnf,
    tt: Lit,
    /// Bits of each encoded term; Boolean terms have one bit.
    done: HashMap<TermId, Vec<Lit>>,
    ands: HashMap<(Lit, Lit), Lit>,
    xors: HashMap<(Lit, Lit), Lit>,
    muxes: HashMap<(Lit, Lit, Lit), Lit>,
}

impl<'a> Blaster<'a> {
    pub(crate) fn new(arena: &'a TermArena) -> Blaster<'a> {
        let mut cnf = Cnf::new();
        let t = cnf.new_var().pos();
        cnf.add_clause([t]);
        Blaster {
            arena,
            cnf,
            tt: t,
            done: HashMap::new(),
            ands: HashMap::new(),
            xors: HashMap::new(),
            muxes: HashMap::new(),
        }
    }

    fn ff(&self) -> Lit {
        !self.tt
    }

    fn konst(&self, b: bool) -> Lit {
        if b {
            self.tt
        } else {
            self.ff()
        }
    }

    fn fresh(&mut self) -> Lit {
        self.cnf.new_var().pos()
    }

    fn and(&mut self, a: Lit, b: Lit) -> Lit {
        if a == self.ff() || b == self.ff() || a == !b {
            return self.ff();
        }
        if a == self.tt || a == b {
            return b;
        }
        if b == self.tt {
            return a;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&g) = self.ands.get(&key) {
            return g;
        }
        let g = self.fresh();
        self.cnf.add_clause([!g, a]);
        self.cnf.add_clause([!g, b]);
        self.cnf.add_clause([g, !a, !b]);
        self.ands.insert(key, g);
        g
    }

    fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        if a == self.ff() {
            return b;
        }
        if b == self.ff() {
            return a;
        }
        if a == self.tt {
            return !b;
        }
        if b == self.tt {
            return !a;
        }
        if a == b {
            return self.ff();
        }
        if a == !b {
            return self.tt;
        }
        // Normalize polarity so that xor(a, b) and xor(!a, b) share a gate.
        let flip = !a.is_positive() ^ !b.is_positive();
        let (pa, pb) = (a.var().pos(), b.var().pos());
        let key = if pa < pb { (pa, pb) } else { (pb, pa) };
        let g = match self.xors.get(&key) {
            Some(&g) => g,
            None => {
                let g = self.fresh();
                let (x, y) = key;
                self.cnf.add_clause([!g, x, y]);
                self.cnf.add_clause([!g, !x, !y]);
                self.cnf.add_clause([g, !x, y]);
                self.cnf.add_clause([g, x, !y]);
                self.xors.insert(key, g);
                g
            }
        };
        if flip {
            !g
        } else {
            g
        }
    }

    fn mux(&mut self, c: Lit, a: Lit, b: Lit) -> Lit {
        if c == self.tt || a == b {
            return a;
        }
        if c == self.ff() {
            return b;
        }
        if a == self.tt {
            return self.or(c, b);
        }
        if a == self.ff() {
            return self.and(!c, b);
        }
        if b == self.tt {
            return self.or(!c, a);
        }
        if b == self.ff() {
            return self.and(c, a);
        }
        if let Some(&g) = self.muxes.get(&(c, a, b)) {
            return g;
        }
        let g = self.fresh();
        self.cnf.add_clause([!c, !a, g]);
        self.cnf.add_clause([!c, a, !g]);
        self.cnf.add_clause([c, !b, g]);
        self.cnf.add_clause([c, b, !g]);
        self.cnf.add_clause([!a, !b, g]);
        self.cnf.add_clause([a, b, !g]);
        self.muxes.insert((c, a, b), g);
        g
    }

    fn full_add(&mut self, a: Lit, b: Lit, cin: Lit) -> (Lit, Lit) {
        let ab = self.xor(a, b);
        let sum = self.xor(ab, cin);
        let g = self.and(a, b);
        let p = self.and(ab, cin);
        let carry = self.or(g, p);
        (sum, carry)
    }

    /// `a + b + cin` and the carry out.
    fn add_carry(&mut self, a: &[Lit], b: &[Lit], cin: Lit) -> (Vec<Lit>, Lit) {
        let mut c = cin;
        let mut out = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let (s, c2) = self.full_add(x, y, c);
            out.push(s);
            c = c2;
        }
        (out, c)
    }

    fn add(&mut self, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
        let ff = self.ff();
        self.add_carry(a, b, ff).0
    }

    fn sub(&mut self, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
        let nb: Vec<Lit> = b.iter().map(|&l| !l).collect();
        let tt = self.tt;
        self.add_carry(a, &nb, tt).0
    }

    fn negate(&mut self, a: &[Lit]) -> Vec<Lit> {
        let zero = vec![self.ff(); a.len()];
        self.sub(&zero, a)
    }

    /// Unsigned `a < b`.
    fn ult(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let nb: Vec<Lit> = b.iter().map(|&l| !l).collect();
        let tt = self.tt;
        let (_, carry) = self.add_carry(a, &nb, tt);
        !carry
    }

    fn slt(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let w = a.len();
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a[w - 1] = !a[w - 1];
        b[w - 1] = !b[w - 1];
        self.ult(&a, &b)
    }

    fn equal(&mut self, a: &[Lit], b: &[Lit]) -> Lit {
        let mut acc = self.tt;
        for (&x, &y) in a.iter().zip(b) {
            let d = self.xor(x, y);
            acc = self.and(acc, !d);
        }
        acc
    }

    fn mux_bv(&mut self, c: Lit, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
        a.iter().zip(b).map(|(&x, &y)| self.mux(c, x, y)).collect()
    }

    fn mul(&mut self, a: &[Lit], b: &[Lit]) -> Vec<Lit> {
        let w = a.len();
        let mut acc = vec![self.ff(); w];
        for (i, &bi) in b.iter().enumerate() {
            if bi == self.ff() {
                continue;
            }
            let mut partial = vec![self.ff(); w];
            for j in 0..w - i {
                partial[i + j] = self.and(a[j], bi);
            }
            acc = self.add(&acc, &partial);
        }
        acc
    }

    /// Unsigned quotient and remainder; `d` must be nonzero for a
    /// meaningful result.
    fn udivrem(&mut self, n: &[Lit], d: &[Lit]) -> (Vec<Lit>, Vec<Lit>) {
        let w = n.len();
        let ff = self.ff();
        let mut dx = d.to_vec();
        dx.push(ff);
        let mut r = vec![ff; w + 1];
        let mut q = vec![ff; w];
        for i in (0..w).rev() {
            let mut shifted = Vec::with_capacity(w + 1);
            shifted.push(n[i]);
            shifted.extend_from_slice(&r[..w]);
            let lt = self.ult(&shifted, &dx);
            let diff = self.sub(&shifted, &dx);
            q[i] = !lt;
            r = self.mux_bv(lt, &shifted, &diff);
        }
        r.truncate(w);
        (q, r)
    }

    /// Signed division or remainder with C truncation; 0 on a zero divisor.
    fn sdivrem(&mut self, a: &[Lit], b: &[Lit], rem: bool) -> Vec<Lit> {
        let w = a.len();
        let (sa, sb) = (a[w - 1], b[w - 1]);
        let na = self.negate(a);
        let nb = self.negate(b);
        let ua = self.mux_bv(sa, &na, a);
        let ub = self.mux_bv(sb, &nb, b);
        let (q, r) = self.udivrem(&ua, &ub);
        let result = if rem {
            let nr = self.negate(&r);
            self.mux_bv(sa, &nr, &r)
        } else {
            let nq = self.negate(&q);
            let s = self.xor(sa, sb);
            self.mux_bv(s, &nq, &q)
        };
        let zero = vec![self.ff(); w];
        let bz = self.equal(b, &zero);
        self.mux_bv(bz, &zero, &result)
    }

    pub(crate) fn bool_lit(&mut self, t: TermId) -> Lit {
        debug_assert_eq!(self.arena.sort(t), Sort::Bool);
        self.encode(t)[0]
    }

    pub(crate) fn bv(&mut self, t: TermId) -> Vec<Lit> {
        debug_assert_eq!(self.arena.sort(t), Sort::Bv);
        self.encode(t)
    }

    fn encode(&mut self, root: TermId) -> Vec<Lit> {
        if let Some(bits) = self.done.get(&root) {
            return bits.clone();
        }
        let w = self.arena.width() as usize;
        for t in self.arena.reachable(&[root]) {
            if self.done.contains_key(&t) {
                continue;
            }
            let bits: Vec<Lit> = match self.arena.term(t) {
                Term::Bool(b) => vec![self.konst(b)],
                Term::Const(v) => (0..w).map(|i| self.konst((v >> i) & 1 == 1)).collect(),
                Term::Sym(_) => {
                    let n = if self.arena.sort(t) == Sort::Bool { 1 } else { w };
                    (0..n).map(|_| self.fresh()).collect()
                }
                Term::Not(a) => vec![!self.done[&a][0]],
                Term::And(a, b) => {
                    let (x, y) = (self.done[&a][0], self.done[&b][0]);
                    vec![self.and(x, y)]
                }
                Term::Or(a, b) => {
                    let (x, y) = (self.done[&a][0], self.done[&b][0]);
                    vec![self.or(x, y)]
                }
                Term::Ite(c, a, b) => {
                    let c = self.done[&c][0];
                    let (x, y) = (self.done[&a].clone(), self.done[&b].clone());
                    self.mux_bv(c, &x, &y)
                }
                Term::Eq(a, b) => {
                    let (x, y) = (self.done[&a].clone(), self.done[&b].clone());
                    vec![self.equal(&x, &y)]
                }
                Term::Slt(a, b) => {
                    let (x, y) = (self.done[&a].clone(), self.done[&b].clone());
                    vec![self.slt(&x, &y)]
                }
                Term::Neg(a) => {
                    let x = self.done[&a].clone();
                    self.negate(&x)
                }
                Term::Bin(op, a, b) => {
                    let (x, y) = (self.done[&a].clone(), self.done[&b].clone());
                    match op {
                        BvOp::Add => self.add(&x, &y),
                        BvOp::Sub => self.sub(&x, &y),
                        BvOp::Mul => self.mul(&x, &y),
                        BvOp::Div => self.sdivrem(&x, &y, false),
                        BvOp::Rem => self.sdivrem(&x, &y, true),
                    }
                }
            };
            self.done.insert(t, bits);
        }
        self.done[&root].clone()
    }
}
