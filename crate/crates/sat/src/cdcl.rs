//! Conflict-driven clause learning with an assumption interface.
//!
//! Two-watched-literal propagation, first-UIP learning with local clause
//! minimization, VSIDS branching with phase saving, Luby restarts and
//! activity-based learnt clause deletion. Unsatisfiable calls under
//! assumptions report the subset of assumptions that took part in the final
//! conflict.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Cnf;
use crate::lit::{Lit, Var};
use crate::SolveError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LBool {
    True,
    False,
    Undef,
}

#[inline]
fn value_of(assigns: &[LBool], l: Lit) -> LBool {
    match assigns[l.var().index()] {
        LBool::Undef => LBool::Undef,
        LBool::True if l.is_positive() => LBool::True,
        LBool::False if !l.is_positive() => LBool::True,
        _ => LBool::False,
    }
}

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watcher {
    cref: u32,
    blocker: Lit,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolverOptions {
    /// Maximum number of conflicts per `solve` call; `None` is unlimited.
    pub conflict_budget: Option<u64>,
    /// Seed for the occasional random branching decision.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub solves: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
}

impl std::ops::AddAssign for SolverStats {
    fn add_assign(&mut self, rhs: SolverStats) {
        self.solves += rhs.solves;
        self.decisions += rhs.decisions;
        self.propagations += rhs.propagations;
        self.conflicts += rhs.conflicts;
        self.restarts += rhs.restarts;
    }
}

/// Binary max-heap of variables keyed by activity.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn grow(&mut self, n: usize) {
        self.pos.resize(n, None);
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v].is_some()
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = Some(self.heap.len());
        self.heap.push(v as u32);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if let Some(i) = self.pos[v] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()? as usize;
        let last = self.heap.pop().unwrap();
        self.pos[top] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if act[p as usize] >= act[v as usize] {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let left = 2 * i + 1;
            if left >= n {
                break;
            }
            let right = left + 1;
            let child = if right < n && act[self.heap[right] as usize] > act[self.heap[left] as usize]
            {
                right
            } else {
                left
            };
            let c = self.heap[child];
            if act[c as usize] <= act[v as usize] {
                break;
            }
            self.heap[i] = c;
            self.pos[c as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

const VAR_DECAY: f64 = 0.95;
const CLAUSE_DECAY: f64 = 0.999;
const RANDOM_FREQ: f64 = 0.01;
const RESTART_BASE: f64 = 100.0;

pub struct Solver {
    assigns: Vec<LBool>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    activity: Vec<f64>,
    var_inc: f64,
    cla_inc: f64,
    order: VarHeap,
    polarity: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    model: Vec<bool>,
    core: Vec<Lit>,
    max_learnts: f64,
    rng: ChaCha8Rng,
    options: SolverOptions,
    stats: SolverStats,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverOptions::default())
    }
}

impl Solver {
    pub fn new(options: SolverOptions) -> Solver {
        Solver {
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            activity: Vec::new(),
            var_inc: 1.0,
            cla_inc: 1.0,
            order: VarHeap::default(),
            polarity: Vec::new(),
            seen: Vec::new(),
            ok: true,
            model: Vec::new(),
            core: Vec::new(),
            max_learnts: 4000.0,
            rng: ChaCha8Rng::seed_from_u64(options.seed),
            options,
            stats: SolverStats::default(),
        }
    }

    pub fn from_cnf(cnf: &Cnf, options: SolverOptions) -> Solver {
        let mut s = Solver::new(options);
        s.reserve_vars(cnf.num_vars());
        for c in cnf.clauses() {
            s.add_clause(c);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assigns.len();
        self.assigns.push(LBool::Undef);
        self.level.push(0);
        self.reason.push(None);
        self.activity.push(0.0);
        self.polarity.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.grow(v + 1);
        self.order.insert(v, &self.activity);
        Var::new(v)
    }

    pub fn reserve_vars(&mut self, n: usize) {
        while self.assigns.len() < n {
            self.new_var();
        }
    }

    /// Adds a clause at decision level 0. Returns `false` once the clause set
    /// is known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        let mut lits: Vec<Lit> = clause.to_vec();
        if let Some(max) = lits.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        lits.sort_unstable();
        lits.dedup();
        let mut kept = Vec::with_capacity(lits.len());
        for (i, &l) in lits.iter().enumerate() {
            if i + 1 < lits.len() && lits[i + 1] == !l {
                return true;
            }
            match value_of(&self.assigns, l) {
                LBool::True => return true,
                LBool::False => {}
                LBool::Undef => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
            }
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let cref = self.push_clause(kept, false);
                self.attach(cref);
            }
        }
        self.ok
    }

    fn push_clause(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        self.clauses.push(Clause {
            lits,
            learnt,
            deleted: false,
            activity: 0.0,
        });
        (self.clauses.len() - 1) as u32
    }

    fn attach(&mut self, cref: u32) {
        let c = &self.clauses[cref as usize].lits;
        let (a, b) = (c[0], c[1]);
        self.watches[a.code()].push(Watcher { cref, blocker: b });
        self.watches[b.code()].push(Watcher { cref, blocker: a });
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var().index();
        debug_assert_eq!(self.assigns[v], LBool::Undef);
        self.assigns[v] = if l.is_positive() {
            LBool::True
        } else {
            LBool::False
        };
        self.level[v] = self.decision_level() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn cancel_until(&mut self, lvl: usize) {
        if self.decision_level() <= lvl {
            return;
        }
        let start = self.trail_lim[lvl];
        for i in (start..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            self.assigns[v] = LBool::Undef;
            self.reason[v] = None;
            self.polarity[v] = l.is_positive();
            self.order.insert(v, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(lvl);
        self.qhead = self.trail.len();
    }

    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            'watchers: while i < ws.len() {
                let w = ws[i];
                i += 1;
                if value_of(&self.assigns, w.blocker) == LBool::True {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let clause = &mut self.clauses[w.cref as usize];
                if clause.deleted {
                    continue;
                }
                let lits = &mut clause.lits;
                if lits[0] == false_lit {
                    lits.swap(0, 1);
                }
                let first = lits[0];
                let nw = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && value_of(&self.assigns, first) == LBool::True {
                    ws[j] = nw;
                    j += 1;
                    continue;
                }
                for k in 2..lits.len() {
                    if value_of(&self.assigns, lits[k]) != LBool::False {
                        lits.swap(1, k);
                        self.watches[lits[1].code()].push(nw);
                        continue 'watchers;
                    }
                }
                ws[j] = nw;
                j += 1;
                if value_of(&self.assigns, first) == LBool::False {
                    conflict = Some(w.cref);
                    self.qhead = self.trail.len();
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: u32) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.cla_inc;
        if c.activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.cla_inc *= 1e-20;
        }
    }

    fn analyze(&mut self, mut cref: u32) -> (Vec<Lit>, usize) {
        let mut learnt = vec![Lit::from_dimacs(1)];
        let mut path_count = 0usize;
        let mut asserting: Option<Lit> = None;
        let mut index = self.trail.len();
        let current = self.decision_level() as u32;
        loop {
            self.bump_clause(cref);
            let start = usize::from(asserting.is_some());
            let len = self.clauses[cref as usize].lits.len();
            for k in start..len {
                let q = self.clauses[cref as usize].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump_var(v);
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        path_count += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let p = self.trail[index];
            asserting = Some(p);
            self.seen[p.var().index()] = false;
            path_count -= 1;
            if path_count == 0 {
                break;
            }
            cref = self.reason[p.var().index()].expect("implied literal without reason");
        }
        learnt[0] = !asserting.unwrap();

        // Drop literals implied by other literals of the clause.
        let collected = learnt.clone();
        let mut j = 1;
        for i in 1..learnt.len() {
            let v = learnt[i].var().index();
            let keep = match self.reason[v] {
                None => true,
                Some(r) => self.clauses[r as usize].lits[1..].iter().any(|l| {
                    let u = l.var().index();
                    !self.seen[u] && self.level[u] > 0
                }),
            };
            if keep {
                learnt[j] = learnt[i];
                j += 1;
            }
        }
        learnt.truncate(j);
        for l in &collected[1..] {
            self.seen[l.var().index()] = false;
        }

        let backtrack = if learnt.len() == 1 {
            0
        } else {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var().index()] as usize
        };
        (learnt, backtrack)
    }

    /// Collects the assumptions responsible for `failed` being false.
    fn analyze_final(&mut self, failed: Lit) {
        self.core.clear();
        self.core.push(failed);
        if self.decision_level() == 0 {
            return;
        }
        self.seen[failed.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let l = self.trail[i];
            let v = l.var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    if !self.core.contains(&l) {
                        self.core.push(l);
                    }
                }
                Some(r) => {
                    for k in 1..self.clauses[r as usize].lits.len() {
                        let u = self.clauses[r as usize].lits[k].var().index();
                        if self.level[u] > 0 {
                            self.seen[u] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[failed.var().index()] = false;
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        if self.rng.gen::<f64>() < RANDOM_FREQ && !self.order.heap.is_empty() {
            let v = self.order.heap[self.rng.gen_range(0..self.order.heap.len())] as usize;
            if self.assigns[v] == LBool::Undef {
                return Some(Var::new(v).lit(self.polarity[v]));
            }
        }
        while let Some(v) = self.order.pop(&self.activity) {
            if self.assigns[v] == LBool::Undef {
                return Some(Var::new(v).lit(self.polarity[v]));
            }
        }
        None
    }

    fn reduce_db(&mut self) {
        let mut learnts = std::mem::take(&mut self.learnts);
        learnts.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap()
        });
        let half = learnts.len() / 2;
        let mut kept = Vec::with_capacity(learnts.len());
        for (i, &cref) in learnts.iter().enumerate() {
            let c = &self.clauses[cref as usize];
            let first = c.lits[0];
            let locked = self.reason[first.var().index()] == Some(cref)
                && value_of(&self.assigns, first) == LBool::True;
            if i < half && c.lits.len() > 2 && !locked {
                let c = &mut self.clauses[cref as usize];
                c.deleted = true;
                c.lits = Vec::new();
            } else {
                kept.push(cref);
            }
        }
        self.learnts = kept;
        let clauses = &self.clauses;
        for ws in &mut self.watches {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        self.max_learnts *= 1.1;
    }

    fn search(
        &mut self,
        max_conflicts: u64,
        assumptions: &[Lit],
        budget_start: u64,
    ) -> Result<Option<bool>, SolveError> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return Ok(Some(false));
                }
                let (learnt, backtrack) = self.analyze(confl);
                self.cancel_until(backtrack);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let cref = self.push_clause(learnt, true);
                    self.attach(cref);
                    self.bump_clause(cref);
                    self.learnts.push(cref);
                    self.enqueue(first, Some(cref));
                }
                self.var_inc /= VAR_DECAY;
                self.cla_inc /= CLAUSE_DECAY;
                continue;
            }
            if let Some(budget) = self.options.conflict_budget {
                if self.stats.conflicts - budget_start >= budget {
                    self.cancel_until(0);
                    return Err(SolveError::Budget(budget));
                }
            }
            if conflicts >= max_conflicts {
                self.cancel_until(0);
                return Ok(None);
            }
            if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                self.reduce_db();
            }
            let mut next = None;
            while self.decision_level() < assumptions.len() {
                let a = assumptions[self.decision_level()];
                match value_of(&self.assigns, a) {
                    LBool::True => self.trail_lim.push(self.trail.len()),
                    LBool::False => {
                        self.analyze_final(a);
                        return Ok(Some(false));
                    }
                    LBool::Undef => {
                        next = Some(a);
                        break;
                    }
                }
            }
            let next = match next {
                Some(a) => a,
                None => {
                    self.stats.decisions += 1;
                    match self.pick_branch() {
                        Some(l) => l,
                        None => return Ok(Some(true)),
                    }
                }
            };
            self.trail_lim.push(self.trail.len());
            self.enqueue(next, None);
        }
    }

    /// Decides satisfiability under `assumptions`. On `Ok(false)` the
    /// responsible assumptions are available from [`Solver::core`].
    pub fn solve_with(&mut self, assumptions: &[Lit]) -> Result<bool, SolveError> {
        self.stats.solves += 1;
        self.model.clear();
        self.core.clear();
        if !self.ok {
            return Ok(false);
        }
        if let Some(max) = assumptions.iter().map(|l| l.var().index()).max() {
            self.reserve_vars(max + 1);
        }
        self.cancel_until(0);
        self.max_learnts = self.max_learnts.max(self.clauses.len() as f64 / 3.0);
        let budget_start = self.stats.conflicts;
        let mut restarts = 0u64;
        loop {
            let limit = (luby(2.0, restarts) * RESTART_BASE) as u64;
            match self.search(limit, assumptions, budget_start)? {
                Some(true) => {
                    self.model = self
                        .assigns
                        .iter()
                        .map(|&a| a == LBool::True)
                        .collect();
                    self.cancel_until(0);
                    return Ok(true);
                }
                Some(false) => {
                    self.cancel_until(0);
                    return Ok(false);
                }
                None => {
                    restarts += 1;
                    self.stats.restarts += 1;
                }
            }
        }
    }

    pub fn solve(&mut self) -> Result<bool, SolveError> {
        self.solve_with(&[])
    }

    /// Model of the last satisfiable call, indexed by variable.
    pub fn model(&self) -> &[bool] {
        &self.model
    }

    pub fn model_value(&self, l: Lit) -> bool {
        self.model[l.var().index()] == l.is_positive()
    }

    /// Assumptions involved in the last unsatisfiable call.
    pub fn core(&self) -> &[Lit] {
        &self.core
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Vec<bool>),
    /// Subset of the assumption literals sufficient for unsatisfiability.
    Unsat(Vec<Lit>),
}

pub fn sat_solve(
    cnf: &Cnf,
    assumptions: &[Lit],
    options: &SolverOptions,
) -> Result<SatOutcome, SolveError> {
    let mut solver = Solver::from_cnf(cnf, options.clone());
    if solver.solve_with(assumptions)? {
        Ok(SatOutcome::Sat(solver.model().to_vec()))
    } else {
        Ok(SatOutcome::Unsat(solver.core().to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: i64) -> Lit {
        Lit::from_dimacs(v)
    }

    #[test]
    fn luby_sequence() {
        let seq: Vec<f64> = (0..15).map(|i| luby(2.0, i)).collect();
        assert_eq!(
            seq,
            vec![1., 1., 2., 1., 1., 2., 4., 1., 1., 2., 1., 1., 2., 4., 8.]
        );
    }

    #[test]
    fn simple_sat() {
        let mut cnf = Cnf::new();
        cnf.add_clause([l(1), l(2)]);
        cnf.add_clause([l(-1)]);
        match sat_solve(&cnf, &[], &SolverOptions::default()).unwrap() {
            SatOutcome::Sat(m) => {
                assert!(!m[0]);
                assert!(m[1]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradiction_has_empty_core() {
        let mut cnf = Cnf::new();
        cnf.add_clause([l(1)]);
        cnf.add_clause([l(-1)]);
        assert_eq!(
            sat_solve(&cnf, &[l(2)], &SolverOptions::default()).unwrap(),
            SatOutcome::Unsat(vec![])
        );
    }

    #[test]
    fn core_is_subset_of_assumptions() {
        let mut s = Solver::default();
        s.add_clause(&[l(-1), l(-2)]);
        s.add_clause(&[l(3), l(4)]);
        assert!(!s.solve_with(&[l(3), l(1), l(2)]).unwrap());
        let mut core = s.core().to_vec();
        core.sort();
        assert_eq!(core, vec![l(1), l(2)]);
        assert!(s.solve_with(&[l(1)]).unwrap());
        assert!(!s.model_value(l(2)));
    }

    #[test]
    fn contradictory_assumptions() {
        let mut s = Solver::default();
        s.reserve_vars(2);
        assert!(!s.solve_with(&[l(1), l(-1)]).unwrap());
        let mut core = s.core().to_vec();
        core.sort();
        assert_eq!(core, vec![l(1), l(-1)]);
    }

    #[test]
    fn pigeonhole_is_unsat() {
        // 5 pigeons, 4 holes.
        let (p, h) = (5i64, 4i64);
        let var = |i: i64, j: i64| l(i * h + j + 1);
        let mut s = Solver::default();
        for i in 0..p {
            let c: Vec<Lit> = (0..h).map(|j| var(i, j)).collect();
            s.add_clause(&c);
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&[!var(a, j), !var(b, j)]);
                }
            }
        }
        assert!(!s.solve().unwrap());
    }

    #[test]
    fn budget_is_reported() {
        let (p, h) = (8i64, 7i64);
        let var = |i: i64, j: i64| l(i * h + j + 1);
        let mut s = Solver::new(SolverOptions {
            conflict_budget: Some(10),
            seed: 1,
        });
        for i in 0..p {
            let c: Vec<Lit> = (0..h).map(|j| var(i, j)).collect();
            s.add_clause(&c);
        }
        for j in 0..h {
            for a in 0..p {
                for b in a + 1..p {
                    s.add_clause(&[!var(a, j), !var(b, j)]);
                }
            }
        }
        assert_eq!(s.solve(), Err(SolveError::Budget(10)));
    }
}
