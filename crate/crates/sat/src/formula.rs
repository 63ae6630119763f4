use crate::lit::{Lit, Var};

/// A formula in conjunctive normal form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    pub fn with_vars(num_vars: usize) -> Cnf {
        Cnf {
            num_vars,
            clauses: Vec::new(),
        }
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var::new(self.num_vars - 1)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn add_clause(&mut self, clause: impl IntoIterator<Item = Lit>) {
        let clause: Vec<Lit> = clause.into_iter().collect();
        for l in &clause {
            self.num_vars = self.num_vars.max(l.var().index() + 1);
        }
        self.clauses.push(clause);
    }

    /// Raises the declared variable count without adding clauses.
    pub fn reserve_vars(&mut self, num_vars: usize) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    /// Evaluates every clause under a total assignment indexed by variable.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| clause_satisfied(c, model))
    }
}

pub(crate) fn clause_satisfied(clause: &[Lit], model: &[bool]) -> bool {
    clause
        .iter()
        .any(|l| model.get(l.var().index()).copied().unwrap_or(false) == l.is_positive())
}

/// A weighted partial MaxSAT instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Wcnf {
    pub hard: Cnf,
    pub soft: Vec<(Vec<Lit>, u64)>,
}

impl Wcnf {
    pub fn new(hard: Cnf) -> Wcnf {
        Wcnf {
            hard,
            soft: Vec::new(),
        }
    }

    pub fn add_soft(&mut self, clause: impl IntoIterator<Item = Lit>, weight: u64) {
        assert!(weight > 0, "soft clause weights must be positive");
        let clause: Vec<Lit> = clause.into_iter().collect();
        for l in &clause {
            self.hard.reserve_vars(l.var().index() + 1);
        }
        self.soft.push((clause, weight));
    }

    pub fn num_vars(&self) -> usize {
        self.hard.num_vars()
    }

    pub fn total_soft_weight(&self) -> u64 {
        self.soft.iter().map(|(_, w)| *w).sum()
    }

    /// Indices of soft clauses falsified by `model`.
    pub fn falsified(&self, model: &[bool]) -> Vec<usize> {
        self.soft
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| !clause_satisfied(c, model))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn cost_of(&self, model: &[bool]) -> u64 {
        self.falsified(model).iter().map(|&i| self.soft[i].1).sum()
    }
}
