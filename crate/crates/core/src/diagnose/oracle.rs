use std::collections::BTreeSet;

use super::{encode_tests, failing_tests, weighted_components, Checker, Config, DiagnoseError, Diagnosis};
use crate::frontend::{Program, TestSuite};
use crate::transform::{CompId, ComponentTable};

/// Checks component sets against all failing tests of a suite at once,
/// reusing one incremental solver.
pub struct Validator {
    table: ComponentTable,
    /// `None` when no test fails, in which case everything is consistent.
    checker: Option<Checker>,
}

impl Validator {
    pub fn new(program: &Program, suite: &TestSuite, opts: &Config) -> Result<Validator, DiagnoseError> {
        let failing = failing_tests(program, suite, opts);
        if failing.is_empty() {
            return Ok(Validator {
                table: weighted_components(program, opts),
                checker: None,
            });
        }
        let enc = encode_tests(program, &failing, opts, None)?;
        Ok(Validator {
            checker: Some(Checker::new(&enc, opts)),
            table: enc.table,
        })
    }

    /// Checks sets of refined components, obtained by refining the
    /// statement-level components `base`.
    pub fn refined(
        program: &Program,
        suite: &TestSuite,
        base: &BTreeSet<CompId>,
        opts: &Config,
    ) -> Result<Validator, DiagnoseError> {
        let failing = failing_tests(program, suite, opts);
        if failing.is_empty() {
            return Validator::new(program, suite, opts);
        }
        let table = weighted_components(program, opts);
        let enc = encode_tests(program, &failing, opts, Some((base, &table)))?;
        Ok(Validator {
            checker: Some(Checker::new(&enc, opts)),
            table: enc.table,
        })
    }

    /// The weighted components that sets refer to.
    pub fn table(&self) -> &ComponentTable {
        &self.table
    }

    /// True iff the failing tests are jointly satisfiable with exactly the
    /// components in `d` unhealthy.
    pub fn is_consistent(&mut self, d: &BTreeSet<CompId>) -> Result<bool, DiagnoseError> {
        if let Some(&c) = d.iter().find(|&&c| c >= self.table.len()) {
            return Err(DiagnoseError::UnknownComponent(c));
        }
        match &mut self.checker {
            Some(ch) => ch.check(d),
            None => Ok(true),
        }
    }
}

pub fn validate_diagnosis(
    program: &Program,
    suite: &TestSuite,
    d: &Diagnosis,
    opts: &Config,
) -> Result<bool, DiagnoseError> {
    Validator::new(program, suite, opts)?.is_consistent(&d.components)
}

/// Every subset-minimal diagnosis of at most `max_size` components, found by
/// checking subsets in order of increasing weight.
pub fn brute_force_diagnoses(
    program: &Program,
    suite: &TestSuite,
    max_size: usize,
    opts: &Config,
) -> Result<Vec<Diagnosis>, DiagnoseError> {
    let table = weighted_components(program, opts);
    let n = table.len();
    if n > opts.bf_cap || n >= 64 {
        return Err(DiagnoseError::CapTooLarge {
            components: n,
            cap: opts.bf_cap,
        });
    }
    let mut v = Validator::new(program, suite, opts)?;
    let weights = v.table().weights();
    let weight = |mask: u64| -> u64 { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| weights[i]).sum() };
    let mut masks: Vec<u64> = (0..1u64 << n)
        .filter(|m| m.count_ones() as usize <= max_size)
        .collect();
    masks.sort_by_key(|&m| (weight(m), m.count_ones(), m));
    let mut found: Vec<u64> = Vec::new();
    for m in masks {
        if found.iter().any(|&f| f & !m == 0) {
            continue;
        }
        let set: BTreeSet<CompId> = (0..n).filter(|i| m >> i & 1 == 1).collect();
        if v.is_consistent(&set)? {
            found.push(m);
        }
    }
    Ok(found
        .into_iter()
        .map(|m| Diagnosis::new(v.table(), (0..n).filter(|i| m >> i & 1 == 1).collect()))
        .collect())
}
