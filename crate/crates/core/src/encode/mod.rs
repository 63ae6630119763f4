//! Weights, SSA translation, bit-blasting and MaxSAT instance assembly.

mod bitblast;
mod ssa;
pub mod term;
mod weights;

use std::io;

use mbdfl_sat::{dimacs, Wcnf};
use thiserror::Error;

use crate::frontend::Program;
use crate::transform::{ComponentTable, InstrumentedProgram};

pub use bitblast::{bitblast, decode, AssertMode, CnfFormula, ScopeVars};
pub use ssa::{ssa_translate, Definition, ScopeSsa, SsaOptions, SsaProgram, OUTPUT_SLACK};
pub use weights::compute_weights;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("unsupported bit width {0}; expected 8, 16 or 32")]
    Width(u32),
    #[error("unwind bound must be at least 1")]
    ZeroUnwind,
    #[error("{what} {value} of test {test} does not fit in {width} bits")]
    Range {
        test: String,
        what: String,
        value: i64,
        width: u32,
    },
    #[error("component {0} has no CNF variable")]
    MissingVar(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    pub unwind: u32,
    pub width: u32,
    pub io_multiplier: u64,
    pub unwind_assert: bool,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            unwind: 8,
            width: 16,
            io_multiplier: 100,
            unwind_assert: false,
        }
    }
}

impl EncodeOptions {
    fn ssa(&self) -> SsaOptions {
        SsaOptions {
            unwind: self.unwind,
            width: self.width,
            unwind_assert: self.unwind_assert,
        }
    }
}

/// Soft units on the healthy variables over the hard trace formula.
pub fn build_wcnf(cnf: &CnfFormula, table: &ComponentTable) -> Result<Wcnf, EncodeError> {
    let mut w = Wcnf::new(cnf.cnf.clone());
    for c in &table.components {
        let var = cnf
            .healthy
            .get(c.id)
            .ok_or_else(|| EncodeError::MissingVar(c.healthy_var.clone()))?;
        w.add_soft([var.pos()], c.weight.max(1));
    }
    Ok(w)
}

/// A fully encoded instance.
#[derive(Debug, Clone)]
pub struct Encoding {
    /// The component table with weights.
    pub table: ComponentTable,
    pub cnf: CnfFormula,
    pub wcnf: Wcnf,
}

/// Runs the whole encoder on an instrumented program. Unrefined tables get
/// hierarchical weights; refined ones inherit them from their parents.
pub fn encode(
    program: &Program,
    ip: &InstrumentedProgram,
    opts: &EncodeOptions,
    mode: AssertMode,
) -> Result<Encoding, EncodeError> {
    let table = compute_weights(&ip.table, program, opts.io_multiplier);
    let ssa = ssa_translate(ip, &EncodeOptions { unwind: ip.unwind, ..*opts }.ssa())?;
    let cnf = bitblast(&ssa, mode);
    let wcnf = build_wcnf(&cnf, &table)?;
    Ok(Encoding { table, cnf, wcnf })
}

/// Writes `wcnf` in DIMACS WCNF format.
pub fn write_wcnf(wcnf: &Wcnf, out: impl io::Write) -> io::Result<()> {
    dimacs::write_wcnf(wcnf, out)
}

#[cfg(test)]
mod tests;
