//! MiniC parsing and test-suite loading.

pub mod ast;
mod check;
mod lexer;
mod parser;
pub mod pretty;
mod suite;

pub use ast::*;
pub use pretty::{print_expr, print_program};
pub use suite::{load_test_suite, SuiteError, TestCase, TestSuite};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: u32,
        column: u32,
        message: String,
    },
    #[error("semantic error at line {line}: {message}")]
    Semantic { line: u32, message: String },
}

/// Parses and validates MiniC source. Node ids are assigned in pre-order
/// starting at 1.
pub fn parse_program(source: &str) -> Result<Program, FrontendError> {
    let toks = lexer::tokenize(source)?;
    let mut program = parser::Parser::new(toks).parse_program()?;
    check::check_program(&program)?;
    renumber(&mut program);
    Ok(program)
}
