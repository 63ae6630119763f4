//! Fault localization for MiniC programs.
//!
//! A buggy program and its failing tests are unrolled into one program with a
//! scope per test, instrumented with relaxation variables, translated to SSA,
//! bit-blasted and handed to a weighted partial MaxSAT solver. The falsified
//! healthy variables of each optimum solution form a subset-minimal diagnosis
//! that explains every failing test at once.

pub mod corpus;
pub mod diagnose;
pub mod encode;
pub mod exec;
pub mod frontend;
pub mod transform;

pub use diagnose::{
    brute_force_diagnoses, localize_bugassist, localize_cfaults, localize_sniper, validate_diagnosis, Config,
    DiagnoseError, Diagnosis, DiagnosisReport, Strategy,
};
pub use exec::{classify_tests, run_concrete, ExecResult, ExecStatus, Limits};
pub use frontend::{load_test_suite, parse_program, Program, TestCase, TestSuite};
