//! The bundled corpus of small buggy and correct programs.
//!
//! Each entry is a directory holding `program.c`, a `meta.toml` and a
//! `tests/` suite. Buggy entries also hold `fixed.c`, the program the
//! expected outputs were produced with.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::frontend::{load_test_suite, parse_program, FrontendError, Program, SuiteError, TestSuite};

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
pub struct Meta {
    pub description: String,
    /// Lines that differ from the fixed program.
    #[serde(default)]
    pub faulty_lines: Vec<u32>,
    /// Loop bound that covers every test of the entry.
    pub unwind: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Buggy,
    Correct,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: EntryKind,
    pub dir: PathBuf,
    pub source: String,
    pub program: Program,
    pub fixed: Option<Program>,
    pub suite: TestSuite,
    pub meta: Meta,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Meta {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: FrontendError,
    },
    #[error(transparent)]
    Suite(#[from] SuiteError),
}

/// Location of the corpus shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_file(path: &Path) -> Result<(String, Program), CorpusError> {
    let source = read(path)?;
    let program = parse_program(&source).map_err(|source| CorpusError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((source, program))
}

pub fn load_entry(dir: &Path, kind: EntryKind) -> Result<CorpusEntry, CorpusError> {
    let meta_path = dir.join("meta.toml");
    let meta: Meta = toml::from_str(&read(&meta_path)?).map_err(|source| CorpusError::Meta {
        path: meta_path,
        source,
    })?;
    let (source, program) = parse_file(&dir.join("program.c"))?;
    let fixed = match kind {
        EntryKind::Buggy => Some(parse_file(&dir.join("fixed.c"))?.1),
        EntryKind::Correct => None,
    };
    Ok(CorpusEntry {
        name: dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        kind,
        dir: dir.to_path_buf(),
        source,
        program,
        fixed,
        suite: load_test_suite(dir.join("tests"))?,
        meta,
    })
}

fn subdirs(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let io = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_dir() {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

/// Loads every entry under `root/buggy` and `root/correct`, sorted by name
/// within each group.
pub fn load_corpus(root: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = Vec::new();
    for (sub, kind) in [("buggy", EntryKind::Buggy), ("correct", EntryKind::Correct)] {
        for dir in subdirs(&root.join(sub))? {
            entries.push(load_entry(&dir, kind)?);
        }
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::{run_concrete, ExecStatus, Limits};

    fn limits() -> Limits {
        Limits {
            max_loop_iterations: u32::MAX,
            ..Limits::default()
        }
    }

    #[test]
    fn corpus_has_the_advertised_shape() {
        let entries = load_corpus(&corpus_dir()).unwrap();
        let buggy = entries.iter().filter(|e| e.kind == EntryKind::Buggy).count();
        let correct = entries.len() - buggy;
        assert!(buggy >= 20, "{buggy} buggy programs");
        assert!(correct >= 10, "{correct} correct programs");
        for e in &entries {
            assert!(!e.suite.tests.is_empty(), "{}", e.name);
            match e.kind {
                EntryKind::Buggy => assert!((1..=3).contains(&e.meta.faulty_lines.len()), "{}", e.name),
                EntryKind::Correct => assert!(e.meta.faulty_lines.is_empty(), "{}", e.name),
            }
        }
    }

    #[test]
    fn expected_outputs_come_from_the_reference_program() {
        for e in load_corpus(&corpus_dir()).unwrap() {
            let reference = e.fixed.as_ref().unwrap_or(&e.program);
            let mut failing = 0;
            for t in &e.suite.tests {
                let r = run_concrete(reference, &t.inputs, &limits());
                assert_eq!(r.status, ExecStatus::Completed, "{} {}", e.name, t.id);
                assert_eq!(r.output, t.expected_output, "{} {}", e.name, t.id);
                let mut l = limits();
                l.max_loop_iterations = e.meta.unwind;
                assert_eq!(run_concrete(reference, &t.inputs, &l).status, ExecStatus::Completed, "{} {} needs a larger unwind", e.name, t.id);
                if run_concrete(&e.program, &t.inputs, &limits()).output != t.expected_output {
                    failing += 1;
                }
            }
            match e.kind {
                EntryKind::Buggy => assert!(failing > 0, "{} has no failing test", e.name),
                EntryKind::Correct => assert_eq!(failing, 0, "{}", e.name),
            }
        }
    }

    #[test]
    fn faulty_lines_are_the_differing_lines() {
        for e in load_corpus(&corpus_dir()).unwrap() {
            let Ok(fixed) = fs::read_to_string(e.dir.join("fixed.c")) else {
                continue;
            };
            let differing: Vec<u32> = e
                .source
                .lines()
                .zip(fixed.lines())
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(i, _)| i as u32 + 1)
                .collect();
            assert_eq!(differing, e.meta.faulty_lines, "{}", e.name);
        }
    }
}
