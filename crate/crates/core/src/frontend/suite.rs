use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub id: String,
    pub inputs: Vec<i64>,
    pub expected_output: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TestSuite {
    pub tests: Vec<TestCase>,
}

impl TestSuite {
    pub fn new(tests: Vec<TestCase>) -> TestSuite {
        TestSuite { tests }
    }

    pub fn get(&self, id: &str) -> Option<&TestCase> {
        self.tests.iter().find(|t| t.id == id)
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

#[derive(Default)]
struct Pair {
    input: Option<PathBuf>,
    output: Option<PathBuf>,
}

/// Loads `tN.in`/`tN.out` pairs from `dir`, ordered by `N`.
pub fn load_test_suite(dir: impl AsRef<Path>) -> Result<TestSuite, SuiteError> {
    let dir = dir.as_ref();
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| SuiteError::Io { path, source }
    };
    let mut pairs: BTreeMap<u64, Pair> = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(io(dir))? {
        let entry = entry.map_err(io(dir))?;
        let path = entry.path();
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            continue;
        };
        let Some((stem, ext)) = name.rsplit_once('.') else {
            continue;
        };
        if ext != "in" && ext != "out" {
            continue;
        }
        let Some(n) = stem.strip_prefix('t').and_then(|d| {
            (!d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                .then(|| d.parse::<u64>().ok())
                .flatten()
        }) else {
            continue;
        };
        let pair = pairs.entry(n).or_default();
        if ext == "in" {
            pair.input = Some(path);
        } else {
            pair.output = Some(path);
        }
    }
    let mut tests = Vec::with_capacity(pairs.len());
    for (n, pair) in pairs {
        let (input, output) = match (pair.input, pair.output) {
            (Some(i), Some(o)) => (i, o),
            (Some(p), None) | (None, Some(p)) => {
                return Err(SuiteError::Format {
                    message: format!("test t{n} has no matching {} file", if p.extension().is_some_and(|e| e == "in") { ".out" } else { ".in" }),
                    path: p,
                })
            }
            (None, None) => unreachable!("pair created from a file"),
        };
        tests.push(TestCase {
            id: format!("t{n}"),
            inputs: read_ints(&input)?,
            expected_output: read_ints(&output)?,
        });
    }
    Ok(TestSuite { tests })
}

fn read_ints(path: &Path) -> Result<Vec<i64>, SuiteError> {
    let text = fs::read_to_string(path).map_err(|source| SuiteError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>().map_err(|_| SuiteError::Format {
                path: path.to_path_buf(),
                message: format!("`{tok}` is not a signed decimal integer"),
            })
        })
        .collect()
}
