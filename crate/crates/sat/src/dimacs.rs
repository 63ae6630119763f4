//! DIMACS CNF and WCNF reading and writing.
//!
//! CNF uses the classic `p cnf <vars> <clauses>` header. WCNF output uses the
//! `p wcnf <vars> <clauses> <top>` header where `top` is one more than the
//! total soft weight and every hard clause carries weight `top`. The reader
//! additionally accepts the header-less format where hard clauses start with
//! `h`.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::formula::{Cnf, Wcnf};
use crate::lit::Lit;

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

fn format_err(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError::Format {
        line,
        message: message.into(),
    }
}

pub fn write_cnf<W: Write>(cnf: &Cnf, mut out: W) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len())?;
    for clause in cnf.clauses() {
        write_lits(&mut out, clause)?;
    }
    Ok(())
}

pub fn write_wcnf<W: Write>(wcnf: &Wcnf, mut out: W) -> io::Result<()> {
    let top = wcnf.total_soft_weight() + 1;
    writeln!(
        out,
        "p wcnf {} {} {}",
        wcnf.num_vars(),
        wcnf.hard.clauses().len() + wcnf.soft.len(),
        top
    )?;
    for clause in wcnf.hard.clauses() {
        write!(out, "{top} ")?;
        write_lits(&mut out, clause)?;
    }
    for (clause, weight) in &wcnf.soft {
        write!(out, "{weight} ")?;
        write_lits(&mut out, clause)?;
    }
    Ok(())
}

fn write_lits<W: Write>(out: &mut W, clause: &[Lit]) -> io::Result<()> {
    for l in clause {
        write!(out, "{} ", l.to_dimacs())?;
    }
    writeln!(out, "0")
}

/// A token group tagged with the line it starts on.
type Group = (usize, Vec<String>);

/// Splits the body into `0`-terminated token groups, keeping the problem line
/// apart.
fn clause_tokens<R: BufRead>(
    input: R,
) -> Result<(Option<Group>, Vec<Group>), DimacsError> {
    let mut header = None;
    let mut clauses = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut current_line = 0;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(format_err(lineno, "duplicate problem line"));
            }
            header = Some((
                lineno,
                trimmed.split_whitespace().map(str::to_owned).collect(),
            ));
            continue;
        }
        for tok in trimmed.split_whitespace() {
            if current.is_empty() {
                current_line = lineno;
            }
            current.push(tok.to_owned());
            if tok == "0" {
                clauses.push((current_line, std::mem::take(&mut current)));
            }
        }
    }
    if !current.is_empty() {
        return Err(format_err(current_line, "clause not terminated by 0"));
    }
    Ok((header, clauses))
}

fn parse_lit(line: usize, tok: &str) -> Result<Lit, DimacsError> {
    let v: i64 = tok
        .parse()
        .map_err(|_| format_err(line, format!("invalid literal `{tok}`")))?;
    if v == 0 {
        return Err(format_err(line, "unexpected 0"));
    }
    Ok(Lit::from_dimacs(v))
}

fn parse_count(line: usize, tok: Option<&String>, what: &str) -> Result<u64, DimacsError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| format_err(line, format!("missing or invalid {what} in problem line")))
}

pub fn read_cnf<R: BufRead>(input: R) -> Result<Cnf, DimacsError> {
    let (header, clauses) = clause_tokens(input)?;
    let (hline, htoks) = header.ok_or_else(|| format_err(1, "missing `p cnf` problem line"))?;
    if htoks.get(1).map(String::as_str) != Some("cnf") {
        return Err(format_err(hline, "expected `p cnf`"));
    }
    let nvars = parse_count(hline, htoks.get(2), "variable count")? as usize;
    let mut cnf = Cnf::with_vars(nvars);
    for (line, toks) in clauses {
        let lits = toks[..toks.len() - 1]
            .iter()
            .map(|t| parse_lit(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        cnf.add_clause(lits);
    }
    Ok(cnf)
}

pub fn read_wcnf<R: BufRead>(input: R) -> Result<Wcnf, DimacsError> {
    let (header, clauses) = clause_tokens(input)?;
    let mut top = None;
    let mut nvars = 0;
    if let Some((hline, htoks)) = header {
        if htoks.get(1).map(String::as_str) != Some("wcnf") {
            return Err(format_err(hline, "expected `p wcnf`"));
        }
        nvars = parse_count(hline, htoks.get(2), "variable count")? as usize;
        top = htoks
            .get(4)
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| format_err(hline, "invalid top weight"))
            })
            .transpose()?;
    }
    let mut wcnf = Wcnf::new(Cnf::with_vars(nvars));
    for (line, toks) in clauses {
        if toks.len() < 2 {
            return Err(format_err(line, "clause without weight"));
        }
        let body = &toks[1..toks.len() - 1];
        let lits = body
            .iter()
            .map(|t| parse_lit(line, t))
            .collect::<Result<Vec<_>, _>>()?;
        if toks[0] == "h" {
            wcnf.hard.add_clause(lits);
            continue;
        }
        let weight: u64 = toks[0]
            .parse()
            .map_err(|_| format_err(line, format!("invalid weight `{}`", toks[0])))?;
        if top == Some(weight) {
            wcnf.hard.add_clause(lits);
        } else if weight == 0 {
            return Err(format_err(line, "soft clause with weight 0"));
        } else {
            wcnf.add_soft(lits, weight);
        }
    }
    Ok(wcnf)
}
