//! Semantic validation of a parsed program.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use super::FrontendError;

pub const MAX_ARRAY_LEN: u32 = 1024;

fn err<T>(line: u32, message: impl Into<String>) -> Result<T, FrontendError> {
    Err(FrontendError::Semantic {
        line,
        message: message.into(),
    })
}

struct Sig {
    ret: ReturnType,
    arity: usize,
}

struct Checker<'a> {
    sigs: HashMap<&'a str, Sig>,
    scopes: Vec<HashMap<String, VarType>>,
    ret: ReturnType,
    calls: HashSet<String>,
}

pub fn check_program(p: &Program) -> Result<(), FrontendError> {
    let mut sigs = HashMap::new();
    for f in &p.functions {
        if sigs
            .insert(
                f.name.as_str(),
                Sig {
                    ret: f.ret,
                    arity: f.params.len(),
                },
            )
            .is_some()
        {
            return err(f.line, format!("function `{}` defined twice", f.name));
        }
        if matches!(f.name.as_str(), "scanf" | "printf") {
            return err(f.line, format!("`{}` cannot be redefined", f.name));
        }
    }
    let Some(main) = p.function("main") else {
        return err(1, "program has no `main` function");
    };
    if main.ret != ReturnType::Int || !main.params.is_empty() {
        return err(main.line, "`main` must be declared as `int main()`");
    }

    let mut graph: HashMap<&str, HashSet<String>> = HashMap::new();
    for f in &p.functions {
        let mut c = Checker {
            sigs: HashMap::new(),
            scopes: vec![HashMap::new()],
            ret: f.ret,
            calls: HashSet::new(),
        };
        for (k, v) in &sigs {
            c.sigs.insert(
                k,
                Sig {
                    ret: v.ret,
                    arity: v.arity,
                },
            );
        }
        for prm in &f.params {
            if c.scopes[0].insert(prm.name.clone(), prm.ty.into()).is_some() {
                return err(f.line, format!("duplicate parameter `{}`", prm.name));
            }
        }
        c.block(&f.body, false)?;
        graph.insert(f.name.as_str(), c.calls);
    }
    check_acyclic(p, &graph)
}

fn check_acyclic(p: &Program, graph: &HashMap<&str, HashSet<String>>) -> Result<(), FrontendError> {
    // 0 = unvisited, 1 = on stack, 2 = done
    fn dfs<'a>(
        n: &'a str,
        graph: &'a HashMap<&str, HashSet<String>>,
        state: &mut HashMap<&'a str, u8>,
    ) -> Option<&'a str> {
        state.insert(n, 1);
        let mut callees: Vec<&String> = graph[n].iter().collect();
        callees.sort();
        for m in callees {
            match state.get(m.as_str()).copied().unwrap_or(0) {
                1 => return Some(n),
                0 => {
                    if let Some(x) = dfs(m.as_str(), graph, state) {
                        return Some(x);
                    }
                }
                _ => {}
            }
        }
        state.insert(n, 2);
        None
    }
    let mut state = HashMap::new();
    for f in &p.functions {
        if state.get(f.name.as_str()).copied().unwrap_or(0) == 0 {
            if let Some(name) = dfs(f.name.as_str(), graph, &mut state) {
                let line = p.function(name).map_or(1, |f| f.line);
                return err(line, format!("unsupported construct: recursion (via `{name}`)"));
            }
        }
    }
    Ok(())
}

fn conversions(format: &str) -> Result<usize, String> {
    let b = format.as_bytes();
    let mut n = 0;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'%' {
            match b.get(i + 1) {
                Some(b'%') => i += 1,
                Some(b'd') | Some(b'i') => n += 1,
                other => {
                    return Err(format!(
                        "unsupported conversion `%{}`",
                        other.map_or(String::new(), |c| (*c as char).to_string())
                    ))
                }
            }
            i += 1;
        }
        i += 1;
    }
    Ok(n)
}

impl Checker<'_> {
    fn lookup(&self, name: &str) -> Option<VarType> {
        self.scopes.iter().rev().find_map(|s| s.get(name).copied())
    }

    fn block(&mut self, stmts: &[Stmt], new_scope: bool) -> Result<(), FrontendError> {
        if new_scope {
            self.scopes.push(HashMap::new());
        }
        for s in stmts {
            self.stmt(s)?;
        }
        if new_scope {
            self.scopes.pop();
        }
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt) -> Result<(), FrontendError> {
        match &s.kind {
            StmtKind::Decl { name, ty, init } => {
                if let VarType::Array(_, n) = ty {
                    if *n > MAX_ARRAY_LEN {
                        return err(s.line, format!("array `{name}` longer than {MAX_ARRAY_LEN}"));
                    }
                }
                if let Some(e) = init {
                    self.scalar(e)?;
                }
                let scope = self.scopes.last_mut().expect("scope");
                if scope.insert(name.clone(), *ty).is_some() {
                    return err(s.line, format!("redeclaration of `{name}`"));
                }
            }
            StmtKind::Assign(a) => self.assign(a)?,
            StmtKind::Call(e) => self.call(e, true)?,
            StmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                self.scalar(cond)?;
                self.block(then_branch, true)?;
                if let Some(b) = else_branch {
                    self.block(b, true)?;
                }
            }
            StmtKind::Loop {
                init,
                cond,
                update,
                body,
                ..
            } => {
                for i in init.iter().chain(update) {
                    self.stmt(i)?;
                }
                self.scalar(cond)?;
                self.block(body, true)?;
            }
            StmtKind::Read { format, targets } => {
                let n = conversions(format).or_else(|m| err(s.line, m))?;
                if n != targets.len() {
                    return err(
                        s.line,
                        format!("scanf format has {n} conversions but {} targets", targets.len()),
                    );
                }
                for t in targets {
                    self.lvalue(t)?;
                }
            }
            StmtKind::Write { format, args } => {
                let n = conversions(format).or_else(|m| err(s.line, m))?;
                if n != args.len() {
                    return err(
                        s.line,
                        format!("printf format has {n} conversions but {} arguments", args.len()),
                    );
                }
                for a in args {
                    self.scalar(a)?;
                }
            }
            StmtKind::Return(e) => match (e, self.ret) {
                (Some(_), ReturnType::Void) => return err(s.line, "void function returns a value"),
                (None, ReturnType::Int | ReturnType::Bool) => {
                    return err(s.line, "non-void function returns without a value")
                }
                (Some(e), _) => self.scalar(e)?,
                (None, ReturnType::Void) => {}
            },
            StmtKind::Block(b) => self.block(b, true)?,
        }
        Ok(())
    }

    fn assign(&mut self, a: &Assign) -> Result<(), FrontendError> {
        self.lvalue(&a.target)?;
        if let Some(v) = &a.value {
            self.scalar(v)?;
        }
        Ok(())
    }

    fn lvalue(&mut self, e: &Expr) -> Result<(), FrontendError> {
        match &e.kind {
            ExprKind::Var(_) | ExprKind::Index(..) => self.scalar(e),
            _ => err(e.line, "assignment target must be a variable or array element"),
        }
    }

    fn call(&mut self, e: &Expr, as_stmt: bool) -> Result<(), FrontendError> {
        let ExprKind::Call(name, args) = &e.kind else {
            return err(e.line, "expected a call");
        };
        let Some(sig) = self.sigs.get(name.as_str()) else {
            return err(e.line, format!("call to undefined function `{name}`"));
        };
        if sig.arity != args.len() {
            return err(
                e.line,
                format!("`{name}` expects {} arguments, got {}", sig.arity, args.len()),
            );
        }
        if !as_stmt && sig.ret == ReturnType::Void {
            return err(e.line, format!("void function `{name}` used as a value"));
        }
        self.calls.insert(name.clone());
        for a in args {
            self.scalar(a)?;
        }
        Ok(())
    }

    /// Checks an expression producing a scalar value.
    fn scalar(&mut self, e: &Expr) -> Result<(), FrontendError> {
        match &e.kind {
            ExprKind::Int(_) => Ok(()),
            ExprKind::Var(n) => match self.lookup(n) {
                None => err(e.line, format!("undeclared variable `{n}`")),
                Some(t) if t.is_array() => err(e.line, format!("array `{n}` used as a scalar")),
                Some(_) => Ok(()),
            },
            ExprKind::Index(n, i) => {
                match self.lookup(n) {
                    None => return err(e.line, format!("undeclared variable `{n}`")),
                    Some(t) if !t.is_array() => {
                        return err(e.line, format!("`{n}` is not an array"))
                    }
                    Some(_) => {}
                }
                self.scalar(i)
            }
            ExprKind::Unary(_, a) => self.scalar(a),
            ExprKind::Binary(_, a, b) => {
                self.scalar(a)?;
                self.scalar(b)
            }
            ExprKind::Call(..) => self.call(e, false),
        }
    }
}
