//! C rendering of unrolled and instrumented programs.

use std::fmt::Write as _;

use crate::frontend::{AssignOp, ReturnType, ScalarType, UnOp, VarType};

use super::components::ComponentTable;
use super::ir::{IExpr, IFunction, IStmt, IStmtKind, Scope};
use super::{InstrumentedProgram, UnrolledProgram};

/// Renders an unrolled program without relaxation variables.
pub fn print_unrolled(u: &UnrolledProgram) -> String {
    Printer {
        table: None,
        unwind: 0,
    }
    .program(u)
}

/// Renders an instrumented program, declaring its relaxation variables.
pub fn print_instrumented(p: &InstrumentedProgram) -> String {
    Printer {
        table: Some(&p.table),
        unwind: p.unwind,
    }
    .program(&p.unrolled)
}

struct Printer<'a> {
    table: Option<&'a ComponentTable>,
    unwind: u32,
}

fn c_type(t: ScalarType) -> &'static str {
    match t {
        ScalarType::Int => "int",
        ScalarType::Bool => "bool",
    }
}

fn list(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}

fn indent(level: usize, out: &mut String) {
    out.push_str(&"    ".repeat(level));
}

impl Printer<'_> {
    fn program(&self, u: &UnrolledProgram) -> String {
        let mut out = String::new();
        out.push_str("#include <assert.h>\n#include <stdbool.h>\n#include <stdio.h>\n\n");
        if let Some(table) = self.table {
            let _ = writeln!(out, "#define UNWIND {}", self.unwind);
            out.push_str("int nondet_int(void);\nbool nondet_bool(void);\n\n");
            for c in &table.components {
                if c.loop_offsets.is_empty() {
                    let _ = writeln!(out, "bool {};", c.healthy_var);
                } else {
                    let dims = vec!["UNWIND"; c.loop_offsets.len()].join(" * ");
                    let _ = writeln!(out, "bool {}[{dims}];", c.healthy_var);
                }
            }
            let mut loops: Vec<&String> = table.components.iter().flat_map(|c| &c.loop_offsets).collect();
            loops.sort();
            loops.dedup();
            for l in loops {
                let _ = writeln!(out, "int {l};");
            }
            out.push('\n');
        }
        for s in &u.scopes {
            let i = s.index;
            let _ = writeln!(out, "int _input_f{i}[] = {{{}}};", list(&s.test.inputs));
            let _ = writeln!(out, "int _ioff_f{i} = 0;");
            let cap = s.test.expected_output.len() + 4;
            let _ = writeln!(out, "int _output_{i}[{cap}];");
            let _ = writeln!(out, "int _ooff_{i} = 0;");
        }
        out.push('\n');
        for s in &u.scopes {
            for f in &s.functions {
                self.function(f, &mut out);
                out.push('\n');
            }
        }
        out.push_str("int main() {\n");
        for s in &u.scopes {
            self.scope(s, u.scopes.len(), &mut out);
        }
        out.push_str("scope_end:\n");
        let mut conj = Vec::new();
        for a in &u.assertion {
            conj.push(format!("_ooff_{} == {}", a.scope, a.expected.len()));
            for (k, v) in a.expected.iter().enumerate() {
                conj.push(format!("_output_{}[{k}] == {v}", a.scope));
            }
        }
        if conj.is_empty() {
            conj.push("1".into());
        }
        let _ = writeln!(out, "    assert({});", conj.join(" && "));
        out.push_str("    return 0;\n}\n");
        out
    }

    fn function(&self, f: &IFunction, out: &mut String) {
        let params: Vec<String> = f
            .params
            .iter()
            .map(|(n, t)| format!("{} {n}", c_type(*t)))
            .collect();
        let ret = match f.ret {
            ReturnType::Void => "void",
            ReturnType::Int => "int",
            ReturnType::Bool => "bool",
        };
        let _ = writeln!(out, "{ret} {}({}) {{", f.name, params.join(", "));
        self.stmts(&f.body, 1, usize::MAX, out);
        out.push_str("}\n");
    }

    fn scope(&self, s: &Scope, total: usize, out: &mut String) {
        let _ = writeln!(out, "scope_{}: {{", s.index);
        if let Some(table) = self.table {
            for c in &table.components {
                if let Some(ev) = &c.else_var {
                    let _ = writeln!(out, "    bool {ev};");
                }
            }
        }
        self.stmts(&s.body, 1, total, out);
        out.push_str("}\n");
    }

    fn stmts(&self, stmts: &[IStmt], level: usize, total: usize, out: &mut String) {
        for s in stmts {
            self.stmt(s, level, total, out);
        }
    }

    fn stmt(&self, s: &IStmt, level: usize, total: usize, out: &mut String) {
        indent(level, out);
        match &s.kind {
            IStmtKind::Decl { name, ty } => {
                let _ = match ty {
                    VarType::Array(t, n) => writeln!(out, "{} {name}[{n}];", c_type(*t)),
                    t => writeln!(out, "{} {name};", c_type(t.scalar())),
                };
            }
            IStmtKind::Expr(e) => {
                let _ = writeln!(out, "{};", self.expr(e));
            }
            IStmtKind::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let _ = writeln!(out, "if ({}) {{", self.expr(cond));
                self.stmts(then_branch, level + 1, total, out);
                indent(level, out);
                if else_branch.is_empty() {
                    out.push_str("}\n");
                } else {
                    out.push_str("} else {\n");
                    self.stmts(else_branch, level + 1, total, out);
                    indent(level, out);
                    out.push_str("}\n");
                }
            }
            IStmtKind::Loop {
                number,
                init,
                cond,
                update,
                body,
            } => {
                let mut init: Vec<String> = init.iter().map(|e| self.expr(e)).collect();
                let mut update: Vec<String> = update.iter().map(|e| self.expr(e)).collect();
                if self.table.is_some() {
                    init.push(format!("_los{number} = 0"));
                    update.push(format!("_los{number}++"));
                }
                let _ = writeln!(
                    out,
                    "for ({}; {}; {}) {{",
                    init.join(", "),
                    self.expr(cond),
                    update.join(", ")
                );
                self.stmts(body, level + 1, total, out);
                indent(level, out);
                out.push_str("}\n");
            }
            IStmtKind::Write { scope, value } => {
                let _ = writeln!(out, "_output_{scope}[_ooff_{scope}++] = {};", self.expr(value));
            }
            IStmtKind::Return(e) => {
                let _ = match e {
                    Some(e) => writeln!(out, "return {};", self.expr(e)),
                    None => writeln!(out, "return;"),
                };
            }
            IStmtKind::Exit { scope } => {
                if scope + 1 < total {
                    let _ = writeln!(out, "goto scope_{};", scope + 1);
                } else {
                    out.push_str("goto scope_end;\n");
                }
            }
            IStmtKind::Block(b) => {
                out.push_str("{\n");
                self.stmts(b, level + 1, total, out);
                indent(level, out);
                out.push_str("}\n");
            }
        }
    }

    fn healthy(&self, c: usize) -> String {
        let table = self.table.expect("relaxation variables need a component table");
        let comp = table.get(c);
        if comp.loop_offsets.is_empty() {
            return comp.healthy_var.clone();
        }
        let index = comp
            .loop_offsets
            .iter()
            .fold(String::new(), |acc, l| {
                if acc.is_empty() {
                    l.clone()
                } else {
                    format!("({acc}) * UNWIND + {l}")
                }
            });
        format!("{}[{index}]", comp.healthy_var)
    }

    fn operand(&self, e: &IExpr) -> String {
        match e {
            IExpr::Binary(..) | IExpr::Ternary(..) | IExpr::Assign { .. } | IExpr::Read { .. } => {
                format!("({})", self.expr(e))
            }
            _ => self.expr(e),
        }
    }

    fn expr(&self, e: &IExpr) -> String {
        match e {
            IExpr::Const(n) => n.to_string(),
            IExpr::Var(v) => v.clone(),
            IExpr::Index(a, i) => format!("{a}[{}]", self.expr(i)),
            IExpr::Unary(op, a) => {
                let sym = match op {
                    UnOp::Neg => "-",
                    UnOp::Not => "!",
                };
                match **a {
                    IExpr::Unary(..) => format!("{sym}({})", self.expr(a)),
                    _ => format!("{sym}{}", self.operand(a)),
                }
            }
            IExpr::Binary(op, a, b) => {
                format!("{} {} {}", self.operand(a), op.symbol(), self.operand(b))
            }
            IExpr::Call(f, args) => {
                let args: Vec<String> = args.iter().map(|a| self.expr(a)).collect();
                format!("{f}({})", args.join(", "))
            }
            IExpr::Ternary(c, a, b) => {
                format!("{} ? {} : {}", self.operand(c), self.operand(a), self.operand(b))
            }
            IExpr::Assign { target, op, value } => match (op, value) {
                (AssignOp::Inc | AssignOp::Dec, _) => format!("{}{}", self.expr(target), op.symbol()),
                (_, Some(v)) => format!("{} {} {}", self.expr(target), op.symbol(), self.expr(v)),
                (_, None) => unreachable!("assignment without value"),
            },
            IExpr::Read { target, scope } => {
                format!("{} = _input_f{scope}[_ioff_f{scope}++]", self.expr(target))
            }
            IExpr::Healthy(c) => self.healthy(*c),
            IExpr::Else(c) => self
                .table
                .and_then(|t| t.get(*c).else_var.clone())
                .expect("else variable of an if-condition"),
            IExpr::Nondet { ty, .. } => format!("nondet_{}()", c_type(*ty)),
        }
    }
}
