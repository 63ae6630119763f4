//! MiniC source printer.

use std::fmt::Write;

use super::ast::*;

pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for (i, f) in p.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let params: Vec<String> = f
            .params
            .iter()
            .map(|p| format!("{} {}", p.ty, p.name))
            .collect();
        let _ = writeln!(out, "{} {}({}) {{", f.ret, f.name, params.join(", "));
        for s in &f.body {
            print_stmt(s, 1, &mut out);
        }
        out.push_str("}\n");
    }
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

pub fn print_stmt(s: &Stmt, level: usize, out: &mut String) {
    indent(level, out);
    match &s.kind {
        StmtKind::Decl { name, ty, init } => {
            match ty {
                VarType::Array(t, n) => {
                    let _ = write!(out, "{t} {name}[{n}]");
                }
                t => {
                    let _ = write!(out, "{} {name}", t.scalar());
                }
            }
            if let Some(e) = init {
                let _ = write!(out, " = {}", print_expr(e));
            }
            out.push_str(";\n");
        }
        StmtKind::Assign(_) | StmtKind::Call(_) => {
            out.push_str(&print_simple(s));
            out.push_str(";\n");
        }
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let _ = writeln!(out, "if ({}) {{", print_expr(cond));
            print_body(then_branch, level, out);
            if let Some(b) = else_branch {
                indent(level, out);
                out.push_str("} else {\n");
                print_body(b, level, out);
            }
            indent(level, out);
            out.push_str("}\n");
        }
        StmtKind::Loop {
            kind,
            init,
            cond,
            update,
            body,
        } => {
            match kind {
                LoopKind::While => {
                    let _ = writeln!(out, "while ({}) {{", print_expr(cond));
                }
                LoopKind::For => {
                    let list = |items: &[Stmt]| {
                        items.iter().map(print_simple).collect::<Vec<_>>().join(", ")
                    };
                    let _ = writeln!(
                        out,
                        "for ({}; {}; {}) {{",
                        list(init),
                        print_expr(cond),
                        list(update)
                    );
                }
            }
            print_body(body, level, out);
            indent(level, out);
            out.push_str("}\n");
        }
        StmtKind::Read { format, targets } => {
            let _ = write!(out, "scanf(\"{format}\"");
            for t in targets {
                let _ = write!(out, ", &{}", print_expr(t));
            }
            out.push_str(");\n");
        }
        StmtKind::Write { format, args } => {
            let _ = write!(out, "printf(\"{format}\"");
            for a in args {
                let _ = write!(out, ", {}", print_expr(a));
            }
            out.push_str(");\n");
        }
        StmtKind::Return(e) => match e {
            Some(e) => {
                let _ = writeln!(out, "return {};", print_expr(e));
            }
            None => out.push_str("return;\n"),
        },
        StmtKind::Block(b) => {
            out.push_str("{\n");
            print_body(b, level, out);
            indent(level, out);
            out.push_str("}\n");
        }
    }
}

fn print_body(stmts: &[Stmt], level: usize, out: &mut String) {
    for s in stmts {
        print_stmt(s, level + 1, out);
    }
}

/// An assignment or call without the trailing semicolon.
pub fn print_simple(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::Assign(a) => match (&a.op, &a.value) {
            (AssignOp::Inc | AssignOp::Dec, _) => {
                format!("{}{}", print_expr(&a.target), a.op.symbol())
            }
            (op, Some(v)) => format!("{} {} {}", print_expr(&a.target), op.symbol(), print_expr(v)),
            (_, None) => print_expr(&a.target),
        },
        StmtKind::Call(e) => print_expr(e),
        _ => String::from("/* not a simple statement */"),
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_into(e, &mut out);
    out
}

fn prec_of(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, ..) => op.precedence(),
        ExprKind::Unary(..) => 7,
        ExprKind::Int(n) if *n < 0 => 7,
        _ => 8,
    }
}

fn expr_into(e: &Expr, out: &mut String) {
    match &e.kind {
        ExprKind::Int(n) => {
            let _ = write!(out, "{n}");
        }
        ExprKind::Var(v) => out.push_str(v),
        ExprKind::Index(a, i) => {
            let _ = write!(out, "{a}[");
            expr_into(i, out);
            out.push(']');
        }
        ExprKind::Unary(op, a) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            // Parenthesize nested unaries so `- -x` never lexes as `--x`.
            wrap(a, prec_of(a) <= 7, out);
        }
        ExprKind::Binary(op, a, b) => {
            let p = op.precedence();
            wrap(a, prec_of(a) < p, out);
            let _ = write!(out, " {} ", op.symbol());
            wrap(b, prec_of(b) <= p, out);
        }
        ExprKind::Call(f, args) => {
            let _ = write!(out, "{f}(");
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                expr_into(a, out);
            }
            out.push(')');
        }
    }
}

fn wrap(e: &Expr, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        expr_into(e, out);
        out.push(')');
    } else {
        expr_into(e, out);
    }
}
