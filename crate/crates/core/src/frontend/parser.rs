use super::ast::*;
use super::lexer::{Tok, Token};
use super::FrontendError;

const UNSUPPORTED_TYPES: &[&str] = &[
    "float", "double", "char", "long", "short", "unsigned", "signed", "struct", "union", "enum",
    "typedef",
];
const UNSUPPORTED_STMTS: &[&str] = &["break", "continue", "do", "switch", "case", "default", "goto"];

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn type_keyword(name: &str) -> Option<ScalarType> {
    match name {
        "int" => Some(ScalarType::Int),
        "bool" | "_Bool" => Some(ScalarType::Bool),
        _ => None,
    }
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FrontendError> {
        let t = self.peek();
        Err(FrontendError::Parse {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn unsupported<T>(&self, construct: &str) -> Result<T, FrontendError> {
        Err(FrontendError::Semantic {
            line: self.peek().line,
            message: format!("unsupported construct: {construct}"),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(n) if n == name)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), FrontendError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.error(format!("expected `{p}`, found {}", describe(&self.peek().tok)))
        }
    }

    fn expect_ident(&mut self) -> Result<String, FrontendError> {
        match &self.peek().tok {
            Tok::Ident(n) => {
                let n = n.clone();
                self.check_not_reserved(&n)?;
                self.bump();
                Ok(n)
            }
            t => self.error(format!("expected identifier, found {}", describe(t))),
        }
    }

    fn check_not_reserved(&self, name: &str) -> Result<(), FrontendError> {
        if UNSUPPORTED_TYPES.contains(&name) {
            return self.unsupported(name);
        }
        if UNSUPPORTED_STMTS.contains(&name) {
            return self.unsupported(name);
        }
        Ok(())
    }

    fn check_type_modifiers(&self) -> Result<(), FrontendError> {
        if let Tok::Ident(n) = &self.peek().tok {
            if UNSUPPORTED_TYPES.contains(&n.as_str()) {
                return self.unsupported(n);
            }
        }
        Ok(())
    }

    pub fn parse_program(&mut self) -> Result<Program, FrontendError> {
        let mut functions = Vec::new();
        while self.peek().tok != Tok::Eof {
            functions.push(self.parse_function()?);
        }
        Ok(Program { functions })
    }

    fn skip_qualifiers(&mut self) -> Result<(), FrontendError> {
        while self.is_ident("const") || self.is_ident("static") {
            self.bump();
        }
        self.check_type_modifiers()
    }

    fn parse_function(&mut self) -> Result<Function, FrontendError> {
        self.skip_qualifiers()?;
        let line = self.peek().line;
        let ret = match &self.peek().tok {
            Tok::Ident(n) if n == "void" => ReturnType::Void,
            Tok::Ident(n) => match type_keyword(n) {
                Some(ScalarType::Int) => ReturnType::Int,
                Some(ScalarType::Bool) => ReturnType::Bool,
                None => return self.error(format!("expected a type, found `{n}`")),
            },
            t => return self.error(format!("expected a function definition, found {}", describe(t))),
        };
        self.bump();
        if self.is_punct("*") {
            return self.unsupported("pointer");
        }
        let name = self.expect_ident()?;
        if !self.is_punct("(") {
            return self.unsupported("global variable");
        }
        self.bump();
        let mut params = Vec::new();
        if self.is_ident("void") && matches!(self.peek_at(1), Tok::Punct(")")) {
            self.bump();
        }
        if !self.is_punct(")") {
            loop {
                self.skip_qualifiers()?;
                let ty = match &self.peek().tok {
                    Tok::Ident(n) => match type_keyword(n) {
                        Some(t) => t,
                        None => return self.error(format!("expected parameter type, found `{n}`")),
                    },
                    t => return self.error(format!("expected parameter type, found {}", describe(t))),
                };
                self.bump();
                if self.is_punct("*") {
                    return self.unsupported("pointer");
                }
                let pname = self.expect_ident()?;
                if self.is_punct("[") {
                    return self.unsupported("array parameter");
                }
                params.push(Param { name: pname, ty });
                if !self.eat_punct(",") {
                    break;
                }
            }
        }
        self.expect_punct(")")?;
        if self.is_punct(";") {
            return self.unsupported("function prototype");
        }
        let body = self.parse_block()?;
        Ok(Function {
            id: 0,
            line,
            name,
            ret,
            params,
            body,
        })
    }

    fn parse_block(&mut self) -> Result<Vec<Stmt>, FrontendError> {
        self.expect_punct("{")?;
        let mut out = Vec::new();
        while !self.is_punct("}") {
            if self.peek().tok == Tok::Eof {
                return self.error("unexpected end of input, expected `}`");
            }
            self.parse_stmt_into(&mut out)?;
        }
        self.bump();
        Ok(out)
    }

    /// Body of `if`/`else`/loops: a braced block or one statement.
    fn parse_body(&mut self) -> Result<Vec<Stmt>, FrontendError> {
        if self.is_punct("{") {
            self.parse_block()
        } else {
            let mut out = Vec::new();
            self.parse_stmt_into(&mut out)?;
            Ok(out)
        }
    }

    fn stmt(line: u32, kind: StmtKind) -> Stmt {
        Stmt { id: 0, line, kind }
    }

    fn parse_stmt_into(&mut self, out: &mut Vec<Stmt>) -> Result<(), FrontendError> {
        let line = self.peek().line;
        if self.eat_punct(";") {
            return Ok(());
        }
        if self.is_punct("{") {
            let b = self.parse_block()?;
            out.push(Self::stmt(line, StmtKind::Block(b)));
            return Ok(());
        }
        let Tok::Ident(word) = self.peek().tok.clone() else {
            let s = self.parse_simple()?;
            self.expect_punct(";")?;
            out.push(s);
            return Ok(());
        };
        if word == "const" || word == "static" || type_keyword(&word).is_some() {
            self.skip_qualifiers()?;
            let decls = self.parse_decl()?;
            self.expect_punct(";")?;
            out.extend(decls);
            return Ok(());
        }
        if word == "void" {
            return self.unsupported("nested function or void variable");
        }
        self.check_not_reserved(&word)?;
        match word.as_str() {
            "if" => {
                self.bump();
                self.expect_punct("(")?;
                let cond = self.parse_expr()?;
                self.expect_punct(")")?;
                let then_branch = self.parse_body()?;
                let else_branch = if self.is_ident("else") {
                    self.bump();
                    Some(self.parse_body()?)
                } else {
                    None
                };
                out.push(Self::stmt(
                    line,
                    StmtKind::If {
                        cond,
                        then_branch,
                        else_branch,
                    },
                ));
            }
            "while" => {
                self.bump();
                self.expect_punct("(")?;
                let cond = self.parse_expr()?;
                self.expect_punct(")")?;
                let body = self.parse_body()?;
                out.push(Self::stmt(
                    line,
                    StmtKind::Loop {
                        kind: LoopKind::While,
                        init: vec![],
                        cond,
                        update: vec![],
                        body,
                    },
                ));
            }
            "for" => {
                self.bump();
                self.expect_punct("(")?;
                // `for (int i = 0; ...)` becomes `{ int i; for (i = 0; ...) }`.
                let mut decls = Vec::new();
                let mut init = Vec::new();
                if let Tok::Ident(w) = &self.peek().tok {
                    if type_keyword(w).is_some() {
                        for mut d in self.parse_decl()? {
                            if let StmtKind::Decl { name, init: Some(e), ty } = &mut d.kind {
                                if ty.is_array() {
                                    return self.unsupported("array declaration in for-init");
                                }
                                let target = Expr {
                                    id: 0,
                                    line: d.line,
                                    kind: ExprKind::Var(name.clone()),
                                };
                                init.push(Self::stmt(
                                    d.line,
                                    StmtKind::Assign(Assign {
                                        target,
                                        op: AssignOp::Set,
                                        value: Some(e.clone()),
                                    }),
                                ));
                                if let StmtKind::Decl { init, .. } = &mut d.kind {
                                    *init = None;
                                }
                            }
                            decls.push(d);
                        }
                    }
                }
                if decls.is_empty() {
                    init = self.parse_simple_list(";")?;
                }
                self.expect_punct(";")?;
                if self.is_punct(";") {
                    return self.unsupported("for loop without condition");
                }
                let cond = self.parse_expr()?;
                self.expect_punct(";")?;
                let update = self.parse_simple_list(")")?;
                self.expect_punct(")")?;
                let body = self.parse_body()?;
                let lp = Self::stmt(
                    line,
                    StmtKind::Loop {
                        kind: LoopKind::For,
                        init,
                        cond,
                        update,
                        body,
                    },
                );
                if decls.is_empty() {
                    out.push(lp);
                } else {
                    decls.push(lp);
                    out.push(Self::stmt(line, StmtKind::Block(decls)));
                }
            }
            "return" => {
                self.bump();
                let e = if self.is_punct(";") {
                    None
                } else {
                    Some(self.parse_expr()?)
                };
                self.expect_punct(";")?;
                out.push(Self::stmt(line, StmtKind::Return(e)));
            }
            "scanf" => {
                self.bump();
                self.expect_punct("(")?;
                let format = self.parse_format()?;
                let mut targets = Vec::new();
                while self.eat_punct(",") {
                    if !self.eat_punct("&") {
                        return self.error("scanf arguments must have the form `&x` or `&a[i]`");
                    }
                    targets.push(self.parse_lvalue()?);
                }
                self.expect_punct(")")?;
                self.expect_punct(";")?;
                out.push(Self::stmt(line, StmtKind::Read { format, targets }));
            }
            "printf" => {
                self.bump();
                self.expect_punct("(")?;
                let format = self.parse_format()?;
                let mut args = Vec::new();
                while self.eat_punct(",") {
                    args.push(self.parse_expr()?);
                }
                self.expect_punct(")")?;
                self.expect_punct(";")?;
                out.push(Self::stmt(line, StmtKind::Write { format, args }));
            }
            "else" => return self.error("`else` without matching `if`"),
            _ => {
                let s = self.parse_simple()?;
                self.expect_punct(";")?;
                out.push(s);
            }
        }
        Ok(())
    }

    fn parse_format(&mut self) -> Result<String, FrontendError> {
        match self.peek().tok.clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected format string, found {}", describe(&t))),
        }
    }

    /// `int a, b = e, c[4]` after qualifiers.
    fn parse_decl(&mut self) -> Result<Vec<Stmt>, FrontendError> {
        let Tok::Ident(tname) = self.bump().tok else {
            unreachable!("caller checked for a type keyword")
        };
        let scalar = type_keyword(&tname).expect("type keyword");
        let mut out = Vec::new();
        loop {
            let line = self.peek().line;
            if self.is_punct("*") {
                return self.unsupported("pointer");
            }
            let name = self.expect_ident()?;
            let mut ty = VarType::from(scalar);
            if self.eat_punct("[") {
                let len = match self.peek().tok {
                    Tok::Int(n) if n > 0 && n <= u32::MAX as i64 => n as u32,
                    _ => return self.error("array size must be a positive integer literal"),
                };
                self.bump();
                self.expect_punct("]")?;
                if self.is_punct("[") {
                    return self.unsupported("multi-dimensional array");
                }
                ty = VarType::Array(scalar, len);
            }
            let init = if self.eat_punct("=") {
                if self.is_punct("{") {
                    return self.unsupported("array initializer");
                }
                if ty.is_array() {
                    return self.unsupported("array initializer");
                }
                Some(self.parse_expr()?)
            } else {
                None
            };
            out.push(Self::stmt(line, StmtKind::Decl { name, ty, init }));
            if !self.eat_punct(",") {
                break;
            }
        }
        Ok(out)
    }

    fn parse_simple_list(&mut self, end: &str) -> Result<Vec<Stmt>, FrontendError> {
        let mut items = Vec::new();
        if self.is_punct(end) {
            return Ok(items);
        }
        loop {
            items.push(self.parse_simple()?);
            if !self.eat_punct(",") {
                return Ok(items);
            }
        }
    }

    /// Assignment, increment/decrement or call.
    fn parse_simple(&mut self) -> Result<Stmt, FrontendError> {
        let line = self.peek().line;
        for (p, op) in [("++", AssignOp::Inc), ("--", AssignOp::Dec)] {
            if self.eat_punct(p) {
                let target = self.parse_lvalue()?;
                return Ok(Self::stmt(
                    line,
                    StmtKind::Assign(Assign {
                        target,
                        op,
                        value: None,
                    }),
                ));
            }
        }
        if self.is_punct("*") {
            return self.unsupported("pointer");
        }
        if let (Tok::Ident(_), Tok::Punct("(")) = (&self.peek().tok, self.peek_at(1)) {
            let e = self.parse_expr()?;
            if !matches!(e.kind, ExprKind::Call(..)) {
                return self.error("expression statement must be a call");
            }
            return Ok(Self::stmt(line, StmtKind::Call(e)));
        }
        let target = self.parse_lvalue()?;
        let op = match &self.peek().tok {
            Tok::Punct("=") => AssignOp::Set,
            Tok::Punct("+=") => AssignOp::Add,
            Tok::Punct("-=") => AssignOp::Sub,
            Tok::Punct("*=") => AssignOp::Mul,
            Tok::Punct("/=") => AssignOp::Div,
            Tok::Punct("%=") => AssignOp::Mod,
            Tok::Punct("++") => AssignOp::Inc,
            Tok::Punct("--") => AssignOp::Dec,
            Tok::Punct("&=" | "|=" | "^=" | "<<=" | ">>=") => return self.unsupported("bitwise operator"),
            t => return self.error(format!("expected assignment, found {}", describe(t))),
        };
        self.bump();
        let value = match op {
            AssignOp::Inc | AssignOp::Dec => None,
            _ => Some(self.parse_expr()?),
        };
        if self.is_punct("=") {
            return self.unsupported("chained assignment");
        }
        Ok(Self::stmt(line, StmtKind::Assign(Assign { target, op, value })))
    }

    fn parse_lvalue(&mut self) -> Result<Expr, FrontendError> {
        let line = self.peek().line;
        if self.is_punct("*") {
            return self.unsupported("pointer");
        }
        let name = self.expect_ident()?;
        if self.eat_punct("[") {
            let idx = self.parse_expr()?;
            self.expect_punct("]")?;
            return Ok(Expr {
                id: 0,
                line,
                kind: ExprKind::Index(name, Box::new(idx)),
            });
        }
        Ok(Expr {
            id: 0,
            line,
            kind: ExprKind::Var(name),
        })
    }

    pub fn parse_expr(&mut self) -> Result<Expr, FrontendError> {
        let e = self.parse_binary(1)?;
        match &self.peek().tok {
            Tok::Punct("?") => self.unsupported("conditional operator"),
            Tok::Punct("=" | "+=" | "-=" | "*=" | "/=" | "%=") => {
                self.unsupported("assignment inside expression")
            }
            Tok::Punct("++" | "--") => self.unsupported("increment inside expression"),
            _ => Ok(e),
        }
    }

    fn binop(&self) -> Result<Option<BinOp>, FrontendError> {
        Ok(Some(match &self.peek().tok {
            Tok::Punct("+") => BinOp::Add,
            Tok::Punct("-") => BinOp::Sub,
            Tok::Punct("*") => BinOp::Mul,
            Tok::Punct("/") => BinOp::Div,
            Tok::Punct("%") => BinOp::Mod,
            Tok::Punct("<") => BinOp::Lt,
            Tok::Punct("<=") => BinOp::Le,
            Tok::Punct(">") => BinOp::Gt,
            Tok::Punct(">=") => BinOp::Ge,
            Tok::Punct("==") => BinOp::Eq,
            Tok::Punct("!=") => BinOp::Ne,
            Tok::Punct("&&") => BinOp::And,
            Tok::Punct("||") => BinOp::Or,
            Tok::Punct("&" | "|" | "^" | "<<" | ">>") => return self.unsupported("bitwise operator"),
            _ => return Ok(None),
        }))
    }

    fn parse_binary(&mut self, min_prec: u8) -> Result<Expr, FrontendError> {
        let mut lhs = self.parse_unary()?;
        while let Some(op) = self.binop()? {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let line = self.bump().line;
            let rhs = self.parse_binary(prec + 1)?;
            lhs = Expr {
                id: 0,
                line: lhs.line.min(line),
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Expr, FrontendError> {
        let line = self.peek().line;
        let op = match &self.peek().tok {
            Tok::Punct("-") => Some(UnOp::Neg),
            Tok::Punct("!") => Some(UnOp::Not),
            Tok::Punct("+") => {
                self.bump();
                return self.parse_unary();
            }
            Tok::Punct("&") => return self.unsupported("address-of operator"),
            Tok::Punct("*") => return self.unsupported("pointer"),
            Tok::Punct("~") => return self.unsupported("bitwise operator"),
            Tok::Punct("++" | "--") => return self.unsupported("increment inside expression"),
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let inner = self.parse_unary()?;
            return Ok(Expr {
                id: 0,
                line,
                kind: ExprKind::Unary(op, Box::new(inner)),
            });
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Result<Expr, FrontendError> {
        let t = self.peek().clone();
        let line = t.line;
        let kind = match t.tok {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Int(n)
            }
            Tok::Punct("(") => {
                self.bump();
                if let Tok::Ident(n) = &self.peek().tok {
                    if type_keyword(n).is_some() || UNSUPPORTED_TYPES.contains(&n.as_str()) {
                        return self.unsupported("cast");
                    }
                }
                let e = self.parse_expr()?;
                self.expect_punct(")")?;
                return Ok(e);
            }
            Tok::Ident(ref n) if n == "true" || n == "false" => {
                self.bump();
                ExprKind::Int((n == "true") as i64)
            }
            Tok::Ident(ref n) if n == "sizeof" => return self.unsupported("sizeof"),
            Tok::Ident(_) => {
                let name = self.expect_ident()?;
                if self.eat_punct("(") {
                    let mut args = Vec::new();
                    if !self.is_punct(")") {
                        loop {
                            args.push(self.parse_expr()?);
                            if !self.eat_punct(",") {
                                break;
                            }
                        }
                    }
                    self.expect_punct(")")?;
                    ExprKind::Call(name, args)
                } else if self.eat_punct("[") {
                    let idx = self.parse_expr()?;
                    self.expect_punct("]")?;
                    ExprKind::Index(name, Box::new(idx))
                } else {
                    ExprKind::Var(name)
                }
            }
            Tok::Str(_) => return self.unsupported("string literal outside printf/scanf"),
            ref other => return self.error(format!("expected expression, found {}", describe(other))),
        };
        if self.is_punct(".") || self.is_punct("->") {
            return self.unsupported("struct");
        }
        Ok(Expr { id: 0, line, kind })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("`{n}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Str(_) => "string literal".into(),
        Tok::Punct(p) => format!("`{p}`"),
        Tok::Eof => "end of input".into(),
    }
}
