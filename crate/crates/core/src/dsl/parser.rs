//! LL(1) recursive-descent parser.
//!
//! ```text
//! file    := "algebra" IDENT kind ";" stmt* EOF
//! kind    := "lie" | "lsc" | "raw"
//! stmt    := "params" param ("," param)* ";"
//!          | "nonzero" "(" IDENT ("," IDENT)* ")" ";"
//!          | "generators" IDENT ("," IDENT)* ";"
//!          | "bracket" "[" IDENT "_" IDENT "]" "=" expr ";"
//!          | "default" "zero" ";"
//! param   := IDENT "nonzero"?
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" INT)?
//! atom    := INT | RAT | IDENT | "(" expr ")"
//! ```

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::ast::{AlgebraDef, BracketClause, Expr, ExprKind, GeneratorDecl, NotAllZeroDecl, ParamDecl};
use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::arith::{Rational, Var};
use crate::conformal::AlgebraKind;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 32;
/// Deepest parenthesis / unary-minus nesting accepted.
pub const MAX_DEPTH: usize = 256;
/// Deepest expression tree accepted (long operator chains count too).
pub const MAX_TREE_DEPTH: usize = 2048;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn join(a: SourceSpan, b: SourceSpan) -> SourceSpan {
    if a.line == b.line && b.column >= a.column {
        SourceSpan {
            length: b.column + b.length - a.column,
            ..a
        }
    } else {
        a
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let found = if t.kind == TokenKind::Eof {
            "end of input".to_owned()
        } else {
            format!("`{}`", t.text)
        };
        ParseError {
            kind: ParseErrorKind::Syntax,
            span: t.span,
            message: format!("unexpected {found}"),
            expected: expected.iter().map(|s| (*s).to_owned()).collect(),
        }
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind, label: &str) -> Result<Token, ParseError> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn keyword(&mut self, k: &'static str) -> Result<Token, ParseError> {
        self.expect(TokenKind::Keyword(k), &format!("`{k}`"))
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().kind {
            TokenKind::Ident(s) => {
                let s = s.clone();
                let t = self.bump();
                Ok((s, t.span))
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn file(&mut self) -> Result<AlgebraDef, ParseError> {
        let header = self.keyword("algebra")?;
        let (name, _) = self.ident("algebra name")?;
        let kind = match self.peek().kind {
            TokenKind::Keyword("lie") => AlgebraKind::Lie,
            TokenKind::Keyword("lsc") => AlgebraKind::LeftSymmetric,
            TokenKind::Keyword("raw") => AlgebraKind::Raw,
            _ => return Err(self.unexpected(&["`lie`", "`lsc`", "`raw`"])),
        };
        self.bump();
        self.expect(TokenKind::Semi, "`;`")?;
        let mut def = AlgebraDef {
            name,
            kind,
            params: Vec::new(),
            not_all_zero: Vec::new(),
            generators: Vec::new(),
            brackets: Vec::new(),
            default_zero: false,
        };
        let mut saw_generators = false;
        loop {
            match self.peek().kind {
                TokenKind::Eof => break,
                TokenKind::Keyword("params") => {
                    self.bump();
                    loop {
                        let (name, span) = self.ident("parameter name")?;
                        let nonzero = self.eat(&TokenKind::Keyword("nonzero"));
                        def.params.push(ParamDecl { name, nonzero, span });
                        if !self.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::Semi, "`;`")?;
                }
                TokenKind::Keyword("nonzero") => {
                    let start = self.bump().span;
                    self.expect(TokenKind::LParen, "`(`")?;
                    let mut params = Vec::new();
                    loop {
                        params.push(self.ident("parameter name")?.0);
                        if !self.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                    let end = self.expect(TokenKind::RParen, "`)`")?.span;
                    self.expect(TokenKind::Semi, "`;`")?;
                    def.not_all_zero.push(NotAllZeroDecl {
                        params,
                        span: join(start, end),
                    });
                }
                TokenKind::Keyword("generators") => {
                    let kw = self.bump();
                    if saw_generators {
                        return Err(ParseError::semantic(kw.span, "`generators` declared twice"));
                    }
                    saw_generators = true;
                    loop {
                        let (name, span) = self.ident("generator name")?;
                        def.generators.push(GeneratorDecl { name, span });
                        if !self.eat(&TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::Semi, "`;`")?;
                }
                TokenKind::Keyword("bracket") => {
                    self.bump();
                    let open = self.expect(TokenKind::LBracket, "`[`")?.span;
                    let (left, left_span) = self.ident("generator name")?;
                    self.expect(TokenKind::Underscore, "`_`")?;
                    let (right, right_span) = self.ident("generator name")?;
                    let close = self.expect(TokenKind::RBracket, "`]`")?.span;
                    self.expect(TokenKind::Eq, "`=`")?;
                    let value = self.expr()?;
                    self.expect(TokenKind::Semi, "`;`")?;
                    def.brackets.push(BracketClause {
                        left,
                        right,
                        value,
                        span: join(open, close),
                        left_span,
                        right_span,
                    });
                }
                TokenKind::Keyword("default") => {
                    self.bump();
                    self.keyword("zero")?;
                    self.expect(TokenKind::Semi, "`;`")?;
                    def.default_zero = true;
                }
                _ => {
                    return Err(self.unexpected(&[
                        "`params`",
                        "`nonzero`",
                        "`generators`",
                        "`bracket`",
                        "`default`",
                        "end of input",
                    ]))
                }
            }
        }
        if !saw_generators {
            return Err(ParseError::semantic(header.span, "missing `generators` declaration"));
        }
        Ok(def)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                span: self.peek().span,
                message: format!("expression nested more than {MAX_DEPTH} levels deep"),
                expected: Vec::new(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        Ok(self.sum()?.0)
    }

    fn too_deep(&self, depth: usize) -> Result<(), ParseError> {
        if depth > MAX_TREE_DEPTH {
            return Err(ParseError::semantic(
                self.peek().span,
                format!("expression tree deeper than {MAX_TREE_DEPTH} levels"),
            ));
        }
        Ok(())
    }

    /// Each parse function returns the tree together with its depth, so
    /// that long operator chains are bounded without re-walking the tree.
    fn sum(&mut self) -> Result<(Expr, usize), ParseError> {
        self.enter()?;
        let (mut lhs, mut depth) = self.term()?;
        loop {
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek().kind {
                TokenKind::Plus => ExprKind::Add,
                TokenKind::Minus => ExprKind::Sub,
                _ => break,
            };
            self.bump();
            let (rhs, rd) = self.term()?;
            depth = depth.max(rd) + 1;
            self.too_deep(depth)?;
            let span = join(lhs.span, rhs.span);
            lhs = Expr {
                kind: make(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        self.depth -= 1;
        Ok((lhs, depth))
    }

    fn term(&mut self) -> Result<(Expr, usize), ParseError> {
        let (mut lhs, mut depth) = self.unary()?;
        loop {
            let make: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek().kind {
                TokenKind::Star => ExprKind::Mul,
                TokenKind::Slash => ExprKind::Div,
                _ => break,
            };
            self.bump();
            let (rhs, rd) = self.unary()?;
            depth = depth.max(rd) + 1;
            self.too_deep(depth)?;
            let span = join(lhs.span, rhs.span);
            lhs = Expr {
                kind: make(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok((lhs, depth))
    }

    fn unary(&mut self) -> Result<(Expr, usize), ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.enter()?;
            let minus = self.bump().span;
            let (inner, depth) = self.unary()?;
            self.depth -= 1;
            let span = join(minus, inner.span);
            return Ok((
                Expr {
                    kind: ExprKind::Neg(Box::new(inner)),
                    span,
                },
                depth + 1,
            ));
        }
        self.power()
    }

    fn power(&mut self) -> Result<(Expr, usize), ParseError> {
        let (base, depth) = self.atom()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok((base, depth));
        }
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Int(n) => {
                self.bump();
                let e = n
                    .to_u32()
                    .filter(|e| *e <= MAX_EXPONENT)
                    .ok_or_else(|| {
                        ParseError::semantic(t.span, format!("exponent `{}` exceeds the limit {MAX_EXPONENT}", t.text))
                    })?;
                Ok((
                    Expr {
                        span: join(base.span, t.span),
                        kind: ExprKind::Pow(Box::new(base), e),
                    },
                    depth + 1,
                ))
            }
            TokenKind::Minus => Err(ParseError::semantic(t.span, "negative exponents are not allowed")),
            _ => Err(self.unexpected(&["exponent (non-negative integer)"])),
        }
    }

    fn atom(&mut self) -> Result<(Expr, usize), ParseError> {
        let t = self.peek().clone();
        let kind = match &t.kind {
            TokenKind::Int(n) => ExprKind::Number(Rational::from_integer(n.clone())),
            TokenKind::Rat(r) => ExprKind::Number(r.clone()),
            TokenKind::Ident(s) => ExprKind::Ident(s.clone()),
            TokenKind::LParen => {
                self.bump();
                let (inner, depth) = self.sum()?;
                let close = self.expect(TokenKind::RParen, "`)`")?;
                return Ok((
                    Expr {
                        span: join(t.span, close.span),
                        ..inner
                    },
                    depth,
                ));
            }
            _ => return Err(self.unexpected(&["number", "identifier", "`(`", "`-`"])),
        };
        self.bump();
        Ok((Expr { kind, span: t.span }, 1))
    }
}

fn idents(e: &Expr, out: &mut Vec<(String, SourceSpan)>) {
    match &e.kind {
        ExprKind::Number(_) => {}
        ExprKind::Ident(s) => out.push((s.clone(), e.span)),
        ExprKind::Neg(a) | ExprKind::Pow(a, _) => idents(a, out),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
            idents(a, out);
            idents(b, out);
        }
    }
}

/// Name-level checks: declarations are unique and disjoint, every name
/// used is declared, every pair has at most one clause, and every pair has
/// a clause unless `default zero;` is given.
fn check(def: &AlgebraDef, eof: SourceSpan) -> Result<(), ParseError> {
    let mut params = BTreeSet::new();
    for p in &def.params {
        if Var::from_name(&p.name).is_some() {
            return Err(ParseError::semantic(p.span, format!("`{}` is reserved for a formal variable", p.name)));
        }
        if !params.insert(p.name.as_str()) {
            return Err(ParseError::semantic(p.span, format!("parameter `{}` declared twice", p.name)));
        }
    }
    let mut gens = BTreeSet::new();
    for g in &def.generators {
        if Var::from_name(&g.name).is_some() {
            return Err(ParseError::semantic(g.span, format!("`{}` is reserved for a formal variable", g.name)));
        }
        if params.contains(g.name.as_str()) {
            return Err(ParseError::semantic(
                g.span,
                format!("`{}` is declared both as a parameter and a generator", g.name),
            ));
        }
        if !gens.insert(g.name.as_str()) {
            return Err(ParseError::semantic(g.span, format!("generator `{}` declared twice", g.name)));
        }
    }
    for n in &def.not_all_zero {
        if let Some(bad) = n.params.iter().find(|p| !params.contains(p.as_str())) {
            return Err(ParseError::semantic(n.span, format!("unknown parameter `{bad}` in `nonzero`")));
        }
    }
    let mut seen = BTreeSet::new();
    for b in &def.brackets {
        for (name, span) in [(&b.left, b.left_span), (&b.right, b.right_span)] {
            if !gens.contains(name.as_str()) {
                return Err(ParseError::semantic(span, format!("unknown generator `{name}`")));
            }
        }
        if !seen.insert((b.left.as_str(), b.right.as_str())) {
            return Err(ParseError::semantic(
                b.span,
                format!("duplicate clause for [{} _ {}]", b.left, b.right),
            ));
        }
        let mut used = Vec::new();
        idents(&b.value, &mut used);
        for (name, span) in used {
            let known = matches!(Var::from_name(&name), Some(Var::Del | Var::Lam))
                || params.contains(name.as_str())
                || gens.contains(name.as_str());
            if !known {
                return Err(ParseError::semantic(span, format!("unknown symbol `{name}`")));
            }
        }
    }
    if !def.default_zero {
        for x in &def.generators {
            for y in &def.generators {
                if !seen.contains(&(x.name.as_str(), y.name.as_str())) {
                    return Err(ParseError::semantic(
                        eof,
                        format!(
                            "no clause for [{} _ {}]; add one or declare `default zero;`",
                            x.name, y.name
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Parses and name-checks a `.lsca` source.
pub fn parse_algebra(text: &str) -> Result<AlgebraDef, ParseError> {
    let tokens = tokenize(text)?;
    let eof = tokens.last().expect("eof token").span;
    let mut p = Parser { tokens, pos: 0, depth: 0 };
    let def = p.file()?;
    check(&def, eof)?;
    Ok(def)
}

/// Canonical text of a definition; parsing it gives back an equal AST.
pub fn print_algebra(def: &AlgebraDef) -> String {
    def.to_string()
}
