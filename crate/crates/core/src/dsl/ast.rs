//! Syntax tree of a `.lsca` file and its canonical printer.
//!
//! Equality on every node ignores source spans, so a printed and re-parsed
//! definition compares equal to the original.

use std::fmt;

use super::SourceSpan;
use crate::arith::{fmt_rational, Rational};
use crate::conformal::AlgebraKind;

#[derive(Debug, Clone)]
pub enum ExprKind {
    Number(Rational),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Number(a), Number(b)) => a == b,
            (Ident(a), Ident(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d)) | (Sub(a, b), Sub(c, d)) | (Mul(a, b), Mul(c, d)) | (Div(a, b), Div(c, d)) => {
                a == c && b == d
            }
            (Pow(a, m), Pow(b, n)) => m == n && a == b,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Neg(..) => 3,
            ExprKind::Pow(..) => 4,
            ExprKind::Number(_) | ExprKind::Ident(_) => 5,
        }
    }

    /// Nesting depth of the tree.
    pub fn depth(&self) -> usize {
        match &self.kind {
            ExprKind::Number(_) | ExprKind::Ident(_) => 1,
            ExprKind::Neg(a) | ExprKind::Pow(a, _) => 1 + a.depth(),
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    /// Minimal parenthesisation that re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match &self.kind {
            ExprKind::Number(r) => {
                // A fraction literal is one token, so it never needs parentheses.
                f.write_str(&fmt_rational(r))
            }
            ExprKind::Ident(s) => f.write_str(s),
            ExprKind::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < p)
            }
            ExprKind::Pow(a, n) => {
                write_child(f, a, a.precedence() <= p)?;
                write!(f, "^{n}")
            }
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) | ExprKind::Div(a, b) => {
                let op = match self.kind {
                    ExprKind::Add(..) => " + ",
                    ExprKind::Sub(..) => " - ",
                    ExprKind::Mul(..) => "*",
                    // Spaced so `2 / 3` is not re-read as the literal `2/3`.
                    _ => " / ",
                };
                write_child(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamDecl {
    pub name: String,
    pub nonzero: bool,
    pub span: SourceSpan,
}

impl PartialEq for ParamDecl {
    fn eq(&self, other: &ParamDecl) -> bool {
        self.name == other.name && self.nonzero == other.nonzero
    }
}

impl Eq for ParamDecl {}

/// `nonzero (p, q, ...);` — not all of the listed parameters vanish.
#[derive(Debug, Clone)]
pub struct NotAllZeroDecl {
    pub params: Vec<String>,
    pub span: SourceSpan,
}

impl PartialEq for NotAllZeroDecl {
    fn eq(&self, other: &NotAllZeroDecl) -> bool {
        self.params == other.params
    }
}

impl Eq for NotAllZeroDecl {}

#[derive(Debug, Clone)]
pub struct GeneratorDecl {
    pub name: String,
    pub span: SourceSpan,
}

impl PartialEq for GeneratorDecl {
    fn eq(&self, other: &GeneratorDecl) -> bool {
        self.name == other.name
    }
}

impl Eq for GeneratorDecl {}

/// `bracket [X _ Y] = value;`
#[derive(Debug, Clone)]
pub struct BracketClause {
    pub left: String,
    pub right: String,
    pub value: Expr,
    /// Span of the `[X _ Y]` head.
    pub span: SourceSpan,
    pub left_span: SourceSpan,
    pub right_span: SourceSpan,
}

impl PartialEq for BracketClause {
    fn eq(&self, other: &BracketClause) -> bool {
        self.left == other.left && self.right == other.right && self.value == other.value
    }
}

impl Eq for BracketClause {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraDef {
    pub name: String,
    pub kind: AlgebraKind,
    pub params: Vec<ParamDecl>,
    pub not_all_zero: Vec<NotAllZeroDecl>,
    pub generators: Vec<GeneratorDecl>,
    pub brackets: Vec<BracketClause>,
    pub default_zero: bool,
}

impl fmt::Display for AlgebraDef {
    /// Canonical text: header, declarations, clauses in source order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebra {} {};", self.name, self.kind.keyword())?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|p| if p.nonzero { format!("{} nonzero", p.name) } else { p.name.clone() })
                .collect();
            writeln!(f, "params {};", ps.join(", "))?;
        }
        for n in &self.not_all_zero {
            writeln!(f, "nonzero ({});", n.params.join(", "))?;
        }
        let gs: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        writeln!(f, "generators {};", gs.join(", "))?;
        for b in &self.brackets {
            writeln!(f, "bracket [{} _ {}] = {};", b.left, b.right, b.value)?;
        }
        if self.default_zero {
            writeln!(f, "default zero;")?;
        }
        Ok(())
    }
}
