//! The `.lsca` text format for conformal algebras.
//!
//! ```text
//! # 𝒲(a,b)
//! algebra W lie;
//! params a, b;
//! generators L, W;
//! bracket [L _ L] = (del + 2*lam)*L;
//! bracket [L _ W] = (del + a*lam + b)*W;
//! bracket [W _ L] = ((a - 1)*del + a*lam - b)*W;
//! default zero;
//! ```
//!
//! `del` and `lam` stand for ∂ and λ, `_` marks the λ slot, `p/q` is an
//! exact rational literal and `#` starts a comment. `params c nonzero` and
//! `nonzero (k1, k2);` record admissibility constraints. Every ordered
//! generator pair needs a clause unless `default zero;` is present.
//!
//! [`parse_algebra`] produces an [`AlgebraDef`] with source spans,
//! [`elaborate`] folds it into a [`ConformalAlgebra`], [`print_algebra`]
//! renders an AST back to canonical text and [`export`] writes any algebra
//! in this format. Every failure is a [`ParseError`] pointing at the
//! offending input.

mod ast;
mod elaborate;
mod lexer;
mod parser;

pub use ast::{AlgebraDef, BracketClause, Expr, ExprKind, GeneratorDecl, NotAllZeroDecl, ParamDecl};
pub use elaborate::{elaborate, export, parse_and_elaborate};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_algebra, print_algebra, MAX_DEPTH, MAX_EXPONENT, MAX_TREE_DEPTH};

use std::fmt;

use thiserror::Error;

/// A 1-based position plus a length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    /// Illegal character or malformed literal.
    Lexical,
    /// Unexpected token.
    Syntax,
    /// Well-formed text with an invalid meaning (unknown symbol, duplicate
    /// clause, non-linear bracket value, ...).
    Semantic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}{}", fmt_expected(.expected))]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
    /// Tokens that would have been accepted, for syntax errors.
    pub expected: Vec<String>,
}

fn fmt_expected(expected: &[String]) -> String {
    match expected {
        [] => String::new(),
        [one] => format!(" (expected {one})"),
        many => format!(" (expected one of {})", many.join(", ")),
    }
}

impl ParseError {
    pub(crate) fn semantic(span: SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Semantic,
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    /// Renders the error with the offending source line and a caret marker.
    pub fn render(&self, source: &str) -> String {
        let line = source.lines().nth(self.span.line.saturating_sub(1)).unwrap_or("");
        let pad = " ".repeat(self.span.column.saturating_sub(1));
        let marks = "^".repeat(self.span.length.max(1));
        format!("error: {self}\n  | {line}\n  | {pad}{marks}")
    }
}

#[cfg(test)]
mod tests;
