//! Tokenizer for `.lsca` sources.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::arith::Rational;

pub const KEYWORDS: [&str; 10] = [
    "algebra",
    "lie",
    "lsc",
    "raw",
    "params",
    "nonzero",
    "generators",
    "bracket",
    "default",
    "zero",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Keyword(&'static str),
    Int(BigInt),
    /// `p/q` written without spaces.
    Rat(Rational),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Underscore,
    Eq,
    Semi,
    Comma,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Keyword(k) => write!(f, "`{k}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Rat(r) => write!(f, "rational `{r}`"),
            TokenKind::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", other.symbol()),
        }
    }
}

impl TokenKind {
    /// The literal spelling of punctuation tokens.
    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Caret => "^",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Underscore => "_",
            TokenKind::Eq => "=",
            TokenKind::Semi => ";",
            TokenKind::Comma => ",",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
    /// The exact source text of the token.
    pub text: String,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens, ending with [`TokenKind::Eof`].
///
/// The `Eof` token's span points at the last character of the input (or at
/// 1:1 with length 0 for an empty input).
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut last_char = None;
    loop {
        // Skip whitespace and comments.
        while let Some(c) = cur.peek() {
            if c == '#' {
                while let Some(c) = cur.peek() {
                    if c == '\n' {
                        break;
                    }
                    last_char = Some((cur.line, cur.column));
                    cur.bump();
                }
            } else if c.is_whitespace() {
                if c != '\n' && c != '\r' {
                    last_char = Some((cur.line, cur.column));
                }
                cur.bump();
            } else {
                break;
            }
        }
        let (line, column) = (cur.line, cur.column);
        let Some(c) = cur.bump() else { break };
        let mut text_buf = String::from(c);
        let kind = match c {
            '+' => TokenKind::Plus,
            '-' => TokenKind::Minus,
            '*' => TokenKind::Star,
            '/' => TokenKind::Slash,
            '^' => TokenKind::Caret,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            '_' => TokenKind::Underscore,
            '=' => TokenKind::Eq,
            ';' => TokenKind::Semi,
            ',' => TokenKind::Comma,
            c if c.is_ascii_alphabetic() => {
                while let Some(n) = cur.peek().filter(char::is_ascii_alphanumeric) {
                    text_buf.push(n);
                    cur.bump();
                }
                match KEYWORDS.iter().find(|k| **k == text_buf) {
                    Some(k) => TokenKind::Keyword(k),
                    None => TokenKind::Ident(text_buf.clone()),
                }
            }
            c if c.is_ascii_digit() => {
                while let Some(n) = cur.peek().filter(char::is_ascii_digit) {
                    text_buf.push(n);
                    cur.bump();
                }
                let num: BigInt = text_buf.parse().expect("ascii digits");
                let mut lookahead = cur.chars.clone();
                if lookahead.next() == Some('/') && lookahead.next().is_some_and(|d| d.is_ascii_digit()) {
                    cur.bump();
                    text_buf.push('/');
                    let start = text_buf.len();
                    while let Some(n) = cur.peek().filter(char::is_ascii_digit) {
                        text_buf.push(n);
                        cur.bump();
                    }
                    let den: BigInt = text_buf[start..].parse().expect("ascii digits");
                    if den.is_zero() {
                        return Err(ParseError {
                            kind: ParseErrorKind::Lexical,
                            span: SourceSpan {
                                line,
                                column,
                                length: text_buf.chars().count(),
                            },
                            message: format!("rational literal `{text_buf}` has a zero denominator"),
                            expected: Vec::new(),
                        });
                    }
                    TokenKind::Rat(Rational::new(num, den))
                } else {
                    TokenKind::Int(num)
                }
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::Lexical,
                    span: SourceSpan { line, column, length: 1 },
                    message: format!("illegal character `{}`", other.escape_default()),
                    expected: Vec::new(),
                });
            }
        };
        let length = text_buf.chars().count();
        last_char = Some((line, column + length - 1));
        tokens.push(Token {
            kind,
            span: SourceSpan { line, column, length },
            text: text_buf,
        });
    }
    let span = match last_char {
        Some((line, column)) => SourceSpan { line, column, length: 1 },
        None => SourceSpan {
            line: 1,
            column: 1,
            length: 0,
        },
    };
    tokens.push(Token {
        kind: TokenKind::Eof,
        span,
        text: String::new(),
    });
    Ok(tokens)
}
