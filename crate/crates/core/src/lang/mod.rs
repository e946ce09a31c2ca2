//! Text surface: lexer, parser, evaluator and printer for set expressions.
//!
//! A program is a sequence of `;`-separated items. Definitions are solved
//! together as one system of equations, so they may refer to each other in
//! any order. Expressions and commands then run in sequence.

mod eval;
mod lexer;
mod parser;
mod print;

use std::fmt;

pub use eval::{EvalError, LangError, Output, Session};
pub use lexer::{lex, Tok};
pub use parser::{parse, parse_expr, Builtin, Command, Definition, Expr, Item, Program, MAX_DEPTH};
pub use print::print_canonical;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// 1-based line and column (in characters) of byte `offset`.
pub fn locate(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let mut line = 1;
    let mut column = 1;
    for (i, c) in src.char_indices() {
        if i >= offset {
            break;
        }
        if c == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub span: Span,
    pub line: usize,
    pub column: usize,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: Span, src: &str) -> ParseError {
        let (line, column) = locate(src, span.start);
        ParseError {
            message: message.into(),
            span,
            line,
            column,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locate_counts_characters() {
        assert_eq!(locate("ab\ncd", 0), (1, 1));
        assert_eq!(locate("ab\ncd", 4), (2, 2));
        assert_eq!(locate("μx", 2), (1, 2));
        assert_eq!(locate("", 10), (1, 1));
    }
}
