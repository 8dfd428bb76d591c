//! Lexing, parsing and printing of IMP(G) programs and data literals.
//!
//! Arrow precedence, tightest first: `;` and `o` (right-associative), `*`,
//! `+`, then `|` and `,`, which do not associate with each other or
//! themselves. `f o g` parses as `Seq(g, f)`. Object juxtaposition is `*`.

pub mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use lexer::is_reserved;
pub use printer::{arrow_to_string, obj_to_string, program_to_string};

use crate::forest::{mk_node, Forest, Tree};
use num_bigint::BigUint;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: Span, message: String, expected: Vec<String>) -> ParseError {
        ParseError {
            span,
            message,
            expected,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at line {}, column {}: {}",
            self.span.line, self.span.col, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    parser::Parser::new(text)?.program()
}

pub fn parse_arrow(text: &str) -> Result<Arrow, ParseError> {
    let mut p = parser::Parser::new(text)?;
    let a = p.arrow()?;
    p.expect_eof()?;
    Ok(a)
}

pub fn parse_obj(text: &str) -> Result<ObjExpr, ParseError> {
    let mut p = parser::Parser::new(text)?;
    let o = p.obj()?;
    p.expect_eof()?;
    Ok(o)
}

/// Parses a data literal into a normalized forest.
pub fn parse_data(text: &str) -> Result<Forest, ParseError> {
    let mut d = DataParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let forest = d.forest()?;
    d.skip_ws();
    if d.pos < d.chars.len() {
        return Err(d.err("unexpected character", &["`<`", "`{`", "number"]));
    }
    Ok(forest)
}

struct DataParser {
    chars: Vec<char>,
    pos: usize,
}

impl DataParser {
    fn span(&self) -> Span {
        let (mut line, mut col) = (1, 1);
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        Span { line, col }
    }

    fn err(&self, msg: &str, expected: &[&str]) -> ParseError {
        ParseError::new(
            self.span(),
            msg.to_string(),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err("unexpected character", &[&format!("`{c}`")]))
        }
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        match self.peek() {
            Some('-') => return Err(self.err("negative numbers are not data", &[])),
            Some(c) if c.is_ascii_digit() => {}
            _ => return Err(self.err("unexpected character", &["number"])),
        }
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("digits"))
    }

    fn forest(&mut self) -> Result<Forest, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some('<') => {
                    self.pos += 1;
                    let tag = self.nat()?;
                    let tag: usize = tag
                        .try_into()
                        .map_err(|_| self.err("tag does not fit in a machine word", &[]))?;
                    self.expect(',')?;
                    let children = self.forest()?;
                    self.expect('>')?;
                    out.push(mk_node(tag, children));
                }
                Some('{') => {
                    self.pos += 1;
                    let n = self.nat()?;
                    self.expect('}')?;
                    out.push(Tree::Leaf(n));
                }
                Some(c) if c.is_ascii_digit() || c == '-' => out.push(Tree::Leaf(self.nat()?)),
                _ => return Ok(out),
            }
        }
    }
}
