//! Expression text syntax.
//!
//! Grammar: `+ - * / ^` with conventional precedence, `^` right-associative,
//! unary minus binding below `^`; parentheses; integer, decimal and `p/q`
//! literals (all exact); coordinate tokens `z1 zb1 zd1 zbd1 zdd1 zbdd1 ...`,
//! time `t`, imaginary unit `I`; function calls `sqrt sin cos exp ln conj`;
//! any other identifier is a parameter. No implicit multiplication.

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::expr::{CoordRole, Expr, UnaryFn};
use crate::scalar::{rational_from_decimal, CRational};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input where the error was detected.
    pub offset: usize,
    /// What the parser would have accepted at that point.
    pub expected: Vec<String>,
    /// What it saw instead.
    pub found: String,
}

impl ParseError {
    fn new(offset: usize, expected: &[&str], found: impl Into<String>) -> Self {
        ParseError {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number `{}`", q),
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let b = bytes[pos];
        if b.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let kind = match b {
            b'+' => {
                pos += 1;
                Tok::Plus
            }
            b'-' => {
                pos += 1;
                Tok::Minus
            }
            b'*' => {
                pos += 1;
                Tok::Star
            }
            b'/' => {
                pos += 1;
                Tok::Slash
            }
            b'^' => {
                pos += 1;
                Tok::Caret
            }
            b'(' => {
                pos += 1;
                Tok::LParen
            }
            b')' => {
                pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' | b'.' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'.' {
                    pos += 1;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
                let text = &src[start..pos];
                match rational_from_decimal(text) {
                    Some(q) => Tok::Num(q),
                    None => {
                        return Err(ParseError::new(
                            start,
                            &["numeric literal"],
                            format!("`{}`", text),
                        ))
                    }
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                {
                    pos += 1;
                }
                Tok::Ident(src[start..pos].to_string())
            }
            other => {
                return Err(ParseError::new(
                    start,
                    &["expression"],
                    format!("`{}`", other as char),
                ))
            }
        };
        tokens.push(Token {
            kind,
            offset: start,
        });
    }
    tokens.push(Token {
        kind: Tok::Eof,
        offset: src.len(),
    });
    Ok(tokens)
}

/// Splits an identifier into a coordinate symbol when it matches one of the
/// reserved prefixes followed by a 1-based index.
fn classify_coordinate(name: &str) -> Option<Result<(CoordRole, u32), ()>> {
    const PREFIXES: [(&str, CoordRole); 6] = [
        ("zbdd", CoordRole::ZBarDdot),
        ("zbd", CoordRole::ZBarDot),
        ("zdd", CoordRole::ZDdot),
        ("zb", CoordRole::ZBar),
        ("zd", CoordRole::ZDot),
        ("z", CoordRole::Z),
    ];
    for (prefix, role) in PREFIXES {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return match rest.parse::<u32>() {
                    Ok(idx) if idx >= 1 => Some(Ok((role, idx))),
                    _ => Some(Err(())),
                };
            }
        }
    }
    None
}

fn function_head(name: &str) -> Option<Option<UnaryFn>> {
    // The inner `None` marks `conj`, which has no UnaryFn head.
    match name {
        "sqrt" => Some(Some(UnaryFn::Sqrt)),
        "sin" => Some(Some(UnaryFn::Sin)),
        "cos" => Some(Some(UnaryFn::Cos)),
        "exp" => Some(Some(UnaryFn::Exp)),
        "ln" => Some(Some(UnaryFn::Ln)),
        "conj" => Some(None),
        _ => None,
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        let t = self.advance();
        if t.kind == Tok::RParen {
            Ok(())
        } else {
            Err(ParseError::new(t.offset, &["`)`"], t.kind.to_string()))
        }
    }

    /// Pratt loop. Binding powers: `+ -` (1,2), `* /` (3,4), unary minus 5,
    /// `^` (8,7) — right-associative, and tighter than unary minus.
    fn expr_bp(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        loop {
            let (l_bp, r_bp, tok) = match self.peek().kind {
                Tok::Plus => (1, 2, Tok::Plus),
                Tok::Minus => (1, 2, Tok::Minus),
                Tok::Star => (3, 4, Tok::Star),
                Tok::Slash => (3, 4, Tok::Slash),
                Tok::Caret => (8, 7, Tok::Caret),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            self.advance();
            let rhs = self.expr_bp(r_bp)?;
            lhs = match tok {
                Tok::Plus => lhs + rhs,
                Tok::Minus => lhs - rhs,
                Tok::Star => lhs * rhs,
                Tok::Slash => lhs / rhs,
                Tok::Caret => Expr::pow(lhs, rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.advance();
        match t.kind {
            Tok::Num(q) => Ok(Expr::Const(CRational::from_real(q))),
            Tok::Minus => Ok(-self.expr_bp(5)?),
            Tok::LParen => {
                let inner = self.expr_bp(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&name, t.offset),
            other => Err(ParseError::new(t.offset, &["expression"], other.to_string())),
        }
    }

    fn identifier(&mut self, name: &str, offset: usize) -> Result<Expr, ParseError> {
        if name == "I" {
            return Ok(Expr::ImagUnit);
        }
        if name == "t" {
            return Ok(Expr::Time);
        }
        if let Some(head) = function_head(name) {
            let t = self.advance();
            if t.kind != Tok::LParen {
                return Err(ParseError::new(
                    t.offset,
                    &[&format!("`(` after `{}`", name)],
                    t.kind.to_string(),
                ));
            }
            let arg = self.expr_bp(0)?;
            self.expect_rparen()?;
            return Ok(match head {
                Some(f) => Expr::func(f, arg),
                None => Expr::conj(arg),
            });
        }
        match classify_coordinate(name) {
            Some(Ok((role, idx))) => Ok(Expr::coord(role, idx)),
            Some(Err(())) => Err(ParseError::new(
                offset,
                &["coordinate index >= 1"],
                format!("`{}`", name),
            )),
            None => Ok(Expr::param(name.to_string())),
        }
    }
}

/// Parses expression text to a raw (uncanonicalised) tree.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr_bp(0)?;
    let t = p.peek();
    if t.kind != Tok::Eof {
        return Err(ParseError::new(
            t.offset,
            &["operator", "end of input"],
            t.kind.to_string(),
        ));
    }
    Ok(e)
}
