//! Text syntax for elements of the function algebra.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := power ('*' power)*
//! power   := primary ('^' integer)?
//! primary := integer ('/' integer)? | 'x' | 'abs' '(' 'x' ')' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Float literals are rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::FunctionExpr;
use crate::error::{Error, Result};
use crate::Rational;

/// Exponents above this are refused by the parser and by input validation.
pub const MAX_DEGREE: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: ", self.position)?;
        if let Some(m) = &self.message {
            return write!(f, "{m}");
        }
        write!(f, "expected {}, found {}", self.expected.join(" or "), self.found)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Abs,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::X => "'x'".into(),
            Tok::Abs => "'abs'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && matches!(bytes[i], b'.' | b'e' | b'E') {
                    return Err(ParseError {
                        position: start,
                        expected: vec![],
                        found: src[start..].chars().take(12).collect(),
                        message: Some("float literals are not supported; use p/q".into()),
                    });
                }
                out.push((start, Tok::Int(src[start..i].parse().expect("digits"))));
                continue;
            }
            '.' => {
                return Err(ParseError {
                    position: start,
                    expected: vec![],
                    found: "'.'".into(),
                    message: Some("float literals are not supported; use p/q".into()),
                })
            }
            'x' => Tok::X,
            'a' if src[i..].starts_with("abs") => {
                i += 3;
                out.push((start, Tok::Abs));
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            other => {
                return Err(ParseError {
                    position: start,
                    expected: vec!["integer", "'x'", "'abs(x)'", "'('", "operator"],
                    found: format!("{other:?}"),
                    message: None,
                })
            }
        };
        i += c.len_utf8();
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError { position: self.offset(), expected, found: self.peek().describe(), message: None }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<FunctionExpr, ParseError> {
        let mut negate = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FunctionExpr, ParseError> {
        let mut acc = self.power()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FunctionExpr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let exp = match self.bump() {
            Tok::Int(n) => n,
            _ => {
                self.pos -= 1;
                return Err(self.fail(vec!["integer exponent"]));
            }
        };
        let exp: u32 = match u32::try_from(&exp) {
            Ok(e) if e <= MAX_DEGREE => e,
            _ => {
                return Err(ParseError {
                    position: at,
                    expected: vec![],
                    found: exp.to_string(),
                    message: Some(format!("exponent {exp} exceeds the limit of {MAX_DEGREE}")),
                })
            }
        };
        let mut out = FunctionExpr::constant(Rational::one());
        for _ in 0..exp {
            out = &out * &base;
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<FunctionExpr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let at = self.offset();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => Ok(FunctionExpr::constant(Rational::new(n, d))),
                        Tok::Int(_) => Err(ParseError {
                            position: at,
                            expected: vec![],
                            found: "0".into(),
                            message: Some("zero denominator".into()),
                        }),
                        _ => {
                            self.pos -= 1;
                            Err(self.fail(vec!["integer denominator"]))
                        }
                    }
                } else {
                    Ok(FunctionExpr::constant(Rational::from_integer(n)))
                }
            }
            Tok::X => {
                self.bump();
                Ok(FunctionExpr::x_pow(1))
            }
            Tok::Abs => {
                self.bump();
                self.expect(Tok::LParen, "'('")?;
                self.expect(Tok::X, "'x'")?;
                self.expect(Tok::RParen, "')'")?;
                Ok(FunctionExpr::abs_x_pow(0))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.fail(vec!["integer", "'x'", "'abs(x)'", "'('"])),
        }
    }
}

/// Parses one expression of the function algebra into canonical form.
pub fn parse_expr(text: &str) -> Result<FunctionExpr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.fail(vec!["'+'", "'-'", "'*'", "end of input"]).into());
    }
    Ok(e)
}

/// Rejects expressions whose degree exceeds [`MAX_DEGREE`].
pub fn validate_degree(e: &FunctionExpr) -> Result<()> {
    match e.max_degree() {
        Some(d) if d > MAX_DEGREE => Err(Error::DegreeTooLarge { degree: d, limit: MAX_DEGREE }),
        _ => Ok(()),
    }
}

/// Parses a comma-separated list of coordinate expressions, e.g.
/// `"x*abs(x), 0"`.
pub fn parse_components(text: &str) -> Result<Vec<FunctionExpr>> {
    text.split(',')
        .map(|s| {
            let e = parse_expr(s)?;
            validate_degree(&e)?;
            Ok(e)
        })
        .collect()
}
