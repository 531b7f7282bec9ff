//! Expression parser and printer for algebra elements.
//!
//! Grammar (items separated by whitespace juxtapose as the noncommutative
//! product, applied left to right):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := signed (signed | '/' signed)*
//! signed := factor ('^' int)?
//! factor := scalar | gen | '(' expr ')'
//! gen    := 'a' | 'c' | 'a*' | 'c*'
//! scalar := rational | 'q' ('^' ('{'? '-'? int ('/2')? '}'?))?
//! ```
//!
//! `/` divides by a scalar-valued factor (a proper extension of the core
//! grammar so that printed fractions round-trip). Parsing returns the
//! expanded element of the free algebra; callers normalize as needed.

use crate::ncalg::{Poly, GEN_A, GEN_AS, GEN_C, GEN_CS};
use crate::scalar::{rat, Scalar};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character '{ch}' at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("unknown generator '{name}' at position {pos}")]
    UnknownGenerator { name: String, pos: usize },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token at position {pos}: expected {expected}")]
    Unexpected { pos: usize, expected: &'static str },
    #[error("division by a non-scalar or zero expression at position {pos}")]
    BadDivisor { pos: usize },
    #[error("trailing input at position {pos}")]
    TrailingInput { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Plus,
    Minus,
    Slash,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Int(i64),
    Q,
    Gen(u8),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(input: &str) -> Result<Lexer, ParseError> {
    let bytes: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '{' => {
                toks.push((Tok::LBrace, i));
                i += 1;
            }
            '}' => {
                toks.push((Tok::RBrace, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                let mut v: i64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v * 10 + (bytes[i] as i64 - '0' as i64);
                    i += 1;
                }
                toks.push((Tok::Int(v), start));
            }
            'q' => {
                toks.push((Tok::Q, i));
                i += 1;
            }
            'a' | 'c' => {
                let start = i;
                i += 1;
                let starred = i < bytes.len() && bytes[i] == '*';
                if starred {
                    i += 1;
                }
                let g = match (ch, starred) {
                    ('a', false) => GEN_A,
                    ('a', true) => GEN_AS,
                    ('c', false) => GEN_C,
                    ('c', true) => GEN_CS,
                    _ => unreachable!(),
                };
                toks.push((Tok::Gen(g), start));
            }
            _ if ch.is_alphabetic() => {
                let start = i;
                let mut name = String::new();
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '*') {
                    name.push(bytes[i]);
                    i += 1;
                }
                return Err(ParseError::UnknownGenerator { name, pos: start });
            }
            _ => return Err(ParseError::UnexpectedChar { ch, pos: i }),
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_pos(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

/// Exponent after '^': `int`, `-int`, optionally `/2`, optionally braced.
/// Returns the exponent in units of s (so `3/2` gives 3, `2` gives 4).
fn parse_q_exponent(lx: &mut Lexer) -> Result<i64, ParseError> {
    let braced = lx.eat(&Tok::LBrace);
    let neg = lx.eat(&Tok::Minus);
    let n = match lx.next() {
        Some(Tok::Int(v)) => v,
        _ => {
            return Err(ParseError::Unexpected {
                pos: lx.peek_pos(),
                expected: "integer exponent",
            })
        }
    };
    let mut s_units = 2 * n;
    // Optional '/2' for half-integer powers of q.
    if lx.peek() == Some(&Tok::Slash) {
        let save = lx.pos;
        lx.next();
        if lx.eat(&Tok::Int(2)) {
            s_units = n;
        } else {
            lx.pos = save;
        }
    }
    if braced && !lx.eat(&Tok::RBrace) {
        return Err(ParseError::Unexpected {
            pos: lx.peek_pos(),
            expected: "closing brace",
        });
    }
    Ok(if neg { -s_units } else { s_units })
}

fn parse_int_exponent(lx: &mut Lexer) -> Result<u32, ParseError> {
    match lx.next() {
        Some(Tok::Int(v)) if v >= 0 => Ok(v as u32),
        _ => Err(ParseError::Unexpected {
            pos: lx.peek_pos(),
            expected: "nonnegative integer exponent",
        }),
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Poly, ParseError> {
    match lx.next() {
        Some(Tok::Int(v)) => {
            // A rational literal `p/q` only when the next two tokens are '/' int;
            // otherwise plain '/' stays available for scalar division.
            if lx.peek() == Some(&Tok::Slash) {
                if let Some((Tok::Int(d), _)) = lx.toks.get(lx.pos + 1) {
                    if *d != 0 {
                        let d = *d;
                        lx.pos += 2;
                        return Ok(Poly::scalar(Scalar::from_rat(rat(v, d))));
                    }
                }
            }
            Ok(Poly::scalar(Scalar::from_int(v)))
        }
        Some(Tok::Q) => {
            let e = if lx.eat(&Tok::Caret) {
                parse_q_exponent(lx)?
            } else {
                2
            };
            Ok(Poly::scalar(Scalar::s_pow(e)))
        }
        Some(Tok::Gen(g)) => Ok(Poly::gen(g)),
        Some(Tok::LParen) => {
            let e = parse_expr(lx)?;
            if !lx.eat(&Tok::RParen) {
                return Err(ParseError::Unexpected {
                    pos: lx.peek_pos(),
                    expected: "closing parenthesis",
                });
            }
            Ok(e)
        }
        None => Err(ParseError::UnexpectedEnd),
        _ => Err(ParseError::Unexpected {
            pos: lx.peek_pos().saturating_sub(1),
            expected: "scalar, generator or parenthesized expression",
        }),
    }
}

fn poly_pow(base: &Poly, e: u32) -> Poly {
    let mut acc = Poly::one();
    for _ in 0..e {
        acc = acc.mul_free(base);
    }
    acc
}

fn parse_signed_factor(lx: &mut Lexer) -> Result<Poly, ParseError> {
    let base = parse_factor(lx)?;
    if lx.peek() == Some(&Tok::Caret) {
        // `q^...` is consumed inside parse_factor, so a caret here applies
        // to a generator or parenthesized factor.
        lx.next();
        let e = parse_int_exponent(lx)?;
        return Ok(poly_pow(&base, e));
    }
    Ok(base)
}

fn scalar_of(p: &Poly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.num_terms() == 1 {
        let (w, c) = p.terms().next().unwrap();
        if w.is_empty() {
            return Some(c.clone());
        }
    }
    None
}

fn starts_factor(t: &Tok) -> bool {
    matches!(t, Tok::Int(_) | Tok::Q | Tok::Gen(_) | Tok::LParen)
}

fn parse_term(lx: &mut Lexer) -> Result<Poly, ParseError> {
    let mut acc = parse_signed_factor(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Slash) => {
                let pos = lx.peek_pos();
                lx.next();
                let rhs = parse_signed_factor(lx)?;
                let s = scalar_of(&rhs).ok_or(ParseError::BadDivisor { pos })?;
                let inv = s.inv().map_err(|_| ParseError::BadDivisor { pos })?;
                acc = acc.scale(&inv);
            }
            Some(t) if starts_factor(t) => {
                let rhs = parse_signed_factor(lx)?;
                acc = acc.mul_free(&rhs);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_expr(lx: &mut Lexer) -> Result<Poly, ParseError> {
    let mut negate = false;
    if lx.eat(&Tok::Minus) {
        negate = true;
    } else {
        lx.eat(&Tok::Plus);
    }
    let mut acc = parse_term(lx)?;
    if negate {
        acc = acc.neg();
    }
    loop {
        if lx.eat(&Tok::Plus) {
            let t = parse_term(lx)?;
            acc = acc.add(&t);
        } else if lx.eat(&Tok::Minus) {
            let t = parse_term(lx)?;
            acc = acc.sub(&t);
        } else {
            break;
        }
    }
    Ok(acc)
}

/// Parses an expression into the free algebra (no rewriting applied).
pub fn parse(input: &str) -> Result<Poly, ParseError> {
    let mut lx = lex(input)?;
    let e = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(ParseError::TrailingInput { pos: lx.peek_pos() });
    }
    Ok(e)
}

/// Canonical printed form; inverse of [`parse`] on normalized input.
pub fn print(p: &Poly) -> String {
    p.to_string()
}
