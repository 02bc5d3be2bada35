//! Polynomial text syntax.
//!
//! Grammar (whitespace is ignored everywhere):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" integer)?
//! atom   := integer | "zeta" | "X" index | "(" expr ")"
//! ```
//!
//! Variables are `X1`..`Xm`; `zeta` is the primitive root of unity of the
//! scenario's cyclotomic field. Division is only allowed by nonzero
//! constants. Printing is canonical: terms in descending graded
//! reverse-lex order, rational coefficients in lowest terms, and
//! non-rational coefficients in parentheses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::poly::{Monomial, MonomialOrder, MultiPoly};

/// Parses `src` as a polynomial in `num_vars` variables over ℚ(ζ_n), n = `cyclotomic_index`.
pub fn parse_poly(src: &str, num_vars: usize, cyclotomic_index: u32) -> Result<MultiPoly> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        num_vars,
        index: cyclotomic_index,
        src_len: src.len(),
    };
    let out = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(Error::Parse {
            offset: t.offset,
            message: format!("unexpected {:?}", t.kind),
        });
    }
    Ok(out)
}

/// Parses a constant (e.g. a matrix entry).
pub fn parse_constant(src: &str, cyclotomic_index: u32) -> Result<FieldElement> {
    let p = parse_poly(src, 0, cyclotomic_index)?;
    Ok(p.constant_term())
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Zeta,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token {
                    kind: Tok::Int(src[start..i].parse().unwrap()),
                    offset: start,
                });
                continue;
            }
            b'X' | b'x' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(Error::Parse {
                        offset: start,
                        message: "variable needs an index, e.g. X1".into(),
                    });
                }
                let k: usize = src[ds..i].parse().map_err(|_| Error::Parse {
                    offset: ds,
                    message: "bad variable index".into(),
                })?;
                if k == 0 {
                    return Err(Error::Parse {
                        offset: ds,
                        message: "variables are numbered from X1".into(),
                    });
                }
                out.push(Token {
                    kind: Tok::Var(k - 1),
                    offset: start,
                });
                continue;
            }
            b'z' if src[i..].starts_with("zeta") => {
                i += 4;
                out.push(Token {
                    kind: Tok::Zeta,
                    offset: start,
                });
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        i += 1;
        out.push(Token {
            kind,
            offset: start,
        });
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    num_vars: usize,
    index: u32,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.src_len, |t| t.offset)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_add(&-&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let t = self.unary()?;
                    acc = acc.try_mul(&t)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let t = self.unary()?;
                    if !t.is_constant() || t.is_zero() {
                        return Err(Error::Parse {
                            offset: at,
                            message: "division only by nonzero constants".into(),
                        });
                    }
                    let inv = t.constant_term().inv().unwrap();
                    acc = acc.try_scale(&inv)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e.try_into().map_err(|_| Error::Parse {
                        offset: self.offset(),
                        message: "exponent too large".into(),
                    })?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.num_vars;
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(
                    n,
                    FieldElement::from_rational(BigRational::from_integer(v)),
                ))
            }
            Some(Tok::Var(k)) => {
                if k >= n {
                    return self.err(format!(
                        "variable X{} out of range (ring has {} variables)",
                        k + 1,
                        n
                    ));
                }
                self.pos += 1;
                Ok(MultiPoly::var(n, k))
            }
            Some(Tok::Zeta) => {
                if self.index <= 1 {
                    return self.err("zeta used but the field is Q");
                }
                self.pos += 1;
                Ok(MultiPoly::constant(n, FieldElement::zeta(self.index)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let parts: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("X{}", i + 1)
                } else {
                    format!("X{}^{}", i + 1, e)
                }
            })
            .collect();
    parts.join("*")
}

/// Canonical rendering of `p` with terms in descending `order`.
pub fn format_poly(p: &MultiPoly, order: &MonomialOrder) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.sorted_terms(order).into_iter().enumerate() {
        let mono = fmt_monomial(m);
        let (neg, body) = match c.as_rational() {
            Some(r) => {
                let neg = r < BigRational::from_integer(0.into());
                let abs = if neg { -r } else { r };
                let coef = FieldElement::from_rational(abs.clone()).to_string();
                let body = if mono.is_empty() {
                    coef
                } else if abs.is_one() {
                    mono
                } else {
                    format!("{coef}*{mono}")
                };
                (neg, body)
            }
            None => {
                let body = if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{mono}")
                };
                (false, body)
            }
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, &MonomialOrder::grevlex(self.num_vars())))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
