//! Plain-text formal polynomials such as `- a8 y22 + a10 y20` or
//! `a4^2 b12 - 2 c17 a4`. Factors are kept in the order written.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{multiply, Element, Gen};
use crate::gf3::F3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("bad exponent at offset {0}")]
    BadExponent(usize),
    #[error("empty term at offset {0}")]
    EmptyTerm(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Factor {
    pub symbol: String,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FormalTerm {
    pub coef: i64,
    pub factors: Vec<Factor>,
}

impl FormalTerm {
    /// Factor list with adjacent repeats folded into exponents.
    pub fn key(&self) -> Vec<(String, u32)> {
        let mut out: Vec<(String, u32)> = Vec::new();
        for f in &self.factors {
            match out.last_mut() {
                Some(last) if last.0 == f.symbol => last.1 += f.exponent,
                _ => out.push((f.symbol.clone(), f.exponent)),
            }
        }
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.symbol.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct FormalExpr {
    pub terms: Vec<FormalTerm>,
}

impl FormalExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coef.rem_euclid(3) == 0)
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        Parser { src, pos: 0 }.expr()
    }

    pub fn negated(&self) -> Self {
        FormalExpr {
            terms: self
                .terms
                .iter()
                .map(|t| FormalTerm {
                    coef: -t.coef,
                    factors: t.factors.clone(),
                })
                .collect(),
        }
    }

    /// `self - other`, with identical factor sequences merged and zero terms dropped.
    pub fn minus(&self, other: &FormalExpr) -> FormalExpr {
        let mut all = self.terms.clone();
        all.extend(other.negated().terms);
        FormalExpr { terms: all }.collected()
    }

    pub fn collected(&self) -> FormalExpr {
        let mut out: Vec<(Vec<(String, u32)>, i64)> = Vec::new();
        for t in &self.terms {
            let k = t.key();
            match out.iter_mut().find(|(key, _)| *key == k) {
                Some(slot) => slot.1 += t.coef,
                None => out.push((k, t.coef)),
            }
        }
        FormalExpr {
            terms: out
                .into_iter()
                .map(|(k, c)| (k, ((c % 3) + 3 + 1) % 3 - 1))
                .filter(|(_, c)| *c != 0)
                .map(|(k, coef)| FormalTerm {
                    coef,
                    factors: k
                        .into_iter()
                        .map(|(symbol, exponent)| Factor { symbol, exponent })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.terms {
            for s in t.symbols() {
                if !out.iter().any(|o| o == s) {
                    out.push(s.to_string());
                }
            }
        }
        out
    }
}

impl fmt::Display for FormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .factors
            .iter()
            .map(|x| {
                if x.exponent == 1 {
                    x.symbol.clone()
                } else {
                    format!("{}^{}", x.symbol, x.exponent)
                }
            })
            .collect();
        let mag = self.coef.abs();
        match (mag, body.is_empty()) {
            (_, true) => write!(f, "{mag}"),
            (1, false) => write!(f, "{}", body.join(" ")),
            _ => write!(f, "{mag} {}", body.join(" ")),
        }
    }
}

impl fmt::Display for FormalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef < 0;
            match (i, neg) {
                (0, true) => write!(f, "- ")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown symbol {0:?}")]
pub struct UnknownSymbol(pub String);

/// Product of the factors in written order, times the coefficient.
pub fn evaluate_term(
    term: &FormalTerm,
    resolve: &dyn Fn(&str) -> Option<Element>,
) -> Result<Element, UnknownSymbol> {
    let mut acc = Element::scalar(F3::new(term.coef));
    for f in &term.factors {
        let v = resolve(&f.symbol).ok_or_else(|| UnknownSymbol(f.symbol.clone()))?;
        acc = multiply(&acc, &v.pow(f.exponent));
    }
    Ok(acc)
}

pub fn evaluate(
    expr: &FormalExpr,
    resolve: &dyn Fn(&str) -> Option<Element>,
) -> Result<Element, UnknownSymbol> {
    let mut out = Element::zero();
    for t in &expr.terms {
        out.add_scaled(F3::ONE, &evaluate_term(t, resolve)?);
    }
    Ok(out)
}

/// Resolver for the eight algebra generators only.
pub fn raw_generator(symbol: &str) -> Option<Element> {
    Gen::from_name(symbol).map(Element::generator)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '*' || c == '·' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Option<i64> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        (self.pos > start).then(|| self.src[start..self.pos].parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<FormalExpr, ParseError> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut sign = 1;
        let mut first = true;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some('-') | Some('−') => {
                    self.pos += self.peek().unwrap().len_utf8();
                    sign = -1;
                }
                Some(_) if first => {}
                Some(c) => return Err(ParseError::UnexpectedChar(c, self.pos)),
            }
            first = false;
            self.skip_ws();
            let t = self.term(sign)?;
            terms.push(t);
            sign = 1;
        }
        let mut e = FormalExpr { terms };
        // a bare "0" means the zero expression
        e.terms.retain(|t| t.coef != 0);
        Ok(e)
    }

    fn term(&mut self, sign: i64) -> Result<FormalTerm, ParseError> {
        let start = self.pos;
        let mut coef = sign;
        if let Some(n) = self.number() {
            coef *= n;
        }
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let s = self.pos;
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                    let symbol = self.src[s..self.pos].to_string();
                    let mut exponent = 1;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        exponent = self.number().ok_or(ParseError::BadExponent(self.pos))? as u32;
                    }
                    factors.push(Factor { symbol, exponent });
                }
                _ => break,
            }
        }
        if factors.is_empty() && self.pos == start {
            return Err(ParseError::EmptyTerm(start));
        }
        Ok(FormalTerm { coef, factors })
    }
}
