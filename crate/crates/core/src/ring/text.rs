//! Canonical text and JSON forms of group-ring elements.
//!
//! Text: terms in ascending lexicographic exponent order joined by ` + ` /
//! ` - `, each term `coeff*var^e*...`, e.g. `-2*x^-1*d^3 + 1`. The zero
//! element prints as `0`. Parsing accepts any order and repeated terms;
//! printing a parsed canonical string reproduces it byte for byte.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::coefficient::{Coeff, CoefficientRing};
use super::element::{GroupRingElement, RingContext};

fn monomial_text(ctx: &RingContext, e: &[i64]) -> String {
    e.iter()
        .zip(ctx.names())
        .filter(|(k, _)| **k != 0)
        .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn term_text(ring: &CoefficientRing, mono: &str, c: &Coeff) -> String {
    let exact_one = |c: &Coeff| ring.is_exact() && ring.is_one(c);
    if mono.is_empty() {
        ring.format(c)
    } else if exact_one(c) {
        mono.to_string()
    } else if ring.is_exact() && ring.is_one(&ring.neg(c)) && ring.is_negative(c) {
        format!("-{mono}")
    } else {
        format!("{}*{mono}", ring.format(c))
    }
}

pub fn format(a: &GroupRingElement) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let ring = a.ring();
    let ctx = a.context();
    let mut out = String::new();
    for (i, (e, c)) in a.terms().iter().enumerate() {
        let mono = monomial_text(ctx, e);
        if i == 0 {
            out.push_str(&term_text(ring, &mono, c));
        } else if ring.is_negative(c) {
            out.push_str(" - ");
            out.push_str(&term_text(ring, &mono, &ring.neg(c)));
        } else {
            out.push_str(" + ");
            out.push_str(&term_text(ring, &mono, c));
        }
    }
    out
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a Arc<RingContext>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error { Error::Parse(format!("{msg} at byte {} of {:?}", self.pos, self.src)) }

    fn peek(&self) -> Option<char> { self.src[self.pos..].chars().next() }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<i64> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let digits = self.take_while(|c| c.is_ascii_digit());
        let v: i64 = digits.parse().map_err(|_| self.err("expected integer exponent"))?;
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self, e: &mut [i64], coeff: &mut Coeff) -> Result<()> {
        let ring = self.ctx.coefficients().clone();
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                let start = self.pos;
                let end = self.src[start..].find(')').ok_or_else(|| self.err("unclosed '('"))? + start + 1;
                self.pos = end;
                let c = ring.parse(&self.src[start..end])?;
                *coeff = ring.mul(coeff, &c);
            }
            Some(c) if c.is_ascii_digit() => {
                let lit = self.take_while(|c| c.is_ascii_digit() || c == '/' || c == '.' || c == 'e' || c == 'E');
                let c = ring.parse(lit)?;
                *coeff = ring.mul(coeff, &c);
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let idx = self.ctx.variable_index(name).ok_or_else(|| self.err(&format!("unknown variable {name:?}")))?;
                self.skip_ws();
                let k = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.skip_ws();
                    self.integer()?
                } else {
                    1
                };
                e[idx] += k;
            }
            _ => return Err(self.err("expected a coefficient or variable")),
        }
        Ok(())
    }

    fn term(&mut self, negative: bool) -> Result<(Vec<i64>, Coeff)> {
        let ring = self.ctx.coefficients().clone();
        let mut e = self.ctx.zero_exponent();
        let mut coeff = ring.one();
        self.factor(&mut e, &mut coeff)?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                self.factor(&mut e, &mut coeff)?;
            } else {
                break;
            }
        }
        if negative {
            coeff = ring.neg(&coeff);
        }
        Ok((e, coeff))
    }

    fn element(&mut self) -> Result<GroupRingElement> {
        let mut terms = Vec::new();
        self.skip_ws();
        let mut negative = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            negative = true;
        } else if self.peek() == Some('+') {
            self.pos += 1;
        }
        loop {
            terms.push(self.term(negative)?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
        GroupRingElement::from_terms(self.ctx, terms)
    }
}

pub fn parse(ctx: &Arc<RingContext>, s: &str) -> Result<GroupRingElement> {
    let mut p = Parser { src: s, pos: 0, ctx };
    p.element()
}

/// One entry of the JSON term list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Vec<i64>,
    pub coeff: String,
}

pub fn to_json_terms(a: &GroupRingElement) -> Vec<TermJson> {
    a.terms()
        .iter()
        .map(|(e, c)| TermJson { exponents: e.clone(), coeff: a.ring().format(c) })
        .collect()
}

pub fn from_json_terms(ctx: &Arc<RingContext>, terms: &[TermJson]) -> Result<GroupRingElement> {
    let ring = ctx.coefficients();
    let parsed = terms
        .iter()
        .map(|t| Ok((t.exponents.clone(), ring.parse(&t.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    GroupRingElement::from_terms(ctx, parsed)
}
