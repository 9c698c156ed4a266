//! Text form: `x3^25 - 6*x0^2*x1*x2^2*x3^19*x4 + x0^19*x4^6`.
//!
//! Terms are printed in descending term order joined by ` + ` / ` - `; unit
//! coefficients are omitted on non-constant terms. The parser accepts the
//! same grammar, with `−` (U+2212) as an alternative minus sign and
//! arbitrary whitespace.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};

use super::{Monomial, SparsePoly};
use crate::error::{Error, Result};

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Int(BigInt),
    Var(usize),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' | '−' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            'x' => {
                chars.next();
                let digits = take_digits(&mut chars);
                if digits.is_empty() {
                    return Err(Error::Parse(format!("variable without index in {s:?}")));
                }
                let idx = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable index {digits}")))?;
                out.push(Token::Var(idx));
            }
            c if c.is_ascii_digit() => {
                let digits = take_digits(&mut chars);
                let v: BigInt = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {digits}")))?;
                out.push(Token::Int(v));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

fn take_digits(chars: &mut std::iter::Peekable<std::str::Chars<'_>>) -> String {
    let mut d = String::new();
    while let Some(&c) = chars.peek() {
        if c.is_ascii_digit() {
            d.push(c);
            chars.next();
        } else {
            break;
        }
    }
    d
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// A parsed term before the variable count is known.
type RawTerm = (BigInt, Vec<(usize, u32)>);

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = BigInt::one();
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                sign = -sign;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, vars) = self.term()?;
            terms.push((sign * c, vars));
            match self.next() {
                None => break,
                Some(Token::Plus) => sign = BigInt::one(),
                Some(Token::Minus) => sign = -BigInt::one(),
                Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coeff = BigInt::one();
        let mut vars = Vec::new();
        loop {
            match self.next() {
                Some(Token::Int(v)) => coeff *= v,
                Some(Token::Var(i)) => {
                    let mut e = 1u32;
                    if self.peek() == Some(&Token::Caret) {
                        self.pos += 1;
                        match self.next() {
                            Some(Token::Int(v)) => {
                                e = u32::try_from(v)
                                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                            }
                            t => return Err(Error::Parse(format!("expected exponent, got {t:?}"))),
                        }
                    }
                    vars.push((i, e));
                }
                t => return Err(Error::Parse(format!("expected factor, got {t:?}"))),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coeff, vars))
    }
}

fn parse_raw(s: &str) -> Result<Vec<RawTerm>> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut parser = Parser { tokens, pos: 0 };
    parser.poly()
}

fn assemble(terms: Vec<RawTerm>, nvars: usize) -> Result<SparsePoly> {
    let mut p = SparsePoly::zero(nvars);
    for (c, vars) in terms {
        let mut exps = vec![0u32; nvars];
        for (i, e) in vars {
            if i >= nvars {
                return Err(Error::Parse(format!(
                    "variable x{i} out of range for {nvars} variables"
                )));
            }
            exps[i] += e;
        }
        p.add_term(Monomial::new(exps), c);
    }
    Ok(p)
}

impl SparsePoly {
    /// Parses the text form in `nvars` variables `x0..x{nvars-1}`.
    pub fn parse(s: &str, nvars: usize) -> Result<SparsePoly> {
        assemble(parse_raw(s)?, nvars)
    }

    /// Parses the text form, using one more than the largest variable index
    /// seen as the variable count.
    pub fn parse_infer(s: &str) -> Result<SparsePoly> {
        let raw = parse_raw(s)?;
        let nvars = raw
            .iter()
            .flat_map(|(_, v)| v.iter().map(|&(i, _)| i + 1))
            .max()
            .unwrap_or(1);
        assemble(raw, nvars)
    }
}
