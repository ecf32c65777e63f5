//! Ordinals below ε₀ in Cantor normal form.
//!
//! An ordinal is a strictly descending sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with
//! positive integer coefficients. Exponents are ordinals themselves, so the
//! representation is a finite tree. Limit ordinals carry a fixed fundamental
//! sequence:
//!
//! - `(γ + ω^β)[n] = γ + ω^β[n]`
//! - `ω^(β+1)[n] = ω^β · n`
//! - `ω^λ[n] = ω^(λ[n])` for limit `λ`
//!
//! The textual notation is ASCII: `0`, `5`, `w`, `w*3`, `w^2*3+w+1`,
//! `w^(w+1)`, `w^w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Ordinal::zero(),
                coefficient: n,
            }],
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_power(&Ordinal::one())
    }

    /// `ω^a`.
    pub fn omega_power(a: &Ordinal) -> Self {
        Ordinal {
            terms: vec![Term {
                exponent: a.clone(),
                coefficient: 1,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs, validating
    /// canonical form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        for t in &terms {
            if t.coefficient == 0 {
                return Err(Error::Parse {
                    what: "ordinal",
                    input: format!("{:?}", terms),
                    reason: "zero coefficient".into(),
                });
            }
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(Error::Parse {
                    what: "ordinal",
                    input: format!("{:?}", terms),
                    reason: "exponents must strictly descend".into(),
                });
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(last) if last.exponent.is_zero() => {
                let mut pred = self.clone();
                let t = pred.terms.last_mut().unwrap();
                t.coefficient -= 1;
                if t.coefficient == 0 {
                    pred.terms.pop();
                }
                Kind::Successor(pred)
            }
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), Kind::Limit)
    }

    /// `self + 1`.
    pub fn succ(&self) -> Result<Ordinal> {
        self.add(&Ordinal::one())
    }

    /// Ordinal sum (not commutative: `1 + ω = ω`).
    pub fn add(&self, other: &Ordinal) -> Result<Ordinal> {
        let Some(lead) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        match terms.last_mut() {
            Some(t) if t.exponent == lead.exponent => {
                t.coefficient = t
                    .coefficient
                    .checked_add(lead.coefficient)
                    .ok_or_else(|| Error::Overflow(format!("adding {self} and {other}")))?;
                rest.next();
            }
            _ => {}
        }
        terms.extend(rest.cloned());
        Ok(Ordinal { terms })
    }

    /// `self · k` for a natural `k`.
    pub fn nat_mul(&self, k: u64) -> Result<Ordinal> {
        if k == 0 || self.is_zero() {
            return Ok(Ordinal::zero());
        }
        let mut out = self.clone();
        let lead = &mut out.terms[0];
        lead.coefficient = lead
            .coefficient
            .checked_mul(k)
            .ok_or_else(|| Error::Overflow(format!("multiplying {self} by {k}")))?;
        Ok(out)
    }

    /// The `n`-th element (`n ≥ 1`) of the fixed fundamental sequence.
    pub fn fundamental(&self, n: u64) -> Result<Ordinal> {
        if !self.is_limit() {
            return Err(Error::NotLimit(self.to_string()));
        }
        if n == 0 {
            return Err(Error::Precondition(
                "fundamental sequences are indexed from 1".into(),
            ));
        }
        let mut prefix = self.clone();
        let last = prefix.terms.pop().unwrap();
        if last.coefficient > 1 {
            prefix.terms.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let tail = match last.exponent.classify() {
            Kind::Successor(pred) => Ordinal::omega_power(&pred).nat_mul(n)?,
            Kind::Limit => Ordinal::omega_power(&last.exponent.fundamental(n)?),
            Kind::Zero => unreachable!("limit ordinals end in a positive exponent"),
        };
        prefix.add(&tail)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.exponent.cmp(&b.exponent) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match a.coefficient.cmp(&b.coefficient) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            f.write_str("w")?;
            if t.exponent != Ordinal::one() {
                f.write_str("^")?;
                if let Some(n) = t.exponent.as_nat() {
                    write!(f, "{n}")?;
                } else if t.exponent == Ordinal::omega() {
                    f.write_str("w")?;
                } else {
                    write!(f, "({})", t.exponent)?;
                }
            }
            if t.coefficient > 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser {
            input: s,
            chars: &chars,
            pos: 0,
        };
        let ord = p.ord()?;
        if p.pos != chars.len() {
            return Err(p.fail(format!("unexpected `{}`", chars[p.pos])));
        }
        Ok(ord)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const GRAMMAR_HINT: &str = "ord := 0 | term (+ term)*; term := nat | w | w^atom | term*nat; \
atom := nat | w | (ord); exponents strictly descending, e.g. w^2*3+w+1";

struct Parser<'a> {
    input: &'a str,
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn fail(&self, reason: String) -> Error {
        Error::Parse {
            what: "ordinal",
            input: self.input.to_string(),
            reason: format!("{reason} at offset {} ({GRAMMAR_HINT})", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail("expected a number".into()));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse()
            .map_err(|_| self.fail(format!("number `{text}` out of range")))
    }

    fn ord(&mut self) -> Result<Ordinal> {
        if self.peek() == Some('0')
            && !matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == '*')
        {
            self.pos += 1;
            return Ok(Ordinal::zero());
        }
        let mut terms = vec![self.term()?];
        while self.eat('+') {
            terms.push(self.term()?);
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err(self.fail(
                    "non-canonical sum: exponents must strictly descend".into(),
                ));
            }
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> Result<Term> {
        let mut term = if self.eat('w') {
            let exponent = if self.eat('^') {
                self.atom()?
            } else {
                Ordinal::one()
            };
            Term {
                exponent,
                coefficient: 1,
            }
        } else {
            Term {
                exponent: Ordinal::zero(),
                coefficient: self.nat()?,
            }
        };
        while self.eat('*') {
            let k = self.nat()?;
            term.coefficient = term
                .coefficient
                .checked_mul(k)
                .ok_or_else(|| self.fail("coefficient overflow".into()))?;
        }
        if term.coefficient == 0 {
            return Err(self.fail("zero coefficient".into()));
        }
        Ok(term)
    }

    fn atom(&mut self) -> Result<Ordinal> {
        if self.eat('w') {
            Ok(Ordinal::omega())
        } else if self.eat('(') {
            let o = self.ord()?;
            if !self.eat(')') {
                return Err(self.fail("expected `)`".into()));
            }
            Ok(o)
        } else {
            Ok(Ordinal::nat(self.nat()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        assert!(o("0").is_zero());
        let a = o("w^2*3+w+1");
        let t: Vec<(String, u64)> = a
            .terms()
            .iter()
            .map(|t| (t.exponent.to_string(), t.coefficient))
            .collect();
        assert_eq!(
            t,
            vec![("2".into(), 3), ("1".into(), 1), ("0".into(), 1)]
        );
        assert!("w+w".parse::<Ordinal>().is_err());
        assert!("1+w".parse::<Ordinal>().is_err());
        assert!("w*0".parse::<Ordinal>().is_err());
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("".parse::<Ordinal>().is_err());
        assert_eq!(o("w^(w+1)*2").to_string(), "w^(w+1)*2");
        assert_eq!(o("w^1").to_string(), "w");
        assert_eq!(o("10").to_string(), "10");
    }

    #[test]
    fn compares() {
        assert_eq!(o("w").cmp(&o("w")), Ordering::Equal);
        assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
        assert_eq!(o("w^2+1").cmp(&o("w^2+w")), Ordering::Less);
        assert!(o("w^w") > o("w^100*7+w"));
    }

    #[test]
    fn classifies() {
        assert_eq!(o("3").classify(), Kind::Successor(o("2")));
        assert_eq!(o("w").classify(), Kind::Limit);
        assert_eq!(o("w^2*3+w").classify(), Kind::Limit);
        assert_eq!(o("0").classify(), Kind::Zero);
        assert_eq!(o("w+1").classify(), Kind::Successor(o("w")));
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(o("w").fundamental(3).unwrap(), o("3"));
        assert_eq!(o("w^2").fundamental(2).unwrap(), o("w*2"));
        assert_eq!(o("w^w").fundamental(3).unwrap(), o("w^3"));
        assert_eq!(o("w*2").fundamental(4).unwrap(), o("w+4"));
        assert_eq!(o("w^2*3+w").fundamental(5).unwrap(), o("w^2*3+5"));
        assert!(o("w+1").fundamental(1).is_err());
    }

    #[test]
    fn arithmetic() {
        assert_eq!(o("1").add(&o("w")).unwrap(), o("w"));
        assert_eq!(o("w").add(&o("1")).unwrap(), o("w+1"));
        assert_eq!(o("w*2+3").add(&o("w^2")).unwrap(), o("w^2"));
        assert_eq!(o("w^2+w").add(&o("w*2+1")).unwrap(), o("w^2+w*3+1"));
        assert_eq!(Ordinal::omega_power(&o("2")), o("w^2"));
        assert_eq!(o("w*2+1").nat_mul(3).unwrap(), o("w*6+1"));
        assert!(Ordinal::nat(u64::MAX).add(&o("1")).is_err());
    }
}
