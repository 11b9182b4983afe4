//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite, strictly decreasing sum of terms `ω^β·c` with
//! `c ≥ 1`, where every exponent `β` is itself an ordinal in the same form.
//! The empty sum is `0`. Values are immutable and cheap to compare; they index
//! coordinates of [`LexVector`](crate::lexgroup::LexVector) and the levels of
//! ultrametric spaces.
//!
//! The textual notation uses decimal naturals, `w` for ω, `^`, `*` and `+`,
//! e.g. `w^2*3+w+5` or `w^(w+1)`. [`Ordinal`]'s `Display` is the canonical
//! printer and always parses back to the same value.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("{0} is not a limit ordinal")]
    NotALimit(Ordinal),
    #[error("cannot parse ordinal {input:?} at byte {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: &'static str,
    },
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

/// An ordinal below ε₀, stored in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    // exponents strictly decreasing, coefficients >= 1
    terms: Vec<Term>,
}

impl Ordinal {
    pub const fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        Self::monomial(Ordinal::zero(), n)
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    /// ω
    pub fn omega() -> Self {
        Self::monomial(Ordinal::one(), 1)
    }

    /// `ω^exponent · coefficient`; zero when `coefficient == 0`.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` terms, which must
    /// already be in Cantor normal form.
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, u64)>) -> Option<Self> {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        let decreasing = terms.windows(2).all(|w| w[0].exponent > w[1].exponent);
        if !decreasing || terms.iter().any(|t| t.coefficient == 0) {
            return None;
        }
        Some(Ordinal { terms })
    }

    /// The `(exponent, coefficient)` terms, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, u64)> {
        self.terms.iter().map(|t| (&t.exponent, t.coefficient))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// `Some(n)` when the ordinal is the natural number `n`.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    pub fn successor(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// `Some(β)` with `β + 1 = self`, or `None` for zero and limits.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a finite term");
        last.coefficient -= 1;
        if last.coefficient == 0 {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// Ordinal addition `self + other`. Terms of `self` below the leading
    /// exponent of `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent >= lead.exponent)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exponent == lead.exponent {
                last.coefficient = last
                    .coefficient
                    .checked_add(lead.coefficient)
                    .expect("ordinal coefficient overflow");
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// 0 for 0, 1 for successors, ω for every limit (all limits below ε₀
    /// have countable cofinality).
    pub fn cofinality(&self) -> Ordinal {
        if self.is_zero() {
            Ordinal::zero()
        } else if self.is_successor() {
            Ordinal::one()
        } else {
            Ordinal::omega()
        }
    }

    /// True iff the ordinal equals its own cofinality (0, 1 and ω here).
    pub fn is_regular(&self) -> bool {
        self.cofinality() == *self
    }

    /// The `k`-th element of the canonical fundamental sequence of a limit.
    ///
    /// For `head + ω^β·c` the sequence is `head + ω^β·(c−1) + s_k`, where
    /// `s_k = ω^γ·k` when `β = γ + 1` and `s_k = ω^{β_k}` when `β` is a limit.
    pub fn fundamental(&self, k: u64) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotALimit(self.clone()));
        }
        let (last, head) = self.terms.split_last().expect("limit is nonzero");
        let mut terms = head.to_vec();
        if last.coefficient > 1 {
            terms.push(Term {
                exponent: last.exponent.clone(),
                coefficient: last.coefficient - 1,
            });
        }
        let tail = match last.exponent.predecessor() {
            Some(gamma) => Ordinal::monomial(gamma, k),
            None => Ordinal::monomial(last.exponent.fundamental(k)?, 1),
        };
        // tail's exponent is strictly below the last exponent, so appending
        // keeps normal form
        terms.extend(tail.terms);
        Ok(Ordinal { terms })
    }

    /// The first `count` elements of the canonical fundamental sequence: a
    /// strictly increasing cofinal ω-sequence in `self`.
    pub fn cofinal_subset(&self, count: usize) -> Result<Vec<Ordinal>, OrdinalError> {
        (0..count as u64).map(|k| self.fundamental(k)).collect()
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
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
            match t.exponent.as_finite() {
                Some(1) => f.write_str("w")?,
                Some(k) => write!(f, "w^{k}")?,
                None if t.exponent == Ordinal::omega() => f.write_str("w^w")?,
                None => write!(f, "w^({})", t.exponent)?,
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
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &'static str) -> OrdinalError {
        OrdinalError::Parse {
            input: self.input.to_string(),
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn natural(&mut self) -> Result<Option<u64>, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        self.input[start..self.pos]
            .parse()
            .map(Some)
            .map_err(|_| self.error("natural number too large"))
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            acc = acc.add(&self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        let base = if let Some(n) = self.natural()? {
            if self.eat(b'^') {
                return Err(self.error("only w may be raised to a power"));
            }
            n
        } else if self.eat(b'w') {
            let exponent = if self.eat(b'^') {
                self.exponent()?
            } else {
                Ordinal::one()
            };
            let coefficient = self.coefficient()?;
            return Ok(Ordinal::monomial(exponent, coefficient));
        } else {
            return Err(self.error("expected a natural number or w"));
        };
        let coefficient = self.coefficient()?;
        base.checked_mul(coefficient)
            .map(Ordinal::nat)
            .ok_or_else(|| self.error("natural number too large"))
    }

    fn coefficient(&mut self) -> Result<u64, OrdinalError> {
        if self.eat(b'*') {
            self.natural()?.ok_or_else(|| self.error("expected coefficient"))
        } else {
            Ok(1)
        }
    }

    fn exponent(&mut self) -> Result<Ordinal, OrdinalError> {
        if let Some(n) = self.natural()? {
            Ok(Ordinal::nat(n))
        } else if self.eat(b'w') {
            Ok(Ordinal::omega())
        } else if self.eat(b'(') {
            let inner = self.sum()?;
            if !self.eat(b')') {
                return Err(self.error("expected )"));
            }
            Ok(inner)
        } else {
            Err(self.error("expected exponent"))
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser {
            input: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let value = parser.sum()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(value)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list such as `"w,w+1,w+2"`.
pub fn parse_list(s: &str) -> Result<Vec<Ordinal>, OrdinalError> {
    s.split(',').map(str::parse).collect()
}
