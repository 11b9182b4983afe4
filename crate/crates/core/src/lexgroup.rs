//! The lexicographically ordered groups `Z^α` and `Q^α`.
//!
//! Elements are finitely supported ordinal-indexed sequences of exact
//! scalars. The order compares two vectors at the least index where they
//! differ, so `r^λ > r^{λ+1}` and every positive multiple of a coarse unit
//! dominates every vector supported at finer indices. `Q^α` stands in for
//! `R^α`: comparisons are discontinuous, so scalars must be exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ordinals::Ordinal;

pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("index {index} is not below the index bound {bound}")]
    IndexOutOfBound { index: Ordinal, bound: Ordinal },
    #[error("vectors over {left} ({left_kind}) and {right} ({right_kind}) cannot be combined")]
    Mismatch {
        left: Ordinal,
        left_kind: ScalarKind,
        right: Ordinal,
        right_kind: ScalarKind,
    },
    #[error("scalar {value} at index {index} is not an integer")]
    NonInteger { index: Ordinal, value: Scalar },
    #[error("index {0} listed more than once")]
    DuplicateIndex(Ordinal),
    #[error("support indices must be strictly increasing (at {0})")]
    UnsortedSupport(Ordinal),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}

/// Which group the scalars live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScalarKind {
    #[serde(rename = "int")]
    Int,
    #[serde(rename = "rat")]
    Rat,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarKind::Int => "int",
            ScalarKind::Rat => "rat",
        })
    }
}

/// A finitely supported element of `Z^α` or `Q^α`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LexVector {
    index_bound: Ordinal,
    kind: ScalarKind,
    // keys < index_bound, values nonzero (and integral for Int)
    support: BTreeMap<Ordinal, Scalar>,
}

impl LexVector {
    pub fn zero(index_bound: Ordinal, kind: ScalarKind) -> Self {
        LexVector {
            index_bound,
            kind,
            support: BTreeMap::new(),
        }
    }

    /// The unit vector `r^λ` of `Z^α`: 1 at `λ`, 0 elsewhere.
    pub fn unit(lambda: Ordinal, alpha: Ordinal) -> Result<Self, LexError> {
        Self::new(alpha, ScalarKind::Int, [(lambda, Scalar::one())])
    }

    /// Builds a vector from `(index, scalar)` pairs. Zero scalars are dropped.
    pub fn new(
        index_bound: Ordinal,
        kind: ScalarKind,
        entries: impl IntoIterator<Item = (Ordinal, Scalar)>,
    ) -> Result<Self, LexError> {
        let mut support = BTreeMap::new();
        for (index, value) in entries {
            if index >= index_bound {
                return Err(LexError::IndexOutOfBound {
                    index,
                    bound: index_bound,
                });
            }
            if kind == ScalarKind::Int && !value.is_integer() {
                return Err(LexError::NonInteger { index, value });
            }
            if support.contains_key(&index) {
                return Err(LexError::DuplicateIndex(index));
            }
            if !value.is_zero() {
                support.insert(index, value);
            }
        }
        Ok(LexVector {
            index_bound,
            kind,
            support,
        })
    }

    /// Convenience constructor with integer scalars.
    pub fn from_ints(
        index_bound: Ordinal,
        kind: ScalarKind,
        entries: impl IntoIterator<Item = (Ordinal, i64)>,
    ) -> Result<Self, LexError> {
        Self::new(
            index_bound,
            kind,
            entries
                .into_iter()
                .map(|(i, v)| (i, Scalar::from_integer(BigInt::from(v)))),
        )
    }

    pub fn index_bound(&self) -> &Ordinal {
        &self.index_bound
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    /// Nonzero entries in increasing index order.
    pub fn support(&self) -> impl Iterator<Item = (&Ordinal, &Scalar)> {
        self.support.iter()
    }

    pub fn get(&self, index: &Ordinal) -> Scalar {
        self.support.get(index).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Least index and its scalar.
    pub fn leading(&self) -> Option<(&Ordinal, &Scalar)> {
        self.support.iter().next()
    }

    /// Sign of the leading scalar; `Equal` for zero.
    pub fn signum(&self) -> Ordering {
        match self.leading() {
            None => Ordering::Equal,
            Some((_, v)) if v.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// `Some(λ)` when the vector is exactly the unit `r^λ`.
    pub fn unit_index(&self) -> Option<&Ordinal> {
        match self.leading() {
            Some((index, v)) if self.support.len() == 1 && v.is_one() => Some(index),
            _ => None,
        }
    }

    fn check_compatible(&self, other: &LexVector) -> Result<(), LexError> {
        if self.index_bound != other.index_bound || self.kind != other.kind {
            return Err(LexError::Mismatch {
                left: self.index_bound.clone(),
                left_kind: self.kind,
                right: other.index_bound.clone(),
                right_kind: other.kind,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LexVector) -> Result<LexVector, LexError> {
        self.check_compatible(other)?;
        let mut support = self.support.clone();
        for (index, value) in &other.support {
            let entry = support.entry(index.clone()).or_insert_with(Scalar::zero);
            *entry += value;
            if entry.is_zero() {
                support.remove(index);
            }
        }
        Ok(LexVector {
            index_bound: self.index_bound.clone(),
            kind: self.kind,
            support,
        })
    }

    pub fn neg(&self) -> LexVector {
        LexVector {
            index_bound: self.index_bound.clone(),
            kind: self.kind,
            support: self
                .support
                .iter()
                .map(|(i, v)| (i.clone(), -v))
                .collect(),
        }
    }

    pub fn sub(&self, other: &LexVector) -> Result<LexVector, LexError> {
        self.add(&other.neg())
    }

    /// `|x|` in the ordered group.
    pub fn abs(&self) -> LexVector {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Least index where the two vectors differ, `None` when equal.
    pub fn first_diff_index(&self, other: &LexVector) -> Result<Option<Ordinal>, LexError> {
        self.check_compatible(other)?;
        Ok(self.first_diff(other).map(|(index, _)| index.clone()))
    }

    // merge walk over both supports; returns the first differing index and
    // the sign of self - other there
    fn first_diff<'a>(&'a self, other: &'a LexVector) -> Option<(&'a Ordinal, Ordering)> {
        let mut left = self.support.iter().peekable();
        let mut right = other.support.iter().peekable();
        loop {
            match (left.peek(), right.peek()) {
                (None, None) => return None,
                (Some((i, v)), None) => return Some((i, sign(v))),
                (None, Some((j, w))) => return Some((j, sign(w).reverse())),
                (Some((i, v)), Some((j, w))) => match i.cmp(j) {
                    Ordering::Less => return Some((i, sign(v))),
                    Ordering::Greater => return Some((j, sign(w).reverse())),
                    Ordering::Equal => {
                        if v != w {
                            return Some((i, v.cmp(w)));
                        }
                        left.next();
                        right.next();
                    }
                },
            }
        }
    }

    /// Lexicographic comparison.
    pub fn lex_cmp(&self, other: &LexVector) -> Result<Ordering, LexError> {
        self.check_compatible(other)?;
        Ok(self
            .first_diff(other)
            .map_or(Ordering::Equal, |(_, ord)| ord))
    }

    /// Re-reads the vector in another scalar kind. Widening `Int → Rat` never
    /// fails; narrowing requires integral scalars.
    pub fn to_kind(&self, kind: ScalarKind) -> Result<LexVector, LexError> {
        if kind == ScalarKind::Int {
            if let Some((index, value)) = self.support.iter().find(|(_, v)| !v.is_integer()) {
                return Err(LexError::NonInteger {
                    index: index.clone(),
                    value: value.clone(),
                });
            }
        }
        Ok(LexVector {
            kind,
            ..self.clone()
        })
    }
}

fn sign(v: &Scalar) -> Ordering {
    if v.is_positive() {
        Ordering::Greater
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl PartialOrd for LexVector {
    /// `None` for vectors of different groups.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.lex_cmp(other).ok()
    }
}

impl fmt::Debug for LexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, v)) in self.support.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}↦{v}")?;
        }
        write!(f, "}}/{}:{}", self.index_bound, self.kind)
    }
}

/// Serialized form: `[index, scalar]` string pairs ascending by index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawLexVector {
    pub index_bound: Ordinal,
    pub scalar_kind: ScalarKind,
    pub support: Vec<(Ordinal, String)>,
}

impl RawLexVector {
    pub(crate) fn decode_support(
        index_bound: Ordinal,
        kind: ScalarKind,
        support: Vec<(Ordinal, String)>,
    ) -> Result<LexVector, LexError> {
        for pair in support.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(LexError::UnsortedSupport(pair[1].0.clone()));
            }
        }
        let entries = support
            .into_iter()
            .map(|(i, s)| {
                s.trim()
                    .parse::<Scalar>()
                    .map(|v| (i, v))
                    .map_err(|_| LexError::BadScalar(s))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LexVector::new(index_bound, kind, entries)
    }

    pub(crate) fn encode_support(v: &LexVector) -> Vec<(Ordinal, String)> {
        v.support()
            .map(|(i, s)| (i.clone(), s.to_string()))
            .collect()
    }
}

impl Serialize for LexVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawLexVector {
            index_bound: self.index_bound.clone(),
            scalar_kind: self.kind,
            support: RawLexVector::encode_support(self),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LexVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawLexVector::deserialize(deserializer)?;
        RawLexVector::decode_support(raw.index_bound, raw.scalar_kind, raw.support)
            .map_err(serde::de::Error::custom)
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn v(bound: &str, entries: &[(&str, i64)]) -> LexVector {
        LexVector::from_ints(o(bound), ScalarKind::Int, entries.iter().map(|&(i, x)| (o(i), x)))
            .unwrap()
    }

    fn r(lambda: &str) -> LexVector {
        LexVector::unit(o(lambda), o("w")).unwrap()
    }

    #[test]
    fn unit_vectors() {
        let r0 = LexVector::unit(o("0"), o("w")).unwrap();
        assert_eq!(r0.get(&o("0")), Scalar::one());
        assert_eq!(r0.support().count(), 1);
        assert_eq!(r0.unit_index(), Some(&o("0")));
        let rw = LexVector::unit(o("w"), o("w*2")).unwrap();
        assert_eq!(rw.get(&o("w")), Scalar::one());
        assert_eq!(
            LexVector::unit(o("w"), o("w")),
            Err(LexError::IndexOutOfBound {
                index: o("w"),
                bound: o("w")
            })
        );
    }

    #[test]
    fn add_and_neg_examples() {
        let sum = v("w", &[("0", 1)]).add(&v("w", &[("0", -1)])).unwrap();
        assert!(sum.is_zero());
        assert_eq!(
            v("w", &[("1", 2)]).add(&v("w", &[("2", 5)])).unwrap(),
            v("w", &[("1", 2), ("2", 5)])
        );
        assert_eq!(
            v("w*2", &[("0", 3), ("w", -1)]).neg(),
            v("w*2", &[("0", -3), ("w", 1)])
        );
        assert!(matches!(
            v("w", &[]).add(&v("w*2", &[])),
            Err(LexError::Mismatch { .. })
        ));
        let rat = LexVector::zero(o("w"), ScalarKind::Rat);
        assert!(matches!(v("w", &[]).add(&rat), Err(LexError::Mismatch { .. })));
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(r("1").lex_cmp(&r("0")).unwrap(), Ordering::Less);
        assert_eq!(
            v("w", &[("0", 1), ("5", -3)])
                .lex_cmp(&v("w", &[("0", 1), ("5", -2)]))
                .unwrap(),
            Ordering::Less
        );
        let zero = LexVector::zero(o("w"), ScalarKind::Int);
        assert_eq!(zero.lex_cmp(&zero).unwrap(), Ordering::Equal);
        // 2·r^1 < r^0
        assert!(v("w", &[("1", 2)]) < r("0"));
    }

    #[test]
    fn first_diff_examples() {
        assert_eq!(r("2").first_diff_index(&r("2")).unwrap(), None);
        assert_eq!(
            v("w", &[("1", 2)])
                .first_diff_index(&v("w", &[("1", 2), ("2", 5)]))
                .unwrap(),
            Some(o("2"))
        );
        assert_eq!(r("0").first_diff_index(&r("3")).unwrap(), Some(o("0")));
    }

    #[test]
    fn construction_rejects_bad_entries() {
        assert!(matches!(
            LexVector::new(o("w"), ScalarKind::Int, [(o("0"), Scalar::new(1.into(), 2.into()))]),
            Err(LexError::NonInteger { .. })
        ));
        assert!(matches!(
            LexVector::from_ints(o("w"), ScalarKind::Int, [(o("1"), 1), (o("1"), 2)]),
            Err(LexError::DuplicateIndex(_))
        ));
        let dropped = LexVector::from_ints(o("w"), ScalarKind::Int, [(o("1"), 0)]).unwrap();
        assert!(dropped.is_zero());
    }

    #[test]
    fn kind_conversion() {
        let half = LexVector::new(o("w"), ScalarKind::Rat, [(o("0"), Scalar::new(1.into(), 2.into()))])
            .unwrap();
        assert!(half.to_kind(ScalarKind::Int).is_err());
        let widened = r("3").to_kind(ScalarKind::Rat).unwrap();
        assert_eq!(widened.kind(), ScalarKind::Rat);
        assert_eq!(widened.unit_index(), Some(&o("3")));
    }

    #[test]
    fn json_format() {
        let x = LexVector::new(
            o("w*2"),
            ScalarKind::Rat,
            [(o("0"), Scalar::new(3.into(), 2.into())), (o("w+1"), Scalar::from_integer((-1).into()))],
        )
        .unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(
            json,
            r#"{"index_bound":"w*2","scalar_kind":"rat","support":[["0","3/2"],["w+1","-1"]]}"#
        );
        assert_eq!(serde_json::from_str::<LexVector>(&json).unwrap(), x);
        let unsorted = r#"{"index_bound":"w","scalar_kind":"int","support":[["2","1"],["1","1"]]}"#;
        assert!(serde_json::from_str::<LexVector>(unsorted).is_err());
        let outside = r#"{"index_bound":"w","scalar_kind":"int","support":[["w","1"]]}"#;
        assert!(serde_json::from_str::<LexVector>(outside).is_err());
    }

    #[test]
    fn units_decrease_with_index() {
        let bound = o("w^2");
        let levels = [o("0"), o("1"), o("5"), o("w"), o("w+1"), o("w*3")];
        for pair in levels.windows(2) {
            let coarse = LexVector::unit(pair[0].clone(), bound.clone()).unwrap();
            let fine = LexVector::unit(pair[1].clone(), bound.clone()).unwrap();
            assert!(fine < coarse);
        }
    }

    proptest! {
        #[test]
        fn translation_invariance(
            x in strategy::vector(ScalarKind::Rat),
            y in strategy::vector(ScalarKind::Rat),
            z in strategy::vector(ScalarKind::Rat),
        ) {
            let lhs = x.add(&z).unwrap();
            let rhs = y.add(&z).unwrap();
            prop_assert_eq!(x.lex_cmp(&y).unwrap(), lhs.lex_cmp(&rhs).unwrap());
        }

        #[test]
        fn compare_matches_sign_of_difference(
            x in strategy::vector(ScalarKind::Int),
            y in strategy::vector(ScalarKind::Int),
        ) {
            let diff = x.sub(&y).unwrap();
            let ord = x.lex_cmp(&y).unwrap();
            match x.first_diff_index(&y).unwrap() {
                None => prop_assert_eq!(ord, Ordering::Equal),
                Some(index) => {
                    prop_assert_eq!(diff.leading().map(|(i, _)| i.clone()), Some(index.clone()));
                    prop_assert_eq!(sign(&diff.get(&index)), ord);
                }
            }
            prop_assert_eq!(diff.signum(), ord);
        }

        #[test]
        fn group_laws(x in strategy::vector(ScalarKind::Rat), y in strategy::vector(ScalarKind::Rat)) {
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert!(x.add(&x.neg()).unwrap().is_zero());
            prop_assert!(x.abs().signum() != Ordering::Less);
        }
    }
}
