//! Finite metric spaces valued in `Z^α` / `Q^α`.
//!
//! A [`FiniteLexMetricSpace`] is a symmetric distance table with a zero
//! diagonal. The metric axioms are *not* type invariants: a table can be
//! built, inspected and rejected by [`FiniteLexMetricSpace::verify_metric_axioms`].
//!
//! The two constructions here are the reduction of any such metric to the
//! ultrametric `δ(x,y) = r^{n_xy}`, where `n_xy` is the first level at which
//! `d(x,y)` is nonzero, and the monotone relabeling of those levels onto a
//! cofinal list of indices.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lexgroup::{LexError, LexVector, RawLexVector, ScalarKind};
use crate::ordinals::Ordinal;
use crate::topology::{FiniteTopology, PointSet, TopologyError, MAX_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    NoPoints,
    #[error("{0} points exceed the bound of {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("the index bound of a metric space must be positive")]
    ZeroIndexBound,
    #[error("duplicate point id {0:?}")]
    DuplicatePoint(String),
    #[error("invalid point id {0:?}")]
    BadPointId(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("distance {0}|{1} is given more than once")]
    DuplicatePair(String, String),
    #[error("distance {0}|{1} is missing")]
    MissingPair(String, String),
    #[error("distance key {0:?} is not of the form a|b")]
    BadPairKey(String),
    #[error("distance {0}|{0} must be zero")]
    NonzeroDiagonal(String),
    #[error("distance entry does not live in the space's group: {0}")]
    Group(#[from] LexError),
    #[error("radius must be positive")]
    NonpositiveRadius,
    #[error("the distance table violates the metric axioms ({0} violations)")]
    InvalidMetric(usize),
    #[error("the space is not an ultrametric with unit distances")]
    NotUltrametric,
    #[error("level {0} exceeds the largest cofinal index")]
    LNotCofinalEnough(Ordinal),
    #[error("cofinal list must be nonempty, strictly increasing and below the index bound")]
    BadCofinalList,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// One failed axiom with its witnessing points (by id).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Nonnegativity { x: String, y: String },
    Identity { x: String, y: String },
    Symmetry { x: String, y: String },
    /// `d(x,y) > d(x,via) + d(via,y)`.
    Triangle { x: String, via: String, y: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// A ball together with every `(center, level)` that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisBall {
    pub members: PointSet,
    pub provenance: Vec<(usize, Ordinal)>,
}

/// A finite point set with a symmetric `LexVector` distance table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteLexMetricSpace {
    alpha: Ordinal,
    kind: ScalarKind,
    // sorted lexicographically
    points: Vec<String>,
    // row-major n × n, symmetric, zero diagonal
    dist: Vec<LexVector>,
}

impl FiniteLexMetricSpace {
    /// Builds a space from distances on unordered pairs. Every pair of
    /// distinct points must be given exactly once, in either orientation.
    pub fn new(
        alpha: Ordinal,
        kind: ScalarKind,
        points: impl IntoIterator<Item = String>,
        pairs: impl IntoIterator<Item = ((String, String), LexVector)>,
    ) -> Result<Self, MetricError> {
        if alpha.is_zero() {
            return Err(MetricError::ZeroIndexBound);
        }
        let mut points: Vec<String> = points.into_iter().collect();
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(MetricError::DuplicatePoint(w[0].clone()));
        }
        if let Some(bad) = points.iter().find(|p| p.is_empty() || p.contains('|')) {
            return Err(MetricError::BadPointId(bad.clone()));
        }
        if points.is_empty() {
            return Err(MetricError::NoPoints);
        }
        if points.len() > MAX_POINTS {
            return Err(MetricError::TooManyPoints(points.len()));
        }
        let n = points.len();
        let zero = LexVector::zero(alpha.clone(), kind);
        let mut dist: Vec<Option<LexVector>> = vec![None; n * n];
        let index_of = |p: &str| {
            points
                .binary_search_by(|q| q.as_str().cmp(p))
                .map_err(|_| MetricError::UnknownPoint(p.to_string()))
        };
        for ((a, b), v) in pairs {
            let (i, j) = (index_of(&a)?, index_of(&b)?);
            if v.index_bound() != &alpha || v.kind() != kind {
                // reuse the group's mismatch report
                zero.add(&v)?;
            }
            if i == j {
                if !v.is_zero() {
                    return Err(MetricError::NonzeroDiagonal(a));
                }
                continue;
            }
            if dist[i * n + j].is_some() {
                return Err(MetricError::DuplicatePair(a, b));
            }
            dist[i * n + j] = Some(v.clone());
            dist[j * n + i] = Some(v);
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                match dist[i * n + j].take() {
                    Some(v) => table.push(v),
                    None if i == j => table.push(zero.clone()),
                    None => {
                        return Err(MetricError::MissingPair(
                            points[i.min(j)].clone(),
                            points[i.max(j)].clone(),
                        ))
                    }
                }
            }
        }
        Ok(FiniteLexMetricSpace {
            alpha,
            kind,
            points,
            dist: table,
        })
    }

    /// Builds a space on points indexed `0..n` with ids given by `ids`
    /// (already sorted) and a distance function on index pairs `i < j`.
    pub fn from_fn(
        alpha: Ordinal,
        kind: ScalarKind,
        ids: Vec<String>,
        mut distance: impl FnMut(usize, usize) -> LexVector,
    ) -> Result<Self, MetricError> {
        let n = ids.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push(((ids[i].clone(), ids[j].clone()), distance(i, j)));
            }
        }
        let space = Self::new(alpha, kind, ids.clone(), pairs)?;
        if space.points != ids {
            return Err(MetricError::BadPointId("ids must be sorted".into()));
        }
        Ok(space)
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.binary_search_by(|q| q.as_str().cmp(id)).ok()
    }

    pub fn dist(&self, i: usize, j: usize) -> &LexVector {
        &self.dist[i * self.len() + j]
    }

    /// Copy with `d(i,j) = d(j,i) = value`, without any axiom check.
    pub fn with_distance(&self, i: usize, j: usize, value: LexVector) -> Result<Self, MetricError> {
        if value.index_bound() != &self.alpha || value.kind() != self.kind {
            LexVector::zero(self.alpha.clone(), self.kind).add(&value)?;
        }
        if i == j && !value.is_zero() {
            return Err(MetricError::NonzeroDiagonal(self.points[i].clone()));
        }
        let n = self.len();
        let mut out = self.clone();
        out.dist[i * n + j] = value.clone();
        out.dist[j * n + i] = value;
        Ok(out)
    }

    fn cmp(&self, a: &LexVector, b: &LexVector) -> Ordering {
        a.lex_cmp(b).expect("table entries share one group")
    }

    pub fn verify_metric_axioms(&self) -> AxiomReport {
        let n = self.len();
        let id = |i: usize| self.points[i].clone();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let d = self.dist(x, y);
                if d.signum() == Ordering::Less {
                    violations.push(Violation::Nonnegativity { x: id(x), y: id(y) });
                }
                if x != y && d.is_zero() {
                    violations.push(Violation::Identity { x: id(x), y: id(y) });
                }
                if d != self.dist(y, x) {
                    violations.push(Violation::Symmetry { x: id(x), y: id(y) });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for via in 0..n {
                    let around = self
                        .dist(x, via)
                        .add(self.dist(via, y))
                        .expect("table entries share one group");
                    if self.cmp(self.dist(x, y), &around) == Ordering::Greater {
                        violations.push(Violation::Triangle {
                            x: id(x),
                            via: id(via),
                            y: id(y),
                        });
                    }
                }
            }
        }
        AxiomReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    fn require_metric(&self) -> Result<(), MetricError> {
        let report = self.verify_metric_axioms();
        if report.valid {
            Ok(())
        } else {
            Err(MetricError::InvalidMetric(report.violations.len()))
        }
    }

    /// Strong triangle inequality `d(x,y) ≤ max(d(x,z), d(z,y))`.
    pub fn is_ultrametric(&self) -> Result<bool, MetricError> {
        self.require_metric()?;
        let n = self.len();
        Ok((0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let a = self.dist(x, z);
                    let b = self.dist(z, y);
                    let max = if self.cmp(a, b) == Ordering::Less { b } else { a };
                    self.cmp(self.dist(x, y), max) != Ordering::Greater
                })
            })
        }))
    }

    /// `n_xy`: the first level where `d(x,y)` is nonzero; `None` on the diagonal.
    pub fn level(&self, i: usize, j: usize) -> Option<&Ordinal> {
        self.dist(i, j).leading().map(|(index, _)| index)
    }

    /// `{y : d(x,y) < r}`.
    pub fn ball(&self, x: usize, radius: &LexVector) -> Result<PointSet, MetricError> {
        let radius = radius.to_kind(self.kind)?;
        if radius.index_bound() != &self.alpha {
            LexVector::zero(self.alpha.clone(), self.kind).add(&radius)?;
        }
        if !radius.is_positive() {
            return Err(MetricError::NonpositiveRadius);
        }
        Ok(PointSet::from_points((0..self.len()).filter(|&y| {
            self.cmp(self.dist(x, y), &radius) == Ordering::Less
        })))
    }

    /// `ball(x, r^λ)`; `λ` must be below `alpha`.
    pub fn unit_ball(&self, x: usize, level: &Ordinal) -> Result<PointSet, MetricError> {
        self.ball(x, &LexVector::unit(level.clone(), self.alpha.clone())?)
    }

    /// Levels at which some unit ball can change: `0`, every support index of
    /// every distance, and their successors, restricted to `[0, alpha)`.
    pub fn test_levels(&self) -> Vec<Ordinal> {
        let mut levels = BTreeSet::from([Ordinal::zero()]);
        for d in &self.dist {
            for (index, _) in d.support() {
                levels.insert(index.clone());
                levels.insert(index.successor());
            }
        }
        levels.into_iter().filter(|l| l < &self.alpha).collect()
    }

    /// The unit balls at [`Self::test_levels`], deduplicated, ascending by
    /// member mask.
    pub fn ball_basis(&self) -> Result<Vec<BasisBall>, MetricError> {
        self.require_metric()?;
        let mut balls: BTreeMap<PointSet, Vec<(usize, Ordinal)>> = BTreeMap::new();
        for level in self.test_levels() {
            for x in 0..self.len() {
                let members = self.unit_ball(x, &level)?;
                balls.entry(members).or_default().push((x, level.clone()));
            }
        }
        Ok(balls
            .into_iter()
            .map(|(members, provenance)| BasisBall {
                members,
                provenance,
            })
            .collect())
    }

    /// Topology generated by [`Self::ball_basis`].
    pub fn ball_topology(&self) -> Result<FiniteTopology, MetricError> {
        let basis = self.ball_basis()?;
        Ok(FiniteTopology::from_basis(self.len(), basis.into_iter().map(|b| b.members))?.topology)
    }

    /// Topology generated by the balls of every radius, which on a finite
    /// space reduces to the distinct positive distances plus one radius above
    /// all of them.
    pub fn all_radii_topology(&self) -> Result<FiniteTopology, MetricError> {
        self.require_metric()?;
        let n = self.len();
        let mut family = vec![PointSet::full(n)];
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    family.push(self.ball(x, self.dist(x, y))?);
                }
            }
        }
        if n == 1 {
            family.push(PointSet::singleton(0));
        }
        Ok(FiniteTopology::from_basis(n, family)?.topology)
    }

    /// Replaces every distance by the unit vector at its first nonzero level.
    /// The result is an integer-valued ultrametric over the same `alpha`.
    pub fn ultrametrize(&self) -> Result<FiniteLexMetricSpace, MetricError> {
        self.require_metric()?;
        let n = self.len();
        let mut dist = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                dist.push(match self.level(x, y) {
                    None => LexVector::zero(self.alpha.clone(), ScalarKind::Int),
                    Some(level) => LexVector::unit(level.clone(), self.alpha.clone())?,
                });
            }
        }
        Ok(FiniteLexMetricSpace {
            alpha: self.alpha.clone(),
            kind: ScalarKind::Int,
            points: self.points.clone(),
            dist,
        })
    }

    /// Whether every off-diagonal distance is a unit vector and the strong
    /// triangle inequality holds.
    pub fn is_unit_ultrametric(&self) -> bool {
        let n = self.len();
        let units = (0..n).all(|x| (0..n).all(|y| x == y || self.dist(x, y).unit_index().is_some()));
        units && self.is_ultrametric().unwrap_or(false)
    }

    /// Re-indexes a unit ultrametric over `|L|`: each level `n_xy` moves to
    /// the position in `cofinal` of the least element `≥ n_xy`.
    pub fn cofinal_reduce(&self, cofinal: &[Ordinal]) -> Result<FiniteLexMetricSpace, MetricError> {
        if !self.is_unit_ultrametric() {
            return Err(MetricError::NotUltrametric);
        }
        let increasing = cofinal.windows(2).all(|w| w[0] < w[1]);
        match cofinal.last() {
            Some(last) if increasing && last < &self.alpha => {}
            _ => return Err(MetricError::BadCofinalList),
        }
        let bound = Ordinal::nat(cofinal.len() as u64);
        let n = self.len();
        let mut dist = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                dist.push(match self.level(x, y) {
                    None => LexVector::zero(bound.clone(), ScalarKind::Int),
                    Some(level) => {
                        let position = cofinal.partition_point(|m| m < level);
                        if position == cofinal.len() {
                            return Err(MetricError::LNotCofinalEnough(level.clone()));
                        }
                        LexVector::unit(Ordinal::nat(position as u64), bound.clone())?
                    }
                });
            }
        }
        Ok(FiniteLexMetricSpace {
            alpha: bound,
            kind: ScalarKind::Int,
            points: self.points.clone(),
            dist,
        })
    }
}

impl std::fmt::Debug for FiniteLexMetricSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut map = f.debug_map();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                map.entry(
                    &format_args!("{}|{}", self.points[i], self.points[j]),
                    self.dist(i, j),
                );
            }
        }
        map.finish()
    }
}

/// A distance entry in the space JSON: either a full serialized vector or
/// only its support pairs, in which case the space's group is implied.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawDistance {
    Full(RawLexVector),
    Support(Vec<(Ordinal, String)>),
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    alpha: Ordinal,
    scalar: ScalarKind,
    points: Vec<String>,
    dist: BTreeMap<String, serde_json::Value>,
}

impl Serialize for FiniteLexMetricSpace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut dist = BTreeMap::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let value = serde_json::to_value(self.dist(i, j)).map_err(serde::ser::Error::custom)?;
                dist.insert(format!("{}|{}", self.points[i], self.points[j]), value);
            }
        }
        RawSpace {
            alpha: self.alpha.clone(),
            scalar: self.kind,
            points: self.points.clone(),
            dist,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteLexMetricSpace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawSpace::deserialize(deserializer)?;
        let mut pairs = Vec::with_capacity(raw.dist.len());
        for (key, value) in raw.dist {
            let (a, b) = key
                .split_once('|')
                .ok_or_else(|| D::Error::custom(MetricError::BadPairKey(key.clone())))?;
            let vector = match serde_json::from_value::<RawDistance>(value).map_err(D::Error::custom)? {
                RawDistance::Full(v) => {
                    RawLexVector::decode_support(v.index_bound, v.scalar_kind, v.support)
                }
                RawDistance::Support(s) => {
                    RawLexVector::decode_support(raw.alpha.clone(), raw.scalar, s)
                }
            }
            .map_err(D::Error::custom)?;
            pairs.push(((a.to_string(), b.to_string()), vector));
        }
        FiniteLexMetricSpace::new(raw.alpha, raw.scalar, raw.points, pairs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexgroup::Scalar;
    use num_bigint::BigInt;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn vec_w(entries: &[(&str, i64)]) -> LexVector {
        LexVector::from_ints(o("w"), ScalarKind::Int, entries.iter().map(|&(i, v)| (o(i), v))).unwrap()
    }

    fn r(level: &str) -> LexVector {
        LexVector::unit(o(level), o("w")).unwrap()
    }

    fn space3(ab: LexVector, ac: LexVector, bc: LexVector) -> FiniteLexMetricSpace {
        let p = |a: &str, b: &str| (a.to_string(), b.to_string());
        FiniteLexMetricSpace::new(
            o("w"),
            ab.kind(),
            ["a", "b", "c"].map(String::from),
            [(p("a", "b"), ab), (p("a", "c"), ac), (p("b", "c"), bc)],
        )
        .unwrap()
    }

    fn set(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    /// d(a,b)={1↦2}, d(a,c)={2↦5}, d(b,c)={1↦2,2↦5}
    fn running_example() -> FiniteLexMetricSpace {
        space3(vec_w(&[("1", 2)]), vec_w(&[("2", 5)]), vec_w(&[("1", 2), ("2", 5)]))
    }

    #[test]
    fn axiom_examples() {
        let s = space3(r("1"), r("2"), r("1"));
        assert!(s.verify_metric_axioms().valid);

        let bad = space3(r("0"), r("1"), r("1"));
        let report = bad.verify_metric_axioms();
        assert!(!report.valid);
        assert!(report.violations.contains(&Violation::Triangle {
            x: "a".into(),
            via: "c".into(),
            y: "b".into()
        }));

        let one = FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ["x".to_string()], []).unwrap();
        assert!(one.verify_metric_axioms().valid);

        let negative = space3(vec_w(&[("0", -1)]), r("0"), r("0"));
        assert!(negative
            .verify_metric_axioms()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Nonnegativity { .. })));
        let zero = space3(vec_w(&[]), r("0"), r("0"));
        assert!(zero
            .verify_metric_axioms()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Identity { .. })));
    }

    #[test]
    fn construction_errors() {
        let p = |a: &str, b: &str| (a.to_string(), b.to_string());
        let ids = || ["a", "b"].map(String::from);
        assert_eq!(
            FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ids(), []),
            Err(MetricError::MissingPair("a".into(), "b".into()))
        );
        assert_eq!(
            FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ids(), [(p("a", "b"), r("0")), (p("b", "a"), r("0"))]),
            Err(MetricError::DuplicatePair("b".into(), "a".into()))
        );
        assert!(matches!(
            FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ids(), [(p("a", "z"), r("0"))]),
            Err(MetricError::UnknownPoint(_))
        ));
        assert!(matches!(
            FiniteLexMetricSpace::new(o("w*2"), ScalarKind::Int, ids(), [(p("a", "b"), r("0"))]),
            Err(MetricError::Group(LexError::Mismatch { .. }))
        ));
        assert_eq!(
            FiniteLexMetricSpace::new(o("0"), ScalarKind::Int, ids(), []),
            Err(MetricError::ZeroIndexBound)
        );
        assert_eq!(
            FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ["a|b".to_string()], []),
            Err(MetricError::BadPointId("a|b".into()))
        );
    }

    #[test]
    fn ultrametric_examples() {
        assert!(running_example().ultrametrize().unwrap().is_ultrametric().unwrap());
        assert!(space3(r("0"), r("0"), r("0")).is_ultrametric().unwrap());
        let line = space3(vec_w(&[("0", 1)]), vec_w(&[("0", 2)]), vec_w(&[("0", 1)]));
        assert!(line.verify_metric_axioms().valid);
        assert!(!line.is_ultrametric().unwrap());
        let bad = space3(r("0"), r("1"), r("1"));
        assert_eq!(bad.is_ultrametric(), Err(MetricError::InvalidMetric(2)));
    }

    #[test]
    fn ultrametrize_examples() {
        let d = running_example();
        assert!(d.verify_metric_axioms().valid);
        let delta = d.ultrametrize().unwrap();
        assert_eq!(delta.dist(0, 1), &r("1"));
        assert_eq!(delta.dist(0, 2), &r("2"));
        assert_eq!(delta.dist(1, 2), &r("1"));
        assert!(delta.verify_metric_axioms().valid);

        let units = space3(r("1"), r("2"), r("1"));
        assert_eq!(units.ultrametrize().unwrap(), units);

        let half = LexVector::new(o("w"), ScalarKind::Rat, [(o("0"), Scalar::new(BigInt::from(1), BigInt::from(2)))]).unwrap();
        let rat = FiniteLexMetricSpace::new(
            o("w"),
            ScalarKind::Rat,
            ["a", "b"].map(String::from),
            [(("a".into(), "b".into()), half)],
        )
        .unwrap();
        let delta = rat.ultrametrize().unwrap();
        assert_eq!(delta.kind(), ScalarKind::Int);
        assert_eq!(delta.dist(0, 1), &r("0"));

        assert!(matches!(
            space3(r("0"), r("1"), r("1")).ultrametrize(),
            Err(MetricError::InvalidMetric(_))
        ));
    }

    #[test]
    fn ball_examples() {
        let delta = running_example().ultrametrize().unwrap();
        assert_eq!(delta.unit_ball(0, &o("1")).unwrap(), set(&[0, 2]));
        assert_eq!(delta.unit_ball(0, &o("5")).unwrap(), set(&[0]));
        let big = vec_w(&[("0", 2)]);
        let all = space3(r("0"), r("0"), r("0"));
        assert_eq!(all.ball(1, &big).unwrap(), set(&[0, 1, 2]));
        assert_eq!(all.ball(1, &vec_w(&[])), Err(MetricError::NonpositiveRadius));
        assert_eq!(all.ball(1, &vec_w(&[("0", -1)])), Err(MetricError::NonpositiveRadius));
    }

    #[test]
    fn ball_basis_examples() {
        let one = FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ["x".to_string()], []).unwrap();
        let basis: Vec<PointSet> = one.ball_basis().unwrap().into_iter().map(|b| b.members).collect();
        assert_eq!(basis, vec![set(&[0])]);

        let two = FiniteLexMetricSpace::new(
            o("w"),
            ScalarKind::Int,
            ["a", "b"].map(String::from),
            [(("a".into(), "b".into()), r("1"))],
        )
        .unwrap();
        let balls = two.ball_basis().unwrap();
        let members: Vec<PointSet> = balls.iter().map(|b| b.members).collect();
        assert_eq!(members, vec![set(&[0]), set(&[1]), set(&[0, 1])]);
        // d(a,b) = r^1 is not below r^1, so {a,b} only appears at level 0
        assert_eq!(balls[2].provenance, vec![(0, o("0")), (1, o("0"))]);
        assert_eq!(balls[0].provenance, vec![(0, o("1")), (0, o("2"))]);

        let delta = running_example().ultrametrize().unwrap();
        let members: Vec<PointSet> = delta.ball_basis().unwrap().into_iter().map(|b| b.members).collect();
        assert!(members.contains(&set(&[0, 2])));
        for x in 0..3 {
            assert!(members.contains(&set(&[x])));
        }
    }

    #[test]
    fn ball_topology_examples() {
        for s in [running_example(), running_example().ultrametrize().unwrap(), space3(r("0"), r("0"), r("0"))] {
            let t = s.ball_topology().unwrap();
            assert!(t.is_discrete());
            assert_eq!(t, s.all_radii_topology().unwrap());
            for ball in s.ball_basis().unwrap() {
                assert!(t.is_open(ball.members) && t.is_closed(ball.members));
            }
        }
        let one = FiniteLexMetricSpace::new(o("w"), ScalarKind::Int, ["x".to_string()], []).unwrap();
        assert_eq!(one.ball_topology().unwrap().opens(), &[PointSet::EMPTY, set(&[0])]);
    }

    #[test]
    fn unit_balls_of_a_successor_bound_can_miss_the_topology() {
        // over Q^1 the only unit radius is r^0, which cannot see d = 1/2
        let half = LexVector::new(o("1"), ScalarKind::Rat, [(o("0"), Scalar::new(BigInt::from(1), BigInt::from(2)))]).unwrap();
        let s = FiniteLexMetricSpace::new(
            o("1"),
            ScalarKind::Rat,
            ["a", "b"].map(String::from),
            [(("a".into(), "b".into()), half)],
        )
        .unwrap();
        assert!(!s.ball_topology().unwrap().is_discrete());
        assert!(s.all_radii_topology().unwrap().is_discrete());
    }

    #[test]
    fn interleaving_on_running_example() {
        let d = running_example();
        let delta = d.ultrametrize().unwrap();
        for level in d.test_levels() {
            let next = level.successor();
            for x in 0..3 {
                assert!(d.unit_ball(x, &next).unwrap().is_subset(delta.unit_ball(x, &level).unwrap()));
                assert!(delta.unit_ball(x, &next).unwrap().is_subset(d.unit_ball(x, &level).unwrap()));
            }
        }
    }

    fn unit_space(alpha: &str, levels: [&str; 3]) -> FiniteLexMetricSpace {
        let u = |l: &str| LexVector::unit(o(l), o(alpha)).unwrap();
        let p = |a: &str, b: &str| (a.to_string(), b.to_string());
        FiniteLexMetricSpace::new(
            o(alpha),
            ScalarKind::Int,
            ["a", "b", "c"].map(String::from),
            [(p("a", "b"), u(levels[0])), (p("a", "c"), u(levels[1])), (p("b", "c"), u(levels[2]))],
        )
        .unwrap()
    }

    #[test]
    fn cofinal_reduce_examples() {
        // levels {w, w+1}
        let s = unit_space("w*2", ["w", "w+1", "w"]);
        let cofinal = [o("w"), o("w+1"), o("w+2")];
        let reduced = s.cofinal_reduce(&cofinal).unwrap();
        assert_eq!(reduced.alpha(), &o("3"));
        assert_eq!(reduced.level(0, 1), Some(&o("0")));
        assert_eq!(reduced.level(0, 2), Some(&o("1")));
        assert!(reduced.is_ultrametric().unwrap());
        for (position, l) in cofinal.iter().enumerate() {
            for x in 0..3 {
                assert_eq!(
                    reduced.unit_ball(x, &o(&position.to_string())).unwrap(),
                    s.unit_ball(x, l).unwrap()
                );
            }
        }

        // levels {1, 2} with L = [2, 4] collapse onto position 0
        let s = unit_space("w", ["1", "2", "1"]);
        let reduced = s.cofinal_reduce(&[o("2"), o("4")]).unwrap();
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            assert_eq!(reduced.level(x, y), Some(&o("0")));
        }
        for (position, l) in ["2", "4"].iter().enumerate() {
            for x in 0..3 {
                assert_eq!(
                    reduced.unit_ball(x, &o(&position.to_string())).unwrap(),
                    s.unit_ball(x, &o(l)).unwrap()
                );
            }
        }

        assert_eq!(
            s.cofinal_reduce(&[o("0"), o("1")]),
            Err(MetricError::LNotCofinalEnough(o("2")))
        );
        assert_eq!(s.cofinal_reduce(&[]), Err(MetricError::BadCofinalList));
        assert_eq!(s.cofinal_reduce(&[o("3"), o("2")]), Err(MetricError::BadCofinalList));
        assert_eq!(s.cofinal_reduce(&[o("w")]), Err(MetricError::BadCofinalList));
        assert_eq!(running_example().cofinal_reduce(&[o("5")]), Err(MetricError::NotUltrametric));
    }

    #[test]
    fn cofinal_reduce_with_all_levels_is_a_relabeling() {
        let s = unit_space("w*2", ["w", "w+1", "w"]);
        let cofinal = [o("w"), o("w+1")];
        let reduced = s.cofinal_reduce(&cofinal).unwrap();
        for (position, l) in cofinal.iter().enumerate() {
            let at = |space: &FiniteLexMetricSpace, level: &Ordinal| -> Vec<PointSet> {
                (0..3).map(|x| space.unit_ball(x, level).unwrap()).collect()
            };
            assert_eq!(at(&reduced, &Ordinal::nat(position as u64)), at(&s, l));
        }
        let pairs = |space: &FiniteLexMetricSpace| -> Vec<Option<Ordinal>> {
            vec![space.level(0, 1).cloned(), space.level(0, 2).cloned(), space.level(1, 2).cloned()]
        };
        assert_eq!(pairs(&reduced), vec![Some(o("0")), Some(o("1")), Some(o("0"))]);
    }

    #[test]
    fn json_format() {
        let s = running_example();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"alpha":"w","scalar":"int","points":["a","b","c"],"dist":{"a|b":{"index_bound":"w","scalar_kind":"int","support":[["1","2"]]}"#));
        assert_eq!(serde_json::from_str::<FiniteLexMetricSpace>(&json).unwrap(), s);

        let short = r#"{"alpha":"w","scalar":"rat","points":["y","x"],"dist":{"y|x":[["0","1/2"]]}}"#;
        let parsed: FiniteLexMetricSpace = serde_json::from_str(short).unwrap();
        assert_eq!(parsed.points(), &["x".to_string(), "y".to_string()]);
        assert_eq!(parsed.dist(0, 1).get(&o("0")), Scalar::new(BigInt::from(1), BigInt::from(2)));

        let missing = r#"{"alpha":"w","scalar":"int","points":["x","y","z"],"dist":{"x|y":[["0","1"]]}}"#;
        assert!(serde_json::from_str::<FiniteLexMetricSpace>(missing).is_err());
        let bad_key = r#"{"alpha":"w","scalar":"int","points":["x","y"],"dist":{"xy":[["0","1"]]}}"#;
        assert!(serde_json::from_str::<FiniteLexMetricSpace>(bad_key).is_err());
    }
}
