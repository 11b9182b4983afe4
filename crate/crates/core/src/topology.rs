//! Finite topological spaces on at most 16 labeled points.
//!
//! A [`FiniteTopology`] stores its full family of open sets as bitmasks. Every
//! finite space is Alexandrov: each point `x` has a least open neighbourhood
//! `U_x`, and the sets `U_x` form the coarsest basis. Most predicates below are
//! decided through these minimal neighbourhoods; the unit tests re-check them
//! against the textbook definitions by exhaustion over the opens.
//!
//! None of the separation predicates bundle T1: `is_regular` is T3 and
//! `is_normal` is T4 in the sense "points and closed sets (resp. disjoint
//! closed sets) have disjoint open neighbourhoods".

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest ground set a [`FiniteTopology`] can hold.
pub const MAX_POINTS: usize = 16;

/// Largest ground set [`enumerate_topologies`] accepts.
pub const MAX_ENUMERATE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("the ground set is empty")]
    EmptyGround,
    #[error("{n} points exceed the bound of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("set {0} is not contained in the ground set")]
    OutOfGround(PointSet),
    #[error("open family is not a topology: {0}")]
    NotATopology(&'static str),
    #[error("family member {0} is not open")]
    NotOpenMember(PointSet),
    #[error("set {0} is not open")]
    NotOpen(PointSet),
    #[error("point {point} is not in {set}")]
    PointNotInSet { point: usize, set: PointSet },
    #[error("family is not a basis of the topology")]
    NotABasis,
    #[error("family does not cover the ground set")]
    NotACover,
    #[error("topology is not regular")]
    NotRegular,
    #[error("no basis pair satisfies the nesting condition")]
    NoSuchPair,
}

/// A subset of `{0, .., 15}` as a bitmask. Ordering is by mask value, which is
/// the "least bitmask" used for every deterministic choice.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        PointSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(x: usize) -> Self {
        PointSet(1 << x)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> Self {
        points.into_iter().fold(PointSet::EMPTY, |s, x| s.with(x))
    }

    pub fn with(self, x: usize) -> Self {
        PointSet(self.0 | 1 << x)
    }

    pub fn contains(self, x: usize) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: PointSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn min_point(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Complement inside `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> Self {
        PointSet::full(n) - self
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(x)
        })
    }
}

impl BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl Sub for PointSet {
    type Output = PointSet;
    fn sub(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & !rhs.0)
    }
}

impl Not for PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        PointSet(!self.0)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A topology on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteTopology {
    n: usize,
    // sorted ascending by mask
    opens: Vec<PointSet>,
    // least open neighbourhood of each point
    minimal: Vec<PointSet>,
}

/// Result of [`FiniteTopology::from_basis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub topology: FiniteTopology,
    /// Whether the family was a basis rather than only a subbasis.
    pub was_basis: bool,
}

/// Result of [`FiniteTopology::kolmogorov_quotient`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KolmogorovQuotient {
    pub topology: FiniteTopology,
    /// Class of each source point; classes numbered by least member.
    pub class_of: Vec<usize>,
}

fn check_ground(n: usize) -> Result<(), TopologyError> {
    if n == 0 {
        return Err(TopologyError::EmptyGround);
    }
    if n > MAX_POINTS {
        return Err(TopologyError::TooLarge { n, max: MAX_POINTS });
    }
    Ok(())
}

impl FiniteTopology {
    /// Builds the topology whose least neighbourhoods are `minimal`. The
    /// caller guarantees `x ∈ minimal[x]` and `y ∈ minimal[x] ⇒ minimal[y] ⊆ minimal[x]`.
    fn from_minimal(n: usize, minimal: Vec<PointSet>) -> Self {
        let mut seen = vec![false; 1 << n];
        let mut opens = vec![PointSet::EMPTY];
        seen[0] = true;
        let mut generators = minimal.clone();
        generators.sort();
        generators.dedup();
        for g in generators {
            for i in 0..opens.len() {
                let u = opens[i] | g;
                if !seen[u.0 as usize] {
                    seen[u.0 as usize] = true;
                    opens.push(u);
                }
            }
        }
        opens.sort();
        FiniteTopology { n, opens, minimal }
    }

    /// Validates an explicit open family.
    pub fn from_opens(
        n: usize,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, TopologyError> {
        check_ground(n)?;
        let ground = PointSet::full(n);
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        if let Some(bad) = opens.iter().find(|u| !u.is_subset(ground)) {
            return Err(TopologyError::OutOfGround(*bad));
        }
        opens.sort();
        opens.dedup();
        if opens.binary_search(&PointSet::EMPTY).is_err() {
            return Err(TopologyError::NotATopology("the empty set is not open"));
        }
        if opens.binary_search(&ground).is_err() {
            return Err(TopologyError::NotATopology("the ground set is not open"));
        }
        for &a in &opens {
            for &b in &opens {
                if opens.binary_search(&(a | b)).is_err() {
                    return Err(TopologyError::NotATopology("not closed under union"));
                }
                if opens.binary_search(&(a & b)).is_err() {
                    return Err(TopologyError::NotATopology("not closed under intersection"));
                }
            }
        }
        let minimal = (0..n)
            .map(|x| {
                opens
                    .iter()
                    .filter(|u| u.contains(x))
                    .fold(ground, |acc, &u| acc & u)
            })
            .collect();
        Ok(FiniteTopology { n, opens, minimal })
    }

    /// The topology generated by `family`, read as a basis when it is one and
    /// as a subbasis otherwise.
    pub fn from_basis(
        n: usize,
        family: impl IntoIterator<Item = PointSet>,
    ) -> Result<Generated, TopologyError> {
        check_ground(n)?;
        let ground = PointSet::full(n);
        let family: Vec<PointSet> = family.into_iter().collect();
        if let Some(bad) = family.iter().find(|u| !u.is_subset(ground)) {
            return Err(TopologyError::OutOfGround(*bad));
        }
        let covers = family.iter().fold(PointSet::EMPTY, |acc, &b| acc | b) == ground;
        // x ∈ B1 ∩ B2 needs some B3 with x ∈ B3 ⊆ B1 ∩ B2
        let compatible = family.iter().all(|&b1| {
            family.iter().all(|&b2| {
                (b1 & b2)
                    .iter()
                    .all(|x| family.iter().any(|&b3| b3.contains(x) && b3.is_subset(b1 & b2)))
            })
        });
        let minimal = (0..n)
            .map(|x| {
                family
                    .iter()
                    .filter(|b| b.contains(x))
                    .fold(ground, |acc, &b| acc & b)
            })
            .collect();
        Ok(Generated {
            topology: Self::from_minimal(n, minimal),
            was_basis: covers && compatible,
        })
    }

    pub fn discrete(n: usize) -> Result<Self, TopologyError> {
        check_ground(n)?;
        Ok(Self::from_minimal(n, (0..n).map(PointSet::singleton).collect()))
    }

    pub fn indiscrete(n: usize) -> Result<Self, TopologyError> {
        check_ground(n)?;
        Ok(Self::from_minimal(n, vec![PointSet::full(n); n]))
    }

    /// Opens `∅, {0}, {0, 1}`.
    pub fn sierpinski() -> Self {
        Self::from_minimal(2, vec![PointSet::from_bits(0b01), PointSet::from_bits(0b11)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// All open sets, ascending by mask.
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    /// All closed sets, in the order of their complements in [`Self::opens`].
    pub fn closed_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().map(|u| u.complement(self.n))
    }

    pub fn clopens(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(|&u| self.is_closed(u))
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        set.is_subset(self.ground()) && self.is_open(set.complement(self.n))
    }

    /// Least open set containing `x`.
    pub fn minimal_neighbourhood(&self, x: usize) -> PointSet {
        self.minimal[x]
    }

    /// The distinct least neighbourhoods, ascending: the coarsest basis.
    pub fn minimal_basis(&self) -> Vec<PointSet> {
        let mut basis = self.minimal.clone();
        basis.sort();
        basis.dedup();
        basis
    }

    /// Least open set containing `set`.
    pub fn neighbourhood(&self, set: PointSet) -> PointSet {
        set.iter()
            .fold(PointSet::EMPTY, |acc, x| acc | self.minimal[x])
    }

    pub fn closure(&self, set: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&x| !self.minimal[x].is_disjoint(set)))
    }

    pub fn interior(&self, set: PointSet) -> PointSet {
        PointSet::from_points((0..self.n).filter(|&x| self.minimal[x].is_subset(set)))
    }

    fn distinct_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |x| (0..self.n).filter(move |&y| y != x).map(move |y| (x, y)))
    }

    pub fn is_t0(&self) -> bool {
        self.distinct_pairs()
            .all(|(x, y)| !(self.minimal[x].contains(y) && self.minimal[y].contains(x)))
    }

    pub fn is_t1(&self) -> bool {
        self.distinct_pairs().all(|(x, y)| !self.minimal[x].contains(y))
    }

    pub fn is_t2(&self) -> bool {
        self.distinct_pairs()
            .all(|(x, y)| self.minimal[x].is_disjoint(self.minimal[y]))
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|x| self.minimal[x] == PointSet::singleton(x))
    }

    /// T3 without T1.
    pub fn is_regular(&self) -> bool {
        self.closed_sets().all(|closed| {
            let around = self.neighbourhood(closed);
            (0..self.n)
                .filter(|&x| !closed.contains(x))
                .all(|x| self.minimal[x].is_disjoint(around))
        })
    }

    /// T4 without T1.
    pub fn is_normal(&self) -> bool {
        let closed: Vec<PointSet> = self.closed_sets().collect();
        closed.iter().all(|&e| {
            closed
                .iter()
                .filter(|&&f| f.is_disjoint(e))
                .all(|&f| self.neighbourhood(e).is_disjoint(self.neighbourhood(f)))
        })
    }

    /// Every open set is a union of clopen sets.
    pub fn is_zero_dimensional(&self) -> bool {
        let clopens: Vec<PointSet> = self.clopens().collect();
        self.opens.iter().all(|&u| {
            clopens
                .iter()
                .filter(|c| c.is_subset(u))
                .fold(PointSet::EMPTY, |acc, &c| acc | c)
                == u
        })
    }

    /// Whether the intersection of `family` (all of whose members must be
    /// open) is open. The empty family intersects to the ground set.
    pub fn is_additive(&self, family: &[PointSet]) -> Result<bool, TopologyError> {
        if let Some(bad) = family.iter().find(|&&u| !self.is_open(u)) {
            return Err(TopologyError::NotOpenMember(*bad));
        }
        let meet = family.iter().fold(self.ground(), |acc, &u| acc & u);
        Ok(self.is_open(meet))
    }

    /// Closure of the open family under pairwise, hence all, intersections.
    pub fn is_fully_additive(&self) -> bool {
        self.opens
            .iter()
            .all(|&a| self.opens.iter().all(|&b| self.is_open(a & b)))
    }

    /// Identifies points with the same open neighbourhoods.
    pub fn kolmogorov_quotient(&self) -> KolmogorovQuotient {
        let mut representatives: Vec<usize> = Vec::new();
        let mut class_of = Vec::with_capacity(self.n);
        for x in 0..self.n {
            match representatives
                .iter()
                .position(|&r| self.minimal[r] == self.minimal[x])
            {
                Some(c) => class_of.push(c),
                None => {
                    class_of.push(representatives.len());
                    representatives.push(x);
                }
            }
        }
        let project = |set: PointSet| PointSet::from_points(set.iter().map(|x| class_of[x]));
        let minimal = representatives
            .iter()
            .map(|&r| project(self.minimal[r]))
            .collect();
        KolmogorovQuotient {
            topology: Self::from_minimal(representatives.len(), minimal),
            class_of,
        }
    }

    /// Whether `family` is a basis of this topology: all members open and
    /// every open set a union of members.
    pub fn is_basis(&self, family: &[PointSet]) -> bool {
        family.iter().all(|&b| self.is_open(b))
            && self.minimal.iter().all(|m| family.contains(m))
    }

    /// The least point of every nonempty basis member.
    pub fn dense_from_basis(&self, basis: &[PointSet]) -> Result<PointSet, TopologyError> {
        if !self.is_basis(basis) {
            return Err(TopologyError::NotABasis);
        }
        Ok(PointSet::from_points(basis.iter().filter_map(|b| b.min_point())))
    }

    /// For every basis member inside some cover member, selects the first
    /// such cover member. Returns the selected cover indices, ascending.
    pub fn subcover_from_basis(
        &self,
        basis: &[PointSet],
        cover: &[PointSet],
    ) -> Result<Vec<usize>, TopologyError> {
        if !self.is_basis(basis) {
            return Err(TopologyError::NotABasis);
        }
        if let Some(bad) = cover.iter().find(|&&u| !self.is_open(u)) {
            return Err(TopologyError::NotOpenMember(*bad));
        }
        if cover.iter().fold(PointSet::EMPTY, |acc, &u| acc | u) != self.ground() {
            return Err(TopologyError::NotACover);
        }
        let mut chosen: Vec<usize> = basis
            .iter()
            .filter_map(|&b| cover.iter().position(|&u| b.is_subset(u)))
            .collect();
        chosen.sort_unstable();
        chosen.dedup();
        Ok(chosen)
    }

    /// Basis members `B, B'` with `x ∈ B ⊆ cl(B) ⊆ B' ⊆ U`, choosing the
    /// least `B'` and then the least `B`.
    pub fn nested_basis_find(
        &self,
        basis: &[PointSet],
        x: usize,
        open: PointSet,
    ) -> Result<(PointSet, PointSet), TopologyError> {
        if !self.is_regular() {
            return Err(TopologyError::NotRegular);
        }
        if !self.is_basis(basis) {
            return Err(TopologyError::NotABasis);
        }
        if !self.is_open(open) {
            return Err(TopologyError::NotOpen(open));
        }
        if x >= self.n || !open.contains(x) {
            return Err(TopologyError::PointNotInSet { point: x, set: open });
        }
        let mut sorted = basis.to_vec();
        sorted.sort();
        sorted.dedup();
        sorted
            .iter()
            .filter(|outer| outer.is_subset(open))
            .find_map(|&outer| {
                sorted
                    .iter()
                    .find(|&&inner| inner.contains(x) && self.closure(inner).is_subset(outer))
                    .map(|&inner| (inner, outer))
            })
            .ok_or(TopologyError::NoSuchPair)
    }

    /// Deterministic family of bases used by the sweeps: the minimal basis,
    /// the minimal basis plus the ground set, all nonempty opens, and all
    /// opens.
    pub fn basis_candidates(&self) -> Vec<Vec<PointSet>> {
        let minimal = self.minimal_basis();
        let mut with_ground = minimal.clone();
        if !with_ground.contains(&self.ground()) {
            with_ground.push(self.ground());
        }
        let nonempty: Vec<PointSet> = self.opens.iter().copied().filter(|u| !u.is_empty()).collect();
        let mut out = vec![minimal, with_ground, nonempty, self.opens.clone()];
        out.dedup();
        out
    }

    /// Every basis of this topology: the minimal basis together with any
    /// subfamily of the remaining opens, in order of that subfamily's index
    /// mask. Returns `None` when more than `limit` bases would result.
    pub fn all_bases(&self, limit: usize) -> Option<Vec<Vec<PointSet>>> {
        let minimal = self.minimal_basis();
        let extra: Vec<PointSet> = self
            .opens
            .iter()
            .copied()
            .filter(|u| !minimal.contains(u))
            .collect();
        if extra.len() >= usize::BITS as usize || 1usize << extra.len() > limit {
            return None;
        }
        Some(
            (0..1usize << extra.len())
                .map(|mask| {
                    let mut basis = minimal.clone();
                    basis.extend((0..extra.len()).filter(|i| mask >> i & 1 == 1).map(|i| extra[i]));
                    basis
                })
                .collect(),
        )
    }
}

impl fmt::Debug for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteTopology")
            .field("n", &self.n)
            .field("opens", &self.opens)
            .finish()
    }
}

/// JSON form `{ "n": int, "opens": [bitmask ints] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TopologyJson {
    pub n: usize,
    pub opens: Vec<u32>,
}

impl From<&FiniteTopology> for TopologyJson {
    fn from(t: &FiniteTopology) -> Self {
        TopologyJson {
            n: t.n,
            opens: t.opens.iter().map(|u| u.bits()).collect(),
        }
    }
}

impl TryFrom<TopologyJson> for FiniteTopology {
    type Error = TopologyError;

    fn try_from(raw: TopologyJson) -> Result<Self, Self::Error> {
        FiniteTopology::from_opens(raw.n, raw.opens.into_iter().map(PointSet::from_bits))
    }
}

impl Serialize for FiniteTopology {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TopologyJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteTopology {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        TopologyJson::deserialize(deserializer)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// All topologies on `n` labeled points, each exactly once.
///
/// Finite topologies correspond to preorders via `x ≤ y ⇔ y ∈ U_x`; the
/// enumeration walks every relation on distinct pairs and keeps the
/// transitive ones.
pub fn enumerate_topologies(n: usize) -> Result<impl Iterator<Item = FiniteTopology>, TopologyError> {
    check_ground(n)?;
    if n > MAX_ENUMERATE {
        return Err(TopologyError::TooLarge {
            n,
            max: MAX_ENUMERATE,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    Ok((0u64..1 << pairs.len()).filter_map(move |relation| {
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for (bit, &(x, y)) in pairs.iter().enumerate() {
            if relation >> bit & 1 == 1 {
                up[x] = up[x].with(y);
            }
        }
        let transitive = (0..n).all(|x| up[x].iter().all(|y| up[y].is_subset(up[x])));
        transitive.then(|| FiniteTopology::from_minimal(n, up))
    }))
}


#[cfg(test)]
mod tests {
    use super::oracle::clopen_split;
    use super::*;
    use std::collections::BTreeSet;

    fn set(points: &[usize]) -> PointSet {
        PointSet::from_points(points.iter().copied())
    }

    fn all_small() -> Vec<FiniteTopology> {
        (1..=4).flat_map(|n| enumerate_topologies(n).unwrap()).collect()
    }

    #[test]
    fn point_set_basics() {
        let s = set(&[0, 2, 5]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.min_point(), Some(0));
        assert_eq!(s.complement(6), set(&[1, 3, 4]));
        assert_eq!(PointSet::full(16).len(), 16);
        assert_eq!(format!("{s}"), "{0, 2, 5}");
    }

    #[test]
    fn from_basis_examples() {
        let g = FiniteTopology::from_basis(2, [set(&[0]), set(&[0, 1])]).unwrap();
        assert!(g.was_basis);
        assert_eq!(g.topology, FiniteTopology::sierpinski());
        assert_eq!(g.topology.opens(), &[set(&[]), set(&[0]), set(&[0, 1])]);

        let g = FiniteTopology::from_basis(2, [set(&[0]), set(&[1])]).unwrap();
        assert!(g.was_basis);
        assert!(g.topology.is_discrete());

        let g = FiniteTopology::from_basis(1, [set(&[0])]).unwrap();
        assert_eq!(g.topology.opens(), &[set(&[]), set(&[0])]);

        // a subbasis: {0,1} ∩ {1,2} = {1} must be generated
        let g = FiniteTopology::from_basis(3, [set(&[0, 1]), set(&[1, 2])]).unwrap();
        assert!(!g.was_basis);
        assert!(g.topology.is_open(set(&[1])));

        assert_eq!(
            FiniteTopology::from_basis(0, []),
            Err(TopologyError::EmptyGround)
        );
    }

    #[test]
    fn from_opens_validates() {
        assert!(FiniteTopology::from_opens(2, [set(&[]), set(&[0])]).is_err());
        assert!(FiniteTopology::from_opens(3, [set(&[]), set(&[0]), set(&[1]), set(&[0, 1, 2])]).is_err());
        assert!(FiniteTopology::from_opens(2, [set(&[]), set(&[3]), set(&[0, 1])]).is_err());
        let t = FiniteTopology::from_opens(2, [set(&[]), set(&[0]), set(&[0, 1])]).unwrap();
        assert_eq!(t, FiniteTopology::sierpinski());
        assert!(matches!(
            FiniteTopology::discrete(17),
            Err(TopologyError::TooLarge { .. })
        ));
    }

    #[test]
    fn closure_and_interior_examples() {
        let s = FiniteTopology::sierpinski();
        assert_eq!(s.closure(set(&[0])), set(&[0, 1]));
        assert_eq!(s.closure(set(&[1])), set(&[1]));
        assert_eq!(s.closure(PointSet::EMPTY), PointSet::EMPTY);
        let d = FiniteTopology::discrete(3).unwrap();
        assert_eq!(d.interior(set(&[0, 2])), set(&[0, 2]));
        assert_eq!(s.interior(set(&[1])), PointSet::EMPTY);
    }

    #[test]
    fn separation_examples() {
        let s = FiniteTopology::sierpinski();
        assert!(s.is_t0() && !s.is_t1());
        assert!(!s.is_regular());
        assert!(s.is_normal());
        assert!(!s.is_zero_dimensional());

        let i = FiniteTopology::indiscrete(2).unwrap();
        assert!(!i.is_t0());
        assert!(i.is_regular());
        assert!(i.is_zero_dimensional());

        let d = FiniteTopology::discrete(3).unwrap();
        assert!(d.is_t0() && d.is_t1() && d.is_t2());
        assert!(d.is_regular() && d.is_normal() && d.is_zero_dimensional());

        let c = clopen_split();
        assert!(c.is_normal());
        assert!(!c.is_regular());
        assert!(c.is_open(set(&[0, 1])) && c.is_closed(set(&[0, 1])));
    }

    #[test]
    fn predicates_match_definitions() {
        for t in all_small() {
            assert_eq!(t.is_t0(), oracle::t0(&t), "{t:?}");
            assert_eq!(t.is_t1(), oracle::t1(&t), "{t:?}");
            assert_eq!(t.is_t2(), oracle::t2(&t), "{t:?}");
            assert_eq!(t.is_regular(), oracle::regular(&t), "{t:?}");
            assert_eq!(t.is_normal(), oracle::normal(&t), "{t:?}");
            assert_eq!(t.is_zero_dimensional(), oracle::zero_dimensional(&t), "{t:?}");
            assert!(t.is_fully_additive());
            for bits in 0..t.ground().bits() + 1 {
                let a = PointSet::from_bits(bits);
                assert_eq!(t.closure(a), oracle::closure(&t, a));
                assert_eq!(t.interior(a), oracle::interior(&t, a));
            }
        }
    }

    #[test]
    fn additivity_contract() {
        let c = clopen_split();
        assert_eq!(c.is_additive(&[set(&[0, 1]), set(&[0, 2, 3])]), Ok(true));
        assert_eq!(c.is_additive(&[]), Ok(true));
        assert_eq!(
            c.is_additive(&[set(&[1])]),
            Err(TopologyError::NotOpenMember(set(&[1])))
        );
        for t in all_small() {
            assert_eq!(t.is_additive(t.opens()), Ok(true));
        }
    }

    #[test]
    fn kolmogorov_examples() {
        let q = FiniteTopology::indiscrete(2).unwrap().kolmogorov_quotient();
        assert_eq!(q.topology.n(), 1);
        assert_eq!(q.class_of, vec![0, 0]);

        let s = FiniteTopology::sierpinski().kolmogorov_quotient();
        assert_eq!(s.topology, FiniteTopology::sierpinski());
        assert_eq!(s.class_of, vec![0, 1]);

        let t = FiniteTopology::from_opens(3, [set(&[]), set(&[0, 1]), set(&[0, 1, 2])]).unwrap();
        let q = t.kolmogorov_quotient();
        assert_eq!(q.topology, FiniteTopology::sierpinski());
        assert_eq!(q.class_of, vec![0, 0, 1]);
    }

    #[test]
    fn kolmogorov_quotient_is_t0_and_continuous() {
        for t in all_small() {
            let q = t.kolmogorov_quotient();
            assert!(q.topology.is_t0());
            let preimage = |v: PointSet| PointSet::from_points((0..t.n()).filter(|&x| v.contains(q.class_of[x])));
            let pulled: BTreeSet<PointSet> = q.topology.opens().iter().map(|&v| preimage(v)).collect();
            let original: BTreeSet<PointSet> = t.opens().iter().copied().collect();
            assert_eq!(pulled, original);
        }
    }

    #[test]
    fn dense_examples() {
        let d = FiniteTopology::discrete(3).unwrap();
        assert_eq!(d.dense_from_basis(&d.minimal_basis()), Ok(set(&[0, 1, 2])));
        let s = FiniteTopology::sierpinski();
        assert_eq!(s.dense_from_basis(&[set(&[0]), set(&[0, 1])]), Ok(set(&[0])));
        assert_eq!(s.closure(set(&[0])), s.ground());
        let one = FiniteTopology::discrete(1).unwrap();
        assert_eq!(one.dense_from_basis(&[set(&[0])]), Ok(set(&[0])));
        assert_eq!(s.dense_from_basis(&[set(&[0, 1])]), Err(TopologyError::NotABasis));
    }

    #[test]
    fn subcover_examples() {
        let d = FiniteTopology::discrete(3).unwrap();
        assert_eq!(d.subcover_from_basis(&d.minimal_basis(), &[d.ground()]), Ok(vec![0]));
        let pairs = [set(&[0, 1]), set(&[0, 2]), set(&[1, 2])];
        // {0} -> {0,1}, {1} -> {0,1}, {2} -> {0,2}
        assert_eq!(d.subcover_from_basis(&d.minimal_basis(), &pairs), Ok(vec![0, 1]));
        assert_eq!(
            d.subcover_from_basis(&d.minimal_basis(), &[set(&[0, 1])]),
            Err(TopologyError::NotACover)
        );
    }

    #[test]
    fn nested_basis_examples() {
        let d = FiniteTopology::discrete(3).unwrap();
        let basis = d.minimal_basis();
        assert_eq!(d.nested_basis_find(&basis, 1, set(&[1])), Ok((set(&[1]), set(&[1]))));
        let i = FiniteTopology::indiscrete(3).unwrap();
        assert_eq!(
            i.nested_basis_find(&i.minimal_basis(), 2, i.ground()),
            Ok((i.ground(), i.ground()))
        );
        let s = FiniteTopology::sierpinski();
        assert_eq!(
            s.nested_basis_find(&s.minimal_basis(), 1, s.ground()),
            Err(TopologyError::NotRegular)
        );
        assert_eq!(
            d.nested_basis_find(&basis, 0, set(&[1])),
            Err(TopologyError::PointNotInSet { point: 0, set: set(&[1]) })
        );
    }

    #[test]
    fn nested_basis_exists_in_regular_spaces() {
        for t in all_small().into_iter().filter(FiniteTopology::is_regular) {
            for basis in t.basis_candidates() {
                for &u in t.opens() {
                    for x in u.iter() {
                        let (b, b2) = t.nested_basis_find(&basis, x, u).unwrap();
                        assert!(b.contains(x) && t.closure(b).is_subset(b2) && b2.is_subset(u));
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_match_family_oracle() {
        for n in 1..=4 {
            let fast: BTreeSet<Vec<PointSet>> = enumerate_topologies(n)
                .unwrap()
                .map(|t| t.opens().to_vec())
                .collect();
            let count = enumerate_topologies(n).unwrap().count();
            let slow: BTreeSet<Vec<PointSet>> = oracle::topologies_by_families(n).into_iter().collect();
            assert_eq!(count, fast.len(), "duplicates at n={n}");
            assert_eq!(fast, slow, "n={n}");
        }
        assert_eq!(enumerate_topologies(1).unwrap().count(), 1);
        assert_eq!(enumerate_topologies(2).unwrap().count(), 4);
        assert_eq!(enumerate_topologies(3).unwrap().count(), 29);
        assert_eq!(enumerate_topologies(4).unwrap().count(), 355);
        assert!(matches!(enumerate_topologies(6), Err(TopologyError::TooLarge { .. })));
    }

    #[test]
    fn bases_generate_their_topology() {
        for t in all_small() {
            for basis in t.basis_candidates() {
                assert!(t.is_basis(&basis));
                let g = FiniteTopology::from_basis(t.n(), basis.iter().copied()).unwrap();
                assert!(g.was_basis);
                assert_eq!(g.topology, t);
            }
            if let Some(all) = t.all_bases(64) {
                for basis in all {
                    assert!(t.is_basis(&basis));
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let t = clopen_split();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"n":4,"opens":[0,1,3,8,9,11,12,13,15]}"#);
        assert_eq!(serde_json::from_str::<FiniteTopology>(&json).unwrap(), t);
        assert!(serde_json::from_str::<FiniteTopology>(r#"{"n":2,"opens":[0,1]}"#).is_err());
    }
}
