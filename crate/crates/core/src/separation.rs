//! Disjoint neighbourhoods of closed sets and Urysohn functions.
//!
//! [`t4_separation`] builds open `A ⊇ E`, `B ⊇ F` by the staged difference
//! construction over a subcover of per-point neighbourhoods. The dyadic
//! Urysohn construction calls it once per refinement step, and
//! [`urysohn_binary`] thresholds the result at zero.
//!
//! Every choice is deterministic: among admissible open sets the one with the
//! least bitmask wins.

use serde::{Serialize, Serializer};
use thiserror::Error;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::lexgroup::Scalar;
use crate::topology::{FiniteTopology, PointSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("topology is neither regular nor normal")]
    NotRegular,
    #[error("topology is not normal")]
    NotNormal,
    #[error("set {0} is not closed")]
    NotClosed(PointSet),
    #[error("both sets must be nonempty")]
    EmptySide,
    #[error("sets {0} and {1} intersect")]
    NotDisjoint(PointSet, PointSet),
    #[error("constructed function is not continuous")]
    ContinuityFailure,
    #[error("constructed neighbourhoods fail to separate the sets")]
    WitnessFailure,
}

/// Disjoint open neighbourhoods `a ⊇ E`, `b ⊇ F` and the stages building them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationWitness {
    pub a: PointSet,
    pub b: PointSet,
    pub stages: Vec<(PointSet, PointSet)>,
}

/// A function from the points of a finite space to exact rationals in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarFunction {
    values: Vec<Scalar>,
}

impl ScalarFunction {
    pub fn new(values: Vec<Scalar>) -> Self {
        ScalarFunction { values }
    }

    pub fn constant(n: usize, value: u8) -> Self {
        ScalarFunction {
            values: vec![Scalar::from_integer(BigInt::from(value)); n],
        }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Scalar {
        &self.values[x]
    }

    /// Distinct values, ascending.
    pub fn range(&self) -> Vec<Scalar> {
        let mut range = self.values.clone();
        range.sort();
        range.dedup();
        range
    }

    pub fn fiber(&self, value: &Scalar) -> PointSet {
        PointSet::from_points((0..self.values.len()).filter(|&x| &self.values[x] == value))
    }

    /// Continuity into `[0, 1]`. The finite range is a discrete subspace of
    /// the reals, so this holds iff every fiber is open.
    pub fn is_continuous(&self, t: &FiniteTopology) -> bool {
        self.range().iter().all(|v| t.is_open(self.fiber(v)))
    }

    pub fn is_binary(&self) -> bool {
        let one = Scalar::from_integer(BigInt::from(1));
        self.values.iter().all(|v| v.is_zero() || *v == one)
    }

    /// Whether every value is `k / 2^j` inside `[0, 1]`.
    pub fn is_dyadic(&self) -> bool {
        let one = Scalar::from_integer(BigInt::from(1));
        self.values.iter().all(|v| {
            let d = v.denom();
            *v >= Scalar::zero() && *v <= one && (d & (d - BigInt::from(1))).is_zero()
        })
    }
}

impl Serialize for ScalarFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            values: Vec<String>,
        }
        Raw {
            values: self.values.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

fn check_pair(t: &FiniteTopology, e: PointSet, f: PointSet) -> Result<(), SeparationError> {
    if e.is_empty() || f.is_empty() {
        return Err(SeparationError::EmptySide);
    }
    for side in [e, f] {
        if !t.is_closed(side) {
            return Err(SeparationError::NotClosed(side));
        }
    }
    if !e.is_disjoint(f) {
        return Err(SeparationError::NotDisjoint(e, f));
    }
    Ok(())
}

/// Least open set containing `x` whose closure misses `avoid`.
fn shrunk_neighbourhood(t: &FiniteTopology, x: usize, avoid: PointSet) -> Option<PointSet> {
    t.opens()
        .iter()
        .copied()
        .find(|&u| u.contains(x) && t.closure(u).is_disjoint(avoid))
}

fn staged(t: &FiniteTopology, e: PointSet, f: PointSet) -> Result<SeparationWitness, SeparationError> {
    let around = |points: PointSet, avoid: PointSet| -> Result<Vec<PointSet>, SeparationError> {
        points
            .iter()
            .map(|x| shrunk_neighbourhood(t, x, avoid).ok_or(SeparationError::NotRegular))
            .collect()
    };
    let us = around(e, f)?;
    let vs = around(f, e)?;

    let mut cover = vec![t.ground() - (e | f)];
    cover.extend(&us);
    cover.extend(&vs);
    let chosen = t
        .subcover_from_basis(&t.minimal_basis(), &cover)
        .expect("per-point neighbourhoods cover the space");
    // U's are the only members meeting E and V's the only ones meeting F, so
    // both selections are nonempty
    let pick = |range: std::ops::Range<usize>| -> Vec<PointSet> {
        chosen.iter().filter(|i| range.contains(i)).map(|&i| cover[i]).collect()
    };
    let split = 1 + us.len();
    let us = pick(1..split);
    let vs = pick(split..cover.len());
    let stages = us.len().max(vs.len());
    let at = |list: &[PointSet], i: usize| list[i.min(list.len() - 1)];

    let mut closed_us = PointSet::EMPTY;
    let mut closed_vs = PointSet::EMPTY;
    let mut witness = SeparationWitness {
        a: PointSet::EMPTY,
        b: PointSet::EMPTY,
        stages: Vec::with_capacity(stages),
    };
    for i in 0..stages {
        let (u, v) = (at(&us, i), at(&vs, i));
        closed_us = closed_us | t.closure(u);
        closed_vs = closed_vs | t.closure(v);
        let a_i = u - closed_vs;
        let b_i = v - closed_us;
        witness.a = witness.a | a_i;
        witness.b = witness.b | b_i;
        witness.stages.push((a_i, b_i));
    }
    let valid = witness.a.is_disjoint(witness.b)
        && e.is_subset(witness.a)
        && f.is_subset(witness.b)
        && t.is_open(witness.a)
        && t.is_open(witness.b);
    if valid {
        Ok(witness)
    } else {
        Err(SeparationError::WitnessFailure)
    }
}

/// Disjoint open neighbourhoods of disjoint nonempty closed sets.
///
/// Each `e ∈ E` gets the least open `U_e` with `cl(U_e) ∩ F = ∅`, each
/// `f ∈ F` the least `V_f` with `cl(V_f) ∩ E = ∅`. A subcover of
/// `{X ∖ (E ∪ F)} ∪ {U_e} ∪ {V_f}` is taken, its U's and V's are listed in
/// point order, and stage `i` keeps `U_i ∖ ⋃_{j≤i} cl(V_j)` and
/// `V_i ∖ ⋃_{j≤i} cl(U_j)`.
///
/// The neighbourhoods exist whenever the space is regular, and also in any
/// normal space since `E`, `F` are closed, so either property is accepted.
pub fn t4_separation(
    t: &FiniteTopology,
    e: PointSet,
    f: PointSet,
) -> Result<SeparationWitness, SeparationError> {
    check_pair(t, e, f)?;
    if !t.is_regular() && !t.is_normal() {
        return Err(SeparationError::NotRegular);
    }
    staged(t, e, f)
}

/// A Urysohn function with the open sets of its dyadic chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrysohnConstruction {
    pub function: ScalarFunction,
    /// `(q, U_q)` for every dyadic level that was materialized, ascending in `q`.
    pub chain: Vec<(Scalar, PointSet)>,
}

fn dyadic(numer: i64, exponent: u32) -> Scalar {
    Scalar::new(BigInt::from(numer), BigInt::from(1) << exponent)
}

struct Chain<'a> {
    t: &'a FiniteTopology,
    values: Vec<Option<Scalar>>,
    levels: Vec<(Scalar, PointSet)>,
}

impl Chain<'_> {
    /// Points of `upper ∖ lower` receive their values from the interval
    /// `[p, q]`. The midpoint set is a function of `(lower, upper)` alone, so
    /// when it repeats an endpoint the refinement repeats forever and the
    /// infimum is that endpoint's opposite bound.
    fn fill(
        &mut self,
        (p, q): (Scalar, Scalar),
        lower: PointSet,
        upper: PointSet,
    ) -> Result<(), SeparationError> {
        let gap = upper - lower;
        if gap.is_empty() {
            return Ok(());
        }
        let outside = self.t.ground() - upper;
        let mid_set = staged(self.t, self.t.closure(lower), outside)?.a;
        let mid = (&p + &q) / Scalar::from_integer(BigInt::from(2));
        if mid_set == upper {
            // U_r = upper for every dyadic r in (p, q]
            self.assign(gap, &p);
        } else if mid_set == lower {
            // U_r = lower for every dyadic r in [p, q)
            self.assign(gap, &q);
        } else {
            self.levels.push((mid.clone(), mid_set));
            self.fill((p, mid.clone()), lower, mid_set)?;
            self.fill((mid, q), mid_set, upper)?;
        }
        Ok(())
    }

    fn assign(&mut self, points: PointSet, value: &Scalar) {
        for x in points.iter() {
            self.values[x] = Some(value.clone());
        }
    }
}

/// The dyadic Urysohn construction with its chain of opens.
pub fn urysohn_construction(
    t: &FiniteTopology,
    e: PointSet,
    f: PointSet,
) -> Result<UrysohnConstruction, SeparationError> {
    check_pair(t, e, f)?;
    if !t.is_normal() {
        return Err(SeparationError::NotNormal);
    }
    let top = t.ground() - f;
    let bottom = staged(t, e, f)?.a;
    let mut chain = Chain {
        t,
        values: vec![None; t.n()],
        levels: vec![(dyadic(0, 0), bottom), (dyadic(1, 0), top)],
    };
    chain.assign(bottom, &dyadic(0, 0));
    chain.assign(f, &dyadic(1, 0));
    chain.fill((dyadic(0, 0), dyadic(1, 0)), bottom, top)?;
    let function = ScalarFunction::new(
        chain
            .values
            .into_iter()
            .map(|v| v.expect("every point lies in the bottom set, a gap or F"))
            .collect(),
    );
    let mut levels = chain.levels;
    levels.sort_by(|a, b| a.0.cmp(&b.0));

    let clamped = e.iter().all(|x| function.value(x).is_zero())
        && f.iter().all(|x| *function.value(x) == dyadic(1, 0));
    if !clamped || !function.is_continuous(t) {
        return Err(SeparationError::ContinuityFailure);
    }
    Ok(UrysohnConstruction {
        function,
        chain: levels,
    })
}

/// Continuous `f: X → [0, 1]` with `f(E) = 0`, `f(F) = 1` and dyadic values.
pub fn urysohn_function(
    t: &FiniteTopology,
    e: PointSet,
    f: PointSet,
) -> Result<ScalarFunction, SeparationError> {
    urysohn_construction(t, e, f).map(|c| c.function)
}

/// Continuous `f: X → {0, 1}`: zero exactly where the Urysohn function is.
pub fn urysohn_binary(
    t: &FiniteTopology,
    e: PointSet,
    f: PointSet,
) -> Result<ScalarFunction, SeparationError> {
    let g = urysohn_function(t, e, f)?;
    let binary = ScalarFunction::new(
        g.values()
            .iter()
            .map(|v| Scalar::from_integer(BigInt::from(u8::from(!v.is_zero()))))
            .collect(),
    );
    if !binary.is_continuous(t) {
        return Err(SeparationError::ContinuityFailure);
    }
    Ok(binary)
}
