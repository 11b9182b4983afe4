//! Finite sections of the generalized Hilbert cube `{0,1}^κ`.
//!
//! A [`CubeSpace`] holds finitely many points with bits over a strictly
//! increasing list of coordinate ordinals. Its metric is the componentwise
//! absolute difference read as a [`LexVector`], so the ball around a point is
//! the set of points sharing a prefix with it.
//!
//! [`embed_theorem`] sends a T1 regular space into the cube through binary
//! Urysohn functions, one per basis pair `(i, j)` with `cl(B_i) ⊆ B_j`.
//! [`ultrametric_cube_embed`] codes the level dendrogram of an ultrametric
//! so that first differences land in the block of the pair's level.
//! [`verify_embedding`] checks injectivity, continuity and openness onto the
//! image against the prefix topology.

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::lexgroup::{LexVector, Scalar, ScalarKind};
use crate::metricspace::{FiniteLexMetricSpace, MetricError};
use crate::ordinals::Ordinal;
use crate::separation::{urysohn_binary, ScalarFunction, SeparationError};
use crate::topology::{FiniteTopology, PointSet, TopologyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("bit vectors of length {left} and {right} do not live in a cube with {levels} levels")]
    Mismatch {
        left: usize,
        right: usize,
        levels: usize,
    },
    #[error("prefix of length {len} exceeds the {levels} cube levels")]
    BadPrefix { len: usize, levels: usize },
    #[error("cube levels must be strictly increasing")]
    UnsortedLevels,
    #[error("duplicate cube point id {0:?}")]
    DuplicatePoint(String),
    #[error("the topology is not {0}")]
    HypothesisFailure(&'static str),
    #[error("the family is not a basis of the topology")]
    NotABasis,
    #[error("the space is not an ultrametric")]
    NotUltrametric,
    #[error("the map is not total on the source: {0}")]
    NotTotal(String),
    #[error(transparent)]
    Separation(#[from] SeparationError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A point of a [`CubeSpace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubePoint {
    pub id: String,
    pub bits: Vec<bool>,
}

/// Finitely many points of `{0,1}^κ` over the active coordinates `levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeSpace {
    levels: Vec<Ordinal>,
    points: Vec<CubePoint>,
}

impl CubeSpace {
    pub fn new(levels: Vec<Ordinal>, points: Vec<CubePoint>) -> Result<Self, CubeError> {
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CubeError::UnsortedLevels);
        }
        let mut ids = BTreeSet::new();
        for p in &points {
            if p.bits.len() != levels.len() {
                return Err(CubeError::Mismatch {
                    left: p.bits.len(),
                    right: levels.len(),
                    levels: levels.len(),
                });
            }
            if !ids.insert(p.id.as_str()) {
                return Err(CubeError::DuplicatePoint(p.id.clone()));
            }
        }
        Ok(CubeSpace { levels, points })
    }

    pub fn levels(&self) -> &[Ordinal] {
        &self.levels
    }

    pub fn points(&self) -> &[CubePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index bound of the metric's group: `ω` when every level is finite,
    /// otherwise one past the last level.
    pub fn index_bound(&self) -> Ordinal {
        match self.levels.last() {
            Some(last) if !last.is_finite() => last.successor(),
            _ => Ordinal::omega(),
        }
    }

    /// `d(p, q)_λ = |p_λ − q_λ|`.
    pub fn cube_metric(&self, p: &[bool], q: &[bool]) -> Result<LexVector, CubeError> {
        if p.len() != self.levels.len() || q.len() != self.levels.len() {
            return Err(CubeError::Mismatch {
                left: p.len(),
                right: q.len(),
                levels: self.levels.len(),
            });
        }
        let entries = self
            .levels
            .iter()
            .zip(p.iter().zip(q))
            .filter(|(_, (a, b))| a != b)
            .map(|(level, _)| (level.clone(), Scalar::one()));
        Ok(LexVector::new(self.index_bound(), ScalarKind::Int, entries)
            .expect("levels lie below the index bound"))
    }

    /// Distance between the `i`-th and `j`-th points.
    pub fn distance(&self, i: usize, j: usize) -> LexVector {
        self.cube_metric(&self.points[i].bits, &self.points[j].bits)
            .expect("point bit vectors match the levels")
    }

    /// Points whose first `prefix.len()` bits equal `prefix`.
    pub fn cube_basis_element(&self, prefix: &[bool]) -> Result<PointSet, CubeError> {
        if prefix.len() > self.levels.len() {
            return Err(CubeError::BadPrefix {
                len: prefix.len(),
                levels: self.levels.len(),
            });
        }
        Ok(PointSet::from_points(
            (0..self.len()).filter(|&i| self.points[i].bits.starts_with(prefix)),
        ))
    }
}

/// What an [`Embedding`] embeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Topology(FiniteTopology),
    Space(FiniteLexMetricSpace),
}

impl Source {
    pub fn len(&self) -> usize {
        match self {
            Source::Topology(t) => t.n(),
            Source::Space(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point ids: decimal indices for a topology.
    pub fn ids(&self) -> Vec<String> {
        match self {
            Source::Topology(t) => (0..t.n()).map(|i| i.to_string()).collect(),
            Source::Space(s) => s.points().to_vec(),
        }
    }

    /// The topology itself, or the ball topology of the space.
    pub fn topology(&self) -> Result<FiniteTopology, CubeError> {
        match self {
            Source::Topology(t) => Ok(t.clone()),
            Source::Space(s) => Ok(s.ball_topology()?),
        }
    }
}

/// The coordinates allotted to one level of a dendrogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBlock {
    pub level: Ordinal,
    pub start: usize,
    pub len: usize,
}

/// A point map from a source into a cube, with the bookkeeping of the
/// construction that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    source: Source,
    target: CubeSpace,
    basis: Vec<PointSet>,
    pair_index: Vec<(usize, usize)>,
    blocks: Vec<LevelBlock>,
}

impl Embedding {
    /// The `i`-th source point goes to the `i`-th target point; ids must agree.
    pub fn new(source: Source, target: CubeSpace) -> Result<Self, CubeError> {
        let ids = source.ids();
        let targets: Vec<&str> = target.points.iter().map(|p| p.id.as_str()).collect();
        if ids.len() != targets.len() || ids.iter().zip(&targets).any(|(a, b)| a != b) {
            return Err(CubeError::NotTotal(format!(
                "source ids {ids:?}, target ids {targets:?}"
            )));
        }
        Ok(Embedding {
            source,
            target,
            basis: Vec::new(),
            pair_index: Vec::new(),
            blocks: Vec::new(),
        })
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn target(&self) -> &CubeSpace {
        &self.target
    }

    pub fn image(&self, x: usize) -> &[bool] {
        &self.target.points[x].bits
    }

    /// Basis used by [`embed_theorem`]; empty otherwise.
    pub fn basis(&self) -> &[PointSet] {
        &self.basis
    }

    /// Coordinate `λ` is the function for `pair_index[λ]` (from [`embed_theorem`]).
    pub fn pair_index(&self) -> &[(usize, usize)] {
        &self.pair_index
    }

    /// Level blocks (from [`ultrametric_cube_embed`]).
    pub fn blocks(&self) -> &[LevelBlock] {
        &self.blocks
    }

    /// The block holding the coordinate at position `k`.
    pub fn block_of(&self, k: usize) -> Option<&LevelBlock> {
        self.blocks.iter().find(|b| b.start <= k && k < b.start + b.len)
    }
}

fn natural_levels(k: usize) -> Vec<Ordinal> {
    (0..k as u64).map(Ordinal::nat).collect()
}

fn bits_of(f: &ScalarFunction) -> Vec<bool> {
    f.values().iter().map(|v| !v.is_zero()).collect()
}

/// The embedding built from binary Urysohn functions `f_λ` with
/// `f_λ(cl B_i) = 1` and `f_λ(X ∖ B_j) = 0`, one per pair `(i, j)` with
/// `cl(B_i) ⊆ B_j`, listed lexicographically.
pub fn embed_theorem(t: &FiniteTopology, basis: &[PointSet]) -> Result<Embedding, CubeError> {
    if !t.is_t1() {
        return Err(CubeError::HypothesisFailure("T1"));
    }
    if !t.is_regular() {
        return Err(CubeError::HypothesisFailure("regular"));
    }
    if !t.is_basis(basis) {
        return Err(CubeError::NotABasis);
    }
    let n = t.n();
    let ground = t.ground();
    let mut pair_index = Vec::new();
    let mut columns = Vec::new();
    for (i, &bi) in basis.iter().enumerate() {
        let closure = t.closure(bi);
        for (j, &bj) in basis.iter().enumerate() {
            if !closure.is_subset(bj) {
                continue;
            }
            let zero_side = ground - bj;
            let f = if zero_side.is_empty() {
                ScalarFunction::constant(n, 1)
            } else if closure.is_empty() {
                ScalarFunction::constant(n, 0)
            } else {
                urysohn_binary(t, zero_side, closure)?
            };
            pair_index.push((i, j));
            columns.push(bits_of(&f));
        }
    }
    let points = (0..n)
        .map(|x| CubePoint {
            id: x.to_string(),
            bits: columns.iter().map(|c| c[x]).collect(),
        })
        .collect();
    let target = CubeSpace::new(natural_levels(pair_index.len()), points)?;
    let mut e = Embedding::new(Source::Topology(t.clone()), target)?;
    e.basis = basis.to_vec();
    e.pair_index = pair_index;
    Ok(e)
}

fn code(child: usize, width: usize) -> impl Iterator<Item = bool> {
    (0..width).rev().map(move |b| child >> b & 1 == 1)
}

fn width(arity: usize) -> usize {
    (usize::BITS - (arity.max(1) - 1).leading_zeros()) as usize
}

/// Codes the dendrogram of `s`: at each distinct level `λ`, ascending, every
/// cluster splits into the classes of `n_xy > λ`, numbered by least member
/// and written with `⌈log₂ a⌉` bits, `a` the largest arity at `λ`.
pub fn ultrametric_cube_embed(s: &FiniteLexMetricSpace) -> Result<Embedding, CubeError> {
    if !s.is_ultrametric()? {
        return Err(CubeError::NotUltrametric);
    }
    let n = s.len();
    let levels: BTreeSet<Ordinal> = (0..n)
        .flat_map(|x| (x + 1..n).filter_map(move |y| s.level(x, y).cloned()))
        .collect();
    let mut clusters: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut bits: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut blocks = Vec::new();
    for level in levels {
        let splits: Vec<Vec<Vec<usize>>> = clusters
            .iter()
            .map(|cluster| {
                let mut children: Vec<Vec<usize>> = Vec::new();
                for &x in cluster {
                    let joined = children
                        .iter_mut()
                        .find(|c| s.level(c[0], x).is_some_and(|l| l > &level));
                    match joined {
                        Some(c) => c.push(x),
                        None => children.push(vec![x]),
                    }
                }
                children
            })
            .collect();
        let len = width(splits.iter().map(Vec::len).max().unwrap_or(1));
        blocks.push(LevelBlock {
            level,
            start: bits.first().map_or(0, Vec::len),
            len,
        });
        for children in &splits {
            for (k, child) in children.iter().enumerate() {
                for &x in child {
                    bits[x].extend(code(k, len));
                }
            }
        }
        clusters = splits.into_iter().flatten().collect();
    }
    let k = bits.first().map_or(0, Vec::len);
    let points = s
        .points()
        .iter()
        .zip(bits)
        .map(|(id, bits)| CubePoint { id: id.clone(), bits })
        .collect();
    let target = CubeSpace::new(natural_levels(k), points)?;
    let mut e = Embedding::new(Source::Space(s.clone()), target)?;
    e.blocks = blocks;
    Ok(e)
}

/// Outcome of [`verify_embedding`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub continuous: bool,
    pub open_onto_image: bool,
    pub homeomorphism: bool,
}

/// The image topology is generated by the prefix sets of the distinct image
/// points, which are exactly the cube balls restricted to the image.
pub fn verify_embedding(e: &Embedding) -> EmbeddingReport {
    let failed = EmbeddingReport {
        injective: false,
        continuous: false,
        open_onto_image: false,
        homeomorphism: false,
    };
    let Ok(t) = e.source.topology() else {
        return failed;
    };
    let n = t.n();
    let mut distinct: Vec<&[bool]> = (0..n).map(|x| e.image(x)).collect();
    distinct.sort();
    distinct.dedup();
    let class: Vec<usize> = (0..n)
        .map(|x| distinct.binary_search(&e.image(x)).expect("image is listed"))
        .collect();
    let injective = distinct.len() == n;

    let k = e.target.levels.len();
    let prefix_sets = distinct.iter().flat_map(|p| {
        (0..=k).map(|len| {
            PointSet::from_points((0..distinct.len()).filter(|&q| distinct[q].starts_with(&p[..len])))
        })
    });
    let image = match FiniteTopology::from_basis(distinct.len(), prefix_sets) {
        Ok(g) => g.topology,
        Err(_) => return failed,
    };

    let pullback = |v: PointSet| PointSet::from_points((0..n).filter(|&x| v.contains(class[x])));
    let push = |u: PointSet| PointSet::from_points(u.iter().map(|x| class[x]));
    let continuous = image.opens().iter().all(|&v| t.is_open(pullback(v)));
    let open_onto_image = t.opens().iter().all(|&u| image.is_open(push(u)));
    EmbeddingReport {
        injective,
        continuous,
        open_onto_image,
        homeomorphism: injective && continuous && open_onto_image,
    }
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    id: String,
    bits: String,
}

#[derive(Serialize, Deserialize)]
struct RawEmbedding {
    source: Source,
    levels: Vec<Ordinal>,
    points: Vec<RawPoint>,
    #[serde(default)]
    basis: Vec<PointSet>,
    #[serde(default)]
    pair_index: Vec<(usize, usize)>,
    #[serde(default)]
    blocks: Vec<LevelBlock>,
}

impl Serialize for Embedding {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawEmbedding {
            source: self.source.clone(),
            levels: self.target.levels.clone(),
            points: self
                .target
                .points
                .iter()
                .map(|p| RawPoint {
                    id: p.id.clone(),
                    bits: p.bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                })
                .collect(),
            basis: self.basis.clone(),
            pair_index: self.pair_index.clone(),
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Embedding {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawEmbedding::deserialize(deserializer)?;
        let mut points = Vec::with_capacity(raw.points.len());
        for p in raw.points {
            let bits = p
                .bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(D::Error::custom(format!("bit string {:?} is not binary", p.bits))),
                })
                .collect::<Result<_, _>>()?;
            points.push(CubePoint { id: p.id, bits });
        }
        let target = CubeSpace::new(raw.levels, points).map_err(D::Error::custom)?;
        let mut e = Embedding::new(raw.source, target).map_err(D::Error::custom)?;
        e.basis = raw.basis;
        e.pair_index = raw.pair_index;
        e.blocks = raw.blocks;
        Ok(e)
    }
}

/// The `k`-th coordinate function of the map.
pub fn coordinate(e: &Embedding, k: usize) -> ScalarFunction {
    ScalarFunction::new(
        e.target
            .points
            .iter()
            .map(|p| Scalar::from_integer(BigInt::from(u8::from(p.bits[k]))))
            .collect(),
    )
}
