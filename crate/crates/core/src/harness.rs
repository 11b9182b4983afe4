//! Property suites over exhaustive small topologies and seeded random metric
//! spaces.
//!
//! Every suite counts the instances it checked and records each violated
//! clause with a JSON serialization of the offending instance. Reports are a
//! pure function of their inputs; wall time is kept out of the serialized
//! form so that repeated runs produce identical JSON.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cube::{embed_theorem, ultrametric_cube_embed, verify_embedding, CubePoint, CubeSpace, Embedding, Source};
use crate::lexgroup::{LexVector, Scalar, ScalarKind};
use crate::metricspace::FiniteLexMetricSpace;
use crate::ordinals::Ordinal;
use crate::separation::{t4_separation, urysohn_binary, urysohn_function};
use crate::topology::{enumerate_topologies, FiniteTopology, PointSet, MAX_ENUMERATE};

/// Number of labeled topologies on `n` points, `n = 0..=5`.
pub const TOPOLOGY_COUNTS: [u64; 6] = [1, 1, 4, 29, 355, 6942];

/// Counterexamples kept per suite; the total is always counted.
pub const KEPT_COUNTEREXAMPLES: usize = 32;

/// Bases per topology enumerated exhaustively before falling back to
/// [`FiniteTopology::basis_candidates`].
pub const BASIS_LIMIT: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("max_n = {n} exceeds the exhaustive bound {max}")]
    TooLarge { n: usize, max: usize },
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub instance: Value,
    pub clause: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

struct Suite {
    name: &'static str,
    instances: u64,
    failures: u64,
    counterexamples: Vec<Counterexample>,
    note: Option<String>,
    started: Instant,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            instances: 0,
            failures: 0,
            counterexamples: Vec::new(),
            note: None,
            started: Instant::now(),
        }
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    /// Counts one instance and records every clause that fails on it.
    /// Returns whether the instance passed.
    fn check(&mut self, instance: impl FnOnce() -> Value, clauses: &[(&str, bool)]) -> bool {
        self.instances += 1;
        let failed: Vec<&str> = clauses.iter().filter(|c| !c.1).map(|c| c.0).collect();
        if failed.is_empty() {
            return true;
        }
        self.failures += 1;
        if self.counterexamples.len() < KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(Counterexample {
                instance: instance(),
                clause: failed.join("; "),
            });
        }
        false
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name.to_string(),
            instances: self.instances,
            failures: self.failures,
            pass: self.failures == 0,
            counterexamples: self.counterexamples,
            note: self.note,
            elapsed: self.started.elapsed(),
        }
    }
}

fn check_bound(max_n: usize) -> Result<(), HarnessError> {
    if max_n > MAX_ENUMERATE {
        return Err(HarnessError::TooLarge {
            n: max_n,
            max: MAX_ENUMERATE,
        });
    }
    Ok(())
}

fn topologies(max_n: usize) -> impl Iterator<Item = FiniteTopology> {
    (1..=max_n).flat_map(|n| enumerate_topologies(n).expect("n within bound"))
}

fn all_subsets(n: usize) -> impl Iterator<Item = PointSet> {
    (0..1u32 << n).map(move |m| PointSet::from_points((0..n).filter(|i| m >> i & 1 == 1)))
}

/// Disjoint nonempty closed pairs `(E, F)`.
fn closed_pairs(t: &FiniteTopology) -> Vec<(PointSet, PointSet)> {
    let closed: Vec<PointSet> = t.closed_sets().filter(|c| !c.is_empty()).collect();
    closed
        .iter()
        .flat_map(|&e| closed.iter().filter(move |&&f| e.is_disjoint(f)).map(move |&f| (e, f)))
        .collect()
}

fn bases(t: &FiniteTopology) -> Vec<Vec<PointSet>> {
    t.all_bases(BASIS_LIMIT).unwrap_or_else(|| t.basis_candidates())
}

fn fiber_open(t: &FiniteTopology, values: &[Scalar], v: &Scalar) -> bool {
    t.is_open(PointSet::from_points((0..values.len()).filter(|&x| &values[x] == v)))
}

/// Sweeps every topology on `1..=max_n` points through the exhaustive
/// invariants of the topology, separation and cube modules.
pub fn run_lemma_suites(max_n: usize) -> Result<Vec<SuiteReport>, HarnessError> {
    check_bound(max_n)?;
    let mut count = Suite::new("enumeration count");
    for n in 1..=max_n {
        let got = enumerate_topologies(n).expect("n within bound").count() as u64;
        count.check(
            || json!({"n": n, "enumerated": got, "expected": TOPOLOGY_COUNTS[n]}),
            &[("count matches the labeled topology sequence", got == TOPOLOGY_COUNTS[n])],
        );
    }

    let mut zero_dim = Suite::new("zero-dimensional T0 implies T2 and regular");
    let mut reg_normal = Suite::new("regular implies normal");
    let mut t4 = Suite::new("disjoint open neighbourhoods of closed sets");
    let mut urysohn = Suite::new("urysohn function");
    let mut binary = Suite::new("binary urysohn function");
    let mut nested = Suite::new("nested basis members");
    let mut dense = Suite::new("dense set from basis");
    let mut subcover = Suite::new("subcover from basis");
    let mut kq = Suite::new("kolmogorov quotient");
    let mut embed = Suite::new("cube embedding of T1 regular spaces");

    for t in topologies(max_n) {
        let tj = || json!({"topology": &t});
        if t.is_zero_dimensional() && t.is_t0() {
            zero_dim.check(tj, &[("T2", t.is_t2()), ("regular", t.is_regular())]);
        }
        if t.is_regular() {
            reg_normal.check(tj, &[("normal", t.is_normal())]);
        }

        let pairs = closed_pairs(&t);
        if t.is_regular() {
            for &(e, f) in &pairs {
                let inst = || json!({"topology": &t, "e": e, "f": f});
                match t4_separation(&t, e, f) {
                    Ok(w) => {
                        let union = |side: fn(&(PointSet, PointSet)) -> PointSet| {
                            w.stages.iter().map(side).fold(PointSet::EMPTY, |acc, s| acc | s)
                        };
                        t4.check(
                            inst,
                            &[
                                ("A and B open", t.is_open(w.a) && t.is_open(w.b)),
                                ("E within A, F within B", e.is_subset(w.a) && f.is_subset(w.b)),
                                ("A and B disjoint", w.a.is_disjoint(w.b)),
                                ("stages open", w.stages.iter().all(|s| t.is_open(s.0) && t.is_open(s.1))),
                                ("stages unite to A and B", union(|s| s.0) == w.a && union(|s| s.1) == w.b),
                            ],
                        );
                    }
                    Err(err) => {
                        t4.check(inst, &[(&format!("construction failed: {err}"), false)]);
                    }
                }
            }
        }

        if t.is_normal() {
            for &(e, f) in &pairs {
                let inst = || json!({"topology": &t, "e": e, "f": f});
                match urysohn_function(&t, e, f) {
                    Ok(g) => {
                        let v = g.values();
                        let (zero, one) = (Scalar::from_integer(BigInt::from(0)), Scalar::from_integer(BigInt::from(1)));
                        urysohn.check(
                            inst,
                            &[
                                ("every fiber open", v.iter().all(|x| fiber_open(&t, v, x))),
                                ("zero on E", e.iter().all(|x| v[x] == zero)),
                                ("one on F", f.iter().all(|x| v[x] == one)),
                                ("values in [0, 1]", v.iter().all(|x| *x >= zero && *x <= one)),
                                ("dyadic values", g.is_dyadic()),
                            ],
                        );
                    }
                    Err(err) => {
                        urysohn.check(inst, &[(&format!("construction failed: {err}"), false)]);
                    }
                }
                match urysohn_binary(&t, e, f) {
                    Ok(g) => {
                        let zeros = g.fiber(&Scalar::from_integer(BigInt::from(0)));
                        let ones = g.fiber(&Scalar::from_integer(BigInt::from(1)));
                        binary.check(
                            inst,
                            &[
                                ("fibers open", t.is_open(zeros) && t.is_open(ones)),
                                ("fibers partition", zeros.is_disjoint(ones) && (zeros | ones) == t.ground()),
                                ("E in zero fiber, F in one fiber", e.is_subset(zeros) && f.is_subset(ones)),
                            ],
                        );
                    }
                    Err(err) => {
                        binary.check(inst, &[(&format!("construction failed: {err}"), false)]);
                    }
                }
            }
        }

        let candidates = t.basis_candidates();
        for basis in &candidates {
            let inst = || json!({"topology": &t, "basis": basis});
            match t.dense_from_basis(basis) {
                Ok(d) => dense.check(inst, &[("closure is the ground set", t.closure(d) == t.ground())]),
                Err(err) => dense.check(inst, &[(&format!("construction failed: {err}"), false)]),
            };
            let nonempty: Vec<PointSet> = t.opens().iter().copied().filter(|u| !u.is_empty()).collect();
            for cover in [vec![t.ground()], t.minimal_basis(), nonempty] {
                let inst = || json!({"topology": &t, "basis": basis, "cover": &cover});
                match t.subcover_from_basis(basis, &cover) {
                    Ok(chosen) => {
                        let union = chosen.iter().fold(PointSet::EMPTY, |acc, &i| acc | cover[i]);
                        subcover.check(
                            inst,
                            &[
                                ("indices name cover members", chosen.iter().all(|&i| i < cover.len())),
                                ("selection covers", union == t.ground()),
                            ],
                        )
                    }
                    Err(err) => subcover.check(inst, &[(&format!("construction failed: {err}"), false)]),
                };
            }
            if t.is_regular() {
                for &u in t.opens() {
                    for x in u.iter() {
                        let inst = || json!({"topology": &t, "basis": basis, "x": x, "open": u});
                        match t.nested_basis_find(basis, x, u) {
                            Ok((b, b2)) => nested.check(
                                inst,
                                &[
                                    ("members of the basis", basis.contains(&b) && basis.contains(&b2)),
                                    ("x in B", b.contains(x)),
                                    ("closure of B inside B'", t.closure(b).is_subset(b2)),
                                    ("B' inside U", b2.is_subset(u)),
                                ],
                            ),
                            Err(err) => nested.check(inst, &[(&format!("construction failed: {err}"), false)]),
                        };
                    }
                }
            }
        }

        let q = t.kolmogorov_quotient();
        let pullback = |v: PointSet| PointSet::from_points((0..t.n()).filter(|&x| v.contains(q.class_of[x])));
        let pulled: Vec<PointSet> = {
            let mut p: Vec<PointSet> = q.topology.opens().iter().map(|&v| pullback(v)).collect();
            p.sort();
            p
        };
        kq.check(
            tj,
            &[
                ("quotient is T0", q.topology.is_t0()),
                ("pullback of quotient opens is the topology", pulled == t.opens()),
                (
                    "classes are indistinguishable points",
                    (0..t.n()).all(|x| {
                        (0..t.n()).all(|y| {
                            (q.class_of[x] == q.class_of[y])
                                == (t.minimal_neighbourhood(x) == t.minimal_neighbourhood(y))
                        })
                    }),
                ),
            ],
        );

        if t.is_t1() && t.is_regular() {
            for basis in bases(&t) {
                let inst = || json!({"topology": &t, "basis": &basis});
                match embed_theorem(&t, &basis) {
                    Ok(e) => {
                        let report = verify_embedding(&e);
                        embed.check(inst, &[("homeomorphism onto image", report.homeomorphism)]);
                    }
                    Err(err) => {
                        embed.check(inst, &[(&format!("construction failed: {err}"), false)]);
                    }
                }
            }
        }
    }

    Ok(vec![
        count.finish(),
        zero_dim.finish(),
        reg_normal.finish(),
        t4.finish(),
        urysohn.finish(),
        binary.finish(),
        nested.finish(),
        dense.finish(),
        subcover.finish(),
        kq.finish(),
        embed.finish(),
    ])
}

/// The six equivalent conditions, read on a finite space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    /// Fully additive, T0, zero-dimensional, with a basis.
    pub additive_t0_zero_dimensional: bool,
    /// Fully additive, T1, regular, with a basis.
    pub additive_t1_regular: bool,
    /// Realized by a metric whose ball basis generates it.
    pub metrizable_with_basis: bool,
    /// Realized by a metric, with a dense set drawn from the ball basis.
    pub metrizable_with_dense_set: bool,
    /// Realized by a metric, with every open cover reduced through the ball basis.
    pub metrizable_with_subcovers: bool,
    /// Homeomorphic onto a subspace of a cube via a verified embedding.
    pub embeds_in_cube: bool,
}

impl Conditions {
    fn all(&self) -> [bool; 6] {
        [
            self.additive_t0_zero_dimensional,
            self.additive_t1_regular,
            self.metrizable_with_basis,
            self.metrizable_with_dense_set,
            self.metrizable_with_subcovers,
            self.embeds_in_cube,
        ]
    }
}

/// All distances `r^0`: the only candidate metric needed, since every
/// finite metric has the discrete ball topology.
fn unit_metric(n: usize) -> FiniteLexMetricSpace {
    let omega = Ordinal::omega();
    FiniteLexMetricSpace::from_fn(omega.clone(), ScalarKind::Int, (0..n).map(|i| format!("{i:02}")).collect(), |_, _| {
        LexVector::unit(Ordinal::zero(), omega.clone()).expect("0 < ω")
    })
    .expect("the unit metric is valid")
}

/// Point `x` goes to the indicator bit vector of `x` over `n` levels.
fn one_hot(t: &FiniteTopology) -> Embedding {
    let n = t.n();
    let points = (0..n)
        .map(|x| CubePoint {
            id: x.to_string(),
            bits: (0..n).map(|k| k == x).collect(),
        })
        .collect();
    let target = CubeSpace::new((0..n as u64).map(Ordinal::nat).collect(), points).expect("well formed");
    Embedding::new(Source::Topology(t.clone()), target).expect("ids agree")
}

/// Evaluates the six conditions on `t`.
pub fn conditions(t: &FiniteTopology) -> Conditions {
    let basis = t.minimal_basis();
    let has_basis = t.is_basis(&basis);
    let additive = t.is_fully_additive() && has_basis;

    let metric = unit_metric(t.n());
    let realized = metric.ball_topology().ok().filter(|b| b.opens() == t.opens());
    let (with_basis, with_dense, with_subcovers) = match realized {
        None => (false, false, false),
        Some(_) => {
            let balls: Vec<PointSet> = metric
                .ball_basis()
                .map(|b| b.into_iter().map(|ball| ball.members).collect())
                .unwrap_or_default();
            let is_basis = t.is_basis(&balls);
            let dense = t.dense_from_basis(&balls).is_ok_and(|d| t.closure(d) == t.ground());
            let nonempty: Vec<PointSet> = t.opens().iter().copied().filter(|u| !u.is_empty()).collect();
            let covers = [vec![t.ground()], basis.clone(), nonempty].iter().all(|cover| {
                t.subcover_from_basis(&balls, cover)
                    .is_ok_and(|c| c.iter().fold(PointSet::EMPTY, |acc, &i| acc | cover[i]) == t.ground())
            });
            (is_basis, is_basis && dense, is_basis && covers)
        }
    };

    let embedding = if t.is_t1() && t.is_regular() {
        embed_theorem(t, &basis).ok()
    } else {
        Some(one_hot(t))
    };
    let embeds = embedding.is_some_and(|e| verify_embedding(&e).homeomorphism);

    Conditions {
        additive_t0_zero_dimensional: additive && t.is_t0() && t.is_zero_dimensional(),
        additive_t1_regular: additive && t.is_t1() && t.is_regular(),
        metrizable_with_basis: with_basis,
        metrizable_with_dense_set: with_dense,
        metrizable_with_subcovers: with_subcovers,
        embeds_in_cube: embeds,
    }
}

/// Checks that the six conditions agree on every topology with at most
/// `max_n` points and coincide with discreteness decided over all subsets.
pub fn run_equivalence_suite(max_n: usize) -> Result<SuiteReport, HarnessError> {
    check_bound(max_n)?;
    let mut suite = Suite::new("six conditions agree with discreteness").with_note(
        "cardinality bounds are vacuous on finite spaces, so the metric conditions reduce to \
         metrizability; any injective map into a cube has a discrete image",
    );
    for t in topologies(max_n) {
        let c = conditions(&t);
        let discrete = all_subsets(t.n()).all(|s| t.is_open(s));
        let flags = c.all();
        suite.check(
            || json!({"topology": &t, "conditions": c, "discrete": discrete}),
            &[
                ("conditions agree pairwise", flags.iter().all(|&f| f == flags[0])),
                ("conditions equal discreteness", flags[0] == discrete),
            ],
        );
    }
    Ok(suite.finish())
}

/// Coordinate indices available to random spaces: `0..=5`, `ω..=ω+5`,
/// `ω·2..=ω·2+5`.
pub fn level_pool() -> Vec<Ordinal> {
    let bases = [Ordinal::zero(), Ordinal::omega(), Ordinal::monomial(Ordinal::one(), 2)];
    bases
        .iter()
        .flat_map(|base| (0..6).map(|k| base.add(&Ordinal::nat(k))))
        .collect()
}

fn random_scalar(rng: &mut ChaCha8Rng, kind: ScalarKind, range: i64) -> Scalar {
    loop {
        let v = match kind {
            ScalarKind::Int => Scalar::from_integer(BigInt::from(rng.gen_range(-range..=range))),
            ScalarKind::Rat => Scalar::new(
                BigInt::from(rng.gen_range(-2 * range..=2 * range)),
                BigInt::from(rng.gen_range(1i64..=4)),
            ),
        };
        if v != Scalar::from_integer(BigInt::from(0)) {
            return v;
        }
    }
}

fn random_vector(
    rng: &mut ChaCha8Rng,
    alpha: &Ordinal,
    kind: ScalarKind,
    levels: &[Ordinal],
    range: i64,
) -> LexVector {
    let mut entries = Vec::new();
    for l in levels {
        if rng.gen_bool(0.5) {
            entries.push((l.clone(), random_scalar(rng, kind, range)));
        }
    }
    LexVector::new(alpha.clone(), kind, entries).expect("levels below alpha")
}

fn random_positive(rng: &mut ChaCha8Rng, alpha: &Ordinal, kind: ScalarKind, levels: &[Ordinal]) -> LexVector {
    loop {
        let v = random_vector(rng, alpha, kind, levels, 3);
        if !v.is_zero() {
            return v.abs();
        }
    }
}

/// One candidate table: a line metric `|p_x − p_y|`, the same with a few
/// entries replaced, or (for at most four points) a table of independent
/// random entries.
fn candidate(
    rng: &mut ChaCha8Rng,
    alpha: &Ordinal,
    kind: ScalarKind,
    levels: &[Ordinal],
    ids: &[String],
) -> FiniteLexMetricSpace {
    let n = ids.len();
    let mode = rng.gen_range(0..if n <= 4 { 3 } else { 2 });
    let mut table = vec![vec![LexVector::zero(alpha.clone(), kind); n]; n];
    if mode == 2 {
        for i in 0..n {
            for j in i + 1..n {
                table[i][j] = random_positive(rng, alpha, kind, levels);
            }
        }
    } else {
        // distinct positions; one level already gives enough values for eight points
        let mut positions: Vec<LexVector> = Vec::with_capacity(n);
        while positions.len() < n {
            let p = random_vector(rng, alpha, kind, levels, 8);
            if !positions.contains(&p) {
                positions.push(p);
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                table[i][j] = positions[i].sub(&positions[j]).expect("same group").abs();
            }
        }
        if mode == 1 && n >= 2 {
            for _ in 0..rng.gen_range(1..=2) {
                let i = rng.gen_range(0..n - 1);
                let j = rng.gen_range(i + 1..n);
                table[i][j] = random_positive(rng, alpha, kind, levels);
            }
        }
    }
    FiniteLexMetricSpace::from_fn(alpha.clone(), kind, ids.to_vec(), |i, j| table[i][j].clone())
        .expect("well-formed table")
}

/// A random valid metric space on 1..=8 points with at most six support
/// levels from [`level_pool`], rejection-sampled on the metric axioms.
pub fn random_space(rng: &mut ChaCha8Rng, kind: ScalarKind) -> FiniteLexMetricSpace {
    let omega = Ordinal::omega();
    let mut alphas = vec![
        Ordinal::monomial(Ordinal::one(), 3),
        Ordinal::monomial(Ordinal::nat(2), 1),
    ];
    if kind == ScalarKind::Int {
        // successor bounds are only used where unit radii see every scalar
        alphas.push(omega.add(&omega).add(&Ordinal::nat(6)));
    }
    let alpha = alphas.choose(rng).expect("nonempty").clone();
    let n = rng.gen_range(1..=8usize);
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut pool = level_pool();
    pool.shuffle(rng);
    let mut levels: Vec<Ordinal> = pool.into_iter().take(rng.gen_range(1..=6)).collect();
    levels.sort();
    loop {
        let s = candidate(rng, &alpha, kind, &levels, &ids);
        if s.verify_metric_axioms().valid {
            return s;
        }
    }
}

/// `trials` spaces from [`random_space`] under `seed`, alternating integer
/// and rational scalars.
pub fn random_corpus(trials: u64, seed: u64) -> Vec<FiniteLexMetricSpace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|k| random_space(&mut rng, if k % 2 == 0 { ScalarKind::Int } else { ScalarKind::Rat }))
        .collect()
}

/// The list `L` variants used for one space: the levels present, the first
/// terms of the bound's fundamental sequence (or its predecessor), and a
/// random superset of a cofinal element.
fn cofinal_lists(rng: &mut ChaCha8Rng, s: &FiniteLexMetricSpace) -> Vec<Vec<Ordinal>> {
    let n = s.len();
    let mut present: Vec<Ordinal> = (0..n)
        .flat_map(|x| (x + 1..n).filter_map(move |y| s.level(x, y).cloned()))
        .collect();
    present.sort();
    present.dedup();
    let top = present.last().cloned().unwrap_or_else(Ordinal::zero);
    let alpha = s.alpha();
    let canonical = match alpha.predecessor() {
        Some(p) => vec![p],
        None => {
            let mut k = 1;
            loop {
                let l = alpha.cofinal_subset(k).expect("limit bound");
                if l.last().is_some_and(|m| m >= &top) {
                    break l;
                }
                k += 1;
            }
        }
    };
    let mut random: Vec<Ordinal> = level_pool().into_iter().filter(|_| rng.gen_bool(0.4)).collect();
    let cap = level_pool().into_iter().filter(|l| l >= &top).collect::<Vec<_>>();
    random.push(cap.choose(rng).expect("pool reaches every level").clone());
    random.sort();
    random.dedup();
    let mut out = vec![canonical, random];
    if !present.is_empty() {
        out.insert(0, present);
    }
    out
}

/// What [`check_space`] found, per suite.
struct SpaceFindings {
    clauses: [Vec<(String, bool)>; 7],
}

const METRIC_SUITES: [&str; 7] = [
    "ultrametrize output is a unit ultrametric",
    "ball interleaving",
    "ball topology preserved",
    "cofinal reduction ball correspondence",
    "clopen ball basis",
    "cube level fidelity",
    "composed levels reproduce first-difference levels",
];

fn unit(level: &Ordinal, alpha: &Ordinal) -> LexVector {
    LexVector::unit(level.clone(), alpha.clone()).expect("level below alpha")
}

/// Checks the metric invariants of `s` against its ultrametrization `u`
/// (possibly mutated) and the lists `lists`.
fn check_space(s: &FiniteLexMetricSpace, u: &FiniteLexMetricSpace, lists: &[Vec<Ordinal>]) -> SpaceFindings {
    let mut f: [Vec<(String, bool)>; 7] = Default::default();
    let n = s.len();
    let alpha = s.alpha();

    f[0].push(("unit ultrametric".into(), u.is_unit_ultrametric()));

    if u.verify_metric_axioms().valid {
        for level in s.test_levels() {
            let next = level.successor();
            if &next >= alpha {
                continue;
            }
            for x in 0..n {
                let (bu, bs) = (u.unit_ball(x, &level), s.unit_ball(x, &level));
                let (bu1, bs1) = (u.unit_ball(x, &next), s.unit_ball(x, &next));
                let ok = match (bu, bs, bu1, bs1) {
                    (Ok(bu), Ok(bs), Ok(bu1), Ok(bs1)) => bs1.is_subset(bu) && bu1.is_subset(bs),
                    _ => false,
                };
                f[1].push((format!("x = {}, level {level}", s.points()[x]), ok));
            }
        }
    } else {
        f[1].push(("ultrametrized table is a metric".into(), false));
    }

    let ts = s.ball_topology();
    let tu = u.ball_topology();
    let all = s.all_radii_topology();
    match (ts, tu, all) {
        (Ok(ts), Ok(tu), Ok(all)) => {
            f[2].push(("same topology after ultrametrizing".into(), ts == tu));
            f[2].push(("unit radii generate the all-radii topology".into(), ts == all));
            f[2].push(("discrete".into(), (0..n).all(|x| ts.is_open(PointSet::singleton(x)))));
            let basis: Vec<PointSet> = s
                .ball_basis()
                .map(|b| b.into_iter().map(|b| b.members).collect())
                .unwrap_or_default();
            f[4].push(("ball basis generates the topology".into(), ts.is_basis(&basis)));
            f[4].push(("basis members clopen".into(), basis.iter().all(|&b| ts.is_open(b) && ts.is_closed(b))));
        }
        _ => f[2].push(("ball topologies computed".into(), false)),
    }

    for list in lists {
        match u.cofinal_reduce(list) {
            Ok(r) => {
                let ok = r.is_ultrametric().unwrap_or(false)
                    && list.iter().enumerate().all(|(pos, l)| {
                        let pos = Ordinal::nat(pos as u64);
                        (0..n).all(|x| {
                            let a = r.ball(x, &unit(&pos, r.alpha()));
                            let b = u.unit_ball(x, l);
                            matches!((a, b), (Ok(a), Ok(b)) if a == b)
                        })
                    });
                f[3].push((format!("L = {list:?}"), ok));
            }
            Err(err) => f[3].push((format!("L = {list:?}: {err}"), false)),
        }
    }

    match ultrametric_cube_embed(u) {
        Ok(e) => {
            f[5].push(("embedding verified".into(), verify_embedding(&e).homeomorphism));
            for x in 0..n {
                for y in x + 1..n {
                    let d = e.target().distance(x, y);
                    let block = d
                        .leading()
                        .and_then(|(k, _)| k.as_finite())
                        .and_then(|k| e.block_of(k as usize));
                    let pair = format!("{}|{}", s.points()[x], s.points()[y]);
                    f[5].push((pair.clone(), block.map(|b| &b.level) == u.level(x, y)));
                    f[6].push((pair, block.map(|b| &b.level) == s.level(x, y)));
                }
            }
        }
        Err(err) => {
            f[5].push((format!("embedding failed: {err}"), false));
            f[6].push((format!("embedding failed: {err}"), false));
        }
    }
    SpaceFindings { clauses: f }
}

/// A single-entry mutation of an ultrametrized table.
#[derive(Debug, Clone, Serialize)]
pub struct Plant {
    pub trial: u64,
    pub pair: (String, String),
    pub mutation: &'static str,
    pub detected: bool,
}

fn mutate(rng: &mut ChaCha8Rng, u: &FiniteLexMetricSpace, trial: u64) -> Option<(FiniteLexMetricSpace, Plant)> {
    let n = u.len();
    if n < 2 {
        return None;
    }
    let i = rng.gen_range(0..n - 1);
    let j = rng.gen_range(i + 1..n);
    let alpha = u.alpha();
    let old = u.dist(i, j).clone();
    let level = u.level(i, j).expect("distinct points").clone();
    let (name, value) = match trial % 4 {
        0 => {
            let others: Vec<Ordinal> = level_pool().into_iter().filter(|l| l != &level && l < alpha).collect();
            ("shifted level", unit(others.choose(rng).expect("pool has other levels"), alpha))
        }
        1 => ("doubled", old.add(&old).expect("same group")),
        2 => ("zeroed", LexVector::zero(alpha.clone(), u.kind())),
        _ => ("negated", old.neg()),
    };
    let mutated = u.with_distance(i, j, value).expect("same group");
    Some((
        mutated,
        Plant {
            trial,
            pair: (u.points()[i].clone(), u.points()[j].clone()),
            mutation: name,
            detected: false,
        },
    ))
}

/// Result of [`run_metric_suites`].
#[derive(Debug, Clone, Serialize)]
pub struct MetricRun {
    pub suites: Vec<SuiteReport>,
    /// Present in fault-injection mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plants: Option<Vec<Plant>>,
}

/// Runs the metric invariants over `trials` random spaces drawn from
/// `seed`, alternating integer and rational scalars. With `fault_inject`,
/// each ultrametrized table has one entry mutated before checking and the
/// plants that no suite flags are reported.
pub fn run_metric_suites(trials: u64, seed: u64, fault_inject: bool) -> Result<MetricRun, HarnessError> {
    if trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites: Vec<Suite> = METRIC_SUITES.iter().map(|&name| Suite::new(name)).collect();
    if fault_inject {
        for s in &mut suites {
            s.note = Some("fault injection: one entry of each ultrametrized table is mutated".into());
        }
    }
    let mut plants = Vec::new();
    let mut undetected = Suite::new("fault injection detection");
    for trial in 0..trials {
        let kind = if trial % 2 == 0 { ScalarKind::Int } else { ScalarKind::Rat };
        let s = random_space(&mut rng, kind);
        let mut u = s.ultrametrize().expect("sampled spaces are valid");
        let lists = cofinal_lists(&mut rng, &s);
        let mut plant = None;
        if fault_inject {
            if let Some((m, p)) = mutate(&mut rng, &u, trial) {
                u = m;
                plant = Some(p);
            }
        }
        let findings = check_space(&s, &u, &lists);
        let mut clean = true;
        for (suite, clauses) in suites.iter_mut().zip(findings.clauses) {
            let failed: Vec<(&str, bool)> = clauses.iter().map(|(c, ok)| (c.as_str(), *ok)).collect();
            let instance = || json!({"trial": trial, "space": &s, "ultrametrized": &u});
            clean &= suite.check(instance, &failed);
        }
        if let Some(mut p) = plant {
            p.detected = !clean;
            undetected.check(|| json!(&p), &[("plant detected", p.detected)]);
            plants.push(p);
        }
    }
    let mut suites: Vec<SuiteReport> = suites.into_iter().map(Suite::finish).collect();
    if fault_inject {
        suites.push(undetected.finish());
    }
    Ok(MetricRun {
        suites,
        plants: fault_inject.then_some(plants),
    })
}

/// Everything `suites` runs.
#[derive(Debug, Clone, Serialize)]
pub struct FullRun {
    pub max_n: usize,
    pub trials: u64,
    pub seed: u64,
    pub fault_inject: bool,
    pub suites: Vec<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plants: Option<Vec<Plant>>,
    pub counterexamples: u64,
    pub pass: bool,
}

/// Exhaustive topology suites, the equivalence suite and the metric suites. Without fault
/// injection `pass` means no counterexample at all; with it, `pass` means
/// every plant was detected.
pub fn run_all(max_n: usize, trials: u64, seed: u64, fault_inject: bool) -> Result<FullRun, HarnessError> {
    let mut suites = run_lemma_suites(max_n)?;
    suites.push(run_equivalence_suite(max_n)?);
    let exhaustive_pass = suites.iter().all(|s| s.pass);
    let metric = run_metric_suites(trials, seed, fault_inject)?;
    suites.extend(metric.suites);
    let counterexamples = suites.iter().map(|s| s.failures).sum();
    let pass = if fault_inject {
        let all_detected = metric.plants.as_ref().is_some_and(|p| p.iter().all(|p| p.detected));
        exhaustive_pass && all_detected
    } else {
        counterexamples == 0
    };
    Ok(FullRun {
        max_n,
        trials,
        seed,
        fault_inject,
        suites,
        plants: metric.plants,
        counterexamples,
        pass,
    })
}
