//! Executable constructions on finite data: ordinals in Cantor normal form,
//! lexicographically ordered groups `Z^α` and `Q^α`, finite metric spaces
//! valued in them, finite topologies with their separation axioms, Urysohn
//! functions, and embeddings into the generalized Hilbert cube.
//!
//! [`harness`] sweeps every construction over all small topologies and over
//! seeded random metric spaces.

pub mod cube;
pub mod harness;
pub mod lexgroup;
pub mod metricspace;
pub mod ordinals;
pub mod separation;
pub mod topology;

pub use cube::{
    embed_theorem, ultrametric_cube_embed, verify_embedding, CubeError, CubePoint, CubeSpace, Embedding,
    EmbeddingReport, LevelBlock, Source,
};
pub use harness::{
    conditions, run_all, run_equivalence_suite, run_lemma_suites, run_metric_suites, Conditions, FullRun,
    HarnessError, SuiteReport,
};
pub use lexgroup::{LexError, LexVector, Scalar, ScalarKind};
pub use metricspace::{AxiomReport, FiniteLexMetricSpace, MetricError, Violation};
pub use ordinals::{parse_list, Ordinal, OrdinalError};
pub use separation::{
    t4_separation, urysohn_binary, urysohn_function, ScalarFunction, SeparationError, SeparationWitness,
};
pub use topology::{enumerate_topologies, FiniteTopology, PointSet, TopologyError, TopologyJson};
