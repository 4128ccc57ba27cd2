//! Vertex-coloring edge-weightings with the weight set {1,2,3,4}.
//!
//! Every graph without a single-edge component admits an edge-weighting
//! with weights 1..=4 whose weighted degrees properly color the vertices.
//! This crate turns that construction into an engine that emits verifiable
//! certificates, together with an independent verifier and a brute-force
//! minimal-weight-set oracle.
//!
//! # Layout
//!
//! - [`graph`]: simple graphs, components, articulation-free vertex
//!   choice, induced subgraphs.
//! - [`cut`]: local-search and exhaustive cuts plus the two
//!   strict-improvement repairs (cut-graph connectivity, min-cut growth).
//! - [`flow`]: the unit-capacity transfer network, max flow, min cut, and
//!   path decomposition.
//! - [`star`]: the case-analysis colorizer for the closed neighborhood of
//!   the special vertex.
//! - [`weighting`]: the pipeline tying the stages together.
//! - [`verify`]: the independent checker, the exhaustive min-k oracle,
//!   and the parity audit.
//! - [`certificate`]: the textual exchange format.
//! - [`generate`] / [`sweep`]: graph families and the exhaustive
//!   validation harness.

#![forbid(unsafe_code)]

pub mod certificate;
pub mod cut;
pub mod flow;
pub mod generate;
pub mod graph;
pub mod io;
pub mod star;
pub mod sweep;
pub mod verify;
pub mod weighting;

pub use certificate::Certificate;
pub use graph::{Edge, Graph};
pub use verify::{brute_force_min_k, verify_weighting, MinKResult, Verdict};
pub use weighting::{weight_graph, EdgeWeighting, PipelineOptions};
