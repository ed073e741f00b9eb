//! Spanning trees without small-degree vertices.
//!
//! A *[2,k]-ST* of a graph `G` is a spanning tree in which no vertex has
//! degree between 2 and `k`: every vertex is either a leaf or an internal
//! vertex of degree at least `k+1`. The special case `k = 2` (no degree-2
//! vertices) is the classical homeomorphically irreducible spanning tree
//! (HIST).
//!
//! The crate provides:
//!
//! * [`graph`] — an immutable simple-graph type plus the structural
//!   quantities everything else consumes: degrees, the neighborhood-union
//!   number `NC(G)`, the degree-sum number `σ(G)`, connected components,
//!   cliques, and a hypothesis report for the known sufficient conditions.
//! * [`cert`] — explicit tree certificates, their classification
//!   (full [2,k]-ST / i-semi / i-quasi / invalid), and the gluing operation
//!   that composes partial trees into spanning ones.
//! * [`solver`] — an exact backtracking decision procedure for small
//!   graphs and a naive spanning-tree enumerator used as its test oracle.
//! * [`dense`] — a greedy construction realizing the contract
//!   "δ(G) ≥ c_k√n implies a [2,k]-ST exists".
//! * [`thresholds`] — exact integer evaluation of the thresholds n₀(k)
//!   and n₁(k) attached to the density constant c_k.
//! * [`construct`] — the certified constructive pipeline: given a
//!   connected graph with n ≥ n₁(k), δ(G) ≥ 2k and 2·NC(G) ≥ n−2, produce
//!   a [2,k]-ST certificate together with a machine-checkable trace of the
//!   case analysis and every inequality it relied on.
//! * [`families`] — generators: the extremal family `H` showing the
//!   minimum-degree bound is tight, fixture families routing the
//!   constructive pipeline into each of its cases, and seeded random
//!   graphs.
//!
//! Certificates are never trusted: everything returned by a solver or by
//! the constructive pipeline is re-validated with [`cert::classify`].

pub mod cert;
pub mod construct;
pub mod dense;
mod dsu;
pub mod families;
pub mod graph;
pub mod solver;
pub mod thresholds;
pub mod trace;

pub use cert::{classify, TreeCertificate, TreeKind};
pub use construct::{construct_2k_st, construct_2k_st_assuming, ConstructError};
pub use graph::{Graph, HypothesisReport, PairMin, VertexSet};
pub use solver::{solve_exact, solve_naive, SearchBudget, SolveOutcome, SolveStatus};
pub use thresholds::{thresholds, Thresholds};
pub use trace::ProofTrace;
