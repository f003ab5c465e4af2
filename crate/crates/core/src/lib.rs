//! Corolla polynomials of half-edge graphs.
//!
//! A half-edge graph assigns each vertex a set of labeled half-edges; an
//! involution pairs some of them into internal edges and leaves the rest
//! external. To each half-edge `h` belongs a variable `a_h`, and the corolla
//! polynomial of a three-regular graph collects, with coefficient one, every
//! way of picking one half-edge per vertex so that the unpicked remainder is
//! acyclic. The crate computes that polynomial three independent ways:
//!
//! * [`corolla::corolla_by_definition`] — an alternating sum over families
//!   of pairwise vertex-disjoint cycles,
//! * [`corolla::corolla_by_subsets`] — a pruned scan over one-per-vertex
//!   selections,
//! * [`corolla::corolla_by_recurrence`] — a memoized vertex-removal
//!   recurrence,
//!
//! and extends it with the universal polynomial `𝐂(G,r,a)` and its
//! `q`-refinement ([`universal`]), a Potts-type coloring oracle, a
//! constrained evaluation over spanning cycle families, and the
//! arbitrary-valence generalization with its contraction–deletion residual
//! ([`genvalence`]).
//!
//! Polynomials are multilinear in the `a`-variables with exact
//! arbitrary-precision coefficients and two auxiliary indeterminates `r`
//! and `q`; see [`poly::Polynomial`]. Graph surgery (vertex removal,
//! half-edge deletion, edge contraction, disjoint union) lives on
//! [`graph::HalfEdgeGraph`], and [`generators`] provides frozen named
//! fixtures, exhaustive small-graph enumeration, and seeded random graphs
//! for verification corpora.

pub mod corolla;
pub mod cycles;
pub mod generators;
pub mod genvalence;
pub mod graph;
pub mod poly;
pub mod report;
mod selscan;
mod unionfind;
pub mod universal;

/// Exact integer coefficients used by the default polynomial type.
pub type Int = num_bigint::BigInt;
/// Exact rationals used for evaluation.
pub type Rat = num_rational::BigRational;
/// The default polynomial: multilinear over arbitrary-precision integers.
pub type Poly = poly::Polynomial<Int>;

pub use graph::{ContractionMode, GraphError, HalfEdgeGraph, HalfEdgeId, VertexId};
pub use poly::{Monomial, PolyError, Polynomial};
pub use report::{CheckStatus, IdentityReport};
