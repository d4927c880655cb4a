//! Exact oracles and constructive extractors for finding sparse, 2-connected
//! induced subgraphs of large treewidth inside weakly sparse graphs.
//!
//! The library has three layers:
//!
//! - **Foundations**: immutable simple graphs ([`graph::Graph`]), exact
//!   rational arithmetic ([`rational::Rational`]), and generators for the
//!   graph families everything else manipulates ([`constructions`]).
//! - **Oracles**: exact treewidth on small instances, tree-decomposition
//!   validation, bramble order by exhaustive hitting-set search, bounded
//!   expansion `nabla_r`, and exact induced-minor / clique-subdivision
//!   containment search ([`treewidth`], [`decomposition`], [`bramble`],
//!   [`expansion`], [`minor`]).
//! - **Extractors**: the constructive pipelines that turn a large grid or
//!   wall induced minor into a sparse 2-connected wall witness
//!   ([`wall`]), dedensify trim spanning supergraphs of (bi)clique
//!   subdivisions ([`trim`], [`dedensify`]), and project brambles through
//!   bounded-adhesion tree-decompositions ([`structure`]).
//!
//! Every randomized routine takes an explicit seed; every inequality a
//! certificate asserts is stated and re-checked in exact rational
//! arithmetic. Start with the runnable examples under `examples/`.

pub mod bitset;
pub mod bramble;
pub mod certificate;
pub mod cli;
pub mod constructions;
pub mod decomposition;
pub mod dedensify;
pub mod expansion;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod iso;
pub mod minor;
pub mod rational;
pub mod serde_util;
pub mod structure;
pub mod treewidth;
pub mod trim;
pub mod wall;

pub use graph::{Graph, GraphError, VertexMap};
pub use rational::Rational;
