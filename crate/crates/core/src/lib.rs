//! Parking functions, spanning-tree bijections and chip-firing on
//! hypergraphs with a sink.
//!
//! A [`Hypergraph`] is reduced to its bipartite incidence graph for burning
//! and tree constructions, and to Eulerian digraphs through cyclings. All
//! arithmetic is exact.

pub mod catalog;
pub mod counting;
pub mod digraph;
pub mod error;
pub mod firing;
pub mod hypergraph;
pub mod ideal;
pub mod linalg;
pub mod parking;
pub mod trees;

pub use error::{Error, Result};
pub use hypergraph::{BipartiteIncidence, Configuration, Hypergraph, HypergraphDoc, NodeKind, VertexSet};
