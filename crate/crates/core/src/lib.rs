//! Exact-arithmetic toolkit for chainmail surgery diagrams.
//!
//! A chainmail diagram is a weighted, signed plane multigraph: each vertex is
//! an unknotted surgery component framed by its weight, each edge a clasp of
//! the given sign. The crate computes the linking matrix, spin structures
//! (characteristic subgraphs), Kaplan filling invariants, Dehn-surgery
//! obstruction certificates for one-parameter families, Tait graphs of link
//! diagrams and weight-one certificates for the fundamental group.

pub mod family;
pub mod graph;
pub mod linalg;
pub mod pi1;
pub mod spin;
pub mod tait;

pub use graph::{ChainmailGraph, GraphError, Sign, SignedEdgeCount, VertexSubset};
pub use linalg::{IntMatrix, SnfDiagonal, SymmetricIntMatrix};
