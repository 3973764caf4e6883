//! Exact, parameterized and approximate solvers for deleting few edges so that
//! every connected component has at most `h` vertices.

pub mod approx;
pub mod arcs;
pub mod decomp;
pub mod graph;
pub mod hardness;
pub mod ilp;
pub mod io;
pub mod oracle;
pub mod preprocess;
pub mod random;
pub mod split;
pub mod vdc;

pub use graph::{DiGraph, Edge, Graph, GraphError, VertexPartition};
pub use oracle::PartitionSolution;
