//! Reduction-engineering toolkit around a chain of gadget reductions:
//! Multicolored Clique -> planar All-or-Nothing Flow -> Circulating
//! Orientation -> Upward / Rectilinear planarity.
//!
//! Every constructive step ships with the machinery to check it at desk
//! scale: brute-force oracles, fixed-embedding feasibility solvers,
//! certificate maps in both directions, and path-decomposition
//! certificates for all width claims.

pub mod decomposition;
pub mod gadgets;
pub mod graph;
pub mod instances;
pub mod io;
pub mod problems;
pub mod planar;
pub mod reductions;

pub use graph::{Edge, EdgeId, Multigraph, VertexId};
pub use instances::{
    AngleAssignment, AngleMode, AoNFlow, CapacitatedGraph, FlowNetwork, MccInstance, Orientation,
};
pub use planar::{Embedding, FaceId};
