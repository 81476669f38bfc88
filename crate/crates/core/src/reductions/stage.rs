//! Stage bundles: each reduction returns its instance together with the
//! proof artifacts the lemmas construct along the way (embedding, path
//! decomposition, provenance) and whatever the certificate maps need.

use crate::decomposition::PathDecomposition;
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::instances::{CapacitatedGraph, FlowNetwork, MccInstance};
use crate::planar::embedding::Embedding;
use crate::planar::FaceId;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReductionError {
    #[error("invalid source instance: {0}")]
    BadInstance(String),
    #[error("N = {n} violates the N >= 10k assumption (k = {k}); pass force to override")]
    PreconditionN { n: usize, k: usize },
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("internal audit failed: {0}")]
    Internal(String),
}

/// Parameters of a clique-to-flow instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MccParams {
    pub k: u64,
    pub n: u64,
    pub m: u64,
}

/// Output of the clique-to-flow stage.
#[derive(Debug, Clone)]
pub struct AonfStage {
    pub net: FlowNetwork,
    pub embedding: Embedding,
    pub decomposition: PathDecomposition,
    pub params: MccParams,
    /// Column j (1-based) encodes this cross-part non-edge (i, a, l, b).
    pub nonedges: Vec<(u64, u64, u64, u64)>,
    pub source: MccInstance,
    /// Faces holding {x^j} + {s,t} and {y^j} + {s,t}; equal in degenerate
    /// small cases, distinct whenever the column structure exists.
    pub face_x: FaceId,
    pub face_y: FaceId,
}

/// Output of the flow-to-orientation stage (not yet normalized).
#[derive(Debug, Clone)]
pub struct CoStage {
    pub cg: CapacitatedGraph,
    pub embedding: Embedding,
    pub decomposition: PathDecomposition,
    pub params: MccParams,
    /// Whether N >= 10k held (equivalence guaranteed) or was forced.
    pub equivalence_guaranteed: bool,
    pub aonf: AonfStage,
    pub special: SpecialEdges,
}

/// The special edges the orientation proofs pin down.
#[derive(Debug, Clone, Default)]
pub struct SpecialEdges {
    pub alpha_s: Vec<EdgeId>,
    pub alpha_t: Vec<EdgeId>,
    pub y_super: Vec<EdgeId>,
    pub x_super: Vec<EdgeId>,
    /// 4-cycle (S,s), (s,T), (T,t), (t,S) in that order.
    pub cycle: [EdgeId; 4],
    pub s: VertexId,
    pub t: VertexId,
    pub super_s: VertexId,
    pub super_t: VertexId,
}

/// Normalized circulating-orientation stage: simple, triconnected,
/// triangulated.
#[derive(Debug, Clone)]
pub struct NormalizedCoStage {
    pub cg: CapacitatedGraph,
    pub embedding: Embedding,
    pub decomposition: PathDecomposition,
    /// Subdivision chains from the raw CO edges.
    pub chains: BTreeMap<EdgeId, Vec<EdgeId>>,
    pub heuristic_width: usize,
    pub raw: CoStage,
}

/// Upward planarity stage.
#[derive(Debug, Clone)]
pub struct UpwardStage {
    pub digraph: Multigraph,
    pub embedding: Embedding,
    pub decomposition: PathDecomposition,
    /// Primal (normalized CO) edge -> tendril instantiation.
    pub tendrils: BTreeMap<EdgeId, TendrilUse>,
    /// The oriented dual skeleton.
    pub dual_arcs: BTreeMap<EdgeId, (VertexId, VertexId)>,
    /// Dual edge -> primal edge.
    pub dual_to_primal: BTreeMap<EdgeId, EdgeId>,
    /// Base angle assignment of the skeleton's unique upward embedding.
    pub base: crate::instances::AngleAssignment,
    pub skeleton: Multigraph,
    pub skeleton_embedding: Embedding,
    pub normalized: NormalizedCoStage,
    /// Primal vertex <-> skeleton face correspondence.
    pub dface_of_primal: BTreeMap<VertexId, FaceId>,
    pub primal_of_dface: BTreeMap<FaceId, VertexId>,
    /// base_corner_offset[v][i]: composite corner index of skeleton corner
    /// (v, i).
    pub base_corner_offset: Vec<Vec<u32>>,
    /// Skeleton face receiving each tendril's positive boundary under the
    /// canonical flip.
    pub plus_face: BTreeMap<EdgeId, FaceId>,
}

/// One tendril instance inside a composite graph.
#[derive(Debug, Clone)]
pub struct TendrilUse {
    /// Strength of the tendril (w).
    pub strength: u64,
    /// Gadget-local vertex -> composite vertex.
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    /// Gadget-local edge -> composite edge.
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    /// A gadget-local vertex of degree >= 3 whose rotation witnesses the
    /// flip chirality, with its canonical gadget rotation.
    pub witness: VertexId,
    pub witness_rotation: Vec<EdgeId>,
}

/// Rectilinear planarity stage.
#[derive(Debug, Clone)]
pub struct RectStage {
    pub graph: Multigraph,
    pub embedding: Embedding,
    pub decomposition: PathDecomposition,
    pub theta: u64,
    pub tendrils: BTreeMap<EdgeId, RectTendrilUse>,
    /// Dual edge -> primal (normalized CO) edge.
    pub dual_to_primal: BTreeMap<EdgeId, EdgeId>,
    /// Base angle assignment of the subdivided skeleton F.
    pub base: crate::instances::AngleAssignment,
    pub skeleton: Multigraph,
    pub skeleton_embedding: Embedding,
    pub normalized: NormalizedCoStage,
}

#[derive(Debug, Clone)]
pub struct RectTendrilUse {
    pub strength: u64,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub witness: VertexId,
    pub witness_rotation: Vec<EdgeId>,
    /// Dual edge whose representative this tendril replaced.
    pub dual_edge: EdgeId,
}
