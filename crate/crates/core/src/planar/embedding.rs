//! Rotation-system embeddings and face extraction.
//!
//! An embedding stores, for every vertex, the clockwise cyclic order of its
//! incident edge ids plus a designated outer face. Faces are derived by dart
//! tracing: after entering a vertex through an edge, the walk leaves through
//! that edge's successor in the clockwise rotation. The embedding is accepted
//! as planar iff Euler's relation `V - E + F = 1 + C` holds, where `C` is the
//! number of connected components.

use crate::graph::{EdgeId, Multigraph, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceId(pub u32);

impl std::fmt::Display for FaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// A corner of the embedding: at `vertex`, between rotation entry `index`
/// and its clockwise successor. A vertex of degree d has corners 0..d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub vertex: VertexId,
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// Clockwise edge order per vertex, indexed by vertex id.
    pub rotation: Vec<Vec<EdgeId>>,
    pub outer_face: FaceId,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("rotation table covers {0} vertices but graph has {1}")]
    WrongVertexCount(usize, u32),
    #[error("edge {0} appears {1} times in rotations, expected exactly once per endpoint")]
    BadIncidence(EdgeId, usize),
    #[error("rotation at {0} mentions edge {1} that is not incident")]
    DanglingReference(VertexId, EdgeId),
    #[error("rotation system is not genus 0: V={v} E={e} F={f} C={c}")]
    NonPlanarRotation { v: u32, e: usize, f: usize, c: usize },
    #[error("outer face {0} does not exist ({1} faces)")]
    BadOuterFace(FaceId, usize),
}

/// One traversal step of a face walk: the edge used and the vertex it leads to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkStep {
    pub edge: EdgeId,
    pub to: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: FaceId,
    /// Closed boundary walk; `walk[i].edge` leads into `walk[i].to`.
    pub walk: Vec<WalkStep>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    /// Vertices along the walk, in traversal order (with repeats for bridges).
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.walk.iter().map(|s| s.to)
    }
}

/// Faces plus the corner-to-face incidence of a validated embedding.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    /// corner_face[v][i] is the face containing corner (v, i).
    pub corner_face: Vec<Vec<FaceId>>,
}

impl FaceSet {
    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0 as usize]
    }

    pub fn face_of_corner(&self, c: Corner) -> FaceId {
        self.corner_face[c.vertex.0 as usize][c.index as usize]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Faces whose walks touch every listed vertex, in face-id order.
    pub fn faces_containing(&self, vs: &[VertexId]) -> Vec<FaceId> {
        self.faces
            .iter()
            .filter(|f| {
                let on_face: std::collections::BTreeSet<VertexId> = f.vertices().collect();
                vs.iter().all(|v| on_face.contains(v))
            })
            .map(|f| f.id)
            .collect()
    }
}

impl Embedding {
    /// Rotation position of `e` at `v`.
    pub fn position(&self, v: VertexId, e: EdgeId) -> Option<u32> {
        self.rotation[v.0 as usize]
            .iter()
            .position(|&x| x == e)
            .map(|p| p as u32)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.0 as usize].len()
    }

    /// Clockwise successor edge of position `i` at `v`.
    pub fn successor_at(&self, v: VertexId, i: u32) -> EdgeId {
        let rot = &self.rotation[v.0 as usize];
        rot[(i as usize + 1) % rot.len()]
    }

    /// The two edges delimiting corner (v, i): (rotation[i], its successor).
    pub fn corner_edges(&self, c: Corner) -> (EdgeId, EdgeId) {
        let rot = &self.rotation[c.vertex.0 as usize];
        let a = rot[c.index as usize];
        let b = rot[(c.index as usize + 1) % rot.len()];
        (a, b)
    }

    /// Mirror image: every rotation reversed. Face structure is preserved
    /// with reversed walks.
    pub fn reflected(&self) -> Embedding {
        let mut r = self.clone();
        for rot in &mut r.rotation {
            rot.reverse();
        }
        r
    }
}

/// Checks structural consistency and the Euler relation, returning the face
/// set. Faces are deterministic: darts are scanned in (edge id, endpoint)
/// order, so the traversal always starts from the lowest edge id.
pub fn validate_embedding(g: &Multigraph, emb: &Embedding) -> Result<FaceSet, EmbeddingError> {
    let n = g.vertex_count() as usize;
    if emb.rotation.len() != n {
        return Err(EmbeddingError::WrongVertexCount(emb.rotation.len(), g.vertex_count()));
    }
    // Each edge must appear exactly once in each endpoint's rotation.
    let mut seen = std::collections::BTreeMap::<EdgeId, usize>::new();
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        for &e in rot {
            let edge = g
                .try_edge(e)
                .ok_or(EmbeddingError::DanglingReference(v, e))?;
            if !edge.has_endpoint(v) {
                return Err(EmbeddingError::DanglingReference(v, e));
            }
            *seen.entry(e).or_insert(0) += 1;
        }
    }
    for e in g.edges() {
        let cnt = seen.get(&e.id).copied().unwrap_or(0);
        if cnt != 2 {
            return Err(EmbeddingError::BadIncidence(e.id, cnt));
        }
        // Twice total, once per endpoint.
        let at_u = emb.rotation[e.u.0 as usize].iter().filter(|&&x| x == e.id).count();
        if at_u != 1 {
            return Err(EmbeddingError::BadIncidence(e.id, cnt));
        }
    }

    let faces = trace_faces(g, emb);
    let f = faces.faces.len();
    let (c, _) = g.components();
    let euler_f = if g.edge_count() == 0 { 1 } else { f };
    if (g.vertex_count() as i64) - (g.edge_count() as i64) + (euler_f as i64) != 1 + c as i64 {
        return Err(EmbeddingError::NonPlanarRotation {
            v: g.vertex_count(),
            e: g.edge_count(),
            f,
            c,
        });
    }
    if g.edge_count() > 0 && emb.outer_face.0 as usize >= f {
        return Err(EmbeddingError::BadOuterFace(emb.outer_face, f));
    }
    Ok(faces)
}

/// Trace all faces of the rotation system without checking Euler.
///
/// A dart is a directed traversal (edge, entered-endpoint). Arriving at `v`
/// through edge `e`, the walk continues along the clockwise successor of `e`
/// at `v`, and the corner between them is charged to the current face.
pub fn trace_faces(g: &Multigraph, emb: &Embedding) -> FaceSet {
    // Compact dart indexing: dart = 2*edge_index + side, side 0 = toward v, 1 = toward u.
    let m = g.edge_count();
    let edges = g.edges();
    let mut edge_index = std::collections::BTreeMap::new();
    for (ix, e) in edges.iter().enumerate() {
        edge_index.insert(e.id, ix);
    }
    // Position of each edge in each endpoint's rotation, and the successor map.
    let mut pos_at = vec![[u32::MAX; 2]; m]; // [at u, at v]
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        for (i, &e) in rot.iter().enumerate() {
            let ix = edge_index[&e];
            if edges[ix].u == v {
                pos_at[ix][0] = i as u32;
            } else {
                pos_at[ix][1] = i as u32;
            }
        }
    }

    let mut corner_face: Vec<Vec<FaceId>> = emb
        .rotation
        .iter()
        .map(|rot| vec![FaceId(u32::MAX); rot.len()])
        .collect();
    let mut visited = vec![[false; 2]; m];
    let mut faces = Vec::new();

    for start_ix in 0..m {
        for side in 0..2 {
            if visited[start_ix][side] {
                continue;
            }
            let fid = FaceId(faces.len() as u32);
            let mut walk = Vec::new();
            let (mut ix, mut sd) = (start_ix, side);
            loop {
                if visited[ix][sd] {
                    break;
                }
                visited[ix][sd] = true;
                let e = &edges[ix];
                // side 0: u -> v, side 1: v -> u
                let arrived = if sd == 0 { e.v } else { e.u };
                walk.push(WalkStep { edge: e.id, to: arrived });
                let p = pos_at[ix][if sd == 0 { 1 } else { 0 }];
                let rot = &emb.rotation[arrived.0 as usize];
                let next_pos = (p as usize + 1) % rot.len();
                corner_face[arrived.0 as usize][p as usize] = fid;
                let next_edge = rot[next_pos];
                let nix = edge_index[&next_edge];
                let nsd = if edges[nix].u == arrived { 0 } else { 1 };
                ix = nix;
                sd = nsd;
            }
            faces.push(Face { id: fid, walk });
        }
    }

    FaceSet { faces, corner_face }
}

/// Builds a rotation system by sorting each vertex's incident edges by the
/// clockwise angle of their outgoing direction. Directions are supplied per
/// (edge, endpoint); angles start at 12 o'clock and increase clockwise.
pub fn rotation_from_directions(
    g: &Multigraph,
    dir: impl Fn(EdgeId, VertexId) -> (f64, f64),
) -> Vec<Vec<EdgeId>> {
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count() as usize];
    for v in g.vertices() {
        let mut inc = g.incident_edges(v);
        inc.sort_by(|&a, &b| {
            let ka = clockwise_key(dir(a, v));
            let kb = clockwise_key(dir(b, v));
            ka.partial_cmp(&kb).unwrap().then(a.cmp(&b))
        });
        rotation[v.0 as usize] = inc;
    }
    rotation
}

fn clockwise_key((dx, dy): (f64, f64)) -> f64 {
    // atan2 measured clockwise from straight up.
    let a = dx.atan2(dy);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;

    fn triangle() -> (Multigraph, Embedding) {
        let mut g = Multigraph::new(3);
        let e01 = g.add_edge(VertexId(0), VertexId(1));
        let e12 = g.add_edge(VertexId(1), VertexId(2));
        let e20 = g.add_edge(VertexId(2), VertexId(0));
        let emb = Embedding {
            rotation: vec![vec![e01, e20], vec![e12, e01], vec![e20, e12]],
            outer_face: FaceId(0),
        };
        (g, emb)
    }

    #[test]
    fn triangle_has_two_faces() {
        let (g, emb) = triangle();
        let fs = validate_embedding(&g, &emb).unwrap();
        assert_eq!(fs.face_count(), 2);
        assert!(fs.faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn single_edge_bridge_face() {
        let mut g = Multigraph::new(2);
        let e = g.add_edge(VertexId(0), VertexId(1));
        let emb = Embedding {
            rotation: vec![vec![e], vec![e]],
            outer_face: FaceId(0),
        };
        let fs = validate_embedding(&g, &emb).unwrap();
        assert_eq!(fs.face_count(), 1);
        assert_eq!(fs.faces[0].len(), 2, "bridge is used twice by one walk");
    }

    #[test]
    fn k5_rejected_for_any_rotation() {
        let mut g = Multigraph::new(5);
        let mut ids = Vec::new();
        for u in 0..5u32 {
            for v in (u + 1)..5 {
                ids.push(g.add_edge(VertexId(u), VertexId(v)));
            }
        }
        // Id-order rotation; K5 is non-planar so every rotation fails Euler.
        let rotation: Vec<Vec<EdgeId>> = (0..5).map(|v| g.incident_edges(VertexId(v))).collect();
        let emb = Embedding { rotation, outer_face: FaceId(0) };
        match validate_embedding(&g, &emb) {
            Err(EmbeddingError::NonPlanarRotation { .. }) => {}
            other => panic!("expected NonPlanarRotation, got {:?}", other),
        }
    }

    #[test]
    fn corner_count_equals_degree() {
        let (g, emb) = triangle();
        let fs = validate_embedding(&g, &emb).unwrap();
        for v in g.vertices() {
            assert_eq!(fs.corner_face[v.0 as usize].len(), g.degree(v));
        }
        let total: usize = fs.faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn dangling_rotation_reference_rejected() {
        let (g, mut emb) = triangle();
        emb.rotation[0].push(EdgeId(99));
        assert!(matches!(
            validate_embedding(&g, &emb),
            Err(EmbeddingError::DanglingReference(_, _))
        ));
    }
}
