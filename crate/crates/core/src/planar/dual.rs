//! Dual graphs of embedded multigraphs.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::planar::embedding::{validate_embedding, Embedding, EmbeddingError, FaceId};
use std::collections::BTreeMap;

/// The dual of a connected embedded multigraph together with the
/// edge bijection and the face-to-dual-vertex correspondence.
#[derive(Debug, Clone)]
pub struct Dual {
    pub graph: Multigraph,
    pub embedding: Embedding,
    /// primal edge id -> dual edge id (a bijection).
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    /// dual edge id -> primal edge id.
    pub edge_map_back: BTreeMap<EdgeId, EdgeId>,
    /// Dual vertex of each primal face (dual vertex id == face id index).
    pub face_vertex: Vec<VertexId>,
}

/// Builds the dual: one vertex per face, one edge per primal edge joining
/// the faces on its two sides. The dual rotation at a face-vertex follows
/// that face's boundary walk, which keeps the dual embedded at genus 0.
/// Capacities or weights are transported by the caller through `edge_map`.
pub fn dual_graph(g: &Multigraph, emb: &Embedding) -> Result<Dual, EmbeddingError> {
    let faces = validate_embedding(g, emb)?;
    let mut dual = Multigraph::new(faces.face_count() as u32);

    // Sides of each primal edge, in dart order (u->v side first).
    let mut side_faces: BTreeMap<EdgeId, Vec<FaceId>> = BTreeMap::new();
    for face in &faces.faces {
        for step in &face.walk {
            side_faces.entry(step.edge).or_default().push(face.id);
        }
    }

    let mut edge_map = BTreeMap::new();
    let mut edge_map_back = BTreeMap::new();
    // Insert dual edges in primal edge id order for determinism.
    for e in g.edges() {
        let sides = &side_faces[&e.id];
        debug_assert_eq!(sides.len(), 2);
        let (fa, fb) = (sides[0], sides[1]);
        if fa == fb {
            // A bridge would make the dual edge a loop; the pipeline never
            // duals non-2-edge-connected graphs, reject via error below.
            return Err(EmbeddingError::BadIncidence(e.id, 1));
        }
        let d = dual.add_edge(VertexId(fa.0), VertexId(fb.0));
        edge_map.insert(e.id, d);
        edge_map_back.insert(d, e.id);
    }

    // Dual rotation: around face f, list the dual edges of the boundary
    // walk in traversal order.
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); faces.face_count()];
    for face in &faces.faces {
        rotation[face.id.0 as usize] = face.walk.iter().map(|s| edge_map[&s.edge]).collect();
    }
    let embedding = Embedding { rotation, outer_face: FaceId(0) };
    dual.validate().expect("dual construction is well formed");

    Ok(Dual {
        graph: dual,
        embedding,
        edge_map,
        edge_map_back,
        face_vertex: (0..faces.face_count() as u32).map(VertexId).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::embedding::FaceId;

    /// Triangulated K4 with the planar rotation (outer face 0-1-2).
    pub fn k4_embedded() -> (Multigraph, Embedding) {
        let mut g = Multigraph::new(4);
        let e01 = g.add_edge(VertexId(0), VertexId(1));
        let e02 = g.add_edge(VertexId(0), VertexId(2));
        let e03 = g.add_edge(VertexId(0), VertexId(3));
        let e12 = g.add_edge(VertexId(1), VertexId(2));
        let e13 = g.add_edge(VertexId(1), VertexId(3));
        let e23 = g.add_edge(VertexId(2), VertexId(3));
        // Vertex 3 in the middle of triangle 0-1-2.
        let emb = Embedding {
            rotation: vec![
                vec![e01, e03, e02],
                vec![e12, e13, e01],
                vec![e02, e23, e12],
                vec![e03, e13, e23],
            ],
            outer_face: FaceId(0),
        };
        (g, emb)
    }

    #[test]
    fn dual_of_k4_is_3_regular_on_4_vertices() {
        let (g, emb) = k4_embedded();
        let d = dual_graph(&g, &emb).unwrap();
        assert_eq!(d.graph.vertex_count(), 4);
        assert!(d.graph.vertices().all(|v| d.graph.degree(v) == 3));
        validate_embedding(&d.graph, &d.embedding).unwrap();
    }

    #[test]
    fn dual_of_c4_is_two_vertices_with_four_parallel_edges() {
        let mut g = Multigraph::new(4);
        let mut es = Vec::new();
        for i in 0..4u32 {
            es.push(g.add_edge(VertexId(i), VertexId((i + 1) % 4)));
        }
        let rotation = (0..4u32)
            .map(|v| g.incident_edges(VertexId(v)))
            .collect::<Vec<_>>();
        let emb = Embedding { rotation, outer_face: FaceId(0) };
        let d = dual_graph(&g, &emb).unwrap();
        assert_eq!(d.graph.vertex_count(), 2);
        assert_eq!(d.graph.edge_count(), 4);
    }
}
