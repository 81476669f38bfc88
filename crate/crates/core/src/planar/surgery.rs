//! Embedding-preserving graph surgery: subdivision, triangulation, and
//! crossing elimination.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::instances::{CapacitatedGraph, FlowNetwork};
use crate::planar::embedding::{trace_faces, validate_embedding, Embedding, FaceId, WalkStep};
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("face-repair loop exceeded its bound; cannot triangulate simple")]
    CannotTriangulateSimple,
    #[error("triangulate requires a simple connected graph on >= 3 vertices")]
    BadTriangulateInput,
    #[error("crossing arcs {0} and {1} have equal capacity")]
    EqualCapacityCrossing(EdgeId, EdgeId),
    #[error("embedding invalid: {0}")]
    Embedding(#[from] crate::planar::embedding::EmbeddingError),
}

/// Result of subdividing every edge `times` times.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub graph: CapacitatedGraph,
    pub embedding: Option<Embedding>,
    /// Parent edge -> chain of times+1 replacement edges, tail to head.
    pub chains: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Parent edge -> middle edge of its chain (only when times is even,
    /// i.e. the chain has an odd number of edges with a clear middle).
    pub representative: BTreeMap<EdgeId, EdgeId>,
}

/// Replaces each edge of capacity c by a path of `times + 1` edges of
/// capacity c. Provenance tags record the parent edge and the position on
/// the chain; for `times = 4` the middle edge carries the representative
/// flag used by the rectilinear reduction.
pub fn subdivide_all(cg: &CapacitatedGraph, times: u32, emb: Option<&Embedding>) -> Subdivision {
    assert!(times >= 1, "times must be >= 1");
    let mut g = Multigraph::new(cg.graph.vertex_count());
    g.vertex_labels = cg.graph.vertex_labels.clone();
    let mut cap = BTreeMap::new();
    let mut chains = BTreeMap::new();
    let mut representative = BTreeMap::new();
    let mut rotation: Vec<Vec<EdgeId>> = emb.map(|e| e.rotation.clone()).unwrap_or_default();

    let mut interiors: BTreeMap<EdgeId, Vec<VertexId>> = BTreeMap::new();
    for e in cg.graph.edges() {
        let c = cg.capacity(e.id);
        let parent_label = cg.graph.edge_labels.get(&e.id).cloned();
        let mut prev = e.u;
        let mut chain = Vec::with_capacity(times as usize + 1);
        let mut inner = Vec::with_capacity(times as usize);
        for i in 0..=times {
            let next = if i == times {
                e.v
            } else {
                let w = g.add_vertex_labelled(format!("sub:{}:{}", e.id.0, i));
                if emb.is_some() {
                    rotation.push(Vec::new());
                }
                inner.push(w);
                w
            };
            let id = g.add_edge(prev, next);
            let mut label = format!("sub:{}:{}", e.id.0, i);
            if let Some(p) = &parent_label {
                label = format!("{p}|{label}");
            }
            g.edge_labels.insert(id, label);
            cap.insert(id, c);
            chain.push(id);
            prev = next;
        }
        if times % 2 == 0 {
            let mid = chain[(times / 2) as usize];
            representative.insert(e.id, mid);
            let l = g.edge_labels.get_mut(&mid).unwrap();
            l.push_str("|rep");
        }
        chains.insert(e.id, chain);
        interiors.insert(e.id, inner);
    }

    let embedding = emb.map(|old| {
        for (vix, rot) in old.rotation.iter().enumerate() {
            let v = VertexId(vix as u32);
            rotation[vix] = rot
                .iter()
                .map(|old_e| {
                    let chain = &chains[old_e];
                    let parent = cg.graph.edge(*old_e);
                    if parent.u == v {
                        chain[0]
                    } else {
                        *chain.last().unwrap()
                    }
                })
                .collect();
        }
        for (parent, chain) in &chains {
            for (i, &w) in interiors[parent].iter().enumerate() {
                rotation[w.0 as usize] = vec![chain[i], chain[i + 1]];
            }
        }
        Embedding { rotation, outer_face: old.outer_face }
    });

    Subdivision {
        graph: CapacitatedGraph { graph: g, cap },
        embedding,
        chains,
        representative,
    }
}

/// Fan/stellation triangulation keeping the graph simple and every added
/// edge at capacity 0. Each round either inserts a chord between two
/// corners of an over-long face or, when every candidate chord would
/// duplicate an existing edge, stellates the face from a fresh vertex.
pub fn triangulate(
    cg: &CapacitatedGraph,
    emb: &Embedding,
) -> Result<(CapacitatedGraph, Embedding), SurgeryError> {
    if !cg.graph.is_simple() || !cg.graph.is_connected() || cg.graph.vertex_count() < 3 {
        return Err(SurgeryError::BadTriangulateInput);
    }
    let mut g = cg.clone();
    let mut emb = emb.clone();
    let faces = validate_embedding(&g.graph, &emb)?;
    // Darts survive chord/stellation surgery, so this one keeps marking the
    // outer face while face ids shift.
    let outer_dart = faces.face(emb.outer_face).walk[0];

    let budget = 6 * (g.graph.vertex_count() as usize + g.graph.edge_count()) + 64;
    let mut chords = 0usize;
    let mut stars = 0usize;
    for _ in 0..budget {
        let faces = trace_faces(&g.graph, &emb);
        let target = faces.faces.iter().find(|f| f.len() > 3);
        let face = match target {
            None => {
                emb.outer_face = locate_dart(&g.graph, &emb, outer_dart);
                validate_embedding(&g.graph, &emb)?;
                return Ok((g, emb));
            }
            Some(f) => f.clone(),
        };
        let l = face.len();
        let mut inserted = false;
        'chords: for i in 0..l {
            for j in (i + 2)..l {
                if l - (j - i) < 2 {
                    continue;
                }
                let (va, vb) = (face.walk[i].to, face.walk[j].to);
                if va == vb || g.graph.has_edge_between(va, vb) {
                    continue;
                }
                let id = insert_chord(&mut g.graph, &mut emb, &face, i, j);
                g.cap.insert(id, 0);
                g.graph.edge_labels.insert(id, format!("tri:chord:{chords}"));
                chords += 1;
                inserted = true;
                break 'chords;
            }
        }
        if !inserted {
            // All chords blocked; stellate. Requires distinct walk vertices.
            let mut vs: Vec<VertexId> = face.vertices().collect();
            vs.sort();
            vs.dedup();
            if vs.len() != l {
                return Err(SurgeryError::CannotTriangulateSimple);
            }
            let ids = stellate(&mut g.graph, &mut emb, &face, stars);
            for id in ids {
                g.cap.insert(id, 0);
            }
            stars += 1;
        }
    }
    Err(SurgeryError::CannotTriangulateSimple)
}

fn locate_dart(g: &Multigraph, emb: &Embedding, dart: WalkStep) -> FaceId {
    let faces = trace_faces(g, emb);
    for f in &faces.faces {
        if f.walk.iter().any(|s| s.edge == dart.edge && s.to == dart.to) {
            return f.id;
        }
    }
    unreachable!("tracked dart always lies on some face");
}

/// Inserts an edge between the corners at walk positions i and j of `face`,
/// splitting it. The new edge goes immediately after the arrival edge in
/// each rotation, which places it inside the face.
fn insert_chord(
    g: &mut Multigraph,
    emb: &mut Embedding,
    face: &crate::planar::embedding::Face,
    i: usize,
    j: usize,
) -> EdgeId {
    let (va, vb) = (face.walk[i].to, face.walk[j].to);
    let (ea, eb) = (face.walk[i].edge, face.walk[j].edge);
    let id = g.add_edge(va, vb);
    let pa = emb.position(va, ea).unwrap() as usize;
    emb.rotation[va.0 as usize].insert(pa + 1, id);
    let pb = emb.position(vb, eb).unwrap() as usize;
    emb.rotation[vb.0 as usize].insert(pb + 1, id);
    id
}

/// Adds a fresh vertex joined to every corner of `face`.
fn stellate(
    g: &mut Multigraph,
    emb: &mut Embedding,
    face: &crate::planar::embedding::Face,
    index: usize,
) -> Vec<EdgeId> {
    let c = g.add_vertex_labelled(format!("tri:star:{index}"));
    emb.rotation.push(Vec::new());
    let mut spokes = Vec::new();
    for (n, step) in face.walk.iter().enumerate() {
        let id = g.add_edge(c, step.to);
        g.edge_labels.insert(id, format!("tri:star:{index}:{n}"));
        let p = emb.position(step.to, step.edge).unwrap() as usize;
        emb.rotation[step.to.0 as usize].insert(p + 1, id);
        spokes.push(id);
    }
    // Around c, spokes follow the face walk; if that orientation is the
    // wrong chirality the Euler check fails and the reverse is used.
    emb.rotation[c.0 as usize] = spokes.clone();
    if validate_embedding(g, emb).is_err() {
        emb.rotation[c.0 as usize].reverse();
    }
    spokes
}

/// Inserts an edge between two corners of one face (walk positions i, j),
/// updating rotations so the edge lies inside the face. The caller adds
/// capacity and labels. Returns the new edge id.
pub fn insert_edge_in_face(
    g: &mut Multigraph,
    emb: &mut Embedding,
    face: &crate::planar::embedding::Face,
    i: usize,
    j: usize,
) -> EdgeId {
    insert_chord(g, emb, face, i, j)
}

/// Inserts a fresh vertex inside a face, joined to the corners at the
/// given walk positions (strictly increasing). The new vertex's rotation
/// follows the walk order; if that chirality fails the Euler check the
/// reverse is used. Returns (vertex, spoke edge ids in position order).
pub fn insert_star_in_face(
    g: &mut Multigraph,
    emb: &mut Embedding,
    face: &crate::planar::embedding::Face,
    positions: &[usize],
    label: &str,
) -> (VertexId, Vec<EdgeId>) {
    let c = g.add_vertex_labelled(label.to_string());
    emb.rotation.push(Vec::new());
    let mut spokes = Vec::new();
    for &p in positions {
        let step = face.walk[p];
        let id = g.add_edge(c, step.to);
        let at = emb.position(step.to, step.edge).unwrap() as usize;
        emb.rotation[step.to.0 as usize].insert(at + 1, id);
        spokes.push(id);
    }
    emb.rotation[c.0 as usize] = spokes.clone();
    if validate_embedding(g, emb).is_err() {
        emb.rotation[c.0 as usize].reverse();
    }
    (c, spokes)
}

/// Replaces each listed crossing pair (uv, xy) by a degree-4 vertex d with
/// arcs ud, dv of capacity c(uv) and xd, dy of capacity c(xy). Requires
/// c(uv) != c(xy) for each pair; that inequality is what makes the rewrite
/// answer-preserving for all-or-nothing flows.
pub fn eliminate_crossings(
    net: &FlowNetwork,
    crossings: &[(EdgeId, EdgeId)],
) -> Result<FlowNetwork, SurgeryError> {
    for &(a, b) in crossings {
        if net.cap[&a] == net.cap[&b] {
            return Err(SurgeryError::EqualCapacityCrossing(a, b));
        }
    }
    let mut out = net.clone();
    for (n, &(a, b)) in crossings.iter().enumerate() {
        let ea = *out.net.edge(a);
        let eb = *out.net.edge(b);
        let (ca, cb) = (out.cap[&a], out.cap[&b]);
        let la = out.net.edge_labels.get(&a).cloned();
        let lb = out.net.edge_labels.get(&b).cloned();
        out.net.remove_edge(a);
        out.net.remove_edge(b);
        out.cap.remove(&a);
        out.cap.remove(&b);
        let d = out.net.add_vertex_labelled(format!("cross:{n}"));
        let parts = [
            (ea.u, d, ca, la.clone()),
            (d, ea.v, ca, la),
            (eb.u, d, cb, lb.clone()),
            (d, eb.v, cb, lb),
        ];
        for (t, h, c, lab) in parts {
            let id = out.net.add_arc(t, h);
            out.cap.insert(id, c);
            if let Some(l) = lab {
                out.net.edge_labels.insert(id, format!("{l}|cross:{n}"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::embedding::FaceId;

    fn single_edge_cg(c: u64) -> CapacitatedGraph {
        let mut g = Multigraph::new(2);
        let e = g.add_edge(VertexId(0), VertexId(1));
        CapacitatedGraph { graph: g, cap: [(e, c)].into() }
    }

    #[test]
    fn subdivide_once_gives_two_edges() {
        let sub = subdivide_all(&single_edge_cg(5), 1, None);
        assert_eq!(sub.graph.graph.edge_count(), 2);
        assert!(sub.graph.cap.values().all(|&c| c == 5));
        assert!(sub.representative.is_empty());
    }

    #[test]
    fn subdivide_four_flags_middle() {
        let sub = subdivide_all(&single_edge_cg(7), 4, None);
        assert_eq!(sub.graph.graph.edge_count(), 5);
        let rep = sub.representative[&EdgeId(0)];
        assert_eq!(rep, sub.chains[&EdgeId(0)][2]);
        assert!(sub.graph.graph.edge_labels[&rep].contains("rep"));
    }

    #[test]
    fn subdivide_empty_graph_unchanged() {
        let cg = CapacitatedGraph { graph: Multigraph::new(3), cap: BTreeMap::new() };
        let sub = subdivide_all(&cg, 2, None);
        assert_eq!(sub.graph.graph.edge_count(), 0);
        assert_eq!(sub.graph.graph.vertex_count(), 3);
    }

    #[test]
    fn subdivision_keeps_embedding_planar() {
        let mut g = Multigraph::new(2);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(0), VertexId(1));
        let emb = Embedding {
            rotation: vec![vec![a, b], vec![b, a]],
            outer_face: FaceId(0),
        };
        let cg = CapacitatedGraph { graph: g, cap: [(a, 3), (b, 3)].into() };
        let sub = subdivide_all(&cg, 1, Some(&emb));
        let new_emb = sub.embedding.unwrap();
        assert!(sub.graph.graph.is_simple());
        validate_embedding(&sub.graph.graph, &new_emb).unwrap();
    }

    #[test]
    fn triangulate_c4_adds_zero_capacity_chords() {
        // One chord per quadrilateral face (the outer one included, since
        // the duals downstream need maximum degree 3), i.e. C4 becomes K4.
        let mut g = Multigraph::new(4);
        let mut ids = Vec::new();
        for i in 0..4u32 {
            ids.push(g.add_edge(VertexId(i), VertexId((i + 1) % 4)));
        }
        let rotation = (0..4u32).map(|v| g.incident_edges(VertexId(v))).collect();
        let emb = Embedding { rotation, outer_face: FaceId(0) };
        let cap = ids.iter().map(|&e| (e, 1)).collect();
        let cg = CapacitatedGraph { graph: g, cap };
        let (out, out_emb) = triangulate(&cg, &emb).unwrap();
        assert_eq!(out.graph.edge_count(), 6);
        for e in out.graph.edges() {
            if !ids.contains(&e.id) {
                assert_eq!(out.capacity(e.id), 0);
            }
        }
        let faces = validate_embedding(&out.graph, &out_emb).unwrap();
        assert!(faces.faces.iter().all(|f| f.len() == 3));
        assert!(out.graph.is_simple());
    }

    #[test]
    fn triangulate_is_identity_on_triangulated_input() {
        let (g, emb) = crate::planar::test_fixtures::k4_embedded();
        let cap = g.edges().iter().map(|e| (e.id, 1)).collect();
        let cg = CapacitatedGraph { graph: g, cap };
        let (out, _) = triangulate(&cg, &emb).unwrap();
        assert_eq!(out.graph.edge_count(), 6);
    }

    #[test]
    fn eliminate_crossings_rejects_equal_caps() {
        let mut g = Multigraph::new(4);
        let a = g.add_arc(VertexId(0), VertexId(1));
        let b = g.add_arc(VertexId(2), VertexId(3));
        let net = FlowNetwork {
            net: g,
            cap: [(a, 3), (b, 3)].into(),
            source: VertexId(0),
            sink: VertexId(3),
            target: 3,
        };
        assert!(matches!(
            eliminate_crossings(&net, &[(a, b)]),
            Err(SurgeryError::EqualCapacityCrossing(_, _))
        ));
    }

    #[test]
    fn eliminate_crossings_builds_degree_four_vertex() {
        let mut g = Multigraph::new(4);
        let a = g.add_arc(VertexId(0), VertexId(1));
        let b = g.add_arc(VertexId(2), VertexId(3));
        let net = FlowNetwork {
            net: g,
            cap: [(a, 3), (b, 5)].into(),
            source: VertexId(0),
            sink: VertexId(3),
            target: 3,
        };
        let out = eliminate_crossings(&net, &[(a, b)]).unwrap();
        let d = VertexId(4);
        assert_eq!(out.net.degree(d), 4);
        assert_eq!(out.net.edge_count(), 4);
        let caps: Vec<u64> = out.net.edges().iter().map(|e| out.cap[&e.id]).collect();
        assert_eq!(caps, vec![3, 3, 5, 5]);
    }

    #[test]
    fn eliminate_crossings_empty_list_is_identity() {
        let mut g = Multigraph::new(2);
        let a = g.add_arc(VertexId(0), VertexId(1));
        let net = FlowNetwork {
            net: g,
            cap: [(a, 2)].into(),
            source: VertexId(0),
            sink: VertexId(1),
            target: 2,
        };
        let out = eliminate_crossings(&net, &[]).unwrap();
        assert_eq!(out.net.edge_count(), 1);
    }
}
