//! Upward tendrils: directed gadgets whose two boundary walks contribute
//! +2w and -2w angle units under their unique upward planar embedding.
//!
//! The construction is a capped ladder with a zigzag left rail and a
//! buffered right rail. Left-rail switches are non-switch vertices (their
//! boundary corner is forced small), right-rail contributors are internal
//! sources/sinks whose large angle is forced onto the boundary because
//! every inner face carries exactly two switch corners, at most one of
//! them at a switch vertex. That face discipline is also what pins the
//! embedding: no other face can satisfy the outer-face balance.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::decomposition::PathDecomposition;
use crate::instances::{AngleAssignment, AngleMode};
use crate::planar::embedding::{
    rotation_from_directions, trace_faces, validate_embedding, Corner, Embedding, FaceId,
};
use crate::problems::angles::{is_switch_corner, is_switch_vertex};
use std::collections::BTreeSet;

/// A built tendril: the directed body, its canonical embedding, poles and
/// the width-2 path decomposition.
#[derive(Debug, Clone)]
pub struct Tendril {
    pub body: Multigraph,
    pub embedding: Embedding,
    pub source_pole: VertexId,
    pub sink_pole: VertexId,
    pub strength: u64,
    pub pd: PathDecomposition,
}

/// Vertex count of `build_tendril(w)`; the family is affine in w. These
/// two constants are regression-pinned by the gadget tests.
pub const TENDRIL_SIZE_SLOPE: u64 = 6;
pub const TENDRIL_SIZE_OFFSET: u64 = 5;

/// Builds the upward tendril of strength `w`: contributions +-2w.
pub fn build_tendril(w: u64) -> Tendril {
    let mut g = Multigraph::new(0);
    let label = |s: &str| format!("tendril:{s}");

    // Coordinates drive the clockwise rotations; u at the bottom, v on top,
    // a-rail on the left, buffers and contributors on the right.
    let mut pos: Vec<(f64, f64)> = Vec::new();
    let mut add = |g: &mut Multigraph, name: String, x: f64, y: f64| {
        let v = g.add_vertex_labelled(name);
        pos.push((x, y));
        v
    };

    let top = (2 * w + 1) as f64;
    let u = add(&mut g, label("u"), 0.5, -1.0);
    let v = add(&mut g, label("v"), 0.5, top + 1.0);
    let a: Vec<VertexId> = (0..=(2 * w + 1))
        .map(|i| add(&mut g, label(&format!("a{i}")), 0.0, i as f64))
        .collect();
    // Right rail interleaves buffers c_j and contributors P_r.
    let c: Vec<VertexId> = (0..=(2 * w))
        .map(|j| {
            let y = if j == 0 { -0.4 } else { j as f64 + 0.4 };
            add(&mut g, label(&format!("c{j}")), 1.0, y)
        })
        .collect();
    let p: Vec<VertexId> = (1..=(2 * w))
        .map(|r| add(&mut g, label(&format!("P{r}")), 1.0, r as f64 - 0.1))
        .collect();
    let pv = |r: u64| p[(r - 1) as usize];

    if w == 0 {
        // Minimal member: u, a0, a1, c0, v with zero contributions.
        g.add_arc_labelled(u, a[0], label("cap:ua0"));
        g.add_arc_labelled(u, c[0], label("cap:uc0"));
        g.add_arc_labelled(a[0], a[1], label("rail:a0a1"));
        g.add_arc_labelled(a[0], c[0], label("rung:a0c0"));
        g.add_arc_labelled(c[0], a[1], label("rung:c0a1"));
        g.add_arc_labelled(a[1], v, label("cap:a1v"));
        g.add_arc_labelled(c[0], v, label("cap:c0v"));
    } else {
        // Caps.
        g.add_arc_labelled(u, a[0], label("cap:ua0"));
        g.add_arc_labelled(u, c[0], label("cap:uc0"));
        g.add_arc_labelled(a[2 * w as usize + 1], v, label("cap:av"));
        g.add_arc_labelled(c[2 * w as usize], v, label("cap:cv"));
        // Left rail: arcs run from even indices to odd indices.
        g.add_arc_labelled(a[0], a[1], label("rail:a0a1"));
        for r in 1..=w {
            let e = (2 * r) as usize;
            g.add_arc_labelled(a[e], a[e - 1], label(&format!("rail:a{}a{}", e, e - 1)));
            g.add_arc_labelled(a[e], a[e + 1], label(&format!("rail:a{}a{}", e, e + 1)));
        }
        // Right rail around sinks P_{2r-1} and sources P_{2r}.
        for r in 1..=w {
            let snk = 2 * r - 1;
            let src = 2 * r;
            g.add_arc_labelled(c[snk as usize - 1], pv(snk), label(&format!("rail:c{}P{snk}", snk - 1)));
            g.add_arc_labelled(c[snk as usize], pv(snk), label(&format!("rail:c{snk}P{snk}")));
            g.add_arc_labelled(pv(src), c[src as usize - 1], label(&format!("rail:P{src}c{}", src - 1)));
            g.add_arc_labelled(pv(src), c[src as usize], label(&format!("rail:P{src}c{src}")));
        }
        // Rungs.
        g.add_arc_labelled(a[0], c[0], label("rung:a0c0"));
        for r in 1..=w {
            let snk = (2 * r - 1) as usize;
            let src = (2 * r) as usize;
            g.add_arc_labelled(a[snk], pv(2 * r - 1), label(&format!("rung:a{snk}P")));
            g.add_arc_labelled(a[snk], c[snk], label(&format!("rung:a{snk}c{snk}")));
            g.add_arc_labelled(pv(2 * r), a[src], label(&format!("rung:Pa{src}")));
            if r < w {
                g.add_arc_labelled(a[src], c[src], label(&format!("rung:a{src}c{src}")));
            }
        }
        g.add_arc_labelled(c[2 * w as usize], a[2 * w as usize + 1], label("rung:ca_top"));
    }

    let rotation = rotation_from_directions(&g, |e, at| {
        let edge = g.edge(e);
        let other = edge.other(at);
        let (x0, y0) = pos[at.0 as usize];
        let (x1, y1) = pos[other.0 as usize];
        (x1 - x0, y1 - y0)
    });
    let mut embedding = Embedding { rotation, outer_face: FaceId(0) };
    let faces = validate_embedding(&g, &embedding).expect("tendril drawing is planar");
    embedding.outer_face = faces
        .faces
        .iter()
        .max_by_key(|f| (f.len(), std::cmp::Reverse(f.id)))
        .unwrap()
        .id;

    let pd = tendril_pd(w, u, v, &a, &c, &p);
    Tendril {
        body: g,
        embedding,
        source_pole: u,
        sink_pole: v,
        strength: w,
        pd,
    }
}

fn tendril_pd(
    w: u64,
    u: VertexId,
    v: VertexId,
    a: &[VertexId],
    c: &[VertexId],
    p: &[VertexId],
) -> PathDecomposition {
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut bag = |xs: [VertexId; 3]| BTreeSet::from(xs);
    if w == 0 {
        return PathDecomposition {
            bags: vec![bag([u, a[0], c[0]]), bag([a[0], a[1], c[0]]), bag([a[1], c[0], v])],
        };
    }
    let pv = |r: usize| p[r - 1];
    bags.push(bag([u, a[0], c[0]]));
    bags.push(bag([a[0], a[1], c[0]]));
    for r in 1..=(w as usize) {
        let snk = 2 * r - 1;
        let src = 2 * r;
        bags.push(bag([a[snk], c[snk - 1], pv(snk)]));
        bags.push(bag([a[snk], pv(snk), c[snk]]));
        bags.push(bag([a[snk], a[src], c[snk]]));
        bags.push(bag([a[src], c[snk], pv(src)]));
        if r < w as usize {
            bags.push(bag([a[src], pv(src), c[src]]));
            bags.push(bag([a[src], a[src + 1], c[src]]));
        } else {
            bags.push(bag([a[src], a[src + 1], pv(src)]));
            bags.push(bag([a[src + 1], pv(src), c[src]]));
            bags.push(bag([a[src + 1], c[src], v]));
        }
    }
    PathDecomposition { bags }
}

/// The poles split the outer walk into two boundary paths. Returns the
/// corners (toward the outer face) at the internal vertices of each path,
/// in walk order: (side containing a0, side containing c0).
pub fn boundary_side_corners(t: &Tendril) -> (Vec<Corner>, Vec<Corner>) {
    outer_side_corners(&t.body, &t.embedding, t.source_pole, t.sink_pole)
}

/// Generic version used by the verifier on arbitrary embeddings.
pub fn outer_side_corners(
    g: &Multigraph,
    emb: &Embedding,
    pole_a: VertexId,
    pole_b: VertexId,
) -> (Vec<Corner>, Vec<Corner>) {
    let faces = trace_faces(g, emb);
    let outer = faces.face(emb.outer_face);
    // The walk gives, at each step, the corner at the entered vertex.
    let mut sides: Vec<Vec<Corner>> = vec![Vec::new()];
    for step in &outer.walk {
        let at = step.to;
        let pos = emb
            .position(at, step.edge)
            .expect("walk edge present in rotation");
        if at == pole_a || at == pole_b {
            sides.push(Vec::new());
        } else {
            sides.last_mut().unwrap().push(Corner { vertex: at, index: pos });
        }
    }
    // The walk is cyclic: the first partial side continues the last one.
    let first = sides.remove(0);
    sides.last_mut().unwrap().extend(first);
    assert_eq!(sides.len(), 2, "poles must each occur once on the outer walk");
    let mut it = sides.into_iter();
    (it.next().unwrap(), it.next().unwrap())
}

/// Canonical angle assignment of a tendril embedding, built structurally:
/// flats are 0; every switch corner on an inner face is small; outer
/// corners are large exactly at switch vertices. Valid for any member of
/// this tendril family (each inner face has exactly two switch corners).
pub fn canonical_tendril_lambda(g: &Multigraph, emb: &Embedding) -> AngleAssignment {
    let faces = trace_faces(g, emb);
    let mut lambda = AngleAssignment::empty(AngleMode::Upward, &emb.rotation);
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        let switch_vertex = is_switch_vertex(g, v);
        for i in 0..rot.len() {
            let corner = Corner { vertex: v, index: i as u32 };
            let value = if !is_switch_corner(g, emb, corner) {
                0
            } else if faces.face_of_corner(corner) == emb.outer_face && switch_vertex {
                1
            } else {
                -1
            };
            lambda.set(corner, value);
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::angles::{check_upward_assignment, path_contribution};
    use crate::problems::solvers::solve_upward_fixed_embedding;

    #[test]
    fn tendril_size_is_affine() {
        for w in 0..=4u64 {
            let t = build_tendril(w);
            assert_eq!(
                t.body.vertex_count() as u64,
                TENDRIL_SIZE_SLOPE * w + TENDRIL_SIZE_OFFSET
            );
        }
    }

    #[test]
    fn tendril_is_a_dag_with_pole_roles() {
        for w in 0..=3u64 {
            let t = build_tendril(w);
            assert!(t.body.topological_order().is_some());
            assert!(t.body.in_arcs(t.source_pole).is_empty());
            assert!(!t.body.out_arcs(t.source_pole).is_empty());
            assert!(t.body.out_arcs(t.sink_pole).is_empty());
        }
    }

    #[test]
    fn canonical_embedding_is_upward_with_exact_contributions() {
        for w in 0..=3u64 {
            let t = build_tendril(w);
            let lambda = solve_upward_fixed_embedding(&t.body, &t.embedding)
                .unwrap()
                .expect("canonical embedding is upward feasible");
            let structural = canonical_tendril_lambda(&t.body, &t.embedding);
            assert_eq!(
                check_upward_assignment(&t.body, &t.embedding, &structural),
                Ok(true)
            );
            assert_eq!(lambda, structural, "the upward assignment is unique");
            let (sa, sc) = boundary_side_corners(&t);
            let ca = path_contribution(&lambda, &sa);
            let cc = path_contribution(&lambda, &sc);
            let mut got = [ca, cc];
            got.sort();
            assert_eq!(got, [-(2 * w as i64), 2 * w as i64], "w={w}");
        }
    }

    #[test]
    fn tendril_pd_is_valid_width_two() {
        for w in 0..=3u64 {
            let t = build_tendril(w);
            let width = crate::decomposition::validate_decomposition(&t.body, &t.pd).unwrap();
            assert!(width <= 2, "w={w}: width {width}");
        }
    }

    #[test]
    fn triconnected_after_pole_edge() {
        for w in 0..=3u64 {
            let t = build_tendril(w);
            let mut closed = t.body.to_undirected();
            assert!(!closed.has_edge_between(t.source_pole, t.sink_pole));
            closed.add_edge(t.source_pole, t.sink_pole);
            assert_eq!(crate::planar::is_triconnected(&closed), Ok(true), "w={w}");
        }
    }
}
