//! Rectilinear tendrils: undirected gadgets with degree-1 poles whose two
//! boundary walks contribute +-f with f in {4w, 4w+1, 4w+2}.
//!
//! The body is a strip of quadrilateral faces that keeps turning the same
//! way: a spiral. Every inner face is a 4-cycle, which pins all of its
//! corners at one quarter turn, so the only label freedom left is how the
//! two pole-attachment corners split their remaining three quarter turns.
//! That gives exactly four assignments over the canonical embedding. Each
//! left turn adds a reflex corner on the inner wall and a convex corner on
//! the outer wall, so 4w+1 turns yield the advertised contribution range.

use crate::decomposition::PathDecomposition;
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::instances::{AngleAssignment, AngleMode};
use crate::planar::embedding::{trace_faces, validate_embedding, Corner, Embedding, FaceId};
use std::collections::BTreeSet;

#[derive(Debug, Clone)]
pub struct RectTendril {
    pub body: Multigraph,
    pub embedding: Embedding,
    /// Pole nearer the strip start; degree 1.
    pub pole_a: VertexId,
    pub pole_b: VertexId,
    /// Attachment corners whose angle split is the only label freedom.
    pub slack_a: VertexId,
    pub slack_b: VertexId,
    pub strength: u64,
    pub pd: PathDecomposition,
}

pub const RECT_SIZE_SLOPE: u64 = 16;
pub const RECT_SIZE_OFFSET: u64 = 10;

/// Number of left turns for strength w.
fn turns(w: u64) -> u64 {
    4 * w + 1
}

pub fn build_rect_tendril(w: u64) -> RectTendril {
    let mut g = Multigraph::new(0);
    // Angle bookkeeping: (edge, endpoint) -> degrees clockwise from north.
    let mut angles: std::collections::BTreeMap<(EdgeId, VertexId), i32> = Default::default();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();

    let label = |s: String| s;
    let a = g.add_vertex_labelled(label("rect:A".into()));
    let b = g.add_vertex_labelled(label("rect:B".into()));
    let mut heading: i32 = 90; // facing east; A is the north (left) vertex
    let e_ab = g.add_edge_labelled(a, b, "rect:entry".to_string());
    angles.insert((e_ab, a), 180);
    angles.insert((e_ab, b), 0);

    let mut add_edge = |g: &mut Multigraph,
                        angles: &mut std::collections::BTreeMap<(EdgeId, VertexId), i32>,
                        u: VertexId,
                        v: VertexId,
                        at_u: i32,
                        at_v: i32,
                        lab: String| {
        let e = g.add_edge_labelled(u, v, lab);
        angles.insert((e, u), at_u.rem_euclid(360));
        angles.insert((e, v), at_v.rem_euclid(360));
        e
    };

    // The strip: straight, then (turn, straight) per unit.
    let (mut left, mut right) = (a, b);
    let mut sq = 0u32;
    let mut straight = |g: &mut Multigraph,
                        angles: &mut std::collections::BTreeMap<(EdgeId, VertexId), i32>,
                        bags: &mut Vec<BTreeSet<VertexId>>,
                        left: &mut VertexId,
                        right: &mut VertexId,
                        heading: i32,
                        sq: &mut u32| {
        let l2 = g.add_vertex_labelled(format!("rect:L{sq}"));
        let r2 = g.add_vertex_labelled(format!("rect:R{sq}"));
        add_edge(g, angles, *left, l2, heading, heading + 180, format!("rect:lrail{sq}"));
        add_edge(g, angles, *right, r2, heading, heading + 180, format!("rect:rrail{sq}"));
        add_edge(g, angles, l2, r2, heading + 90, heading - 90, format!("rect:rung{sq}"));
        bags.push(BTreeSet::from([*left, *right, l2]));
        bags.push(BTreeSet::from([*right, l2, r2]));
        *left = l2;
        *right = r2;
        *sq += 1;
    };
    let mut turn_left = |g: &mut Multigraph,
                         angles: &mut std::collections::BTreeMap<(EdgeId, VertexId), i32>,
                         bags: &mut Vec<BTreeSet<VertexId>>,
                         left: &mut VertexId,
                         right: &mut VertexId,
                         heading: &mut i32,
                         sq: &mut u32| {
        let s = g.add_vertex_labelled(format!("rect:S{sq}"));
        let r = g.add_vertex_labelled(format!("rect:T{sq}"));
        add_edge(g, angles, *right, s, *heading, *heading + 180, format!("rect:turnA{sq}"));
        add_edge(g, angles, s, r, *heading - 90, *heading + 90, format!("rect:turnB{sq}"));
        add_edge(g, angles, r, *left, *heading + 180, *heading, format!("rect:turnC{sq}"));
        bags.push(BTreeSet::from([*left, *right, s]));
        bags.push(BTreeSet::from([*left, s, r]));
        *right = r;
        *heading -= 90;
        *sq += 1;
    };

    straight(&mut g, &mut angles, &mut bags, &mut left, &mut right, heading, &mut sq);
    for _ in 0..turns(w) {
        turn_left(&mut g, &mut angles, &mut bags, &mut left, &mut right, &mut heading, &mut sq);
        straight(&mut g, &mut angles, &mut bags, &mut left, &mut right, heading, &mut sq);
    }

    // Poles: degree-1 hangers at the start-left and end-right corners.
    let pole_a = g.add_vertex_labelled("rect:pole_a".to_string());
    let pole_b = g.add_vertex_labelled("rect:pole_b".to_string());
    add_edge(&mut g, &mut angles, pole_a, a, 90, 270, "rect:poleA".to_string());
    add_edge(&mut g, &mut angles, pole_b, right, heading + 180, heading, "rect:poleB".to_string());
    bags.insert(0, BTreeSet::from([pole_a, a, b]));
    bags.push(BTreeSet::from([left, right, pole_b]));

    // Clockwise rotations from the exact angle table.
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_count() as usize];
    for v in g.vertices() {
        let mut inc = g.incident_edges(v);
        inc.sort_by_key(|&e| (angles[&(e, v)], e));
        rotation[v.0 as usize] = inc;
    }
    let mut embedding = Embedding { rotation, outer_face: FaceId(0) };
    let faces = validate_embedding(&g, &embedding).expect("spiral strip is planar");
    embedding.outer_face = faces
        .faces
        .iter()
        .max_by_key(|f| (f.len(), std::cmp::Reverse(f.id)))
        .unwrap()
        .id;

    RectTendril {
        body: g,
        embedding,
        pole_a,
        pole_b,
        slack_a: a,
        slack_b: right,
        strength: w,
        pd: PathDecomposition { bags },
    }
}

/// The four canonical assignments: every square corner is 1 and forced
/// corners follow from the vertex sums; only the two slack vertices split
/// their outer pair as (1,2) or (2,1). Returns an empty list when the
/// body does not have the expected slack structure (mutated gadgets).
pub fn rect_lambda_variants(t: &RectTendril) -> Vec<AngleAssignment> {
    let g = &t.body;
    let emb = &t.embedding;
    let faces = trace_faces(g, emb);
    let mut base = AngleAssignment::empty(AngleMode::Rectilinear, &emb.rotation);
    let mut slack_corners: Vec<Vec<Corner>> = vec![Vec::new(), Vec::new()];
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        let square_corners: Vec<bool> = (0..rot.len())
            .map(|i| {
                faces.face_of_corner(Corner { vertex: v, index: i as u32 }) != emb.outer_face
            })
            .collect();
        let squares = square_corners.iter().filter(|&&s| s).count() as i32;
        let outer = rot.len() as i32 - squares;
        for i in 0..rot.len() {
            let c = Corner { vertex: v, index: i as u32 };
            if square_corners[i] {
                base.set(c, 1);
            } else if v == t.slack_a || v == t.slack_b {
                let side = if v == t.slack_a { 0 } else { 1 };
                slack_corners[side].push(c);
            } else if outer == 1 {
                // Unique outer corner: the leftover of the vertex sum.
                base.set(c, (4 - squares) as i8);
            } else {
                return Vec::new(); // not this family's shape
            }
        }
    }
    if slack_corners[0].len() != 2 || slack_corners[1].len() != 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for sa in 0..2 {
        for sb in 0..2 {
            let mut lambda = base.clone();
            lambda.set(slack_corners[0][sa], 1);
            lambda.set(slack_corners[0][1 - sa], 2);
            lambda.set(slack_corners[1][sb], 1);
            lambda.set(slack_corners[1][1 - sb], 2);
            out.push(lambda);
        }
    }
    out
}

/// Counts RE0/RE1 assignments over a fixed embedding by DFS over
/// per-vertex label distributions with face-sum pruning. Stops at `cap`
/// solutions or errs out when the node budget is exhausted.
pub fn count_rect_assignments(
    g: &Multigraph,
    emb: &Embedding,
    cap: usize,
    node_budget: usize,
) -> Result<(usize, Vec<AngleAssignment>), String> {
    let faces = trace_faces(g, emb);
    let nf = faces.face_count();
    if nf as i64 != g.edge_count() as i64 - g.vertex_count() as i64 + 2 {
        return Ok((0, Vec::new()));
    }
    let mut target = vec![0i64; nf];
    let mut remaining = vec![0i64; nf];
    for f in &faces.faces {
        let t = 2 * f.len() as i64 + if f.id == emb.outer_face { 4 } else { -4 };
        target[f.id.0 as usize] = t;
        remaining[f.id.0 as usize] = f.len() as i64;
    }
    let mut current = vec![0i64; nf];

    // Distributions of 4 over d corners, values 1..=4.
    fn distributions(d: usize) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        let mut cur = vec![0i8; d];
        fn rec(d: usize, i: usize, left: i8, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
            if i == d {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let rest = (d - i - 1) as i8;
            for v in 1..=4i8 {
                if left - v >= rest && left - v <= 4 * rest {
                    cur[i] = v;
                    rec(d, i + 1, left - v, cur, out);
                }
            }
        }
        rec(d, 0, 4, &mut cur, &mut out);
        out
    }

    let per_vertex: Vec<Vec<Vec<i8>>> = emb
        .rotation
        .iter()
        .map(|rot| distributions(rot.len()))
        .collect();
    let corner_faces: Vec<Vec<usize>> = emb
        .rotation
        .iter()
        .enumerate()
        .map(|(vix, rot)| {
            (0..rot.len())
                .map(|i| {
                    faces
                        .face_of_corner(Corner { vertex: VertexId(vix as u32), index: i as u32 })
                        .0 as usize
                })
                .collect()
        })
        .collect();

    struct S<'x> {
        per_vertex: &'x [Vec<Vec<i8>>],
        corner_faces: &'x [Vec<usize>],
        target: &'x [i64],
        cap: usize,
        nodes: usize,
        budget: usize,
    }
    fn dfs(
        s: &mut S,
        v: usize,
        current: &mut [i64],
        remaining: &mut [i64],
        labels: &mut Vec<Vec<i8>>,
        found: &mut Vec<Vec<Vec<i8>>>,
    ) -> Result<(), String> {
        if found.len() >= s.cap {
            return Ok(());
        }
        s.nodes += 1;
        if s.nodes > s.budget {
            return Err("assignment-count budget exhausted".into());
        }
        if v == s.per_vertex.len() {
            found.push(labels.clone());
            return Ok(());
        }
        let cf = &s.corner_faces[v];
        for dist in &s.per_vertex[v] {
            for (i, &lab) in dist.iter().enumerate() {
                current[cf[i]] += lab as i64;
                remaining[cf[i]] -= 1;
            }
            let ok = cf.iter().all(|&f| {
                current[f] + remaining[f] <= s.target[f]
                    && current[f] + 4 * remaining[f] >= s.target[f]
            });
            if ok {
                labels[v] = dist.clone();
                dfs(s, v + 1, current, remaining, labels, found)?;
                labels[v] = Vec::new();
            }
            for (i, &lab) in dist.iter().enumerate() {
                current[cf[i]] -= lab as i64;
                remaining[cf[i]] += 1;
            }
        }
        Ok(())
    }

    let mut s = S {
        per_vertex: &per_vertex,
        corner_faces: &corner_faces,
        target: &target,
        cap,
        nodes: 0,
        budget: node_budget,
    };
    let mut labels: Vec<Vec<i8>> = vec![Vec::new(); per_vertex.len()];
    let mut found = Vec::new();
    dfs(&mut s, 0, &mut current, &mut remaining, &mut labels, &mut found)?;
    let out = found
        .into_iter()
        .map(|labels| AngleAssignment { mode: AngleMode::Rectilinear, labels })
        .collect::<Vec<_>>();
    Ok((out.len(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::tendril::outer_side_corners;
    use crate::problems::angles::{check_rect_assignment, path_contribution};

    #[test]
    fn rect_tendril_shape() {
        for w in 0..=2u64 {
            let t = build_rect_tendril(w);
            assert_eq!(t.body.vertex_count() as u64, RECT_SIZE_SLOPE * w + RECT_SIZE_OFFSET);
            assert_eq!(t.body.degree(t.pole_a), 1);
            assert_eq!(t.body.degree(t.pole_b), 1);
            let width = crate::decomposition::validate_decomposition(&t.body, &t.pd).unwrap();
            assert!(width <= 2, "w={w}: {width}");
        }
    }

    #[test]
    fn four_variants_check_out_with_contribution_range() {
        for w in 0..=2u64 {
            let t = build_rect_tendril(w);
            let variants = rect_lambda_variants(&t);
            assert_eq!(variants.len(), 4);
            let mut fs = BTreeSet::new();
            for lambda in &variants {
                assert_eq!(
                    check_rect_assignment(&t.body, &t.embedding, lambda),
                    Ok(true),
                    "w={w}"
                );
                let (s1, s2) = outer_side_corners(&t.body, &t.embedding, t.pole_a, t.pole_b);
                let (c1, c2) = (path_contribution(lambda, &s1), path_contribution(lambda, &s2));
                assert_eq!(c1 + c2, 0, "sides must be f and -f");
                fs.insert(c1.abs());
            }
            let want: BTreeSet<i64> =
                [(4 * w) as i64, (4 * w + 1) as i64, (4 * w + 2) as i64].into();
            assert_eq!(fs, want, "w={w}: contribution set");
        }
    }

    #[test]
    fn exactly_four_assignments_on_canonical_embedding() {
        for w in 0..=1u64 {
            let t = build_rect_tendril(w);
            let (count, _) =
                count_rect_assignments(&t.body, &t.embedding, 16, 5_000_000).unwrap();
            assert_eq!(count, 4, "w={w}");
        }
    }
}
