//! Fixed-embedding feasibility solvers.
//!
//! Both planarity characterizations reduce to integral flow problems:
//! switch vertices supply one large angle each (upward), or every vertex
//! distributes a total of 4 quarter-turns (rectilinear), while faces demand
//! the exact balance their UP3 / RE1 condition prescribes. A returned
//! assignment is always re-verified against the declarative checker.

use crate::graph::{Multigraph, VertexId};
use crate::instances::{AngleAssignment, AngleMode};
use crate::planar::embedding::{validate_embedding, Corner, Embedding};
use crate::problems::angles::{
    check_rect_assignment, check_upward_assignment, is_switch_corner, is_switch_vertex, AngleError,
};
use crate::problems::maxflow::FlowGraph;

/// Finds an angle assignment satisfying UP0-UP3, or None when the fixed
/// embedding admits no upward drawing.
pub fn solve_upward_fixed_embedding(
    g: &Multigraph,
    emb: &Embedding,
) -> Result<Option<AngleAssignment>, AngleError> {
    if g.topological_order().is_none() {
        return Err(AngleError::CyclicInput);
    }
    let faces = validate_embedding(g, emb)?;

    // Switch corners per face; flats are forced to 0 so only the larges
    // move. A non-switch vertex must be bimodal (exactly two flats).
    let mut switch_vertices = Vec::new();
    for v in g.vertices() {
        let deg = emb.degree(v);
        if deg == 0 {
            continue;
        }
        let flats = (0..deg)
            .filter(|&i| !is_switch_corner(g, emb, Corner { vertex: v, index: i as u32 }))
            .count();
        if is_switch_vertex(g, v) {
            debug_assert_eq!(flats, 0);
            switch_vertices.push(v);
        } else if flats != 2 {
            return Ok(None); // rotation not bimodal
        }
    }

    // Face demands: inner (S-2)/2 larges, outer (S+2)/2, where S counts the
    // face's switch corners at switch vertices plus forced smalls at
    // non-switch vertices. Forced smalls lower the demand side directly.
    let f = faces.face_count();
    let mut demand = vec![0i64; f];
    for face in &faces.faces {
        let mut switch_corners = 0i64;
        for (vix, rot) in emb.rotation.iter().enumerate() {
            for i in 0..rot.len() {
                let c = Corner { vertex: VertexId(vix as u32), index: i as u32 };
                if faces.face_of_corner(c) == face.id && is_switch_corner(g, emb, c) {
                    switch_corners += 1;
                }
            }
        }
        let target = if face.id == emb.outer_face { 2 } else { -2 };
        let d = switch_corners + target;
        if d % 2 != 0 || d < 0 {
            return Ok(None);
        }
        demand[face.id.0 as usize] = d / 2;
    }
    if demand.iter().sum::<i64>() != switch_vertices.len() as i64 {
        return Ok(None);
    }

    // Bipartite flow: source -> switch vertex (1) -> corner/face (1) ->
    // face -> sink (demand). Only corners at switch vertices are free.
    let n_nodes = 2 + switch_vertices.len() + f;
    let mut net = FlowGraph::new(n_nodes);
    let source = 0usize;
    let sink = 1usize;
    let vnode = |i: usize| 2 + i;
    let fnode = |fid: usize| 2 + switch_vertices.len() + fid;
    let mut corner_arcs = Vec::new();
    for (i, &v) in switch_vertices.iter().enumerate() {
        net.add_arc(source, vnode(i), 1);
        for ci in 0..emb.degree(v) {
            let c = Corner { vertex: v, index: ci as u32 };
            let fid = faces.face_of_corner(c).0 as usize;
            let arc = net.add_arc(vnode(i), fnode(fid), 1);
            corner_arcs.push((arc, c));
        }
    }
    for fid in 0..f {
        net.add_arc(fnode(fid), sink, demand[fid]);
    }
    let need: i64 = switch_vertices.len() as i64;
    if net.max_flow(source, sink) != need {
        return Ok(None);
    }

    let mut lambda = AngleAssignment::empty(AngleMode::Upward, &emb.rotation);
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        for i in 0..rot.len() {
            let c = Corner { vertex: v, index: i as u32 };
            lambda.set(c, if is_switch_corner(g, emb, c) { -1 } else { 0 });
        }
    }
    for &(arc, c) in &corner_arcs {
        if net.flow_on(arc) > 0 {
            lambda.set(c, 1);
        }
    }
    debug_assert_eq!(check_upward_assignment(g, emb, &lambda), Ok(true));
    Ok(Some(lambda))
}

/// Finds an angle assignment satisfying RE0-RE1, or None when the fixed
/// embedding admits no rectilinear drawing.
pub fn solve_rect_fixed_embedding(
    g: &Multigraph,
    emb: &Embedding,
) -> Result<Option<AngleAssignment>, AngleError> {
    for v in g.vertices() {
        let d = g.degree(v);
        if d > 4 {
            return Err(AngleError::DegreeTooHigh(v, d));
        }
    }
    let faces = validate_embedding(g, emb)?;
    let f = faces.face_count();

    // Work with mu = lambda - 1 in 0..=3. Vertex v distributes 4 - deg(v)
    // extra quarter-turns; face balances become sum(mu) = |f| -+ 4.
    let mut face_len = vec![0i64; f];
    for face in &faces.faces {
        face_len[face.id.0 as usize] = face.len() as i64;
    }
    let mut demand = vec![0i64; f];
    for fid in 0..f {
        let target = if fid as u32 == emb.outer_face.0 { 4 } else { -4 };
        let d = face_len[fid] + target;
        if d < 0 {
            return Ok(None);
        }
        demand[fid] = d;
    }
    let supply: i64 = g.vertices().map(|v| 4 - g.degree(v) as i64).sum();
    if supply != demand.iter().sum::<i64>() || supply < 0 {
        return Ok(None);
    }

    let n = g.vertex_count() as usize;
    let total_corners: usize = emb.rotation.iter().map(|r| r.len()).sum();
    let mut net = FlowGraph::new(2 + n + total_corners + f);
    let source = 0usize;
    let sink = 1usize;
    let vnode = |v: usize| 2 + v;
    let fnode = |fid: usize| 2 + n + total_corners + fid;

    let mut next_corner = 2 + n;
    let mut corner_arcs = Vec::new();
    for (vix, rot) in emb.rotation.iter().enumerate() {
        let v = VertexId(vix as u32);
        if !rot.is_empty() {
            net.add_arc(source, vnode(vix), 4 - rot.len() as i64);
        }
        for i in 0..rot.len() {
            let c = Corner { vertex: v, index: i as u32 };
            let cn = next_corner;
            next_corner += 1;
            let arc = net.add_arc(vnode(vix), cn, 3);
            let fid = faces.face_of_corner(c).0 as usize;
            net.add_arc(cn, fnode(fid), 3);
            corner_arcs.push((arc, c));
        }
    }
    for fid in 0..f {
        net.add_arc(fnode(fid), sink, demand[fid]);
    }
    if net.max_flow(source, sink) != supply {
        return Ok(None);
    }

    let mut lambda = AngleAssignment::empty(AngleMode::Rectilinear, &emb.rotation);
    for row in &mut lambda.labels {
        for l in row.iter_mut() {
            *l = 1;
        }
    }
    for &(arc, c) in &corner_arcs {
        let mu = net.flow_on(arc);
        lambda.set(c, 1 + mu as i8);
    }
    debug_assert_eq!(check_rect_assignment(g, emb, &lambda), Ok(true));
    Ok(Some(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::embedding::FaceId;

    #[test]
    fn directed_path_feasible() {
        let mut g = Multigraph::new(4);
        let mut rot: Vec<Vec<_>> = vec![Vec::new(); 4];
        for i in 0..3u32 {
            let e = g.add_arc(VertexId(i), VertexId(i + 1));
            rot[i as usize].push(e);
            rot[(i + 1) as usize].push(e);
        }
        let emb = Embedding { rotation: rot, outer_face: FaceId(0) };
        let lambda = solve_upward_fixed_embedding(&g, &emb).unwrap();
        assert!(lambda.is_some());
    }

    #[test]
    fn c4_rect_feasible_k4_not() {
        let mut c4 = Multigraph::new(4);
        let mut rot: Vec<Vec<_>> = vec![Vec::new(); 4];
        for i in 0..4u32 {
            let e = c4.add_edge(VertexId(i), VertexId((i + 1) % 4));
            rot[i as usize].push(e);
            rot[((i + 1) % 4) as usize].push(e);
        }
        let emb = Embedding { rotation: rot, outer_face: FaceId(0) };
        assert!(solve_rect_fixed_embedding(&c4, &emb).unwrap().is_some());

        let (k4, emb4) = crate::planar::test_fixtures::k4_embedded();
        assert!(solve_rect_fixed_embedding(&k4, &emb4).unwrap().is_none());
    }
}
