//! Variable-embedding brute force: enumerate rotation systems that pass
//! the Euler check, then run the fixed-embedding solvers over every choice
//! of outer face. Also the exhaustive angle-assignment enumerators used as
//! independent oracles for the solvers.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::instances::{AngleAssignment, AngleMode};
use crate::planar::embedding::{trace_faces, Corner, Embedding, FaceId};
use crate::problems::angles::{
    check_rect_assignment, check_upward_assignment, is_switch_corner,
};
use crate::problems::oracles::OracleError;
use crate::problems::solvers::{solve_rect_fixed_embedding, solve_upward_fixed_embedding};

pub const DEFAULT_EMBEDDING_VERTEX_LIMIT: u32 = 8;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    heap_permute(&mut items, k, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// All rotation systems of `g`: the first incident edge of every vertex is
/// pinned, the rest permuted. Count is prod (deg(v) - 1)!.
pub struct RotationSystems {
    incident: Vec<Vec<EdgeId>>,
    perms: Vec<Vec<Vec<usize>>>,
    odometer: Vec<usize>,
    done: bool,
}

impl RotationSystems {
    pub fn new(g: &Multigraph) -> Self {
        let incident: Vec<Vec<EdgeId>> = g.vertices().map(|v| g.incident_edges(v)).collect();
        let perms: Vec<Vec<Vec<usize>>> = incident
            .iter()
            .map(|inc| permutations(inc.len().saturating_sub(1)))
            .collect();
        RotationSystems { incident, perms, odometer: vec![0; g.vertex_count() as usize], done: false }
    }

    pub fn count(&self) -> u64 {
        self.perms
            .iter()
            .fold(1u64, |acc, p| acc.saturating_mul(p.len() as u64))
    }
}

impl Iterator for RotationSystems {
    type Item = Vec<Vec<EdgeId>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let rotation: Vec<Vec<EdgeId>> = self
            .incident
            .iter()
            .zip(&self.perms)
            .zip(&self.odometer)
            .map(|((inc, perms), &ix)| {
                if inc.is_empty() {
                    Vec::new()
                } else {
                    let mut rot = vec![inc[0]];
                    rot.extend(perms[ix].iter().map(|&p| inc[p + 1]));
                    rot
                }
            })
            .collect();
        // Advance odometer.
        let mut i = 0;
        loop {
            if i == self.odometer.len() {
                self.done = true;
                break;
            }
            self.odometer[i] += 1;
            if self.odometer[i] < self.perms[i].len() {
                break;
            }
            self.odometer[i] = 0;
            i += 1;
        }
        Some(rotation)
    }
}

/// Euler-passing rotation systems of a connected graph (outer face not
/// chosen yet; the returned embeddings use face 0 as a placeholder).
pub fn planar_rotation_systems(g: &Multigraph) -> Vec<Embedding> {
    let mut out = Vec::new();
    let target = g.edge_count() as i64 - g.vertex_count() as i64 + 2;
    for rotation in RotationSystems::new(g) {
        let emb = Embedding { rotation, outer_face: FaceId(0) };
        let faces = trace_faces(g, &emb);
        if faces.faces.len() as i64 == target {
            out.push(emb);
        }
    }
    out
}

fn embedding_budget(g: &Multigraph, limit: Option<u32>) -> Result<(), OracleError> {
    let limit = limit.unwrap_or(DEFAULT_EMBEDDING_VERTEX_LIMIT);
    if g.vertex_count() > limit {
        return Err(OracleError::BudgetExceeded(format!(
            "{} vertices exceed the embedding-enumeration limit of {limit}",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Variable-embedding upward planarity by exhaustive search. Cyclic or
/// disconnected digraphs are not upward planar.
pub fn solve_upward_bruteforce(g: &Multigraph, limit: Option<u32>) -> Result<bool, OracleError> {
    embedding_budget(g, limit)?;
    if g.topological_order().is_none() || !g.is_connected() {
        return Ok(false);
    }
    for mut emb in planar_rotation_systems(g) {
        let faces = trace_faces(g, &emb);
        for f in 0..faces.faces.len() {
            emb.outer_face = FaceId(f as u32);
            if solve_upward_fixed_embedding(g, &emb)
                .expect("acyclicity checked")
                .is_some()
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Variable-embedding rectilinear planarity by exhaustive search.
pub fn solve_rect_bruteforce(g: &Multigraph, limit: Option<u32>) -> Result<bool, OracleError> {
    embedding_budget(g, limit)?;
    if !g.is_connected() || g.vertices().any(|v| g.degree(v) > 4) {
        return Ok(false);
    }
    for mut emb in planar_rotation_systems(g) {
        let faces = trace_faces(g, &emb);
        for f in 0..faces.faces.len() {
            emb.outer_face = FaceId(f as u32);
            if solve_rect_fixed_embedding(g, &emb)
                .expect("degrees checked")
                .is_some()
            {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Every UP0-UP3 assignment over the fixed embedding, by enumerating the
/// +-1 labels of all switch corners. Independent of the flow solver.
pub fn enumerate_upward_assignments(g: &Multigraph, emb: &Embedding) -> Vec<AngleAssignment> {
    let mut switch_corners = Vec::new();
    for (vix, rot) in emb.rotation.iter().enumerate() {
        for i in 0..rot.len() {
            let c = Corner { vertex: VertexId(vix as u32), index: i as u32 };
            if is_switch_corner(g, emb, c) {
                switch_corners.push(c);
            }
        }
    }
    let mut out = Vec::new();
    let s = switch_corners.len();
    if s > 26 {
        panic!("enumeration oracle limited to 26 switch corners, got {s}");
    }
    for mask in 0u64..(1 << s) {
        let mut lambda = AngleAssignment::empty(AngleMode::Upward, &emb.rotation);
        for (b, &c) in switch_corners.iter().enumerate() {
            lambda.set(c, if mask >> b & 1 == 1 { 1 } else { -1 });
        }
        if check_upward_assignment(g, emb, &lambda) == Ok(true) {
            out.push(lambda);
        }
    }
    out
}

/// Every RE0-RE1 assignment over the fixed embedding, enumerating labels
/// 1..=4 on all corners with per-vertex sum pruning.
pub fn enumerate_rect_assignments(g: &Multigraph, emb: &Embedding) -> Vec<AngleAssignment> {
    let mut all_corners = Vec::new();
    for (vix, rot) in emb.rotation.iter().enumerate() {
        for i in 0..rot.len() {
            all_corners.push(Corner { vertex: VertexId(vix as u32), index: i as u32 });
        }
    }
    let mut out = Vec::new();
    let mut lambda = AngleAssignment::empty(AngleMode::Rectilinear, &emb.rotation);

    fn rec(
        g: &Multigraph,
        emb: &Embedding,
        corners: &[Corner],
        ix: usize,
        lambda: &mut AngleAssignment,
        out: &mut Vec<AngleAssignment>,
    ) {
        if ix == corners.len() {
            if check_rect_assignment(g, emb, lambda) == Ok(true) {
                out.push(lambda.clone());
            }
            return;
        }
        let c = corners[ix];
        let deg = emb.degree(c.vertex) as i64;
        for l in 1..=4i8 {
            lambda.set(c, l);
            // Prune on the running vertex sum: remaining corners at this
            // vertex each contribute at least 1 and at most 4.
            let row = &lambda.labels[c.vertex.0 as usize];
            let filled = (c.index + 1) as i64;
            let sum: i64 = row[..filled as usize].iter().map(|&x| x as i64).sum();
            let rest = deg - filled;
            if sum + rest <= 4 && sum + 4 * rest >= 4 {
                rec(g, emb, corners, ix + 1, lambda, out);
            }
        }
        lambda.set(c, 0);
    }

    // Corners are ordered vertex-major so the per-vertex prefix prune works.
    rec(g, emb, &all_corners, 0, &mut lambda, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arc_upward() {
        let mut g = Multigraph::new(2);
        g.add_arc(VertexId(0), VertexId(1));
        assert_eq!(solve_upward_bruteforce(&g, None), Ok(true));
    }

    #[test]
    fn path_rect_triangle_not() {
        let mut p = Multigraph::new(3);
        p.add_edge(VertexId(0), VertexId(1));
        p.add_edge(VertexId(1), VertexId(2));
        assert_eq!(solve_rect_bruteforce(&p, None), Ok(true));

        let mut t = Multigraph::new(3);
        t.add_edge(VertexId(0), VertexId(1));
        t.add_edge(VertexId(1), VertexId(2));
        t.add_edge(VertexId(2), VertexId(0));
        assert_eq!(solve_rect_bruteforce(&t, None), Ok(false));
    }

    #[test]
    fn nonplanar_dag_not_upward() {
        // K5 oriented acyclically.
        let mut g = Multigraph::new(5);
        for u in 0..5u32 {
            for v in (u + 1)..5 {
                g.add_arc(VertexId(u), VertexId(v));
            }
        }
        assert_eq!(solve_upward_bruteforce(&g, None), Ok(false));
    }

    #[test]
    fn budget_enforced() {
        let g = Multigraph::new(40);
        assert!(matches!(
            solve_upward_bruteforce(&g, None),
            Err(OracleError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn solver_matches_enumeration_on_diamond() {
        // Diamond DAG: 0->1, 0->2, 1->3, 2->3.
        let mut g = Multigraph::new(4);
        let a = g.add_arc(VertexId(0), VertexId(1));
        let b = g.add_arc(VertexId(0), VertexId(2));
        let c = g.add_arc(VertexId(1), VertexId(3));
        let d = g.add_arc(VertexId(2), VertexId(3));
        let emb = Embedding {
            rotation: vec![vec![a, b], vec![a, c], vec![b, d], vec![c, d]],
            outer_face: FaceId(0),
        };
        let faces = trace_faces(&g, &emb);
        for f in 0..faces.faces.len() {
            let mut e = emb.clone();
            e.outer_face = FaceId(f as u32);
            let solved = solve_upward_fixed_embedding(&g, &e).unwrap();
            let all = enumerate_upward_assignments(&g, &e);
            assert_eq!(solved.is_some(), !all.is_empty());
            if let Some(l) = solved {
                assert!(all.contains(&l) || check_upward_assignment(&g, &e, &l) == Ok(true));
            }
        }
    }
}
