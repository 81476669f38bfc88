//! st-orientations of biconnected graphs.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::planar::connectivity::is_biconnected;
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum OrientError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("{0} and {1} must be distinct adjacent vertices")]
    PolesNotAdjacent(VertexId, VertexId),
}

/// Acyclic orientation with unique source `s` and unique sink `t`.
///
/// Built from an st-numbering obtained by ear decomposition: the first ear
/// is a cycle through the edge {s, t}; every further ear is attached with
/// its interior numbered strictly between its endpoints. Ears are found by
/// search with lowest-id tie-breaking, so the result is deterministic.
/// Edge ids and labels are preserved; only endpoint order and the directed
/// flag change.
pub fn st_orientation(g: &Multigraph, s: VertexId, t: VertexId) -> Result<Multigraph, OrientError> {
    if !is_biconnected(g) {
        return Err(OrientError::NotBiconnected);
    }
    if s == t || !g.has_edge_between(s, t) {
        return Err(OrientError::PolesNotAdjacent(s, t));
    }
    let number = st_numbering(g, s, t);
    Ok(orient_by_numbering(g, &number))
}

/// Orient every edge from lower to higher number, in place of the original
/// endpoint order, keeping ids.
pub fn orient_by_numbering(g: &Multigraph, number: &BTreeMap<VertexId, usize>) -> Multigraph {
    let mut out = g.clone();
    out.reorient_all(|e| {
        if number[&e.u] <= number[&e.v] {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    });
    out
}

/// st-numbering: position of each vertex, s first, t last; every other
/// vertex has both a lower and a higher neighbor.
pub fn st_numbering(g: &Multigraph, s: VertexId, t: VertexId) -> BTreeMap<VertexId, usize> {
    let adj = g.adjacency();
    let st_edge = *g
        .incident_edges(s)
        .iter()
        .find(|&&e| g.edge(e).other(s) == t)
        .expect("poles adjacent");

    // Initial ear: a second s-t path, forming a cycle with the {s,t} edge.
    let mut order: Vec<VertexId> =
        bfs_path(g, &adj, s, t, Some(st_edge)).expect("biconnected: second s-t path");

    let mut placed = vec![false; g.vertex_count() as usize];
    for &v in &order {
        placed[v.0 as usize] = true;
    }

    while order.len() < g.vertex_count() as usize {
        let (a, interior, b) = next_ear(g, &adj, &order, &placed);
        let pa = order.iter().position(|&x| x == a).unwrap();
        let pb = order.iter().position(|&x| x == b).unwrap();
        let after = pa.min(pb);
        let ordered: Vec<VertexId> = if pa < pb {
            interior
        } else {
            interior.into_iter().rev().collect()
        };
        for (i, &v) in ordered.iter().enumerate() {
            order.insert(after + 1 + i, v);
            placed[v.0 as usize] = true;
        }
    }

    order.into_iter().enumerate().map(|(i, v)| (v, i)).collect()
}

/// Finds a path a - interior - b with a, b placed and the interior a
/// nonempty run of unplaced vertices. Exists while any vertex is unplaced,
/// because a single attachment point would be a cut vertex.
fn next_ear(
    g: &Multigraph,
    adj: &[Vec<EdgeId>],
    order: &[VertexId],
    placed: &[bool],
) -> (VertexId, Vec<VertexId>, VertexId) {
    for &a in order {
        for &eid in &adj[a.0 as usize] {
            let first = g.edge(eid).other(a);
            if placed[first.0 as usize] {
                continue;
            }
            // BFS from `first` through unplaced vertices to any placed
            // vertex other than a.
            let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(first);
            prev.insert(first, first);
            while let Some(x) = queue.pop_front() {
                for &e2 in &adj[x.0 as usize] {
                    let y = g.edge(e2).other(x);
                    if y == a || prev.contains_key(&y) {
                        continue;
                    }
                    if placed[y.0 as usize] {
                        let mut interior = vec![x];
                        let mut cur = x;
                        while prev[&cur] != cur {
                            cur = prev[&cur];
                            interior.push(cur);
                        }
                        interior.reverse();
                        return (a, interior, y);
                    }
                    prev.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
    }
    unreachable!("biconnected graph always yields an ear");
}

fn bfs_path(
    g: &Multigraph,
    adj: &[Vec<EdgeId>],
    s: VertexId,
    t: VertexId,
    banned_edge: Option<EdgeId>,
) -> Option<Vec<VertexId>> {
    let n = g.vertex_count() as usize;
    let mut prev = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(s);
    seen[s.0 as usize] = true;
    while let Some(x) = queue.pop_front() {
        if x == t {
            let mut path = vec![t];
            let mut cur = t;
            while let Some(p) = prev[cur.0 as usize] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &eid in &adj[x.0 as usize] {
            if banned_edge == Some(eid) {
                continue;
            }
            let y = g.edge(eid).other(x);
            if !seen[y.0 as usize] {
                seen[y.0 as usize] = true;
                prev[y.0 as usize] = Some(x);
                queue.push_back(y);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_st(g: &Multigraph, s: VertexId, t: VertexId) {
        let d = st_orientation(g, s, t).unwrap();
        assert!(d.topological_order().is_some(), "must be acyclic");
        for v in d.vertices() {
            let indeg = d.in_arcs(v).len();
            let outdeg = d.out_arcs(v).len();
            if v == s {
                assert_eq!(indeg, 0);
                assert!(outdeg > 0);
            } else if v == t {
                assert_eq!(outdeg, 0);
                assert!(indeg > 0);
            } else {
                assert!(indeg > 0 && outdeg > 0, "{v} must be interior");
            }
        }
        // Edge ids are untouched.
        let orig: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
        let new: Vec<EdgeId> = d.edges().iter().map(|e| e.id).collect();
        assert_eq!(orig, new);
    }

    #[test]
    fn k4_st_orientation() {
        let mut g = Multigraph::new(4);
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                g.add_edge(VertexId(u), VertexId(v));
            }
        }
        check_st(&g, VertexId(0), VertexId(1));
    }

    #[test]
    fn c4_paths_leave_source() {
        let mut g = Multigraph::new(4);
        for i in 0..4u32 {
            g.add_edge(VertexId(i), VertexId((i + 1) % 4));
        }
        let d = st_orientation(&g, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(d.out_arcs(VertexId(0)).len(), 2);
        check_st(&g, VertexId(0), VertexId(1));
    }

    #[test]
    fn path_graph_rejected() {
        let mut g = Multigraph::new(3);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        assert_eq!(
            st_orientation(&g, VertexId(0), VertexId(1)),
            Err(OrientError::NotBiconnected)
        );
    }

    #[test]
    fn wheel_with_multiedges() {
        let mut g = Multigraph::new(4);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        g.add_edge(VertexId(2), VertexId(3));
        g.add_edge(VertexId(3), VertexId(0));
        check_st(&g, VertexId(0), VertexId(1));
    }
}
