//! Connectivity predicates by exhaustive vertex deletion.
//!
//! Instances in this toolkit are desk scale, so triconnectivity is checked
//! by removing every vertex pair rather than via SPQR machinery.

use crate::graph::{Multigraph, VertexId};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ConnectivityError {
    #[error("triconnectivity requires a simple graph (parallel edges present)")]
    NotSimple,
}

fn connected_after_removal(g: &Multigraph, removed: &[VertexId]) -> bool {
    let n = g.vertex_count() as usize;
    let mut banned = vec![false; n];
    for &v in removed {
        banned[v.0 as usize] = true;
    }
    let adj = g.adjacency();
    let start = match (0..n).find(|&v| !banned[v]) {
        Some(s) => s,
        None => return true,
    };
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &eid in &adj[x] {
            let y = g.edge(eid).other(VertexId(x as u32)).0 as usize;
            if !banned[y] && !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n - removed.len()
}

/// True iff the graph is connected and stays connected after deleting any
/// single vertex, with at least 3 vertices.
pub fn is_biconnected(g: &Multigraph) -> bool {
    if g.vertex_count() < 3 || !g.is_connected() {
        return false;
    }
    g.vertices().all(|v| connected_after_removal(g, &[v]))
}

/// True iff |V| >= 4 and removing any two vertices leaves the graph
/// connected. Rejects graphs with parallel edges: 3-connectivity semantics
/// here are for simple graphs.
pub fn is_triconnected(g: &Multigraph) -> Result<bool, ConnectivityError> {
    if !g.is_simple() {
        return Err(ConnectivityError::NotSimple);
    }
    if g.vertex_count() < 4 || !g.is_connected() {
        return Ok(false);
    }
    for u in g.vertices() {
        for v in g.vertices() {
            if u < v && !connected_after_removal(g, &[u, v]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Separation pairs {u, v} of a connected graph: vertex pairs whose removal
/// disconnects the rest. Used by the gadget verifiers to enumerate
/// embedding flips.
pub fn separation_pairs(g: &Multigraph) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    if g.vertex_count() < 4 {
        return out;
    }
    for u in g.vertices() {
        for v in g.vertices() {
            if u < v && !connected_after_removal(g, &[u, v]) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Connected components of g - {u, v}, as sorted vertex lists.
pub fn split_components(g: &Multigraph, u: VertexId, v: VertexId) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count() as usize;
    let adj = g.adjacency();
    let mut comp = vec![u32::MAX; n];
    comp[u.0 as usize] = u32::MAX - 1;
    comp[v.0 as usize] = u32::MAX - 1;
    let mut groups = Vec::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        let id = groups.len() as u32;
        let mut group = Vec::new();
        let mut stack = vec![s];
        comp[s] = id;
        while let Some(x) = stack.pop() {
            group.push(VertexId(x as u32));
            for &eid in &adj[x] {
                let y = g.edge(eid).other(VertexId(x as u32)).0 as usize;
                if comp[y] == u32::MAX {
                    comp[y] = id;
                    stack.push(y);
                }
            }
        }
        group.sort();
        groups.push(group);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Multigraph {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(VertexId(u), VertexId(v));
            }
        }
        g
    }

    #[test]
    fn k4_is_triconnected() {
        assert_eq!(is_triconnected(&complete(4)), Ok(true));
    }

    #[test]
    fn c5_is_not_triconnected() {
        let mut g = Multigraph::new(5);
        for i in 0..5 {
            g.add_edge(VertexId(i), VertexId((i + 1) % 5));
        }
        assert_eq!(is_triconnected(&g), Ok(false));
        assert!(is_biconnected(&g));
    }

    #[test]
    fn wheel_w5_is_triconnected() {
        // Hub 0, rim 1..=5.
        let mut g = Multigraph::new(6);
        for i in 1..=5u32 {
            g.add_edge(VertexId(0), VertexId(i));
            g.add_edge(VertexId(i), VertexId(if i == 5 { 1 } else { i + 1 }));
        }
        assert_eq!(is_triconnected(&g), Ok(true));
    }

    #[test]
    fn parallel_edges_rejected() {
        let mut g = Multigraph::new(4);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(0), VertexId(1));
        assert_eq!(is_triconnected(&g), Err(ConnectivityError::NotSimple));
    }

    #[test]
    fn path_is_not_biconnected() {
        let mut g = Multigraph::new(3);
        g.add_edge(VertexId(0), VertexId(1));
        g.add_edge(VertexId(1), VertexId(2));
        assert!(!is_biconnected(&g));
    }
}
