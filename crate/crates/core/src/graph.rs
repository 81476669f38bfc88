//! Multigraphs with stable integer ids.
//!
//! Vertices are dense (`0..vertex_count`) and are never removed by any
//! operation in this crate; edges carry stable ids that survive surgery
//! (subdivision, triangulation, gadget replacement) so that provenance
//! labels keep pointing at the same object. Parallel edges are allowed,
//! loops are not.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub directed: bool,
}

impl Edge {
    /// The endpoint that is not `w`. Panics if `w` is not an endpoint.
    pub fn other(&self, w: VertexId) -> VertexId {
        if self.u == w {
            self.v
        } else {
            assert_eq!(self.v, w, "{} is not an endpoint of {}", w, self.id);
            self.u
        }
    }

    pub fn has_endpoint(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0} is a loop at {1}")]
    Loop(EdgeId, VertexId),
    #[error("edge {0} references missing vertex {1}")]
    DanglingVertex(EdgeId, VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
}

/// Undirected or directed multigraph without loops.
///
/// Edge ids are strictly increasing in `edges`; `next_edge_id` never
/// decreases, so ids of removed edges are not reused.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    vertex_count: u32,
    edges: Vec<Edge>,
    next_edge_id: u32,
    /// Provenance tags for edges (gadget name, row/column indices).
    pub edge_labels: BTreeMap<EdgeId, String>,
    /// Provenance tags for named construction vertices.
    pub vertex_labels: BTreeMap<VertexId, String>,
}

impl Multigraph {
    pub fn new(vertex_count: u32) -> Self {
        Multigraph {
            vertex_count,
            ..Default::default()
        }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        v.0 < self.vertex_count
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = VertexId(self.vertex_count);
        self.vertex_count += 1;
        v
    }

    pub fn add_vertex_labelled(&mut self, label: impl Into<String>) -> VertexId {
        let v = self.add_vertex();
        self.vertex_labels.insert(v, label.into());
        v
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        let ix = self
            .edges
            .binary_search_by_key(&id, |e| e.id)
            .unwrap_or_else(|_| panic!("unknown edge id {}", id));
        &self.edges[ix]
    }

    pub fn try_edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|ix| &self.edges[ix])
    }

    fn add_edge_inner(&mut self, u: VertexId, v: VertexId, directed: bool) -> EdgeId {
        assert_ne!(u, v, "loops are not allowed");
        assert!(self.has_vertex(u) && self.has_vertex(v), "dangling endpoint");
        let id = EdgeId(self.next_edge_id);
        self.next_edge_id += 1;
        self.edges.push(Edge { id, u, v, directed });
        id
    }

    /// Add an undirected edge {u, v}.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.add_edge_inner(u, v, false)
    }

    /// Add a directed arc u -> v.
    pub fn add_arc(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.add_edge_inner(u, v, true)
    }

    pub fn add_arc_labelled(&mut self, u: VertexId, v: VertexId, label: impl Into<String>) -> EdgeId {
        let id = self.add_arc(u, v);
        self.edge_labels.insert(id, label.into());
        id
    }

    pub fn add_edge_labelled(&mut self, u: VertexId, v: VertexId, label: impl Into<String>) -> EdgeId {
        let id = self.add_edge(u, v);
        self.edge_labels.insert(id, label.into());
        id
    }

    /// Remove an edge by id. Ids of later edges are unaffected.
    pub fn remove_edge(&mut self, id: EdgeId) -> Edge {
        let ix = self
            .edges
            .binary_search_by_key(&id, |e| e.id)
            .unwrap_or_else(|_| panic!("unknown edge id {}", id));
        self.edge_labels.remove(&id);
        self.edges.remove(ix)
    }

    /// Incident edge ids of `v` in id order.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.has_endpoint(v))
            .map(|e| e.id)
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.has_endpoint(v)).count()
    }

    /// Adjacency lists (edge ids) indexed by vertex id, in edge-id order.
    pub fn adjacency(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.vertex_count as usize];
        for e in &self.edges {
            adj[e.u.0 as usize].push(e.id);
            adj[e.v.0 as usize].push(e.id);
        }
        adj
    }

    /// True if some undirected edge joins u and v.
    pub fn has_edge_between(&self, u: VertexId, v: VertexId) -> bool {
        self.edges
            .iter()
            .any(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
    }

    /// True if no two edges share the same endpoint pair.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.edges {
            let key = if e.u <= e.v { (e.u, e.v) } else { (e.v, e.u) };
            if !seen.insert(key) {
                return false;
            }
        }
        true
    }

    /// Checks the type invariants: no loops, endpoints exist, ids strictly increasing.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut prev: Option<EdgeId> = None;
        for e in &self.edges {
            if e.u == e.v {
                return Err(GraphError::Loop(e.id, e.u));
            }
            for w in [e.u, e.v] {
                if !self.has_vertex(w) {
                    return Err(GraphError::DanglingVertex(e.id, w));
                }
            }
            if prev.is_some_and(|p| p >= e.id) {
                return Err(GraphError::DuplicateEdgeId(e.id));
            }
            prev = Some(e.id);
        }
        Ok(())
    }

    /// Connected component ids (0-based, by lowest contained vertex order).
    pub fn components(&self) -> (usize, Vec<u32>) {
        let n = self.vertex_count as usize;
        let adj = self.adjacency();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != u32::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(x) = stack.pop() {
                for &eid in &adj[x] {
                    let e = self.edge(eid);
                    let y = e.other(VertexId(x as u32)).0 as usize;
                    if comp[y] == u32::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count as usize, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || self.components().0 == 1
    }

    /// Re-orient every edge in place: `pick` returns (tail, head). Ids and
    /// labels are preserved; edges become directed.
    pub fn reorient_all(&mut self, pick: impl Fn(&Edge) -> (VertexId, VertexId)) {
        for e in &mut self.edges {
            let (t, h) = pick(e);
            debug_assert!((t == e.u && h == e.v) || (t == e.v && h == e.u));
            e.u = t;
            e.v = h;
            e.directed = true;
        }
    }

    /// Forget arc directions, keeping ids and labels.
    pub fn to_undirected(&self) -> Multigraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.directed = false;
        }
        g
    }

    /// Arcs out of / into `v` (directed edges only).
    pub fn out_arcs(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.directed && e.u == v)
            .map(|e| e.id)
            .collect()
    }

    pub fn in_arcs(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| e.directed && e.v == v)
            .map(|e| e.id)
            .collect()
    }

    /// Topological order of a directed graph, if acyclic.
    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.vertex_count as usize;
        let mut indeg = vec![0usize; n];
        let mut out = vec![Vec::new(); n];
        for e in &self.edges {
            debug_assert!(e.directed);
            indeg[e.v.0 as usize] += 1;
            out[e.u.0 as usize].push(e.v.0 as usize);
        }
        let mut queue: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
            .filter(|&v| indeg[v] == 0)
            .map(std::cmp::Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(v)) = queue.pop() {
            order.push(VertexId(v as u32));
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(std::cmp::Reverse(w));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_stable_across_removal() {
        let mut g = Multigraph::new(3);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(1), VertexId(2));
        g.remove_edge(a);
        let c = g.add_edge(VertexId(0), VertexId(2));
        assert_eq!(g.edge(b).id, b);
        assert!(c > b);
        assert!(g.validate().is_ok());
    }

    #[test]
    #[should_panic(expected = "loops")]
    fn loops_rejected() {
        let mut g = Multigraph::new(1);
        g.add_edge(VertexId(0), VertexId(0));
    }

    #[test]
    fn parallel_edges_distinct() {
        let mut g = Multigraph::new(2);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(0), VertexId(1));
        assert_ne!(a, b);
        assert!(!g.is_simple());
        assert_eq!(g.degree(VertexId(0)), 2);
    }

    #[test]
    fn topological_order_detects_cycles() {
        let mut g = Multigraph::new(3);
        g.add_arc(VertexId(0), VertexId(1));
        g.add_arc(VertexId(1), VertexId(2));
        assert!(g.topological_order().is_some());
        g.add_arc(VertexId(2), VertexId(0));
        assert!(g.topological_order().is_none());
    }
}
