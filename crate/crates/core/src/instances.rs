//! Instance and certificate types for the five problems in the chain.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::planar::embedding::Corner;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Multicolored Clique: a simple graph with a k-way partition into
/// equal-size parts; asks for a clique picking one vertex per part.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MccInstance {
    pub graph: Multigraph,
    pub parts: Vec<Vec<VertexId>>,
}

impl MccInstance {
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn part_size(&self) -> usize {
        self.parts.first().map_or(0, |p| p.len())
    }

    pub fn validate(&self) -> Result<(), String> {
        if !self.graph.is_simple() {
            return Err("mcc graph must be simple".into());
        }
        let n = self.part_size();
        let mut seen = BTreeSet::new();
        for p in &self.parts {
            if p.len() != n {
                return Err("parts must have equal sizes".into());
            }
            for &v in p {
                if !self.graph.has_vertex(v) || !seen.insert(v) {
                    return Err(format!("vertex {v} missing or repeated across parts"));
                }
            }
        }
        if seen.len() != self.graph.vertex_count() as usize {
            return Err("parts must partition the vertex set".into());
        }
        Ok(())
    }

    /// Cross-part vertex pairs that are not edges, ordered by part index
    /// then vertex position. Same-part pairs are irrelevant to clique
    /// existence and are not enumerated.
    pub fn cross_non_edges(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for i in 0..self.parts.len() {
            for l in (i + 1)..self.parts.len() {
                for (a, &va) in self.parts[i].iter().enumerate() {
                    for (b, &vb) in self.parts[l].iter().enumerate() {
                        if !self.graph.has_edge_between(va, vb) {
                            out.push(((i, a), (l, b)));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_multicolored_clique(&self, clique: &[VertexId]) -> bool {
        if clique.len() != self.k() {
            return false;
        }
        for (i, p) in self.parts.iter().enumerate() {
            if !p.contains(&clique[i]) {
                return false;
            }
        }
        for i in 0..clique.len() {
            for j in (i + 1)..clique.len() {
                if !self.graph.has_edge_between(clique[i], clique[j]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Flow network for All-or-Nothing Flow: arcs, positive capacities, source,
/// sink and the exact target value F.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowNetwork {
    pub net: Multigraph,
    pub cap: BTreeMap<EdgeId, u64>,
    pub source: VertexId,
    pub sink: VertexId,
    pub target: u64,
}

impl FlowNetwork {
    pub fn capacity(&self, e: EdgeId) -> u64 {
        self.cap[&e]
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.source == self.sink {
            return Err("source equals sink".into());
        }
        for e in self.net.edges() {
            if !e.directed {
                return Err(format!("{} is not directed", e.id));
            }
            match self.cap.get(&e.id) {
                Some(&c) if c >= 1 => {}
                _ => return Err(format!("{} lacks a positive capacity", e.id)),
            }
        }
        Ok(())
    }

    /// Total capacity of arcs leaving `v`.
    pub fn out_capacity(&self, v: VertexId) -> u64 {
        self.net.edges().iter().filter(|e| e.u == v).map(|e| self.cap[&e.id]).sum()
    }

    /// Total capacity of arcs entering `v`.
    pub fn in_capacity(&self, v: VertexId) -> u64 {
        self.net.edges().iter().filter(|e| e.v == v).map(|e| self.cap[&e.id]).sum()
    }
}

/// All-or-nothing flow witness: the set of saturated arcs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AoNFlow {
    pub active: BTreeSet<EdgeId>,
}

/// Circulating Orientation instance: undirected multigraph with
/// nonnegative capacities (zero is allowed and common).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacitatedGraph {
    pub graph: Multigraph,
    pub cap: BTreeMap<EdgeId, u64>,
}

impl CapacitatedGraph {
    pub fn capacity(&self, e: EdgeId) -> u64 {
        self.cap.get(&e).copied().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<(), String> {
        for e in self.graph.edges() {
            if e.directed {
                return Err(format!("{} must be undirected", e.id));
            }
            if !self.cap.contains_key(&e.id) {
                return Err(format!("{} lacks a capacity", e.id));
            }
        }
        Ok(())
    }

    /// Total capacity incident on `v`.
    pub fn total_at(&self, v: VertexId) -> u64 {
        self.graph
            .edges()
            .iter()
            .filter(|e| e.has_endpoint(v))
            .map(|e| self.capacity(e.id))
            .sum()
    }

    pub fn positive_edges(&self) -> Vec<EdgeId> {
        self.graph
            .edges()
            .iter()
            .filter(|e| self.capacity(e.id) > 0)
            .map(|e| e.id)
            .collect()
    }
}

/// Orientation of an undirected capacitated graph: tail/head per edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub dir: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Orientation {
    pub fn matches(&self, g: &Multigraph) -> bool {
        g.edges().iter().all(|e| match self.dir.get(&e.id) {
            Some(&(t, h)) => (t == e.u && h == e.v) || (t == e.v && h == e.u),
            None => false,
        })
    }

    /// Reverse every edge (circulating orientations are closed under this).
    pub fn reversed(&self) -> Orientation {
        Orientation {
            dir: self.dir.iter().map(|(&e, &(t, h))| (e, (h, t))).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngleMode {
    /// Labels in {-1, 0, 1}: small / flat / large.
    Upward,
    /// Labels in {1, 2, 3, 4}: quarter turns.
    Rectilinear,
}

/// Per-corner angle labels over a fixed embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleAssignment {
    pub mode: AngleMode,
    /// labels[v][i] belongs to corner (v, i); shape must match the rotation.
    pub labels: Vec<Vec<i8>>,
}

impl AngleAssignment {
    pub fn get(&self, c: Corner) -> i8 {
        self.labels[c.vertex.0 as usize][c.index as usize]
    }

    pub fn set(&mut self, c: Corner, value: i8) {
        self.labels[c.vertex.0 as usize][c.index as usize] = value;
    }

    pub fn empty(mode: AngleMode, rotation: &[Vec<EdgeId>]) -> Self {
        AngleAssignment {
            mode,
            labels: rotation.iter().map(|r| vec![0; r.len()]).collect(),
        }
    }
}
