//! Vertex-selection (VS) and checker (CH) gadget constructors.
//!
//! A VS gadget offers N parallel six-arc paths between two row anchors;
//! saturating the path of capacity 2kN+2q selects the q-th vertex of the
//! part. A CH column stacks one VS gadget per part, decrements the two row
//! paths matching a non-edge's endpoints by one, and wires five capacity-1
//! paths through the letter columns so that at most one decremented row per
//! column can be topped back up.
//!
//! All constructions carry an explicit plane drawing (first-segment
//! directions per arc endpoint); rotations derived from it validate at
//! genus 0, which doubles as a structural audit of each build.

use crate::graph::{EdgeId, Multigraph, VertexId};
use std::collections::BTreeMap;

/// Directed capacitated fragment with named attachment vertices.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub body: Multigraph,
    pub cap: BTreeMap<EdgeId, u64>,
    pub boundary: BTreeMap<String, VertexId>,
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

/// Shared builder holding the graph, capacities and the drawing.
#[derive(Debug, Clone, Default)]
pub(crate) struct NetBuilder {
    pub g: Multigraph,
    pub cap: BTreeMap<EdgeId, u64>,
    /// First-segment direction of each arc at each endpoint.
    pub dir: BTreeMap<(EdgeId, VertexId), (f64, f64)>,
}

impl NetBuilder {
    pub fn vertex(&mut self, label: String) -> VertexId {
        self.g.add_vertex_labelled(label)
    }

    pub fn arc(
        &mut self,
        u: VertexId,
        v: VertexId,
        cap: u64,
        label: String,
        du: (f64, f64),
        dv: (f64, f64),
    ) -> EdgeId {
        let e = self.g.add_arc_labelled(u, v, label);
        self.cap.insert(e, cap);
        self.dir.insert((e, u), du);
        self.dir.insert((e, v), dv);
        e
    }

    /// Clockwise rotations derived from the recorded directions.
    pub fn rotations(&self) -> Vec<Vec<EdgeId>> {
        crate::planar::embedding::rotation_from_directions(&self.g, |e, at| self.dir[&(e, at)])
    }
}

/// Letter-column x offsets inside a column strip of width 8.
const OFF: [(char, f64); 5] = [('v', 1.5), ('u', 2.8), ('w', 4.0), ('g', 5.2), ('h', 6.5)];

pub(crate) fn col_x(j: u64) -> f64 {
    8.0 * (j as f64 - 1.0)
}

pub(crate) fn row_y(i: u64) -> f64 {
    -10.0 * i as f64
}

fn quint_pos(i: u64, j: u64, q: u64, letter: usize) -> (f64, f64) {
    (col_x(j) + OFF[letter].1, row_y(i) - 0.8 * q as f64)
}

/// Adds the VS gadget for part i, column j between the given anchors.
/// Returns, per path q (1-based), the six arc ids in order.
pub(crate) fn add_vs(
    nb: &mut NetBuilder,
    i: u64,
    j: u64,
    k: u64,
    n: u64,
    entry: VertexId,
    exit: VertexId,
) -> Vec<Vec<EdgeId>> {
    let mut paths = Vec::new();
    for q in 1..=n {
        let c = 2 * k * n + 2 * q;
        let letters: Vec<VertexId> = (0..5)
            .map(|l| nb.vertex(format!("q:{i}:{j}:{q}:{}", OFF[l].0)))
            .collect();
        let mut arcs = Vec::new();
        let mut prev = entry;
        for (pos, &cur) in letters.iter().chain([&exit]).enumerate() {
            let lab = format!("row:{i}:{j}:{q}:{pos}");
            let (du, dv) = if pos == 0 {
                ((1.5, -0.8 * q as f64), (-1.5, 0.8 * q as f64))
            } else if pos == 5 {
                ((1.5, 0.8 * q as f64), (-1.5, -0.8 * q as f64))
            } else {
                ((1.0, 0.0), (-1.0, 0.0))
            };
            arcs.push(nb.arc(prev, cur, c, lab, du, dv));
            prev = cur;
        }
        let _ = quint_pos(i, j, q, 0);
        paths.push(arcs);
    }
    paths
}

/// Looks up a letter vertex created by `add_vs`.
pub(crate) fn quint_vertex(g: &Multigraph, i: u64, j: u64, q: u64, letter: char) -> VertexId {
    let want = format!("q:{i}:{j}:{q}:{letter}");
    g.vertex_labels
        .iter()
        .find(|(_, l)| **l == want)
        .map(|(&v, _)| v)
        .unwrap_or_else(|| panic!("missing {want}"))
}

/// Adds the CH column j: one VS gadget per part, the vertices x^j and y^j,
/// the five capacity-1 paths, and the two row-path decrements for the
/// non-edge (v_{i,a}, v_{l,b}), i < l. The anchors must already exist.
#[allow(clippy::too_many_arguments)]
pub(crate) fn add_ch_column(
    nb: &mut NetBuilder,
    j: u64,
    k: u64,
    n: u64,
    nonedge: (u64, u64, u64, u64),
    entries: &[VertexId],
    exits: &[VertexId],
) -> Result<(VertexId, VertexId), GadgetError> {
    let (i, a, l, b) = nonedge;
    if !(1 <= i && i < l && l <= k && 1 <= a && a <= n && 1 <= b && b <= n) {
        return Err(GadgetError::IndexOutOfRange(format!(
            "nonedge (i={i}, a={a}, l={l}, b={b}) outside k={k}, N={n}"
        )));
    }

    let mut row_paths = Vec::new();
    for row in 1..=k {
        let paths = add_vs(nb, row, j, k, n, entries[row as usize - 1], exits[row as usize - 1]);
        row_paths.push(paths);
    }
    // Decrement the two designated row paths by one.
    for (row, q) in [(i, a), (l, b)] {
        for &arc in &row_paths[row as usize - 1][q as usize - 1] {
            let c = nb.cap.get_mut(&arc).unwrap();
            *c -= 1;
        }
    }

    let x = nb.vertex(format!("x:{j}"));
    let y = nb.vertex(format!("y:{j}"));
    let xpos = (col_x(j) + 3.3, -6.0);
    let ypos = (col_x(j) + 5.0, row_y(k) - 0.8 * n as f64 - 3.0);
    let qv = |nb: &NetBuilder, p: u64, q: u64, letter: char| quint_vertex(&nb.g, p, j, q, letter);

    // w-path: x^j down through every w vertex, then y^j.
    {
        let mut arcs = 0;
        let mut prev = x;
        let mut prev_dir_from = (xpos.0, xpos.1);
        for p in 1..=k {
            for q in 1..=n {
                let cur = qv(nb, p, q, 'w');
                let cp = quint_pos(p, j, q, 2);
                let d = (cp.0 - prev_dir_from.0, cp.1 - prev_dir_from.1);
                nb.arc(prev, cur, 1, format!("chw:{j}:{arcs}"), d, (-d.0, -d.1));
                arcs += 1;
                prev = cur;
                prev_dir_from = cp;
            }
        }
        let d = (ypos.0 - prev_dir_from.0, ypos.1 - prev_dir_from.1);
        nb.arc(prev, y, 1, format!("chw:{j}:{arcs}"), d, (-d.0, -d.1));
    }

    // v-path from V_i^j and u-path from V_l^j, climbing to x^j.
    for (letter, lix, start_row, tag) in [('v', 0usize, i, "chv"), ('u', 1usize, l, "chu")] {
        let mut arcs = 0;
        let entry = entries[start_row as usize - 1];
        let first = qv(nb, start_row, n, letter);
        let fp = quint_pos(start_row, j, n, lix);
        // v-path starts parallel to the row arc, bulging below it (same
        // perpendicular offset at both ends keeps the strands nested);
        // the u-path dives under the row bundle and comes up into u_{l,N}
        // from below.
        let (du, dv) = if letter == 'v' {
            ((1.5, -0.8 * n as f64 - 0.3), (-1.5, 0.8 * n as f64 - 0.3))
        } else {
            ((0.0, -1.0), (0.0, -1.0))
        };
        nb.arc(entry, first, 1, format!("{tag}:{j}:{arcs}"), du, dv);
        arcs += 1;
        let mut prev = first;
        let mut prev_pos = fp;
        for p in (1..=start_row).rev() {
            let qs = if p == start_row { (1..n).rev().collect::<Vec<_>>() } else { (1..=n).rev().collect() };
            for q in qs {
                let cur = qv(nb, p, q, letter);
                let cp = quint_pos(p, j, q, lix);
                let d = (cp.0 - prev_pos.0, cp.1 - prev_pos.1);
                nb.arc(prev, cur, 1, format!("{tag}:{j}:{arcs}"), d, (-d.0, -d.1));
                arcs += 1;
                prev = cur;
                prev_pos = cp;
            }
        }
        let d = (xpos.0 - prev_pos.0, xpos.1 - prev_pos.1);
        nb.arc(prev, x, 1, format!("{tag}:{j}:{arcs}"), d, (-d.0, -d.1));
    }

    // g-path to V_i^{j+1} and h-path to V_l^{j+1}, climbing from y^j.
    for (letter, lix, end_row, tag) in [('g', 3usize, i, "chg"), ('h', 4usize, l, "chh")] {
        let mut arcs = 0;
        let first = qv(nb, k, n, letter);
        let fp = quint_pos(k, j, n, lix);
        let d = (fp.0 - ypos.0, fp.1 - ypos.1);
        nb.arc(y, first, 1, format!("{tag}:{j}:{arcs}"), d, (-d.0, -d.1));
        arcs += 1;
        let mut prev = first;
        let mut prev_pos = fp;
        for p in (end_row..=k).rev() {
            let qs: Vec<u64> = if p == k { (1..n).rev().collect() } else { (1..=n).rev().collect() };
            for q in qs {
                let cur = qv(nb, p, q, letter);
                let cp = quint_pos(p, j, q, lix);
                let d = (cp.0 - prev_pos.0, cp.1 - prev_pos.1);
                nb.arc(prev, cur, 1, format!("{tag}:{j}:{arcs}"), d, (-d.0, -d.1));
                arcs += 1;
                prev = cur;
                prev_pos = cp;
            }
        }
        let exit = exits[end_row as usize - 1];
        // End parallel to the row arc into the anchor (h), bulging above
        // it, or rise over the remaining letters (g).
        let (du, dv) = if letter == 'h' {
            ((1.5, 0.8 + 0.3), (-1.5, -0.8 + 0.3))
        } else {
            ((2.8, 0.8), (-2.8, -0.8))
        };
        nb.arc(prev, exit, 1, format!("{tag}:{j}:{arcs}"), du, dv);
    }

    Ok((x, y))
}

/// Standalone VS gadget, per the spec interface.
pub fn build_vs_gadget(i: u64, j: u64, k: u64, n: u64) -> Result<Gadget, GadgetError> {
    if !(1 <= i && i <= k && n >= 1) {
        return Err(GadgetError::IndexOutOfRange(format!("i={i}, k={k}, N={n}")));
    }
    let mut nb = NetBuilder::default();
    let entry = nb.vertex(format!("V:{i}:{j}"));
    let exit = nb.vertex(format!("V:{i}:{}", j + 1));
    add_vs(&mut nb, i, j, k, n, entry, exit);
    let boundary =
        BTreeMap::from([("entry".to_string(), entry), ("exit".to_string(), exit)]);
    Ok(Gadget { body: nb.g, cap: nb.cap, boundary })
}

/// Standalone CH gadget for column j and the j-th non-edge
/// (v_{i,a}, v_{l,b}).
pub fn build_ch_gadget(
    j: u64,
    nonedge: (u64, u64, u64, u64),
    k: u64,
    n: u64,
) -> Result<Gadget, GadgetError> {
    let mut nb = NetBuilder::default();
    let entries: Vec<VertexId> = (1..=k).map(|i| nb.vertex(format!("V:{i}:{j}"))).collect();
    let exits: Vec<VertexId> = (1..=k).map(|i| nb.vertex(format!("V:{i}:{}", j + 1))).collect();
    let (x, y) = add_ch_column(&mut nb, j, k, n, nonedge, &entries, &exits)?;
    let mut boundary = BTreeMap::new();
    for (i, (&e, &o)) in entries.iter().zip(&exits).enumerate() {
        boundary.insert(format!("entry:{}", i + 1), e);
        boundary.insert(format!("exit:{}", i + 1), o);
    }
    boundary.insert("x".to_string(), x);
    boundary.insert("y".to_string(), y);
    Ok(Gadget { body: nb.g, cap: nb.cap, boundary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vs_capacities_follow_the_formula() {
        let g = build_vs_gadget(1, 1, 2, 2).unwrap();
        let mut caps: Vec<u64> = g.cap.values().copied().collect();
        caps.sort();
        caps.dedup();
        assert_eq!(caps, vec![10, 12], "capacities 2kN+2q for q in [N]");
        assert_eq!(g.body.vertex_count(), 2 + 5 * 2, "2 + 5N vertices");

        let g = build_vs_gadget(1, 1, 1, 1).unwrap();
        assert!(g.cap.values().all(|&c| c == 4));
        assert_eq!(g.cap.len(), 6);
    }

    #[test]
    fn ch_decrements_exactly_two_row_paths() {
        let k = 2;
        let n = 2;
        let g = build_ch_gadget(1, (1, 1, 2, 2), k, n).unwrap();
        // Row 1 path 1 decremented to 2kN+2-1 = 9; row 2 path 2 to 11.
        let mut by_cap: BTreeMap<u64, usize> = BTreeMap::new();
        for (id, &c) in &g.cap {
            let lab = &g.body.edge_labels[id];
            if lab.starts_with("row:") {
                *by_cap.entry(c).or_insert(0) += 1;
            }
        }
        assert_eq!(by_cap[&9], 6);
        assert_eq!(by_cap[&11], 6);
        assert_eq!(by_cap[&10], 6);
        assert_eq!(by_cap[&12], 6);
    }

    #[test]
    fn ch_five_unit_paths_disjoint_outside_x_y() {
        let g = build_ch_gadget(1, (1, 2, 2, 1), 2, 2).unwrap();
        let x = g.boundary["x"];
        let y = g.boundary["y"];
        let path_vertices = |tag: &str| -> std::collections::BTreeSet<VertexId> {
            let mut vs = std::collections::BTreeSet::new();
            for e in g.body.edges() {
                if g.body.edge_labels[&e.id].starts_with(tag) {
                    vs.insert(e.u);
                    vs.insert(e.v);
                }
            }
            vs
        };
        let tags = ["chw:", "chv:", "chu:", "chg:", "chh:"];
        for (ai, ta) in tags.iter().enumerate() {
            for tb in tags.iter().skip(ai + 1) {
                let inter: Vec<VertexId> = path_vertices(ta)
                    .intersection(&path_vertices(tb))
                    .copied()
                    .collect();
                assert!(
                    inter.iter().all(|&v| v == x || v == y),
                    "{ta} and {tb} share {inter:?}"
                );
            }
        }
        // Each unit path has capacity 1 throughout.
        for (id, c) in &g.cap {
            let lab = &g.body.edge_labels[id];
            if lab.starts_with("ch") {
                assert_eq!(*c, 1);
            }
        }
    }

    #[test]
    fn ch_balance_matches_the_imbalance_classification() {
        // Internal vertices balance; x has in 2 / out 1, y the reverse.
        let k = 3;
        let n = 2;
        let g = build_ch_gadget(4, (1, 2, 3, 1), k, n).unwrap();
        let x = g.boundary["x"];
        let y = g.boundary["y"];
        let net = &g.body;
        for v in net.vertices() {
            let inc: u64 = net.in_arcs(v).iter().map(|e| g.cap[e]).sum();
            let out: u64 = net.out_arcs(v).iter().map(|e| g.cap[e]).sum();
            let lab = net.vertex_labels.get(&v).cloned().unwrap_or_default();
            if v == x {
                assert_eq!((inc, out), (2, 1));
            } else if v == y {
                assert_eq!((inc, out), (1, 2));
            } else if lab.starts_with("q:") {
                assert_eq!(inc, out, "{lab} must balance");
            }
        }
    }
}

#[cfg(test)]
mod embedding_tests {
    use super::*;
    use crate::planar::embedding::{validate_embedding, Embedding, FaceId};

    fn euler(nb: &NetBuilder) -> Result<usize, String> {
        let emb = Embedding { rotation: nb.rotations(), outer_face: FaceId(0) };
        validate_embedding(&nb.g, &emb)
            .map(|f| f.face_count())
            .map_err(|e| e.to_string())
    }

    #[test]
    fn vs_alone_embeds() {
        for (k, n) in [(1u64, 1u64), (2, 2), (3, 3)] {
            let mut nb = NetBuilder::default();
            let entry = nb.vertex("V:1:1".into());
            let exit = nb.vertex("V:1:2".into());
            add_vs(&mut nb, 1, 1, k, n, entry, exit);
            euler(&nb).unwrap_or_else(|e| panic!("k={k} n={n}: {e}"));
        }
    }

    #[test]
    fn ch_column_alone_embeds() {
        for (k, n, ne) in [
            (2u64, 2u64, (1u64, 1u64, 2u64, 2u64)),
            (2, 3, (1, 2, 2, 3)),
            (3, 2, (1, 1, 3, 2)),
            (3, 3, (2, 1, 3, 3)),
        ] {
            let mut nb = NetBuilder::default();
            let entries: Vec<_> = (1..=k).map(|i| nb.vertex(format!("V:{i}:1"))).collect();
            let exits: Vec<_> = (1..=k).map(|i| nb.vertex(format!("V:{i}:2"))).collect();
            add_ch_column(&mut nb, 1, k, n, ne, &entries, &exits).unwrap();
            euler(&nb).unwrap_or_else(|e| panic!("k={k} n={n} ne={ne:?}: {e}"));
        }
    }
}
