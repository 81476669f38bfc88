//! Exhaustive property verification for tendril gadgets.
//!
//! Embedding enumeration works on two routes. The closure route applies
//! mirror/permute moves at every separation pair (and cut vertex) until no
//! new rotation system appears; for 2-connected graphs this walks the whole
//! embedding space, which stays small for the rigid upward tendrils. The
//! rotation route enumerates every rotation system passing the Euler check
//! and is used to cross-validate the closure on small gadgets.

use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::planar::connectivity::{separation_pairs, split_components};
use crate::planar::embedding::{trace_faces, validate_embedding, Embedding, FaceId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("gadget property violated: {0:?}")]
    PropertyViolated(Vec<String>),
    #[error("embedding sweep exceeded its state budget of {0}")]
    SweepBudget(usize),
}

/// Cyclically normalizes each rotation to start at its least edge id.
pub fn rotation_key(rotation: &[Vec<EdgeId>]) -> Vec<Vec<EdgeId>> {
    rotation
        .iter()
        .map(|rot| {
            if rot.is_empty() {
                return Vec::new();
            }
            let k = rot
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| **e)
                .map(|(i, _)| i)
                .unwrap();
            rot[k..].iter().chain(rot[..k].iter()).copied().collect()
        })
        .collect()
}

/// Key identifying an embedding-with-outer-face up to reflection.
pub fn class_key(g: &Multigraph, emb: &Embedding) -> (Vec<Vec<EdgeId>>, Vec<(EdgeId, VertexId)>) {
    let a = raw_key(g, emb);
    let b = raw_key(g, &reflect_with_outer(g, emb));
    a.min(b)
}

fn raw_key(g: &Multigraph, emb: &Embedding) -> (Vec<Vec<EdgeId>>, Vec<(EdgeId, VertexId)>) {
    let faces = trace_faces(g, emb);
    let outer = faces.face(emb.outer_face);
    let steps: Vec<(EdgeId, VertexId)> = outer.walk.iter().map(|s| (s.edge, s.to)).collect();
    let rot = (0..steps.len())
        .map(|k| {
            let mut r = steps[k..].to_vec();
            r.extend_from_slice(&steps[..k]);
            r
        })
        .min()
        .unwrap_or_default();
    (rotation_key(&emb.rotation), rot)
}

/// The mirror embedding with the outer face carried across.
pub fn reflect_with_outer(g: &Multigraph, emb: &Embedding) -> Embedding {
    let faces = trace_faces(g, emb);
    let mark = faces.face(emb.outer_face).walk[0];
    let mut out = emb.reflected();
    // Reflection reverses every face walk, so the outer face now contains
    // the reversed dart of `mark`.
    let target_to = g.edge(mark.edge).other(mark.to);
    let rf = trace_faces(g, &out);
    out.outer_face = rf
        .faces
        .iter()
        .find(|f| f.walk.iter().any(|s| s.edge == mark.edge && s.to == target_to))
        .map(|f| f.id)
        .expect("reversed dart lies on some face");
    out
}

/// How widely verify sweeps the embedding space.
#[derive(Debug, Clone, Copy)]
pub enum Sweep {
    /// Full closure under mirror/permute moves; complete for 2-connected
    /// gadgets, budgeted by the state cap.
    Closure { cap: usize },
    /// Every state within `depth` moves of the start plus `walks` random
    /// walks of `walk_len` moves (deterministic seed). Used where the
    /// closure is exponentially large.
    Neighborhood { depth: usize, walks: usize, walk_len: usize },
}

/// All rotation systems reachable from `start` (the start included),
/// deduplicated by cyclic normalization. Global reflections are included.
pub fn embedding_closure(
    g: &Multigraph,
    start: &Embedding,
    cap: usize,
) -> Result<Vec<Vec<Vec<EdgeId>>>, VerifyError> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    let moves = MoveTable::build(g);
    let k0 = rotation_key(&start.rotation);
    seen.insert(k0.clone());
    queue.push_back(start.rotation.clone());
    out.push(k0);
    while let Some(rot) = queue.pop_front() {
        for next in moves.neighbors(g, &rot) {
            let key = rotation_key(&next);
            if seen.insert(key.clone()) {
                if seen.len() > cap {
                    return Err(VerifyError::SweepBudget(cap));
                }
                out.push(key);
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

/// States within `depth` moves of `start`, plus deterministic random walks.
pub fn embedding_neighborhood(
    g: &Multigraph,
    start: &Embedding,
    depth: usize,
    walks: usize,
    walk_len: usize,
) -> Vec<Vec<Vec<EdgeId>>> {
    let moves = MoveTable::build(g);
    let mut seen = BTreeSet::new();
    let mut layer = vec![start.rotation.clone()];
    seen.insert(rotation_key(&start.rotation));
    let mut out = vec![rotation_key(&start.rotation)];
    for _ in 0..depth {
        let mut next_layer = Vec::new();
        for rot in &layer {
            for next in moves.neighbors(g, rot) {
                let key = rotation_key(&next);
                if seen.insert(key.clone()) {
                    out.push(key);
                    next_layer.push(next);
                }
            }
        }
        layer = next_layer;
    }
    // Splitmix-style deterministic walk driver.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut rnd = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    for _ in 0..walks {
        let mut rot = start.rotation.clone();
        for _ in 0..walk_len {
            let nbrs = moves.neighbors(g, &rot);
            if nbrs.is_empty() {
                break;
            }
            rot = nbrs[(rnd() % nbrs.len() as u64) as usize].clone();
            let key = rotation_key(&rot);
            if seen.insert(key.clone()) {
                out.push(key);
            }
        }
    }
    out
}

/// Separation structure reused across moves.
struct MoveTable {
    pairs: Vec<((VertexId, VertexId), Vec<Vec<VertexId>>)>,
    cut_vertices: Vec<(VertexId, Vec<Vec<VertexId>>)>,
    /// edge id -> dense index, plus endpoints per index, for the fast
    /// Euler check.
    edge_index: BTreeMap<EdgeId, usize>,
    edge_ends: Vec<(VertexId, VertexId)>,
    target_faces: i64,
}

impl MoveTable {
    fn build(g: &Multigraph) -> Self {
        let pairs = separation_pairs(g)
            .into_iter()
            .map(|(x, y)| ((x, y), split_components(g, x, y)))
            .collect();
        let mut cut_vertices = Vec::new();
        for v in g.vertices() {
            if g.vertex_count() < 3 {
                continue;
            }
            let comps = components_without(g, v);
            if comps.len() > 1 {
                cut_vertices.push((v, comps));
            }
        }
        let edge_index = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id, i))
            .collect();
        let edge_ends = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let target_faces = g.edge_count() as i64 - g.vertex_count() as i64 + 2;
        MoveTable { pairs, cut_vertices, edge_index, edge_ends, target_faces }
    }

    /// Face count of a rotation system without building Face objects.
    /// Darts: 2*edge_index + side, side 0 running u->v. Arriving at a
    /// vertex through an edge, the walk leaves through the clockwise
    /// successor, exactly as in `trace_faces`.
    fn euler_ok(&self, rotation: &[Vec<EdgeId>]) -> bool {
        let m = self.edge_ends.len();
        let mut next = vec![usize::MAX; 2 * m];
        for (vix, rot) in rotation.iter().enumerate() {
            let v = VertexId(vix as u32);
            let d = rot.len();
            for i in 0..d {
                let eix = self.edge_index[&rot[i]];
                let fix = self.edge_index[&rot[(i + 1) % d]];
                let arr = 2 * eix + usize::from(self.edge_ends[eix].1 != v);
                let dep = 2 * fix + usize::from(self.edge_ends[fix].0 != v);
                next[arr] = dep;
            }
        }
        let mut visited = vec![false; 2 * m];
        let mut faces = 0i64;
        for s in 0..2 * m {
            if visited[s] {
                continue;
            }
            faces += 1;
            let mut dart = s;
            while !visited[dart] {
                visited[dart] = true;
                dart = next[dart];
            }
        }
        faces == self.target_faces
    }

    fn neighbors(&self, g: &Multigraph, rotation: &[Vec<EdgeId>]) -> Vec<Vec<Vec<EdgeId>>> {
        let mut out = Vec::new();
        // Global reflection.
        let mut refl: Vec<Vec<EdgeId>> = rotation.to_vec();
        for r in &mut refl {
            r.reverse();
        }
        out.push(refl);

        for ((x, y), comps) in &self.pairs {
            for comp in comps {
                if let Some(next) = mirror_component(g, rotation, comp, &[*x, *y]) {
                    out.push(next);
                }
            }
            for next in permute_blocks(g, rotation, comps, *x, *y) {
                out.push(next);
            }
        }
        for (v, comps) in &self.cut_vertices {
            for comp in comps {
                if let Some(next) = mirror_component(g, rotation, comp, &[*v]) {
                    out.push(next);
                }
            }
        }
        // Drop anything that fails the Euler check.
        out.retain(|rot| self.euler_ok(rot));
        out
    }
}

fn components_without(g: &Multigraph, v: VertexId) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count() as usize;
    let adj = g.adjacency();
    let mut comp = vec![u32::MAX; n];
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
                let w = g.edge(eid).other(VertexId(x as u32)).0 as usize;
                if comp[w] == u32::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        group.sort();
        groups.push(group);
    }
    groups
}

/// Mirrors one split component: internal rotations reverse and the
/// component's contiguous edge block reverses at each attachment vertex.
fn mirror_component(
    g: &Multigraph,
    rotation: &[Vec<EdgeId>],
    comp: &[VertexId],
    attachments: &[VertexId],
) -> Option<Vec<Vec<EdgeId>>> {
    let inside: BTreeSet<VertexId> = comp.iter().copied().collect();
    let mut next: Vec<Vec<EdgeId>> = rotation.to_vec();
    for v in comp {
        next[v.0 as usize].reverse();
    }
    for &a in attachments {
        let rot = &rotation[a.0 as usize];
        let is_comp_edge =
            |e: &EdgeId| inside.contains(&g.edge(*e).other(a));
        reverse_cyclic_block(rot, is_comp_edge).map(|r| next[a.0 as usize] = r)?;
    }
    Some(next)
}

/// Reverses the contiguous cyclic block of entries satisfying `pred`;
/// None if they are not contiguous.
fn reverse_cyclic_block(rot: &[EdgeId], pred: impl Fn(&EdgeId) -> bool) -> Option<Vec<EdgeId>> {
    let n = rot.len();
    let marks: Vec<bool> = rot.iter().map(&pred).collect();
    let count = marks.iter().filter(|&&b| b).count();
    if count == 0 || count == n {
        let mut r = rot.to_vec();
        r.reverse();
        return Some(r);
    }
    // Find a start where a block begins (previous false, current true).
    let start = (0..n).find(|&i| marks[i] && !marks[(i + n - 1) % n])?;
    for k in 0..count {
        if !marks[(start + k) % n] {
            return None; // not contiguous
        }
    }
    let mut out = rot.to_vec();
    for k in 0..count {
        out[(start + k) % n] = rot[(start + count - 1 - k) % n];
    }
    Some(out)
}

/// Adjacent-block transpositions of the split atoms at a pair, applied
/// consistently at both attachment vertices.
fn permute_blocks(
    g: &Multigraph,
    rotation: &[Vec<EdgeId>],
    comps: &[Vec<VertexId>],
    x: VertexId,
    y: VertexId,
) -> Vec<Vec<Vec<EdgeId>>> {
    // Atom of each edge at the pair: component index, or usize::MAX for a
    // direct x-y edge (each direct edge is its own atom via its id).
    let comp_of = |v: VertexId| comps.iter().position(|c| c.binary_search(&v).is_ok());
    let atom_at = |a: VertexId, e: EdgeId| -> (usize, u32) {
        let other = g.edge(e).other(a);
        if other == x || other == y {
            (usize::MAX, e.0)
        } else {
            (comp_of(other).expect("endpoint in some component"), 0)
        }
    };
    let blocks = |a: VertexId| -> Option<Vec<((usize, u32), Vec<usize>)>> {
        let rot = &rotation[a.0 as usize];
        let mut out: Vec<((usize, u32), Vec<usize>)> = Vec::new();
        for (i, &e) in rot.iter().enumerate() {
            let atom = atom_at(a, e);
            match out.last_mut() {
                Some((last, ixs)) if *last == atom => ixs.push(i),
                _ => out.push((atom, vec![i])),
            }
        }
        // Merge a wrap-around block.
        if out.len() > 1 && out.first().unwrap().0 == out.last().unwrap().0 {
            let (_, ixs) = out.remove(0);
            out.last_mut().unwrap().1.extend(ixs);
        }
        // Each atom must appear as one block.
        let mut seen = BTreeSet::new();
        for (atom, _) in &out {
            if !seen.insert(*atom) {
                return None;
            }
        }
        Some(out)
    };
    let (bx, by) = match (blocks(x), blocks(y)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for i in 0..bx.len() {
        let j = (i + 1) % bx.len();
        if bx.len() < 2 {
            break;
        }
        let (a1, a2) = (bx[i].0, bx[j].0);
        // Swap the two atoms' blocks at x and at y.
        let mut next: Vec<Vec<EdgeId>> = rotation.to_vec();
        next[x.0 as usize] = swap_blocks(&rotation[x.0 as usize], &bx, i, j);
        let yi = by.iter().position(|(a, _)| *a == a1);
        let yj = by.iter().position(|(a, _)| *a == a2);
        if let (Some(yi), Some(yj)) = (yi, yj) {
            next[y.0 as usize] = swap_blocks(&rotation[y.0 as usize], &by, yi, yj);
            out.push(next);
        }
    }
    out
}

fn swap_blocks(
    rot: &[EdgeId],
    blocks: &[((usize, u32), Vec<usize>)],
    i: usize,
    j: usize,
) -> Vec<EdgeId> {
    let order: Vec<usize> = (0..blocks.len())
        .map(|k| if k == i { j } else if k == j { i } else { k })
        .collect();
    let mut out = Vec::with_capacity(rot.len());
    for &k in &order {
        for &ix in &blocks[k].1 {
            out.push(rot[ix]);
        }
    }
    out
}

/// Embedding states produced by a sweep, as normalized rotation systems.
pub fn sweep_states(
    g: &Multigraph,
    start: &Embedding,
    sweep: Sweep,
) -> Result<Vec<Vec<Vec<EdgeId>>>, VerifyError> {
    match sweep {
        Sweep::Closure { cap } => embedding_closure(g, start, cap),
        Sweep::Neighborhood { depth, walks, walk_len } => {
            Ok(embedding_neighborhood(g, start, depth, walks, walk_len))
        }
    }
}

/// All (embedding, outer-face) classes among `states` satisfying `feasible`,
/// up to reflection. When `poles` is given, only faces whose walk touches
/// both poles are tried as the outer face; that is the restriction under
/// which the gadget lemmas state uniqueness.
pub fn feasible_classes(
    g: &Multigraph,
    states: &[Vec<Vec<EdgeId>>],
    poles: Option<(VertexId, VertexId)>,
    mut feasible: impl FnMut(&Embedding) -> bool,
) -> Vec<(Vec<Vec<EdgeId>>, Vec<(EdgeId, VertexId)>)> {
    let mut classes = BTreeMap::new();
    for rot in states {
        let mut emb = Embedding { rotation: rot.clone(), outer_face: FaceId(0) };
        if validate_embedding(g, &emb).is_err() {
            continue;
        }
        let faces = trace_faces(g, &emb);
        for face in &faces.faces {
            if let Some((a, b)) = poles {
                let mut has = (false, false);
                for step in &face.walk {
                    has.0 |= step.to == a;
                    has.1 |= step.to == b;
                }
                if !(has.0 && has.1) {
                    continue;
                }
            }
            emb.outer_face = face.id;
            if feasible(&emb) {
                classes.entry(class_key(g, &emb)).or_insert(());
            }
        }
    }
    classes.into_keys().collect()
}
