//! All-or-Nothing Flow to Circulating Orientation, and the normalization
//! that makes the instance simple, triconnected and triangulated.
//!
//! The undirected copy of the flow network is rebalanced with one
//! capacity-alpha edge from each row end to s or t, a super-source S
//! adjacent to every y^j, a super-sink T adjacent to every x^j, and a
//! high-capacity 4-cycle (S,s), (s,T), (T,t), (t,S) that stands in for the
//! unplanar {S,T} edge.

use crate::decomposition::{
    compose_gadget_decomposition, greedy_pw_upper_bound, validate_decomposition, GadgetPd,
    PathDecomposition,
};
use crate::graph::{EdgeId, VertexId};
use crate::instances::{AoNFlow, CapacitatedGraph, Orientation};
use crate::planar::connectivity::is_triconnected;
use crate::planar::embedding::{trace_faces, validate_embedding, Face};
use crate::planar::surgery::{insert_edge_in_face, insert_star_in_face, subdivide_all, triangulate};
use crate::problems::oracles::{verify_aonf_flow, verify_circulating};
use crate::reductions::stage::{AonfStage, CoStage, NormalizedCoStage, ReductionError, SpecialEdges};
use std::collections::{BTreeMap, BTreeSet};

/// How to size the 4-cycle's dominating capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiMode {
    /// The paper's example value 100 k^2 N^2.
    Paper,
    /// The least value the dominance arguments need; keeps the later
    /// tendril stages desk-sized.
    MinimalSufficient,
}

pub fn aonf_to_co(
    stage: &AonfStage,
    force_small_n: bool,
    xi_mode: XiMode,
) -> Result<CoStage, ReductionError> {
    let (k, n, m) = (stage.params.k, stage.params.n, stage.params.m);
    let guaranteed = n >= 10 * k;
    if !guaranteed && !force_small_n {
        return Err(ReductionError::PreconditionN { n: n as usize, k: k as usize });
    }

    let alpha: u64 = (1..n).map(|q| 2 * k * n + 2 * q).sum();
    let f = stage.net.target;
    let dplus_s = stage.net.out_capacity(stage.net.source);
    let beta = 2 * f - dplus_s;
    let xi = match xi_mode {
        XiMode::Paper => 100 * k * k * n * n,
        XiMode::MinimalSufficient => 1 + m.max(dplus_s + k * alpha),
    };

    let mut g = stage.net.net.to_undirected();
    let mut cap = stage.net.cap.clone();
    let mut emb = stage.embedding.clone();
    let (s, t) = (stage.net.source, stage.net.sink);
    let mut special = SpecialEdges { s, t, ..Default::default() };

    let label_of = |g: &crate::graph::Multigraph, v: VertexId| {
        g.vertex_labels.get(&v).cloned().unwrap_or_default()
    };

    // Super-source S inside the face holding every y^j with s and t, wired
    // as {S,s} (xi+beta+m), {y^j,S} (1 each), {t,S} (xi+beta).
    {
        let faces = validate_embedding(&g, &emb).map_err(internal)?;
        let mut want: Vec<VertexId> = vec![s, t];
        want.extend(g.vertex_labels.iter().filter(|(_, l)| l.starts_with("y:")).map(|(&v, _)| v));
        let fid = *faces
            .faces_containing(&want)
            .first()
            .ok_or_else(|| internal_str("no face holds S's neighborhood"))?;
        let face = faces.face(fid).clone();
        let positions = star_positions(&face, &want);
        let (sv, spokes) = insert_star_in_face(&mut g, &mut emb, &face, &positions, "S");
        special.super_s = sv;
        for (&p, e) in positions.iter().zip(spokes) {
            let to = face.walk[p].to;
            let lab = label_of(&g, to);
            if to == s {
                cap.insert(e, xi + beta + m);
                g.edge_labels.insert(e, "cyc:Ss".to_string());
                special.cycle[0] = e;
            } else if to == t {
                cap.insert(e, xi + beta);
                g.edge_labels.insert(e, "cyc:tS".to_string());
                special.cycle[3] = e;
            } else {
                cap.insert(e, 1);
                let j = lab.strip_prefix("y:").unwrap();
                g.edge_labels.insert(e, format!("ys:{j}"));
                special.y_super.push(e);
            }
        }
    }

    // Super-sink T inside the face holding every x^j with s and t.
    {
        let faces = validate_embedding(&g, &emb).map_err(internal)?;
        let mut want: Vec<VertexId> = vec![s, t];
        want.extend(g.vertex_labels.iter().filter(|(_, l)| l.starts_with("x:")).map(|(&v, _)| v));
        let fid = *faces
            .faces_containing(&want)
            .first()
            .ok_or_else(|| internal_str("no face holds T's neighborhood"))?;
        let face = faces.face(fid).clone();
        let positions = star_positions(&face, &want);
        let (tv, spokes) = insert_star_in_face(&mut g, &mut emb, &face, &positions, "T");
        special.super_t = tv;
        for (&p, e) in positions.iter().zip(spokes) {
            let to = face.walk[p].to;
            let lab = label_of(&g, to);
            if to == s {
                cap.insert(e, xi + k * alpha + m);
                g.edge_labels.insert(e, "cyc:sT".to_string());
                special.cycle[1] = e;
            } else if to == t {
                cap.insert(e, xi + k * alpha);
                g.edge_labels.insert(e, "cyc:Tt".to_string());
                special.cycle[2] = e;
            } else {
                cap.insert(e, 1);
                let j = lab.strip_prefix("x:").unwrap();
                g.edge_labels.insert(e, format!("xt:{j}"));
                special.x_super.push(e);
            }
        }
    }

    // Row-end rebalancing edges of capacity alpha, parallel to the source
    // and sink fans.
    for i in 1..=k {
        for (end, anchor_label, tag) in [(s, format!("V:{i}:1"), "alpha:s"), (t, format!("V:{i}:{}", m + 1), "alpha:t")]
        {
            let anchor = g
                .vertex_labels
                .iter()
                .find(|(_, l)| **l == anchor_label)
                .map(|(&v, _)| v)
                .ok_or_else(|| internal_str("missing row anchor"))?;
            let faces = validate_embedding(&g, &emb).map_err(internal)?;
            let fid = *faces
                .faces_containing(&[end, anchor])
                .first()
                .ok_or_else(|| internal_str("no face joins row end to its terminal"))?;
            let face = faces.face(fid).clone();
            let pa = face.walk.iter().position(|st| st.to == end).unwrap();
            let pb = face.walk.iter().position(|st| st.to == anchor).unwrap();
            let (lo, hi) = if pa < pb { (pa, pb) } else { (pb, pa) };
            let e = insert_edge_in_face(&mut g, &mut emb, &face, lo, hi);
            cap.insert(e, alpha);
            g.edge_labels.insert(e, format!("{tag}:{i}"));
            if end == s {
                special.alpha_s.push(e);
            } else {
                special.alpha_t.push(e);
            }
        }
    }

    validate_embedding(&g, &emb).map_err(internal)?;
    let cg = CapacitatedGraph { graph: g, cap };
    cg.validate().map_err(ReductionError::Internal)?;

    let decomposition = stage
        .decomposition
        .with_everywhere(&[special.super_s, special.super_t]);
    validate_decomposition(&cg.graph, &decomposition).map_err(|e| internal_str(&e.to_string()))?;

    Ok(CoStage {
        cg,
        embedding: emb,
        decomposition,
        params: stage.params,
        equivalence_guaranteed: guaranteed,
        aonf: stage.clone(),
        special,
    })
}

fn internal(e: impl std::fmt::Display) -> ReductionError {
    ReductionError::Internal(e.to_string())
}

fn internal_str(s: &str) -> ReductionError {
    ReductionError::Internal(s.to_string())
}

/// Walk positions of the wanted vertices along a face, one per vertex, in
/// walk order.
fn star_positions(face: &Face, want: &[VertexId]) -> Vec<usize> {
    let set: BTreeSet<VertexId> = want.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (p, step) in face.walk.iter().enumerate() {
        if set.contains(&step.to) && seen.insert(step.to) {
            out.push(p);
        }
    }
    out
}

/// Builds the circulating orientation a flow induces: saturated standard
/// edges keep their arc direction, empty ones reverse, and the special
/// edges are pinned regardless of the flow.
pub fn lift_flow_to_orientation(
    stage: &CoStage,
    flow: &AoNFlow,
) -> Result<Orientation, ReductionError> {
    if !verify_aonf_flow(&stage.aonf.net, flow) {
        return Err(ReductionError::CertificateInvalid(
            "flow rejected by verify_aonf_flow".into(),
        ));
    }
    let mut dir: BTreeMap<EdgeId, (VertexId, VertexId)> = BTreeMap::new();
    for e in stage.aonf.net.net.edges() {
        if flow.active.contains(&e.id) {
            dir.insert(e.id, (e.u, e.v));
        } else {
            dir.insert(e.id, (e.v, e.u));
        }
    }
    pin_special(&stage.special, &mut dir, &stage.cg);
    let o = Orientation { dir };
    if !verify_circulating(&stage.cg, &o) {
        return Err(ReductionError::Internal(
            "lifted orientation is not circulating".into(),
        ));
    }
    Ok(o)
}

fn pin_special(
    sp: &SpecialEdges,
    dir: &mut BTreeMap<EdgeId, (VertexId, VertexId)>,
    cg: &CapacitatedGraph,
) {
    let ends = |e: EdgeId| {
        let edge = cg.graph.edge(e);
        (edge.u, edge.v)
    };
    let orient = |e: EdgeId, tail: VertexId| {
        let (u, v) = ends(e);
        if u == tail {
            (u, v)
        } else {
            (v, u)
        }
    };
    for &e in &sp.alpha_s {
        let (u, v) = ends(e);
        let tail = if u == sp.s { v } else { u };
        dir.insert(e, orient(e, tail));
    }
    for &e in &sp.alpha_t {
        dir.insert(e, orient(e, sp.t));
    }
    for &e in &sp.y_super {
        let (u, v) = ends(e);
        let tail = if u == sp.super_s { v } else { u };
        dir.insert(e, orient(e, tail));
    }
    for &e in &sp.x_super {
        dir.insert(e, orient(e, sp.super_t));
    }
    dir.insert(sp.cycle[0], orient(sp.cycle[0], sp.super_s));
    dir.insert(sp.cycle[1], orient(sp.cycle[1], sp.s));
    dir.insert(sp.cycle[2], orient(sp.cycle[2], sp.super_t));
    dir.insert(sp.cycle[3], orient(sp.cycle[3], sp.t));
}

/// Reads a circulating orientation back into a flow: detect the 4-cycle's
/// direction, reverse everything if it runs the other way, then saturate
/// exactly the standard edges oriented as in the flow network.
pub fn extract_flow_from_orientation(
    stage: &CoStage,
    o: &Orientation,
) -> Result<AoNFlow, ReductionError> {
    if !verify_circulating(&stage.cg, o) {
        return Err(ReductionError::CertificateInvalid(
            "orientation is not circulating".into(),
        ));
    }
    let sp = &stage.special;
    let forward = o.dir[&sp.cycle[0]] == {
        let e = stage.cg.graph.edge(sp.cycle[0]);
        if e.u == sp.super_s {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    };
    let o = if forward { o.clone() } else { o.reversed() };
    // The 4-cycle must now run (S,s), (s,T), (T,t), (t,S).
    for (e, tail) in [
        (sp.cycle[0], sp.super_s),
        (sp.cycle[1], sp.s),
        (sp.cycle[2], sp.super_t),
        (sp.cycle[3], sp.t),
    ] {
        if o.dir[&e].0 != tail {
            return Err(ReductionError::CertificateInvalid(
                "4-cycle is not cyclically oriented".into(),
            ));
        }
    }
    let mut active = BTreeSet::new();
    for e in stage.aonf.net.net.edges() {
        if o.dir[&e.id] == (e.u, e.v) {
            active.insert(e.id);
        }
    }
    let flow = AoNFlow { active };
    if !verify_aonf_flow(&stage.aonf.net, &flow) {
        return Err(ReductionError::CertificateInvalid(
            "extracted arc set is not a valid flow of value F".into(),
        ));
    }
    Ok(flow)
}

/// Subdivide once (making the multigraph simple), then triangulate with
/// capacity-0 edges. The output is simple, triconnected and triangulated;
/// its decomposition is the composed subdivision certificate for the
/// simple graph, with the triangulated width measured heuristically.
pub fn co_normalize(stage: &CoStage) -> Result<NormalizedCoStage, ReductionError> {
    let sub = subdivide_all(&stage.cg, 1, Some(&stage.embedding));
    let sub_emb = sub.embedding.clone().expect("embedding carried");
    validate_embedding(&sub.graph.graph, &sub_emb).map_err(internal)?;

    // Certificate for the subdivided graph via the gadget-composition rule:
    // each edge is a two-edge path whose middle vertex rides along.
    let mut replacements = BTreeMap::new();
    for (parent, chain) in &sub.chains {
        let pe = stage.cg.graph.edge(*parent);
        let mid = sub.graph.graph.edge(chain[0]).other(pe.u);
        let pd = PathDecomposition {
            bags: vec![BTreeSet::from([pe.u, mid]), BTreeSet::from([mid, pe.v])],
        };
        let map = BTreeMap::from([(pe.u, pe.u), (pe.v, pe.v), (mid, mid)]);
        replacements.insert(
            *parent,
            GadgetPd { pd, source_pole: pe.u, sink_pole: pe.v, map },
        );
    }
    let sub_pd =
        compose_gadget_decomposition(&stage.cg.graph, &stage.decomposition, &replacements)
            .map_err(|e| internal_str(&e.to_string()))?;
    validate_decomposition(&sub.graph.graph, &sub_pd).map_err(|e| internal_str(&e.to_string()))?;

    let (tri, tri_emb) = triangulate(&sub.graph, &sub_emb).map_err(internal)?;
    let faces = validate_embedding(&tri.graph, &tri_emb).map_err(internal)?;
    if !tri.graph.is_simple() {
        return Err(internal_str("triangulated graph is not simple"));
    }
    if faces.faces.iter().any(|f| f.len() != 3) {
        return Err(internal_str("triangulation left a long face"));
    }
    if is_triconnected(&tri.graph) != Ok(true) {
        return Err(internal_str("normalized instance is not triconnected"));
    }
    let (heuristic_width, pd) = greedy_pw_upper_bound(&tri.graph);
    validate_decomposition(&tri.graph, &pd).map_err(|e| internal_str(&e.to_string()))?;

    Ok(NormalizedCoStage {
        cg: tri,
        embedding: tri_emb,
        decomposition: pd,
        chains: sub.chains,
        heuristic_width,
        raw: stage.clone(),
    })
}

/// A circulating orientation of the raw instance transfers to the
/// normalized one: both chain halves of an edge inherit its direction and
/// capacity-0 additions orient arbitrarily (as stored).
pub fn orientation_to_normalized(
    norm: &NormalizedCoStage,
    o: &Orientation,
) -> Result<Orientation, ReductionError> {
    if !verify_circulating(&norm.raw.cg, o) {
        return Err(ReductionError::CertificateInvalid(
            "orientation is not circulating on the raw instance".into(),
        ));
    }
    let mut dir = BTreeMap::new();
    for (parent, chain) in &norm.chains {
        let (tail, _) = o.dir[parent];
        let mut cur = tail;
        for &half in chain {
            let e = norm.cg.graph.edge(half);
            let next = e.other(cur);
            dir.insert(half, (cur, next));
            cur = next;
        }
    }
    for e in norm.cg.graph.edges() {
        dir.entry(e.id).or_insert((e.u, e.v));
    }
    let out = Orientation { dir };
    if !verify_circulating(&norm.cg, &out) {
        return Err(ReductionError::Internal(
            "normalized orientation failed verification".into(),
        ));
    }
    Ok(out)
}

/// And back: read the first chain half of every raw edge.
pub fn orientation_from_normalized(
    norm: &NormalizedCoStage,
    o: &Orientation,
) -> Result<Orientation, ReductionError> {
    if !verify_circulating(&norm.cg, o) {
        return Err(ReductionError::CertificateInvalid(
            "orientation is not circulating on the normalized instance".into(),
        ));
    }
    let mut dir = BTreeMap::new();
    for (parent, chain) in &norm.chains {
        let pe = norm.raw.cg.graph.edge(*parent);
        let (tail, _) = o.dir[&chain[0]];
        let d = if tail == pe.u { (pe.u, pe.v) } else { (pe.v, pe.u) };
        dir.insert(*parent, d);
    }
    let out = Orientation { dir };
    if !verify_circulating(&norm.raw.cg, &out) {
        return Err(ReductionError::CertificateInvalid(
            "projected orientation is not circulating on the raw instance".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::oracles::{solve_co_bruteforce, solve_mcc_bruteforce};
    use crate::reductions::mcc_aonf::tests::make_mcc;
    use crate::reductions::mcc_aonf::{lift_mcc_solution_to_flow, mcc_to_aonf};

    #[test]
    fn alpha_beta_xi_formulas() {
        // k=2, N=3: alpha = 14 + 16 = 30, beta = 72 - 44 = 28, xi = 3600.
        let inst = make_mcc(2, 3, &[((0, 0), (1, 0))]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::Paper).unwrap();
        let alpha_edge = co.special.alpha_s[0];
        assert_eq!(co.cg.capacity(alpha_edge), 30);
        assert_eq!(co.cg.capacity(co.special.cycle[0]), 3600 + 28 + 1);
        assert_eq!(co.cg.capacity(co.special.cycle[3]), 3600 + 28);
        assert_eq!(co.cg.capacity(co.special.cycle[1]), 3600 + 2 * 30 + 1);
        assert_eq!(co.cg.capacity(co.special.cycle[2]), 3600 + 2 * 30);
    }

    #[test]
    fn small_n_needs_force() {
        let inst = make_mcc(2, 2, &[]);
        let stage = mcc_to_aonf(&inst).unwrap();
        assert!(matches!(
            aonf_to_co(&stage, false, XiMode::Paper),
            Err(ReductionError::PreconditionN { .. })
        ));
        assert!(aonf_to_co(&stage, true, XiMode::Paper).is_ok());
    }

    #[test]
    fn lift_orientation_and_round_trip() {
        let inst = make_mcc(2, 2, &[((0, 0), (1, 1))]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::MinimalSufficient).unwrap();
        let clique = solve_mcc_bruteforce(&inst, None).unwrap().unwrap();
        let flow = lift_mcc_solution_to_flow(&stage, &clique).unwrap();
        let o = lift_flow_to_orientation(&co, &flow).unwrap();
        let back = extract_flow_from_orientation(&co, &o).unwrap();
        assert_eq!(back, flow);

        // Reversing the whole orientation exercises the global flip rule.
        let flipped = o.reversed();
        let back2 = extract_flow_from_orientation(&co, &flipped).unwrap();
        assert_eq!(back2, flow);
    }

    #[test]
    fn tampered_orientation_rejected() {
        let inst = make_mcc(2, 2, &[((0, 0), (1, 1))]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::MinimalSufficient).unwrap();
        let clique = solve_mcc_bruteforce(&inst, None).unwrap().unwrap();
        let flow = lift_mcc_solution_to_flow(&stage, &clique).unwrap();
        let mut o = lift_flow_to_orientation(&co, &flow).unwrap();
        let (&e, &(u, v)) = o.dir.iter().next().unwrap();
        o.dir.insert(e, (v, u));
        assert!(extract_flow_from_orientation(&co, &o).is_err());
    }

    #[test]
    fn normalize_micro_instance_preserves_co_answer() {
        // Two parallel edges of capacity 3: CO-yes. Normalization keeps it.
        let mut g = crate::graph::Multigraph::new(2);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(0), VertexId(1));
        let emb = crate::planar::embedding::Embedding {
            rotation: vec![vec![a, b], vec![b, a]],
            outer_face: crate::planar::FaceId(0),
        };
        let cg = CapacitatedGraph { graph: g, cap: [(a, 3), (b, 3)].into() };
        assert!(solve_co_bruteforce(&cg, None).unwrap().is_some());

        let sub = subdivide_all(&cg, 1, Some(&emb));
        let (tri, tri_emb) = triangulate(&sub.graph, &sub.embedding.unwrap()).unwrap();
        validate_embedding(&tri.graph, &tri_emb).unwrap();
        assert!(tri.graph.is_simple());
        assert!(solve_co_bruteforce(&tri, None).unwrap().is_some());

        // Dropping one unit somewhere breaks it; the triangulated instance
        // must agree that it is a no-instance.
        let mut bad = cg.clone();
        bad.cap.insert(a, 2);
        assert!(solve_co_bruteforce(&bad, None).unwrap().is_none());
        let subb = subdivide_all(&bad, 1, Some(&emb));
        let (trib, _) = triangulate(&subb.graph, &subb.embedding.unwrap()).unwrap();
        assert!(solve_co_bruteforce(&trib, None).unwrap().is_none());
    }

    #[test]
    fn full_normalization_audits() {
        let inst = make_mcc(2, 1, &[]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::MinimalSufficient).unwrap();
        let norm = co_normalize(&co).unwrap();
        assert!(norm.cg.graph.is_simple());
        assert_eq!(is_triconnected(&norm.cg.graph), Ok(true));
        let faces = validate_embedding(&norm.cg.graph, &norm.embedding).unwrap();
        assert!(faces.faces.iter().all(|f| f.len() == 3));
        // Zero capacities appear exactly on surgery additions (and the
        // degenerate alpha edges when N = 1).
        for e in norm.cg.graph.edges() {
            let lab = norm.cg.graph.edge_labels.get(&e.id).cloned().unwrap_or_default();
            if norm.cg.capacity(e.id) == 0 {
                assert!(
                    lab.starts_with("tri:") || lab.contains("alpha:"),
                    "unexpected zero-capacity edge {lab}"
                );
            }
        }
    }
}
