//! Multicolored Clique to planar All-or-Nothing Flow.
//!
//! One CH column per cross-part non-edge, rows fed by one arc of capacity
//! 2kN plus N capacity-2 arcs on each side, and k(N-1) capacity-2 arcs
//! straight from s to t. Target value F = k(2kN + 2N). The construction
//! carries an explicit plane drawing whose rotation system realizes the
//! two faces used later to insert the super-source and super-sink.

use crate::decomposition::mcc_network_decomposition;
use crate::gadgets::vs_ch::{add_ch_column, col_x, row_y, NetBuilder};
use crate::graph::{EdgeId, VertexId};
use crate::instances::{AoNFlow, FlowNetwork, MccInstance};
use crate::planar::embedding::{validate_embedding, Embedding, FaceId};
use crate::problems::oracles::verify_aonf_flow;
use crate::reductions::stage::{AonfStage, MccParams, ReductionError};
use std::collections::BTreeSet;

pub fn mcc_to_aonf(inst: &MccInstance) -> Result<AonfStage, ReductionError> {
    inst.validate().map_err(ReductionError::BadInstance)?;
    let k = inst.k() as u64;
    let n = inst.part_size() as u64;
    if k == 0 || n == 0 {
        return Err(ReductionError::BadInstance("empty partition".into()));
    }
    let nonedges: Vec<(u64, u64, u64, u64)> = inst
        .cross_non_edges()
        .into_iter()
        .map(|((i, a), (l, b))| (i as u64 + 1, a as u64 + 1, l as u64 + 1, b as u64 + 1))
        .collect();
    let m = nonedges.len() as u64;

    let mut nb = NetBuilder::default();
    let s = nb.vertex("s".to_string());
    let t = nb.vertex("t".to_string());
    // Row anchors V_i^j for j in [m+1].
    let anchors: Vec<Vec<VertexId>> = (1..=k)
        .map(|i| {
            (1..=m + 1)
                .map(|j| nb.vertex(format!("V:{i}:{j}")))
                .collect()
        })
        .collect();

    for (jx, &ne) in nonedges.iter().enumerate() {
        let j = jx as u64 + 1;
        let entries: Vec<VertexId> = (0..k as usize).map(|i| anchors[i][jx]).collect();
        let exits: Vec<VertexId> = (0..k as usize).map(|i| anchors[i][jx + 1]).collect();
        add_ch_column(&mut nb, j, k, n, ne, &entries, &exits)
            .map_err(|e| ReductionError::BadInstance(e.to_string()))?;
    }

    // Source and sink fans. Strand order per row: the big arc first, then
    // the capacity-2 arcs; slight slope offsets keep the strands nested.
    let s_pos = (-6.0, -5.0 * (k as f64 + 1.0));
    let t_pos = (col_x(m + 1) + 6.0, s_pos.1);
    for i in 1..=k {
        let vy = row_y(i);
        let v_first = anchors[i as usize - 1][0];
        let v_last = anchors[i as usize - 1][m as usize];
        let base_s = (0.0 - s_pos.0, vy - s_pos.1);
        let base_t = (col_x(m + 1) - t_pos.0, vy - t_pos.1);
        // Strand offsets apply with the same sign at both endpoints, so
        // parallel strands nest instead of crossing.
        let mut strand = 0f64;
        let mut arc_pair = |nb: &mut NetBuilder, cap: u64, lab_s: String, lab_t: String, off: f64| {
            nb.arc(s, v_first, cap, lab_s, (base_s.0, base_s.1 - off), (-base_s.0, -base_s.1 - off));
            nb.arc(v_last, t, cap, lab_t, (-base_t.0, -base_t.1 - off), (base_t.0, base_t.1 - off));
        };
        arc_pair(&mut nb, 2 * k * n, format!("src:{i}:big"), format!("snk:{i}:big"), strand);
        for q in 1..=n {
            strand += 0.12;
            arc_pair(&mut nb, 2, format!("src:{i}:small:{q}"), format!("snk:{i}:small:{q}"), strand);
        }
    }
    // The compensation arcs A, drawn below everything.
    for r in 1..=(k * (n - 1)) {
        let slope = -1.0 - 0.2 * r as f64;
        nb.arc(
            s,
            t,
            2,
            format!("A:{r}"),
            (0.3, slope),
            (-0.3, slope),
        );
    }

    let rotation = nb.rotations();
    let mut embedding = Embedding { rotation, outer_face: FaceId(0) };
    let faces = validate_embedding(&nb.g, &embedding)
        .map_err(|e| ReductionError::Internal(format!("network drawing not planar: {e}")))?;

    // The two faces of the planarity lemma: all x^j with {s, t}, and all
    // y^j with {s, t}. Ties are broken by the lowest face id.
    let mut xs = vec![s, t];
    let mut ys = vec![s, t];
    for (v, lab) in &nb.g.vertex_labels {
        if lab.starts_with("x:") {
            xs.push(*v);
        } else if lab.starts_with("y:") {
            ys.push(*v);
        }
    }
    let face_x = *faces
        .faces_containing(&xs)
        .first()
        .ok_or_else(|| ReductionError::Internal("no face holds all x^j with s and t".into()))?;
    let face_y = *faces
        .faces_containing(&ys)
        .first()
        .ok_or_else(|| ReductionError::Internal("no face holds all y^j with s and t".into()))?;
    embedding.outer_face = face_x;

    let net = FlowNetwork {
        net: nb.g,
        cap: nb.cap,
        source: s,
        sink: t,
        target: k * (2 * k * n + 2 * n),
    };
    net.validate().map_err(ReductionError::Internal)?;
    let (decomposition, _) = mcc_network_decomposition(&net.net)
        .map_err(|e| ReductionError::Internal(e.to_string()))?;
    crate::decomposition::validate_decomposition(&net.net, &decomposition)
        .map_err(|e| ReductionError::Internal(e.to_string()))?;

    Ok(AonfStage {
        net,
        embedding,
        decomposition,
        params: MccParams { k, n, m },
        nonedges,
        source: inst.clone(),
        face_x,
        face_y,
    })
}

/// Index (1-based) of each clique vertex inside its part.
fn clique_indices(stage: &AonfStage, clique: &[VertexId]) -> Result<Vec<u64>, ReductionError> {
    if !stage.source.is_multicolored_clique(clique) {
        return Err(ReductionError::CertificateInvalid(
            "not a multicolored clique".into(),
        ));
    }
    Ok(stage
        .source
        .parts
        .iter()
        .zip(clique)
        .map(|(p, v)| p.iter().position(|x| x == v).unwrap() as u64 + 1)
        .collect())
}

fn edges_with_prefix(stage: &AonfStage, prefix: &str) -> Vec<EdgeId> {
    stage
        .net
        .net
        .edge_labels
        .iter()
        .filter(|(_, l)| l.starts_with(prefix))
        .map(|(&e, _)| e)
        .collect()
}

/// Routes the flow the clique induces: capacity 2kN + 2a_i per row, using
/// the unit detour through x^j, y^j exactly where the row's decremented
/// path is the selected one, topped up to F over the A arcs.
pub fn lift_mcc_solution_to_flow(
    stage: &AonfStage,
    clique: &[VertexId],
) -> Result<AoNFlow, ReductionError> {
    let a = clique_indices(stage, clique)?;
    let (k, n) = (stage.params.k, stage.params.n);
    let mut active = BTreeSet::new();

    for i in 1..=k {
        let ai = a[i as usize - 1];
        active.extend(edges_with_prefix(stage, &format!("src:{i}:big")));
        active.extend(edges_with_prefix(stage, &format!("snk:{i}:big")));
        for q in 1..=ai {
            active.extend(edges_with_prefix(stage, &format!("src:{i}:small:{q}")));
            active.extend(edges_with_prefix(stage, &format!("snk:{i}:small:{q}")));
        }
        for (jx, &(ni, na, nl, nb_)) in stage.nonedges.iter().enumerate() {
            let j = jx as u64 + 1;
            active.extend(edges_with_prefix(stage, &format!("row:{i}:{j}:{ai}:")));
            if (ni, na) == (i, ai) {
                // The selected path lost one unit; route it через the
                // column detour: entry side v, shared w, exit side g.
                for tag in ["chv", "chw", "chg"] {
                    active.extend(edges_with_prefix(stage, &format!("{tag}:{j}:")));
                }
            } else if (nl, nb_) == (i, ai) {
                for tag in ["chu", "chw", "chh"] {
                    active.extend(edges_with_prefix(stage, &format!("{tag}:{j}:")));
                }
            }
        }
    }
    let selected: u64 = a.iter().sum();
    let top_up = k * n - selected;
    for r in 1..=top_up {
        active.extend(edges_with_prefix(stage, &format!("A:{r}")));
    }

    let flow = AoNFlow { active };
    if !verify_aonf_flow(&stage.net, &flow) {
        return Err(ReductionError::Internal(
            "lifted flow rejected by the verifier".into(),
        ));
    }
    Ok(flow)
}

/// Decodes a verified flow back to the clique: the inflow into V_i^1 is
/// 2kN + 2a_i, naming the a_i-th vertex of part i.
pub fn extract_clique_from_flow(
    stage: &AonfStage,
    flow: &AoNFlow,
) -> Result<Vec<VertexId>, ReductionError> {
    if !verify_aonf_flow(&stage.net, flow) {
        return Err(ReductionError::CertificateInvalid(
            "flow rejected by verify_aonf_flow".into(),
        ));
    }
    let (k, n) = (stage.params.k, stage.params.n);
    let mut clique = Vec::new();
    for i in 1..=k {
        let inflow: u64 = edges_with_prefix(stage, &format!("src:{i}:"))
            .into_iter()
            .filter(|e| flow.active.contains(e))
            .map(|e| stage.net.cap[&e])
            .sum();
        let base = 2 * k * n;
        if inflow <= base || (inflow - base) % 2 != 0 || (inflow - base) / 2 > n {
            return Err(ReductionError::CertificateInvalid(format!(
                "row {i} inflow {inflow} is not of the form 2kN + 2a"
            )));
        }
        let a = (inflow - base) / 2;
        clique.push(stage.source.parts[i as usize - 1][a as usize - 1]);
    }
    if !stage.source.is_multicolored_clique(&clique) {
        return Err(ReductionError::CertificateInvalid(
            "decoded set is not a multicolored clique".into(),
        ));
    }
    Ok(clique)
}
