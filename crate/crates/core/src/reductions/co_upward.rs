//! Circulating Orientation to Upward Planarity.
//!
//! Capacities are scaled by three, the dual of the triangulated instance
//! is st-oriented, and every dual arc becomes an upward tendril whose two
//! flips model the two orientations of the primal edge. A base face of the
//! composite balances (UP3) exactly when the tendril contributions around
//! it cancel, i.e. when the capacities into and out of the corresponding
//! primal vertex agree.

use crate::decomposition::{
    compose_gadget_decomposition, greedy_pw_upper_bound, validate_decomposition, GadgetPd,
};
use crate::gadgets::tendril::{build_tendril, canonical_tendril_lambda, Tendril};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::instances::{AngleAssignment, AngleMode, Orientation};
use crate::planar::dual::dual_graph;
use crate::planar::embedding::{
    trace_faces, validate_embedding, Corner, Embedding, FaceId,
};
use crate::planar::orient::st_orientation;
use crate::problems::angles::check_upward_assignment;
use crate::problems::oracles::verify_circulating;
use crate::problems::solvers::solve_upward_fixed_embedding;
use crate::reductions::stage::{NormalizedCoStage, ReductionError, TendrilUse, UpwardStage};
use std::collections::BTreeMap;

fn internal(e: impl std::fmt::Display) -> ReductionError {
    ReductionError::Internal(e.to_string())
}

/// Mirrored corner index: reversing a rotation of length d sends corner j
/// to corner (d - 2 - j) mod d.
pub(crate) fn mirror_corner(d: usize, j: usize) -> usize {
    ((d as i64 - 2 - j as i64).rem_euclid(d as i64)) as usize
}

/// Linearizes a pole's cyclic rotation for splicing into a composite
/// rotation: the cycle breaks at the pole's outer corner, so every corner
/// internal to the block is one of the gadget's inner corners. Returns the
/// local edge order plus, per internal block corner, the gadget corner it
/// came from.
pub(crate) fn pole_block_full(
    body: &Multigraph,
    emb: &Embedding,
    pole: VertexId,
) -> (Vec<EdgeId>, Vec<usize>) {
    let faces = trace_faces(body, emb);
    let rot = &emb.rotation[pole.0 as usize];
    let d = rot.len();
    let oc = (0..d)
        .find(|&i| {
            faces.face_of_corner(Corner { vertex: pole, index: i as u32 }) == emb.outer_face
        })
        .expect("pole has an outer corner");
    let order: Vec<EdgeId> = (0..d).map(|j| rot[(oc + 1 + j) % d]).collect();
    let sources: Vec<usize> = (0..d.saturating_sub(1)).map(|j| (oc + 1 + j) % d).collect();
    (order, sources)
}

pub fn co_to_upward(norm: &NormalizedCoStage) -> Result<UpwardStage, ReductionError> {
    let p = &norm.cg;
    // Dual with weights w(e*) = 3 c(e); the scale keeps tendril
    // contributions in multiples of six, which pins the base assignment.
    let dual = dual_graph(&p.graph, &norm.embedding).map_err(internal)?;
    if dual.graph.vertices().any(|v| dual.graph.degree(v) != 3) {
        return Err(internal("dual of a triangulation must be 3-regular"));
    }
    let mut weight: BTreeMap<EdgeId, u64> = BTreeMap::new();
    for (primal, d) in &dual.edge_map {
        weight.insert(*d, 3 * p.capacity(*primal));
    }

    // Poles: the lexicographically least adjacent pair.
    let s = VertexId(0);
    let t = dual
        .graph
        .incident_edges(s)
        .iter()
        .map(|&e| dual.graph.edge(e).other(s))
        .min()
        .ok_or_else(|| internal("dual has an isolated vertex"))?;
    let skeleton = st_orientation(&dual.graph, s, t).map_err(internal)?;

    // Outer face of the skeleton: a face with both s and t on it (they are
    // adjacent, so the two faces of their edge qualify; take the least).
    let mut skeleton_embedding = dual.embedding.clone();
    let dfaces = validate_embedding(&skeleton, &skeleton_embedding).map_err(internal)?;
    skeleton_embedding.outer_face = *dfaces
        .faces_containing(&[s, t])
        .first()
        .ok_or_else(|| internal("no dual face holds both poles"))?;
    let base = solve_upward_fixed_embedding(&skeleton, &skeleton_embedding)
        .map_err(internal)?
        .ok_or_else(|| internal("st-planar skeleton must be upward feasible"))?;

    // Face of the dual <-> primal vertex correspondence, by matching the
    // dual-edge sets around each primal vertex.
    let mut face_edges: BTreeMap<Vec<EdgeId>, FaceId> = BTreeMap::new();
    for f in &dfaces.faces {
        let mut es: Vec<EdgeId> = f.walk.iter().map(|s| s.edge).collect();
        es.sort();
        face_edges.insert(es, f.id);
    }
    let mut dface_of_primal = BTreeMap::new();
    let mut primal_of_dface = BTreeMap::new();
    for v in p.graph.vertices() {
        let mut es: Vec<EdgeId> = p
            .graph
            .incident_edges(v)
            .iter()
            .map(|e| dual.edge_map[e])
            .collect();
        es.sort();
        let f = *face_edges
            .get(&es)
            .ok_or_else(|| internal("no dual face matches a primal vertex"))?;
        dface_of_primal.insert(v, f);
        primal_of_dface.insert(f, v);
    }

    // Composite: skeleton vertices keep their ids, tendrils appended.
    let built = build_composite(&skeleton, &skeleton_embedding, &weight)?;

    // Decomposition: the skeleton's heuristic certificate composed with
    // the width-2 tendril certificates.
    let (_, dual_pd) = greedy_pw_upper_bound(&skeleton);
    let mut reps = BTreeMap::new();
    for (arc, tu) in &built.tendrils {
        let kit = build_tendril(tu.strength);
        reps.insert(
            *arc,
            GadgetPd {
                pd: kit.pd.clone(),
                source_pole: kit.source_pole,
                sink_pole: kit.sink_pole,
                map: tu.vertex_map.clone(),
            },
        );
    }
    let decomposition = compose_gadget_decomposition(&skeleton, &dual_pd, &reps)
        .map_err(|e| internal(e))?;
    validate_decomposition(&built.graph, &decomposition).map_err(internal)?;
    validate_embedding(&built.graph, &built.embedding).map_err(internal)?;

    Ok(UpwardStage {
        digraph: built.graph,
        embedding: built.embedding,
        decomposition,
        tendrils: built.tendrils,
        dual_arcs: skeleton
            .edges()
            .iter()
            .map(|e| (e.id, (e.u, e.v)))
            .collect(),
        dual_to_primal: dual.edge_map_back.clone(),
        base,
        skeleton,
        skeleton_embedding,
        normalized: norm.clone(),
        dface_of_primal,
        primal_of_dface,
        base_corner_offset: built.base_corner_offset,
        plus_face: built.plus_face,
    })
}

struct Composite {
    graph: Multigraph,
    embedding: Embedding,
    tendrils: BTreeMap<EdgeId, TendrilUse>,
    /// base_corner_offset[v][i] = composite corner index of the skeleton
    /// corner (v, i) (the corner after block i).
    base_corner_offset: Vec<Vec<u32>>,
    /// For each dual arc: the skeleton face its tendril's positive
    /// boundary touches under the canonical flip.
    plus_face: BTreeMap<EdgeId, FaceId>,
}

fn build_composite(
    skeleton: &Multigraph,
    semb: &Embedding,
    weight: &BTreeMap<EdgeId, u64>,
) -> Result<Composite, ReductionError> {
    let nb = skeleton.vertex_count();
    let mut g = Multigraph::new(nb);
    g.vertex_labels = skeleton.vertex_labels.clone();
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); nb as usize];
    let mut tendrils = BTreeMap::new();

    // Instantiate one tendril per dual arc (edge-id order).
    let mut blocks: BTreeMap<(VertexId, EdgeId), Vec<EdgeId>> = BTreeMap::new();
    for arc in skeleton.edges() {
        let w = weight[&arc.id];
        let kit = build_tendril(w);
        let mut vertex_map = BTreeMap::new();
        vertex_map.insert(kit.source_pole, arc.u);
        vertex_map.insert(kit.sink_pole, arc.v);
        for v in kit.body.vertices() {
            if v != kit.source_pole && v != kit.sink_pole {
                let label = kit
                    .body
                    .vertex_labels
                    .get(&v)
                    .map(|l| format!("T{}:{}", arc.id.0, l))
                    .unwrap_or_else(|| format!("T{}:v{}", arc.id.0, v.0));
                let nv = g.add_vertex_labelled(label);
                rotation.push(Vec::new());
                vertex_map.insert(v, nv);
            }
        }
        let mut edge_map = BTreeMap::new();
        for e in kit.body.edges() {
            let id = g.add_arc_labelled(
                vertex_map[&e.u],
                vertex_map[&e.v],
                format!("tendril:{}:{}", arc.id.0, e.id.0),
            );
            edge_map.insert(e.id, id);
        }
        // Internal rotations (canonical flip).
        for v in kit.body.vertices() {
            if v == kit.source_pole || v == kit.sink_pole {
                continue;
            }
            rotation[vertex_map[&v].0 as usize] = kit.embedding.rotation[v.0 as usize]
                .iter()
                .map(|e| edge_map[e])
                .collect();
        }
        // Each pole's cyclic rotation is cut open at its outer corner, so
        // the wall order within the composite wedge is consistent at both
        // ends of the thickened edge.
        for (pole, at) in [(kit.source_pole, arc.u), (kit.sink_pole, arc.v)] {
            let (order, _) = pole_block_full(&kit.body, &kit.embedding, pole);
            let block: Vec<EdgeId> = order.iter().map(|e| &edge_map[e]).copied().collect();
            blocks.insert((at, arc.id), block);
        }
        let witness = pick_witness(&kit);
        tendrils.insert(
            arc.id,
            TendrilUse {
                strength: w,
                witness_rotation: kit.embedding.rotation[witness.0 as usize].clone(),
                witness,
                vertex_map,
                edge_map,
            },
        );
    }

    // Base rotations: every skeleton edge replaced by its pole block, and
    // the corner offsets recorded.
    let mut base_corner_offset: Vec<Vec<u32>> = vec![Vec::new(); nb as usize];
    for v in skeleton.vertices() {
        let mut rot = Vec::new();
        for &de in &semb.rotation[v.0 as usize] {
            rot.extend(blocks[&(v, de)].iter().copied());
            base_corner_offset[v.0 as usize].push(rot.len() as u32 - 1);
        }
        rotation[v.0 as usize] = rot;
    }

    let mut embedding = Embedding { rotation, outer_face: FaceId(0) };
    let faces = validate_embedding(&g, &embedding).map_err(internal)?;

    // Outer face: the composite face of the skeleton's outer corner.
    let souter = trace_faces(skeleton, semb);
    let step0 = souter.face(semb.outer_face).walk[0];
    let sv = step0.to;
    let spos = semb.position(sv, step0.edge).unwrap();
    let comp_corner = Corner {
        vertex: sv,
        index: base_corner_offset[sv.0 as usize][spos as usize],
    };
    embedding.outer_face = faces.face_of_corner(comp_corner);

    // Positive-side bookkeeping: under the canonical flip, the tendril's
    // positive boundary touches the base face holding the corner just
    // before its block at the arc tail. Express that face as a skeleton
    // face id.
    let mut comp_to_skel: BTreeMap<FaceId, FaceId> = BTreeMap::new();
    for v in skeleton.vertices() {
        for (i, &off) in base_corner_offset[v.0 as usize].iter().enumerate() {
            let cf = faces.face_of_corner(Corner { vertex: v, index: off });
            let sf = souter.face_of_corner(Corner { vertex: v, index: i as u32 });
            comp_to_skel.insert(cf, sf);
        }
    }
    // Under the canonical flip, the contributing (positive) wall of each
    // tendril ends the block at the arc tail, so it touches the skeleton
    // corner directly after the arc there.
    let mut plus_face = BTreeMap::new();
    for arc in skeleton.edges() {
        let u = arc.u;
        let pos = semb.position(u, arc.id).unwrap();
        let sf = souter.face_of_corner(Corner { vertex: u, index: pos });
        plus_face.insert(arc.id, sf);
    }
    let _ = comp_to_skel;

    Ok(Composite { graph: g, embedding, tendrils, base_corner_offset, plus_face })
}

fn pick_witness(kit: &Tendril) -> VertexId {
    kit.body
        .vertices()
        .find(|&v| {
            v != kit.source_pole && v != kit.sink_pole && kit.body.degree(v) >= 3
        })
        .expect("tendrils have internal branch vertices")
}

/// Assembles the embedding and angle assignment a circulating orientation
/// induces: tendril flips per the dual-clockwise rule, auxiliary angles
/// from each tendril's unique upward assignment, base angles from the
/// skeleton's unique upward embedding.
pub fn lift_orientation_to_upward(
    stage: &UpwardStage,
    o: &Orientation,
) -> Result<(Embedding, AngleAssignment), ReductionError> {
    if !verify_circulating(&stage.normalized.cg, o) {
        return Err(ReductionError::CertificateInvalid(
            "orientation is not circulating on the normalized instance".into(),
        ));
    }
    let mut flips = BTreeMap::new();
    for (&arc, &(_, _)) in &stage.dual_arcs {
        let primal = stage.dual_to_primal[&arc];
        let (tail, _) = o.dir[&primal];
        let want_plus = stage.dface_of_primal[&tail];
        let canonical_plus = stage.plus_face[&arc];
        let adjacent = skeleton_faces_of_arc(stage, arc);
        if !adjacent.contains(&want_plus) {
            return Err(ReductionError::Internal(
                "primal tail does not border the dual arc's faces".into(),
            ));
        }
        flips.insert(arc, want_plus != canonical_plus);
    }
    let (embedding, lambda) = assemble(stage, &flips)?;
    match check_upward_assignment(&stage.digraph, &embedding, &lambda) {
        Ok(true) => Ok((embedding, lambda)),
        Ok(false) => Err(ReductionError::Internal(
            "lifted assignment rejected by UP0-UP3".into(),
        )),
        Err(e) => Err(internal(e)),
    }
}

fn skeleton_faces_of_arc(stage: &UpwardStage, arc: EdgeId) -> Vec<FaceId> {
    let faces = trace_faces(&stage.skeleton, &stage.skeleton_embedding);
    faces
        .faces
        .iter()
        .filter(|f| f.walk.iter().any(|s| s.edge == arc))
        .map(|f| f.id)
        .collect()
}

/// Builds the composite embedding and assignment for a given flip vector.
fn assemble(
    stage: &UpwardStage,
    flips: &BTreeMap<EdgeId, bool>,
) -> Result<(Embedding, AngleAssignment), ReductionError> {
    let mut embedding = stage.embedding.clone();
    let mut lambda = AngleAssignment::empty(AngleMode::Upward, &embedding.rotation);

    // Base corners from the skeleton's assignment.
    for v in stage.skeleton.vertices() {
        for (i, &off) in stage.base_corner_offset[v.0 as usize].iter().enumerate() {
            let value = stage.base.labels[v.0 as usize][i];
            lambda.labels[v.0 as usize][off as usize] = value;
        }
    }

    for (&arc, tu) in &stage.tendrils {
        let kit = build_tendril(tu.strength);
        let mirror = *flips.get(&arc).unwrap_or(&false);
        let klam = canonical_tendril_lambda(&kit.body, &kit.embedding);
        // Internal vertices: rotations and labels, mirrored if flipped.
        for v in kit.body.vertices() {
            let cv = tu.vertex_map[&v];
            let is_pole = v == kit.source_pole || v == kit.sink_pole;
            let rot: Vec<EdgeId> = kit.embedding.rotation[v.0 as usize]
                .iter()
                .map(|e| tu.edge_map[e])
                .collect();
            let d = rot.len();
            if !is_pole {
                embedding.rotation[cv.0 as usize] = if mirror {
                    rot.iter().rev().copied().collect()
                } else {
                    rot
                };
                for j in 0..d {
                    let src = if mirror { mirror_corner(d, j) } else { j };
                    lambda.labels[cv.0 as usize][j] =
                        klam.labels[v.0 as usize][src];
                }
            } else {
                // Pole block: the gadget rotation cut open at the pole's
                // outer corner; a mirror reverses the cut-open order.
                let (order, sources) = pole_block_full(&kit.body, &kit.embedding, v);
                let mut block: Vec<EdgeId> = order.iter().map(|e| tu.edge_map[e]).collect();
                let mut srcs = sources.clone();
                if mirror {
                    block.reverse();
                    // Internal corner j of the reversed block is internal
                    // corner d-2-j of the forward block.
                    srcs = (0..d.saturating_sub(1)).map(|j| sources[d - 2 - j]).collect();
                }
                let crot = &mut embedding.rotation[cv.0 as usize];
                let start = crot
                    .iter()
                    .position(|e| block.contains(e))
                    .ok_or_else(|| internal("tendril block missing at pole"))?;
                for (ix, e) in block.iter().enumerate() {
                    crot[start + ix] = *e;
                }
                for (j, &src) in srcs.iter().enumerate() {
                    lambda.labels[cv.0 as usize][start + j] = klam.labels[v.0 as usize][src];
                }
            }
        }
    }
    Ok((embedding, lambda))
}

/// Reads the tendril flips out of a checker-approved embedding and orients
/// every primal edge away from the vertex whose face receives the positive
/// contribution.
pub fn extract_orientation_from_upward(
    stage: &UpwardStage,
    emb: &Embedding,
    lambda: &AngleAssignment,
) -> Result<Orientation, ReductionError> {
    match check_upward_assignment(&stage.digraph, emb, lambda) {
        Ok(true) => {}
        _ => {
            return Err(ReductionError::CertificateInvalid(
                "assignment rejected by UP0-UP3".into(),
            ))
        }
    }
    let mut dir = BTreeMap::new();
    for (&arc, tu) in &stage.tendrils {
        let canon: Vec<EdgeId> = tu
            .witness_rotation
            .iter()
            .map(|e| tu.edge_map[e])
            .collect();
        let got = &emb.rotation[tu.vertex_map[&tu.witness].0 as usize];
        let mirror = if cyclic_equal(got, &canon) {
            false
        } else {
            let rev: Vec<EdgeId> = canon.iter().rev().copied().collect();
            if cyclic_equal(got, &rev) {
                true
            } else {
                return Err(ReductionError::CertificateInvalid(
                    "tendril interior rotation matches neither chirality".into(),
                ));
            }
        };
        let plus = if mirror {
            other_face(stage, arc, stage.plus_face[&arc])?
        } else {
            stage.plus_face[&arc]
        };
        let primal = stage.dual_to_primal[&arc];
        let tail = *stage
            .primal_of_dface
            .get(&plus)
            .ok_or_else(|| internal("positive face has no primal vertex"))?;
        let pe = stage.normalized.cg.graph.edge(primal);
        let head = pe.other(tail);
        dir.insert(primal, (tail, head));
    }
    let o = Orientation { dir };
    if !verify_circulating(&stage.normalized.cg, &o) {
        return Err(ReductionError::CertificateInvalid(
            "extracted orientation is not circulating".into(),
        ));
    }
    Ok(o)
}

fn other_face(stage: &UpwardStage, arc: EdgeId, not: FaceId) -> Result<FaceId, ReductionError> {
    skeleton_faces_of_arc(stage, arc)
        .into_iter()
        .find(|f| *f != not)
        .ok_or_else(|| internal("dual arc has a single adjacent face"))
}

fn cyclic_equal(a: &[EdgeId], b: &[EdgeId]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    (0..a.len()).any(|k| (0..a.len()).all(|i| a[(k + i) % a.len()] == b[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::oracles::{solve_co_bruteforce, solve_mcc_bruteforce};

    #[test]
    fn composite_on_triangle_skeleton_is_planar() {
        // Triangle digraph 0->1->2 with 0->2; cyclic rotations.
        let mut d = Multigraph::new(3);
        let a = d.add_arc(VertexId(0), VertexId(1));
        let b = d.add_arc(VertexId(1), VertexId(2));
        let c = d.add_arc(VertexId(0), VertexId(2));
        let semb = Embedding {
            rotation: vec![vec![a, c], vec![b, a], vec![c, b]],
            outer_face: FaceId(0),
        };
        validate_embedding(&d, &semb).unwrap();
        for weights in [[0u64, 0, 0], [1, 0, 1], [2, 1, 1]] {
            let w: BTreeMap<EdgeId, u64> =
                [(a, weights[0]), (b, weights[1]), (c, weights[2])].into();
            let built = build_composite(&d, &semb, &w).unwrap_or_else(|e| {
                panic!("weights {weights:?}: {e}");
            });
            validate_embedding(&built.graph, &built.embedding).unwrap();
        }
    }
    use crate::reductions::aonf_co::{
        aonf_to_co, co_normalize, lift_flow_to_orientation, orientation_to_normalized, XiMode,
    };
    use crate::reductions::mcc_aonf::tests::make_mcc;
    use crate::reductions::mcc_aonf::{lift_mcc_solution_to_flow, mcc_to_aonf};

    fn micro_norm() -> crate::reductions::stage::NormalizedCoStage {
        let inst = make_mcc(2, 1, &[]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::MinimalSufficient).unwrap();
        co_normalize(&co).unwrap()
    }

    #[test]
    fn dual_is_cubic_and_stage_audits_pass() {
        let norm = micro_norm();
        let up = co_to_upward(&norm).unwrap();
        assert!(up.digraph.topological_order().is_some());
        validate_embedding(&up.digraph, &up.embedding).unwrap();
        let w = validate_decomposition(&up.digraph, &up.decomposition).unwrap();
        // Lemma bound: pw(D) heuristic + max tendril width + 1.
        let (dw, _) = greedy_pw_upper_bound(&up.skeleton);
        assert!(w <= dw + 2 + 1, "{w} > {dw} + 3");
    }

    #[test]
    fn tendril_strengths_are_triple_capacities() {
        let norm = micro_norm();
        let up = co_to_upward(&norm).unwrap();
        for (arc, tu) in &up.tendrils {
            let primal = up.dual_to_primal[arc];
            assert_eq!(tu.strength, 3 * norm.cg.capacity(primal));
        }
    }

    #[test]
    fn lift_checker_roundtrip_on_micro_chain() {
        let inst = make_mcc(2, 1, &[]);
        let stage = mcc_to_aonf(&inst).unwrap();
        let co = aonf_to_co(&stage, true, XiMode::MinimalSufficient).unwrap();
        let norm = co_normalize(&co).unwrap();
        let up = co_to_upward(&norm).unwrap();

        let clique = solve_mcc_bruteforce(&inst, None).unwrap().unwrap();
        let flow = lift_mcc_solution_to_flow(&stage, &clique).unwrap();
        let raw_o = lift_flow_to_orientation(&co, &flow).unwrap();
        let o = orientation_to_normalized(&norm, &raw_o).unwrap();

        let (emb, lambda) = lift_orientation_to_upward(&up, &o).unwrap();
        let back = extract_orientation_from_upward(&up, &emb, &lambda).unwrap();
        // Zero-capacity edges may flip freely; positive ones must agree.
        for (e, d) in &o.dir {
            if norm.cg.capacity(*e) > 0 {
                assert_eq!(back.dir[e], *d, "positive edge flipped");
            }
        }
        assert!(verify_circulating(&norm.cg, &back));
    }

    #[test]
    fn direct_co_solution_lifts_too() {
        // Bypass the flow: solve the normalized CO instance directly.
        let norm = micro_norm();
        let up = co_to_upward(&norm).unwrap();
        let o = solve_co_bruteforce(&norm.cg, Some(64)).unwrap().unwrap();
        let (emb, lambda) = lift_orientation_to_upward(&up, &o).unwrap();
        assert_eq!(check_upward_assignment(&up.digraph, &emb, &lambda), Ok(true));
    }

    #[test]
    fn tampered_lambda_rejected() {
        let norm = micro_norm();
        let up = co_to_upward(&norm).unwrap();
        let o = solve_co_bruteforce(&norm.cg, Some(64)).unwrap().unwrap();
        let (emb, mut lambda) = lift_orientation_to_upward(&up, &o).unwrap();
        'outer: for row in lambda.labels.iter_mut() {
            for l in row.iter_mut() {
                if *l == 1 {
                    *l = -1;
                    break 'outer;
                }
            }
        }
        assert!(extract_orientation_from_upward(&up, &emb, &lambda).is_err());
    }
}
