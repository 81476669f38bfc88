//! The acceptance gate for upward tendrils: the five gadget properties,
//! checked by exhaustive search over the embedding space.

use crate::gadgets::tendril::{
    canonical_tendril_lambda, outer_side_corners, Tendril, TENDRIL_SIZE_OFFSET, TENDRIL_SIZE_SLOPE,
};
use crate::gadgets::verify::{class_key, feasible_classes, sweep_states, Sweep, VerifyError};
use crate::planar::connectivity::is_triconnected;
use crate::problems::angles::path_contribution;
use crate::problems::solvers::solve_upward_fixed_embedding;

#[derive(Debug, Clone)]
pub struct TendrilReport {
    /// Rotation systems visited by the embedding sweep.
    pub states: usize,
    /// Upward-feasible (embedding, outer face) classes up to reflection.
    pub feasible_classes: usize,
    /// Boundary contributions of the two pole-to-pole paths.
    pub contributions: (i64, i64),
    pub pd_width: usize,
}

pub fn verify_tendril(t: &Tendril) -> Result<TendrilReport, VerifyError> {
    verify_tendril_sweep(t, Sweep::Closure { cap: 2_000_000 })
}

/// Both poles lie on the designated outer face.
pub fn poles_on_outer(
    g: &crate::graph::Multigraph,
    emb: &crate::planar::embedding::Embedding,
    a: crate::graph::VertexId,
    b: crate::graph::VertexId,
) -> bool {
    let faces = crate::planar::embedding::trace_faces(g, emb);
    let outer = faces.face(emb.outer_face);
    let mut has = (false, false);
    for step in &outer.walk {
        has.0 |= step.to == a;
        has.1 |= step.to == b;
    }
    has.0 && has.1
}

pub fn verify_tendril_sweep(t: &Tendril, sweep: Sweep) -> Result<TendrilReport, VerifyError> {
    let mut violations = Vec::new();
    let g = &t.body;
    let w = t.strength as i64;

    // (1) Pole roles and acyclicity.
    if g.topological_order().is_none() {
        violations.push("body is not acyclic".into());
    }
    if !g.is_connected() {
        violations.push("body is not connected".into());
    }
    if !g.in_arcs(t.source_pole).is_empty() || g.out_arcs(t.source_pole).is_empty() {
        violations.push("source pole is not a source".into());
    }
    if !g.out_arcs(t.sink_pole).is_empty() || g.in_arcs(t.sink_pole).is_empty() {
        violations.push("sink pole is not a sink".into());
    }

    // (2) Triconnected once the pole edge is added.
    let mut closed = g.to_undirected();
    if closed.has_edge_between(t.source_pole, t.sink_pole) {
        violations.push("poles must not be adjacent".into());
    } else {
        closed.add_edge(t.source_pole, t.sink_pole);
        match is_triconnected(&closed) {
            Ok(true) => {}
            _ => violations.push("not triconnected after adding the pole edge".into()),
        }
    }

    // (3) Exactly one embedding class with both poles on the outer face
    // admits an upward assignment. The pole-cofacial restriction matches
    // how tendrils sit inside the reduction: the composite keeps the pole
    // edge's triconnectivity, which outlaws the cap inversions a
    // free-standing pathwidth-2 gadget always has.
    let states = sweep_states(g, &t.embedding, sweep)?;
    let classes = feasible_classes(g, &states, Some((t.source_pole, t.sink_pole)), |emb| {
        matches!(solve_upward_fixed_embedding(g, emb), Ok(Some(_)))
    });
    if classes.len() != 1 {
        violations.push(format!(
            "{} upward-feasible pole-cofacial embedding classes, expected exactly 1",
            classes.len()
        ));
    } else if classes[0] != class_key(g, &t.embedding) {
        violations.push("the feasible class is not the canonical embedding".into());
    }

    // (4) Boundary contributions are exactly +-2w.
    let lambda = canonical_tendril_lambda(g, &t.embedding);
    let mut contributions = (0, 0);
    match crate::problems::angles::check_upward_assignment(g, &t.embedding, &lambda) {
        Ok(true) => {
            let (sa, sc) = outer_side_corners(g, &t.embedding, t.source_pole, t.sink_pole);
            let (ca, cc) = (path_contribution(&lambda, &sa), path_contribution(&lambda, &sc));
            contributions = (ca, cc);
            let mut sorted = [ca, cc];
            sorted.sort();
            if sorted != [-2 * w, 2 * w] {
                violations.push(format!("contributions {ca}/{cc}, expected +-{}", 2 * w));
            }
        }
        _ => violations.push("canonical angle assignment rejected by the checker".into()),
    }

    // (5) Width-2 decomposition and affine size.
    let pd_width = match crate::decomposition::validate_decomposition(g, &t.pd) {
        Ok(width) if width <= 2 => width,
        Ok(width) => {
            violations.push(format!("path decomposition width {width} > 2"));
            width
        }
        Err(e) => {
            violations.push(format!("path decomposition invalid: {e}"));
            usize::MAX
        }
    };
    let expect = TENDRIL_SIZE_SLOPE * t.strength + TENDRIL_SIZE_OFFSET;
    if g.vertex_count() as u64 != expect {
        violations.push(format!(
            "size {} differs from the pinned affine bound {expect}",
            g.vertex_count()
        ));
    }

    if violations.is_empty() {
        Ok(TendrilReport {
            states: states.len(),
            feasible_classes: classes.len(),
            contributions,
            pd_width,
        })
    } else {
        Err(VerifyError::PropertyViolated(violations))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::tendril::build_tendril;

    #[test]
    fn tendrils_pass_up_to_w2() {
        for w in 0..=2u64 {
            let t = build_tendril(w);
            let report = verify_tendril(&t).unwrap_or_else(|e| panic!("w={w}: {e}"));
            assert_eq!(report.feasible_classes, 1);
        }
    }

    #[test]
    fn mutated_tendril_fails() {
        let mut t = build_tendril(1);
        // Reverse one rung arc: the unique-embedding discipline breaks.
        let victim = t
            .body
            .edges()
            .iter()
            .find(|e| {
                t.body
                    .edge_labels
                    .get(&e.id)
                    .is_some_and(|l| l.contains("rung:a1P"))
            })
            .map(|e| (e.id, e.u, e.v))
            .unwrap();
        t.body.remove_edge(victim.0);
        let new = t.body.add_arc(victim.2, victim.1);
        for rot in &mut t.embedding.rotation {
            for e in rot.iter_mut() {
                if *e == victim.0 {
                    *e = new;
                }
            }
        }
        assert!(matches!(
            verify_tendril(&t),
            Err(VerifyError::PropertyViolated(_))
        ));
    }
}
