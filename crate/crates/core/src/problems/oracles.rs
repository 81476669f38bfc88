//! Brute-force oracles and certificate verifiers.
//!
//! Every oracle carries an explicit budget; exceeding it is an error, never
//! a silent truncation. Witnesses are deterministic: the lexicographically
//! least under the relevant id order.

use crate::graph::{EdgeId, VertexId};
use crate::instances::{AoNFlow, CapacitatedGraph, FlowNetwork, MccInstance, Orientation};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub const DEFAULT_MCC_BUDGET: u64 = 10_000_000;
pub const DEFAULT_AONF_ARC_LIMIT: usize = 60;
pub const DEFAULT_CO_EDGE_LIMIT: usize = 24;

/// Exhaustive search over one-vertex-per-part tuples, in part order with
/// lowest vertex positions first. Returns the first clique found, which is
/// therefore the lexicographically least witness.
pub fn solve_mcc_bruteforce(
    inst: &MccInstance,
    budget: Option<u64>,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    let budget = budget.unwrap_or(DEFAULT_MCC_BUDGET);
    let k = inst.k();
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let n = inst.part_size() as u64;
    let mut tuples = 1u64;
    for _ in 0..k {
        tuples = tuples.saturating_mul(n);
        if tuples > budget {
            return Err(OracleError::BudgetExceeded(format!(
                "N^k = {n}^{k} exceeds {budget} tuples"
            )));
        }
    }

    let mut pick = vec![0usize; k];
    loop {
        let clique: Vec<VertexId> = pick.iter().enumerate().map(|(i, &a)| inst.parts[i][a]).collect();
        if inst.is_multicolored_clique(&clique) {
            return Ok(Some(clique));
        }
        // Odometer.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < inst.part_size() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// True iff `flow` conserves at every vertex other than s and t and has
/// value exactly F. Every active arc carries its full capacity.
pub fn verify_aonf_flow(fnw: &FlowNetwork, flow: &AoNFlow) -> bool {
    let mut balance: BTreeMap<VertexId, i128> = BTreeMap::new();
    for e in fnw.net.edges() {
        if flow.active.contains(&e.id) {
            let c = fnw.cap[&e.id] as i128;
            *balance.entry(e.u).or_insert(0) -= c;
            *balance.entry(e.v).or_insert(0) += c;
        }
    }
    for &id in &flow.active {
        if fnw.net.try_edge(id).is_none() {
            return false;
        }
    }
    for v in fnw.net.vertices() {
        if v == fnw.source || v == fnw.sink {
            continue;
        }
        if balance.get(&v).copied().unwrap_or(0) != 0 {
            return false;
        }
    }
    let value = -balance.get(&fnw.source).copied().unwrap_or(0);
    value == fnw.target as i128
}

/// DFS over arc activations in id order (inactive branch first), with
/// conservation-based pruning: a vertex whose undecided arcs cannot close
/// its balance kills the branch. Complete within the arc limit; the
/// returned active set is the lexicographically least 0/1 vector over ids.
pub fn solve_aonf_bruteforce(
    fnw: &FlowNetwork,
    limit: Option<usize>,
) -> Result<Option<AoNFlow>, OracleError> {
    let limit = limit.unwrap_or(DEFAULT_AONF_ARC_LIMIT);
    let m = fnw.net.edge_count();
    if m > limit {
        return Err(OracleError::BudgetExceeded(format!(
            "{m} arcs exceed the limit of {limit}"
        )));
    }

    let edges = fnw.net.edges();
    let n = fnw.net.vertex_count() as usize;
    // Per vertex: current balance (in - out over active), plus undecided
    // in/out capacity still available.
    let mut balance = vec![0i128; n];
    let mut undecided_in = vec![0i128; n];
    let mut undecided_out = vec![0i128; n];
    for e in edges {
        let c = fnw.cap[&e.id] as i128;
        undecided_out[e.u.0 as usize] += c;
        undecided_in[e.v.0 as usize] += c;
    }

    struct Ctx<'a> {
        fnw: &'a FlowNetwork,
        n: usize,
    }
    let ctx = Ctx { fnw, n };

    fn feasible_vertex(
        ctx: &Ctx,
        v: usize,
        balance: &[i128],
        undecided_in: &[i128],
        undecided_out: &[i128],
    ) -> bool {
        let vid = VertexId(v as u32);
        if vid == ctx.fnw.source || vid == ctx.fnw.sink {
            return true;
        }
        // balance + future_in - future_out must be able to reach 0.
        balance[v] - undecided_out[v] <= 0 && balance[v] + undecided_in[v] >= 0
    }

    fn value_feasible(
        ctx: &Ctx,
        balance: &[i128],
        undecided_in: &[i128],
        undecided_out: &[i128],
    ) -> bool {
        // Out-arc activations raise the value, in-arc activations lower it.
        let s = ctx.fnw.source.0 as usize;
        let value = -balance[s];
        let target = ctx.fnw.target as i128;
        value - undecided_in[s] <= target && value + undecided_out[s] >= target
    }

    fn dfs(
        ctx: &Ctx,
        ix: usize,
        active: &mut BTreeSet<EdgeId>,
        balance: &mut Vec<i128>,
        undecided_in: &mut Vec<i128>,
        undecided_out: &mut Vec<i128>,
    ) -> Option<BTreeSet<EdgeId>> {
        let edges = ctx.fnw.net.edges();
        if ix == edges.len() {
            let ok = (0..ctx.n).all(|v| {
                let vid = VertexId(v as u32);
                vid == ctx.fnw.source || vid == ctx.fnw.sink || balance[v] == 0
            }) && -balance[ctx.fnw.source.0 as usize] == ctx.fnw.target as i128;
            return ok.then(|| active.clone());
        }
        let e = &edges[ix];
        let c = ctx.fnw.cap[&e.id] as i128;
        let (u, v) = (e.u.0 as usize, e.v.0 as usize);
        undecided_out[u] -= c;
        undecided_in[v] -= c;

        // Inactive first: yields the lexicographically least active vector.
        for activate in [false, true] {
            if activate {
                active.insert(e.id);
                balance[u] -= c;
                balance[v] += c;
            }
            let ok = feasible_vertex(ctx, u, balance, undecided_in, undecided_out)
                && feasible_vertex(ctx, v, balance, undecided_in, undecided_out)
                && value_feasible(ctx, balance, undecided_in, undecided_out);
            if ok {
                if let Some(found) = dfs(ctx, ix + 1, active, balance, undecided_in, undecided_out)
                {
                    return Some(found);
                }
            }
            if activate {
                active.remove(&e.id);
                balance[u] += c;
                balance[v] -= c;
            }
        }
        undecided_out[u] += c;
        undecided_in[v] += c;
        None
    }

    let mut active = BTreeSet::new();
    let found = dfs(
        &ctx,
        0,
        &mut active,
        &mut balance,
        &mut undecided_in,
        &mut undecided_out,
    );
    Ok(found.map(|active| AoNFlow { active }))
}

/// True iff the orientation covers all edges with matching endpoints and
/// the in- and out-capacity agree at every vertex.
pub fn verify_circulating(cg: &CapacitatedGraph, o: &Orientation) -> bool {
    if !o.matches(&cg.graph) {
        return false;
    }
    let n = cg.graph.vertex_count() as usize;
    let mut balance = vec![0i128; n];
    for e in cg.graph.edges() {
        let c = cg.capacity(e.id) as i128;
        let (t, h) = o.dir[&e.id];
        balance[t.0 as usize] -= c;
        balance[h.0 as usize] += c;
    }
    balance.iter().all(|&b| b == 0)
}

/// Exhaustive orientation search over positive-capacity edges with vertex
/// balance pruning. Zero-capacity edges are oriented (u, v) as stored. The
/// even-total-capacity condition at every vertex is a necessary-condition
/// fast path. Witness is the lexicographically least direction vector in
/// edge id order, with `false` = as-stored orientation first.
pub fn solve_co_bruteforce(
    cg: &CapacitatedGraph,
    limit: Option<usize>,
) -> Result<Option<Orientation>, OracleError> {
    let limit = limit.unwrap_or(DEFAULT_CO_EDGE_LIMIT);
    let pos = cg.positive_edges();
    if pos.len() > limit {
        return Err(OracleError::BudgetExceeded(format!(
            "{} positive-capacity edges exceed the limit of {limit}",
            pos.len()
        )));
    }
    for v in cg.graph.vertices() {
        if cg.total_at(v) % 2 != 0 {
            return Ok(None);
        }
    }

    let n = cg.graph.vertex_count() as usize;
    let mut balance = vec![0i128; n];
    let mut undecided = vec![0i128; n];
    for &id in &pos {
        let e = cg.graph.edge(id);
        let c = cg.capacity(id) as i128;
        undecided[e.u.0 as usize] += c;
        undecided[e.v.0 as usize] += c;
    }

    fn dfs(
        cg: &CapacitatedGraph,
        pos: &[EdgeId],
        ix: usize,
        dir: &mut BTreeMap<EdgeId, (VertexId, VertexId)>,
        balance: &mut Vec<i128>,
        undecided: &mut Vec<i128>,
    ) -> bool {
        if ix == pos.len() {
            return balance.iter().all(|&b| b == 0);
        }
        let e = cg.graph.edge(pos[ix]);
        let c = cg.capacity(e.id) as i128;
        let (u, v) = (e.u.0 as usize, e.v.0 as usize);
        undecided[u] -= c;
        undecided[v] -= c;
        for flip in [false, true] {
            let (t, h) = if flip { (e.v, e.u) } else { (e.u, e.v) };
            balance[t.0 as usize] -= c;
            balance[h.0 as usize] += c;
            dir.insert(e.id, (t, h));
            let ok = [u, v]
                .iter()
                .all(|&w| balance[w].abs() <= undecided[w]);
            if ok && dfs(cg, pos, ix + 1, dir, balance, undecided) {
                return true;
            }
            dir.remove(&e.id);
            balance[t.0 as usize] += c;
            balance[h.0 as usize] -= c;
        }
        undecided[u] += c;
        undecided[v] += c;
        false
    }

    let mut dir = BTreeMap::new();
    if !dfs(cg, &pos, 0, &mut dir, &mut balance, &mut undecided) {
        return Ok(None);
    }
    for e in cg.graph.edges() {
        dir.entry(e.id).or_insert((e.u, e.v));
    }
    Ok(Some(Orientation { dir }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;

    fn two_parts_edge(with_edge: bool) -> MccInstance {
        let mut g = Multigraph::new(2);
        if with_edge {
            g.add_edge(VertexId(0), VertexId(1));
        }
        MccInstance { graph: g, parts: vec![vec![VertexId(0)], vec![VertexId(1)]] }
    }

    #[test]
    fn mcc_bruteforce_finds_edge_clique() {
        let inst = two_parts_edge(true);
        assert_eq!(
            solve_mcc_bruteforce(&inst, None).unwrap(),
            Some(vec![VertexId(0), VertexId(1)])
        );
        let inst = two_parts_edge(false);
        assert_eq!(solve_mcc_bruteforce(&inst, None).unwrap(), None);
    }

    fn parallel_st(caps: &[u64], target: u64) -> FlowNetwork {
        let mut g = Multigraph::new(2);
        let mut cap = BTreeMap::new();
        for &c in caps {
            let e = g.add_arc(VertexId(0), VertexId(1));
            cap.insert(e, c);
        }
        FlowNetwork { net: g, cap, source: VertexId(0), sink: VertexId(1), target }
    }

    #[test]
    fn aonf_single_arc() {
        let net = parallel_st(&[5], 5);
        let flow = AoNFlow { active: net.net.edges().iter().map(|e| e.id).collect() };
        assert!(verify_aonf_flow(&net, &flow));
        let net3 = parallel_st(&[5], 3);
        assert!(!verify_aonf_flow(&net3, &flow));
    }

    #[test]
    fn aonf_bruteforce_subset_sum() {
        let net = parallel_st(&[2, 3], 5);
        let sol = solve_aonf_bruteforce(&net, None).unwrap().unwrap();
        assert_eq!(sol.active.len(), 2);
        let net = parallel_st(&[2, 3], 4);
        assert_eq!(solve_aonf_bruteforce(&net, None).unwrap(), None);
    }

    #[test]
    fn co_triangle_cyclic() {
        let mut g = Multigraph::new(3);
        let e0 = g.add_edge(VertexId(0), VertexId(1));
        let e1 = g.add_edge(VertexId(1), VertexId(2));
        let e2 = g.add_edge(VertexId(2), VertexId(0));
        let cg = CapacitatedGraph { graph: g, cap: [(e0, 1), (e1, 1), (e2, 1)].into() };
        let o = solve_co_bruteforce(&cg, None).unwrap().unwrap();
        assert!(verify_circulating(&cg, &o));
    }

    #[test]
    fn co_star_odd_center() {
        let mut g = Multigraph::new(4);
        let mut cap = BTreeMap::new();
        for i in 1..4u32 {
            cap.insert(g.add_edge(VertexId(0), VertexId(i)), 1);
        }
        let cg = CapacitatedGraph { graph: g, cap };
        assert_eq!(solve_co_bruteforce(&cg, None).unwrap(), None);
    }

    #[test]
    fn co_parallel_pair() {
        let mut g = Multigraph::new(2);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(0), VertexId(1));
        let cg = CapacitatedGraph { graph: g, cap: [(a, 3), (b, 3)].into() };
        let o = solve_co_bruteforce(&cg, None).unwrap().unwrap();
        assert_ne!(o.dir[&a], o.dir[&b]);
    }

    #[test]
    fn co_all_zero_capacities() {
        let mut g = Multigraph::new(3);
        let a = g.add_edge(VertexId(0), VertexId(1));
        let b = g.add_edge(VertexId(1), VertexId(2));
        let cg = CapacitatedGraph { graph: g, cap: [(a, 0), (b, 0)].into() };
        // Any orientation verifies when all capacities are zero.
        let o = Orientation {
            dir: [(a, (VertexId(1), VertexId(0))), (b, (VertexId(1), VertexId(2)))].into(),
        };
        assert!(verify_circulating(&cg, &o));
    }

    #[test]
    fn aonf_reversal_symmetry() {
        // Reversing all arcs and swapping s, t preserves feasibility.
        let mut g = Multigraph::new(3);
        let a = g.add_arc(VertexId(0), VertexId(1));
        let b = g.add_arc(VertexId(1), VertexId(2));
        let c = g.add_arc(VertexId(0), VertexId(2));
        let net = FlowNetwork {
            net: g.clone(),
            cap: [(a, 2), (b, 2), (c, 3)].into(),
            source: VertexId(0),
            sink: VertexId(2),
            target: 5,
        };
        let sol = solve_aonf_bruteforce(&net, None).unwrap().unwrap();
        let mut rev = net.clone();
        rev.net.reorient_all(|e| (e.v, e.u));
        rev.source = net.sink;
        rev.sink = net.source;
        assert!(verify_aonf_flow(&rev, &sol));
    }
}
