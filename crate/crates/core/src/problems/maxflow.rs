//! Minimal integral max-flow (BFS augmentation) for the angle-assignment
//! feasibility networks. Deterministic: arcs are scanned in insertion order.

#[derive(Debug, Clone)]
pub struct FlowGraph {
    n: usize,
    // Arc list with residuals: to, cap; arc i^1 is the reverse of arc i.
    to: Vec<usize>,
    cap: Vec<i64>,
    head: Vec<Vec<usize>>,
}

impl FlowGraph {
    pub fn new(n: usize) -> Self {
        FlowGraph { n, to: Vec::new(), cap: Vec::new(), head: vec![Vec::new(); n] }
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.head[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.head[v].push(id + 1);
        id
    }

    /// Flow currently pushed through arc `id` (forward arcs only).
    pub fn flow_on(&self, id: usize) -> i64 {
        self.cap[id ^ 1]
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let mut prev: Vec<Option<usize>> = vec![None; self.n];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            prev[s] = Some(usize::MAX);
            while let Some(x) = queue.pop_front() {
                if x == t {
                    break;
                }
                for &a in &self.head[x] {
                    let y = self.to[a];
                    if self.cap[a] > 0 && prev[y].is_none() {
                        prev[y] = Some(a);
                        queue.push_back(y);
                    }
                }
            }
            if prev[t].is_none() {
                return total;
            }
            let mut bottleneck = i64::MAX;
            let mut cur = t;
            while cur != s {
                let a = prev[cur].unwrap();
                bottleneck = bottleneck.min(self.cap[a]);
                cur = self.to[a ^ 1];
            }
            let mut cur = t;
            while cur != s {
                let a = prev[cur].unwrap();
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                cur = self.to[a ^ 1];
            }
            total += bottleneck;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_flow() {
        let mut g = FlowGraph::new(4);
        g.add_arc(0, 1, 3);
        g.add_arc(0, 2, 2);
        g.add_arc(1, 3, 2);
        g.add_arc(2, 3, 3);
        g.add_arc(1, 2, 5);
        assert_eq!(g.max_flow(0, 3), 5);
    }
}
