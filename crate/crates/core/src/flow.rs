//! Unit-capacity maximum flow, used as an upper bound on path packings.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, VertexId};

struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            head: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn arc(&mut self, a: usize, b: usize, c: u32) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(0);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.head.len()];
            let mut queue = VecDeque::from([s]);
            let mut reached = vec![false; self.head.len()];
            reached[s] = true;
            while let Some(x) = queue.pop_front() {
                for &e in &self.head[x] {
                    let y = self.to[e];
                    if self.cap[e] > 0 && !reached[y] {
                        reached[y] = true;
                        via[y] = e;
                        queue.push_back(y);
                    }
                }
            }
            if !reached[t] {
                return flow;
            }
            let mut y = t;
            while y != s {
                let e = via[y];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                y = self.to[e ^ 1];
            }
            flow += 1;
        }
    }
}

/// Maximum number of paths from `root` that share no vertex besides `root`,
/// whose internal vertices satisfy `internal` and whose endpoints satisfy
/// `terminal` (pairwise distinct). Path length is unbounded.
pub(crate) fn disjoint_paths_bound(
    g: &Graph,
    root: VertexId,
    internal: &dyn Fn(VertexId) -> bool,
    terminal: &dyn Fn(VertexId) -> bool,
) -> usize {
    let n = g.n();
    // node 2x is x_in, 2x+1 is x_out; 2n is the sink
    let sink = 2 * n;
    let mut net = Network::new(2 * n + 1);
    for x in g.vertices() {
        if x == root {
            continue;
        }
        if internal(x) {
            net.arc(2 * x, 2 * x + 1, 1);
            for &y in g.neighbors(x) {
                if y != root {
                    net.arc(2 * x + 1, 2 * y, 1);
                }
            }
        } else if terminal(x) {
            net.arc(2 * x, sink, 1);
        }
    }
    for &y in g.neighbors(root) {
        net.arc(2 * root + 1, 2 * y, 1);
    }
    net.max_flow(2 * root + 1, sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_center_reaches_all_leaves() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        assert_eq!(disjoint_paths_bound(&g, 0, &|_| false, &|_| true), 4);
    }

    #[test]
    fn bottleneck_vertex() {
        // root 0 connects through 1 only to terminals 2 and 3
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(disjoint_paths_bound(&g, 0, &|x| x == 1, &|x| x >= 2), 1);
    }
}
