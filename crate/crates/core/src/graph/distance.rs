//! Edge-deletion distance to H-freeness.
//!
//! The exact value is a minimum hitting set of the copies' edge sets, found
//! by branch and bound. A greedy edge-disjoint packing gives the lower bound.

use alloc::vec;
use alloc::vec::Vec;

use super::enumerate::{find_h_copies, HCopy, Pattern, PatternError};
use super::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceLimits {
    /// Copies enumerated before giving up on the exact search.
    pub max_copies: usize,
    /// Branch-and-bound nodes visited before giving up.
    pub max_nodes: u64,
}

impl Default for DistanceLimits {
    fn default() -> Self {
        DistanceLimits {
            max_copies: 20_000,
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact {
        value: usize,
        packing_lower_bound: usize,
        /// A minimum deletion set.
        deletion: Vec<Edge>,
    },
    /// The exact search ran out of budget.
    Bounds { lower: usize, upper: usize },
}

impl Distance {
    pub fn lower(&self) -> usize {
        match self {
            Distance::Exact { value, .. } => *value,
            Distance::Bounds { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> usize {
        match self {
            Distance::Exact { value, .. } => *value,
            Distance::Bounds { upper, .. } => *upper,
        }
    }

    pub fn exact(&self) -> Option<usize> {
        match self {
            Distance::Exact { value, .. } => Some(*value),
            Distance::Bounds { .. } => None,
        }
    }
}

/// A maximal family of pairwise edge-disjoint copies, chosen greedily in
/// enumeration order on the shrinking graph.
pub fn greedy_edge_disjoint_packing(g: &Graph, pattern: &Pattern) -> Vec<HCopy> {
    let mut rest = g.clone();
    let mut packing = Vec::new();
    loop {
        let mut found = find_h_copies(&rest, pattern, 1, None);
        if found.copies.is_empty() {
            break;
        }
        let first = found.copies.swap_remove(0);
        for e in first.edges(pattern.graph()) {
            rest.remove_edge(e.low(), e.high());
        }
        packing.push(first);
    }
    packing
}

fn greedy_deletion_upper_bound(g: &Graph, pattern: &Pattern) -> usize {
    let mut rest = g.clone();
    let mut deleted = 0;
    loop {
        let found = find_h_copies(&rest, pattern, 1, None);
        let Some(c) = found.copies.first() else { break };
        let e = c.edges(pattern.graph())[0];
        rest.remove_edge(e.low(), e.high());
        deleted += 1;
    }
    deleted
}

struct HittingSet<'a> {
    copies: &'a [Vec<usize>],
    chosen: Vec<bool>,
    forbidden: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_size: usize,
    nodes: u64,
    max_nodes: u64,
    out_of_budget: bool,
}

impl HittingSet<'_> {
    fn is_hit(&self, c: &[usize]) -> bool {
        c.iter().any(|&e| self.chosen[e])
    }

    fn disjoint_unhit_lower_bound(&self, edge_count: usize) -> Option<usize> {
        let mut used = vec![false; edge_count];
        let mut count = 0;
        for c in self.copies {
            if self.is_hit(c) {
                continue;
            }
            if c.iter().all(|&e| self.forbidden[e]) {
                return None;
            }
            if c.iter().all(|&e| !used[e]) {
                for &e in c {
                    used[e] = true;
                }
                count += 1;
            }
        }
        Some(count)
    }

    fn search(&mut self, edge_count: usize) {
        if self.out_of_budget {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.out_of_budget = true;
            return;
        }
        let Some(lb) = self.disjoint_unhit_lower_bound(edge_count) else {
            return;
        };
        if self.current.len() + lb >= self.best_size {
            return;
        }
        let Some(c) = self.copies.iter().find(|c| !self.is_hit(c)) else {
            self.best_size = self.current.len();
            self.best = self.current.clone();
            return;
        };
        let branch: Vec<usize> = c.iter().copied().filter(|&e| !self.forbidden[e]).collect();
        let mut newly_forbidden = Vec::new();
        for e in branch {
            self.chosen[e] = true;
            self.current.push(e);
            self.search(edge_count);
            self.current.pop();
            self.chosen[e] = false;
            // later branches exclude this edge: those solutions were covered
            self.forbidden[e] = true;
            newly_forbidden.push(e);
        }
        for e in newly_forbidden {
            self.forbidden[e] = false;
        }
    }
}

/// Minimum number of edge deletions that leave `g` free of `h`.
pub fn distance_to_h_freeness(
    g: &Graph,
    h: &Graph,
    limits: DistanceLimits,
) -> Result<Distance, PatternError> {
    let pattern = Pattern::new(h)?;
    let lower = greedy_edge_disjoint_packing(g, &pattern).len();
    let found = find_h_copies(g, &pattern, limits.max_copies, None);
    if !found.exhausted {
        return Ok(Distance::Bounds {
            lower,
            upper: greedy_deletion_upper_bound(g, &pattern),
        });
    }
    let edges: Vec<Edge> = g.edges().collect();
    let index = |e: Edge| edges.binary_search(&e).expect("copy edge belongs to g");
    let copies: Vec<Vec<usize>> = found
        .copies
        .iter()
        .map(|c| c.edges(h).into_iter().map(index).collect())
        .collect();
    let upper = greedy_deletion_upper_bound(g, &pattern);
    let mut st = HittingSet {
        copies: &copies,
        chosen: vec![false; edges.len()],
        forbidden: vec![false; edges.len()],
        current: Vec::new(),
        best: Vec::new(),
        best_size: upper + 1,
        nodes: 0,
        max_nodes: limits.max_nodes,
        out_of_budget: false,
    };
    st.search(edges.len());
    if st.out_of_budget {
        let upper = if st.best_size <= upper { st.best_size } else { upper };
        return Ok(Distance::Bounds { lower, upper });
    }
    debug_assert!(st.best_size <= upper);
    let mut deletion: Vec<Edge> = st.best.iter().map(|&i| edges[i]).collect();
    deletion.sort_unstable();
    Ok(Distance::Exact {
        value: st.best_size,
        packing_lower_bound: lower,
        deletion,
    })
}
