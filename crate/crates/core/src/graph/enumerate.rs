//! Backtracking enumeration of subgraphs isomorphic to a fixed pattern.
//!
//! Each copy is reported once: a complete vertex map is accepted only when
//! it is lexicographically smallest among its compositions with the
//! pattern's automorphisms.

use alloc::vec;
use alloc::vec::Vec;

use super::{Edge, Graph, OrderedGraph, OrderedSubgraph, VertexId};

/// Largest pattern accepted; automorphisms are found by exhaustive search.
pub const MAX_PATTERN_VERTICES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("pattern must have at least two vertices")]
    TooSmall,
    #[error("pattern must be connected")]
    Disconnected,
    #[error("pattern has {0} vertices; at most {MAX_PATTERN_VERTICES} are supported")]
    TooLarge(usize),
}

/// A connected pattern graph with precomputed search orders and automorphisms.
#[derive(Clone, Debug)]
pub struct Pattern {
    graph: Graph,
    /// `search_orders[root]` lists pattern vertices in BFS order from `root`.
    search_orders: Vec<Vec<VertexId>>,
    automorphisms: Vec<Vec<VertexId>>,
}

impl Pattern {
    pub fn new(h: &Graph) -> Result<Self, PatternError> {
        if h.n() < 2 {
            return Err(PatternError::TooSmall);
        }
        if h.n() > MAX_PATTERN_VERTICES {
            return Err(PatternError::TooLarge(h.n()));
        }
        if !h.is_connected() {
            return Err(PatternError::Disconnected);
        }
        let search_orders = (0..h.n()).map(|root| bfs_order(h, root)).collect();
        let mut pattern = Pattern {
            graph: h.clone(),
            search_orders,
            automorphisms: Vec::new(),
        };
        let mut autos = Vec::new();
        let mut st = Search::new(h, &pattern, None, usize::MAX, false);
        st.run_from_root(0, &mut |m| {
            if m.iter().enumerate().any(|(i, &x)| i != x) {
                autos.push(m.to_vec());
            }
        });
        pattern.automorphisms = autos;
        Ok(pattern)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// Number of automorphisms including the identity.
    pub fn automorphism_count(&self) -> usize {
        self.automorphisms.len() + 1
    }

    fn is_canonical(&self, map: &[VertexId]) -> bool {
        self.automorphisms
            .iter()
            .all(|sigma| sigma.iter().map(|&i| map[i]).cmp(map.iter().copied()).is_ge())
    }
}

fn bfs_order(h: &Graph, root: VertexId) -> Vec<VertexId> {
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for &y in h.neighbors(x) {
            if !order.contains(&y) {
                order.push(y);
            }
        }
    }
    order
}

/// One copy of the pattern inside a host graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HCopy {
    /// `map[x]` is the host vertex playing pattern vertex `x`.
    pub map: Vec<VertexId>,
}

impl HCopy {
    pub fn vertices(&self) -> Vec<VertexId> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }

    pub fn edges(&self, pattern: &Graph) -> Vec<Edge> {
        let mut e: Vec<Edge> = pattern
            .edges()
            .map(|e| Edge::new(self.map[e.low()], self.map[e.high()]))
            .collect();
        e.sort_unstable();
        e
    }
}

#[derive(Clone, Debug)]
pub struct CopyEnumeration {
    pub copies: Vec<HCopy>,
    /// False when the search stopped because more than `cap` copies exist.
    pub exhausted: bool,
}

#[derive(Clone, Debug)]
pub struct SubgraphEnumeration {
    pub subgraphs: Vec<OrderedSubgraph>,
    pub exhausted: bool,
}

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Pattern,
    anchor: Option<VertexId>,
    map: Vec<VertexId>,
    used: Vec<bool>,
    cap: usize,
    found: usize,
    stop: bool,
    canonical_only: bool,
}

const UNMAPPED: VertexId = usize::MAX;

impl<'a> Search<'a> {
    fn new(
        host: &'a Graph,
        pattern: &'a Pattern,
        anchor: Option<VertexId>,
        cap: usize,
        canonical_only: bool,
    ) -> Self {
        Search {
            host,
            pattern,
            anchor,
            map: vec![UNMAPPED; pattern.graph.n()],
            used: vec![false; host.n()],
            cap,
            found: 0,
            stop: false,
            canonical_only,
        }
    }

    fn run_from_root(&mut self, root: VertexId, emit: &mut dyn FnMut(&[VertexId])) {
        let order = self.pattern.search_orders[root].clone();
        let root_candidates: Vec<VertexId> = match self.anchor {
            Some(a) => vec![a],
            None => self.host.vertices().collect(),
        };
        for c in root_candidates {
            if self.stop {
                return;
            }
            if self.host.degree(c) < self.pattern.graph.degree(root) {
                continue;
            }
            self.assign(root, c);
            self.extend(&order, 1, emit);
            self.unassign(root, c);
        }
    }

    fn assign(&mut self, x: VertexId, c: VertexId) {
        self.map[x] = c;
        self.used[c] = true;
    }

    fn unassign(&mut self, x: VertexId, c: VertexId) {
        self.map[x] = UNMAPPED;
        self.used[c] = false;
    }

    fn extend(&mut self, order: &[VertexId], k: usize, emit: &mut dyn FnMut(&[VertexId])) {
        if self.stop {
            return;
        }
        if k == order.len() {
            if self.canonical_only && !self.pattern.is_canonical(&self.map) {
                return;
            }
            if self.found == self.cap {
                self.stop = true;
                return;
            }
            self.found += 1;
            emit(&self.map);
            return;
        }
        let x = order[k];
        let h = &self.pattern.graph;
        // some earlier vertex of a BFS order is adjacent to x
        let parent = h
            .neighbors(x)
            .iter()
            .copied()
            .find(|&y| self.map[y] != UNMAPPED)
            .expect("BFS order keeps the pattern connected");
        let candidates: Vec<VertexId> = self.host.neighbors(self.map[parent]).to_vec();
        for c in candidates {
            if self.used[c] || self.host.degree(c) < h.degree(x) {
                continue;
            }
            let ok = h
                .neighbors(x)
                .iter()
                .all(|&y| self.map[y] == UNMAPPED || self.host.has_edge(c, self.map[y]));
            if !ok {
                continue;
            }
            self.assign(x, c);
            self.extend(order, k + 1, emit);
            self.unassign(x, c);
            if self.stop {
                return;
            }
        }
    }
}

/// All copies of `pattern` in `g` (optionally only those using `anchor`),
/// in deterministic order, stopping once more than `cap` are found.
pub fn find_h_copies(
    g: &Graph,
    pattern: &Pattern,
    cap: usize,
    anchor: Option<VertexId>,
) -> CopyEnumeration {
    let mut copies = Vec::new();
    let mut st = Search::new(g, pattern, anchor, cap, true);
    let roots: Vec<VertexId> = match anchor {
        Some(_) => pattern.graph.vertices().collect(),
        None => vec![0],
    };
    for root in roots {
        st.run_from_root(root, &mut |m| copies.push(HCopy { map: m.to_vec() }));
        if st.stop {
            break;
        }
    }
    CopyEnumeration {
        exhausted: !st.stop,
        copies,
    }
}

/// H-subgraphs of `g` with inherited order; isomorphism ignores the order.
pub fn enumerate_h_subgraphs(
    g: &OrderedGraph,
    h: &Graph,
    cap: usize,
) -> Result<SubgraphEnumeration, PatternError> {
    let pattern = Pattern::new(h)?;
    let found = find_h_copies(&g.graph, &pattern, cap, None);
    Ok(SubgraphEnumeration {
        subgraphs: found
            .copies
            .iter()
            .map(|c| OrderedSubgraph::from_parts(g, c.vertices(), c.edges(h)))
            .collect(),
        exhausted: found.exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    fn star(k: usize) -> Graph {
        Graph::from_edges(k + 1, (1..=k).map(|i| (0, i))).unwrap()
    }

    #[test]
    fn pattern_validation() {
        assert_eq!(Pattern::new(&Graph::empty(1)).unwrap_err(), PatternError::TooSmall);
        assert_eq!(
            Pattern::new(&Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()).unwrap_err(),
            PatternError::Disconnected
        );
        assert_eq!(Pattern::new(&complete(3)).unwrap().automorphism_count(), 6);
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(Pattern::new(&p3).unwrap().automorphism_count(), 2);
    }

    #[test]
    fn triangle_counts() {
        let k3 = complete(3);
        let one = enumerate_h_subgraphs(&OrderedGraph::with_identity_order(complete(3)), &k3, 100).unwrap();
        assert_eq!(one.subgraphs.len(), 1);
        assert!(one.exhausted);
        let four = enumerate_h_subgraphs(&OrderedGraph::with_identity_order(complete(4)), &k3, 100).unwrap();
        assert_eq!(four.subgraphs.len(), 4);
        let none = enumerate_h_subgraphs(&OrderedGraph::with_identity_order(star(4)), &k3, 100).unwrap();
        assert!(none.subgraphs.is_empty());
    }

    #[test]
    fn cap_is_reported() {
        let r = enumerate_h_subgraphs(&OrderedGraph::with_identity_order(complete(4)), &complete(3), 2).unwrap();
        assert_eq!(r.subgraphs.len(), 2);
        assert!(!r.exhausted);
        let exact = enumerate_h_subgraphs(&OrderedGraph::with_identity_order(complete(4)), &complete(3), 4).unwrap();
        assert!(exact.exhausted);
    }

    #[test]
    fn anchored_search_only_returns_copies_through_anchor() {
        let g = complete(5);
        let pattern = Pattern::new(&complete(3)).unwrap();
        let all = find_h_copies(&g, &pattern, usize::MAX, Some(2));
        assert_eq!(all.copies.len(), 6); // C(4,2)
        assert!(all.copies.iter().all(|c| c.map.contains(&2)));
    }

    #[test]
    fn paths_in_a_square() {
        // C4 contains four P3 copies and one C4 copy
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let og = OrderedGraph::with_identity_order(c4.clone());
        assert_eq!(enumerate_h_subgraphs(&og, &p3, 100).unwrap().subgraphs.len(), 4);
        assert_eq!(enumerate_h_subgraphs(&og, &c4, 100).unwrap().subgraphs.len(), 1);
    }
}
