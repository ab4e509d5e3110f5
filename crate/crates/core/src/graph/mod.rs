//! Simple undirected graphs, vertex orders and ordered subgraphs.
//!
//! A [`Graph`] never carries an order; analysis code attaches one through
//! [`OrderedGraph`]. Vertex ids are dense `0..n`.

mod distance;
mod enumerate;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use distance::{distance_to_h_freeness, greedy_edge_disjoint_packing, Distance, DistanceLimits};
pub use enumerate::{
    enumerate_h_subgraphs, find_h_copies, CopyEnumeration, HCopy, Pattern, PatternError,
    SubgraphEnumeration,
};

pub type VertexId = usize;

/// Undirected edge with endpoints stored as `(min, max)` by id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn low(self) -> VertexId {
        self.0
    }

    pub fn high(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn other(self, v: VertexId) -> VertexId {
        if v == self.0 {
            self.1
        } else {
            self.0
        }
    }

    pub fn touches(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("order covers {order} vertices but the graph has {graph}")]
    OrderSizeMismatch { order: usize, graph: usize },
    #[error("vertex {0} listed twice")]
    RepeatedVertex(VertexId),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.0, e.1)
    }

    /// All edges in increasing `(low, high)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| Edge(u, v))
        })
    }

    pub fn vertices(&self) -> core::ops::Range<VertexId> {
        0..self.n()
    }

    pub fn try_add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u, v)),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(())
            }
        }
    }

    /// Inserts the edge if absent; returns whether it was inserted.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        self.try_add_edge(u, v).is_ok()
    }

    /// Removes the edge if present; returns whether it was present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let i = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(i);
        let j = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(j);
        self.m -= 1;
        true
    }

    pub fn add_vertices(&mut self, k: usize) -> core::ops::Range<VertexId> {
        let start = self.n();
        self.adj.resize(start + k, Vec::new());
        start..start + k
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        let off = g.add_vertices(other.n()).start;
        for e in other.edges() {
            g.insert_edge(e.0 + off, e.1 + off);
        }
        g
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> Graph {
        let mut g = Graph::empty(self.n());
        for e in self.edges() {
            g.insert_edge(perm[e.0], perm[e.1]);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<VertexId> = self.vertices().collect();
        is_connected_within(self, &all)
    }

    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in self.neighbors(x) {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Whether the subgraph induced on `vertices` is connected (the empty set is not).
pub(crate) fn is_connected_within(g: &Graph, vertices: &[VertexId]) -> bool {
    let Some(&first) = vertices.first() else {
        return false;
    };
    let inside: BTreeSet<VertexId> = vertices.iter().copied().collect();
    let mut seen = BTreeSet::new();
    seen.insert(first);
    let mut stack = vec![first];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if inside.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == inside.len()
}

/// A total order on `0..n`, stored as rank-of-vertex and vertex-at-rank.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexOrder {
    rank: Vec<usize>,
    sequence: Vec<VertexId>,
}

impl fmt::Debug for VertexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("VertexOrder").field(&self.sequence).finish()
    }
}

impl VertexOrder {
    pub fn identity(n: usize) -> Self {
        VertexOrder {
            rank: (0..n).collect(),
            sequence: (0..n).collect(),
        }
    }

    /// `sequence[i]` is the vertex of rank `i` (smallest first).
    pub fn from_sequence(sequence: Vec<VertexId>) -> Result<Self, GraphError> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in sequence.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(GraphError::NotAPermutation(n));
            }
            rank[v] = i;
        }
        Ok(VertexOrder { rank, sequence })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    #[inline]
    pub fn rank(&self, v: VertexId) -> usize {
        self.rank[v]
    }

    pub fn vertex_at(&self, rank: usize) -> VertexId {
        self.sequence[rank]
    }

    pub fn sequence(&self) -> &[VertexId] {
        &self.sequence
    }

    #[inline]
    pub fn less(&self, u: VertexId, v: VertexId) -> bool {
        self.rank[u] < self.rank[v]
    }

    pub fn max_of<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> Option<VertexId> {
        vs.into_iter().copied().max_by_key(|&v| self.rank[v])
    }

    pub fn min_of<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> Option<VertexId> {
        vs.into_iter().copied().min_by_key(|&v| self.rank[v])
    }

    /// Sorts `vs` ascending in this order.
    pub fn sort(&self, vs: &mut [VertexId]) {
        vs.sort_unstable_by_key(|&v| self.rank[v]);
    }
}

/// A graph together with a total order of its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGraph {
    pub graph: Graph,
    pub order: VertexOrder,
}

impl OrderedGraph {
    pub fn new(graph: Graph, order: VertexOrder) -> Result<Self, GraphError> {
        if graph.n() != order.len() {
            return Err(GraphError::OrderSizeMismatch {
                order: order.len(),
                graph: graph.n(),
            });
        }
        Ok(OrderedGraph { graph, order })
    }

    pub fn with_identity_order(graph: Graph) -> Self {
        let order = VertexOrder::identity(graph.n());
        OrderedGraph { graph, order }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    #[inline]
    pub fn less(&self, u: VertexId, v: VertexId) -> bool {
        self.order.less(u, v)
    }

    pub fn whole(&self) -> OrderedSubgraph {
        let all: Vec<VertexId> = self.graph.vertices().collect();
        OrderedSubgraph::from_parts(self, all, self.graph.edges().collect())
    }
}

/// An ordered subgraph of some host. Vertices are listed ascending in the
/// inherited order, so order comparisons inside the subgraph are positional.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedSubgraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
}

impl OrderedSubgraph {
    /// `edges` must lie within `vertices`; both are normalised here.
    pub fn from_parts(host: &OrderedGraph, mut vertices: Vec<VertexId>, mut edges: Vec<Edge>) -> Self {
        host.order.sort(&mut vertices);
        edges.sort_unstable();
        edges.dedup();
        OrderedSubgraph { vertices, edges }
    }

    /// Vertices ascending in the host order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.binary_search(&Edge::new(u, v)).is_ok()
    }

    /// Position of `v` in the inherited order of this subgraph.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn min_vertex(&self) -> Option<VertexId> {
        self.vertices.first().copied()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertices.last().copied()
    }

    pub fn neighbors_within(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.touches(v))
            .map(move |e| e.other(v))
    }

    /// Edges as pairs of positions, each pair `(i, j)` with `i < j`.
    pub fn positional_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                let a = self.position(e.0).unwrap();
                let b = self.position(e.1).unwrap();
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The subgraph induced (inside this subgraph) on `keep`.
    pub fn induced(&self, keep: &[VertexId]) -> OrderedSubgraph {
        let vertices: Vec<VertexId> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| keep.contains(v))
            .collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep.contains(&e.0) && keep.contains(&e.1))
            .collect();
        OrderedSubgraph { vertices, edges }
    }

    /// Whether the graph on `subset` (edges of this subgraph) is connected.
    pub fn is_connected_on(&self, subset: &[VertexId]) -> bool {
        let Some(&first) = subset.first() else {
            return false;
        };
        let mut seen = vec![first];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            i += 1;
            for y in self.neighbors_within(x) {
                if subset.contains(&y) && !seen.contains(&y) {
                    seen.push(y);
                }
            }
        }
        seen.len() == subset.len()
    }

    /// The subgraph as a standalone graph on positions `0..k`.
    pub fn to_positional_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count(), self.positional_edges())
            .expect("positional edges are simple")
    }
}

/// Subgraph of `g` induced on `s`, with the inherited order.
pub fn induced_ordered_subgraph(g: &OrderedGraph, s: &[VertexId]) -> Result<OrderedSubgraph, GraphError> {
    let mut vertices = Vec::with_capacity(s.len());
    let mut seen = BTreeSet::new();
    for &v in s {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n() });
        }
        if !seen.insert(v) {
            return Err(GraphError::RepeatedVertex(v));
        }
        vertices.push(v);
    }
    let mut edges = Vec::new();
    for &u in &vertices {
        for &w in g.graph.neighbors(u) {
            if u < w && seen.contains(&w) {
                edges.push(Edge(u, w));
            }
        }
    }
    Ok(OrderedSubgraph::from_parts(g, vertices, edges))
}

/// Order-respecting bijection between two ordered subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderIsomorphism {
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl OrderIsomorphism {
    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.pairs.iter().find(|p| p.0 == v).map(|p| p.1)
    }
}

/// A total order leaves exactly one candidate bijection (pair by position);
/// returns it when it is a graph isomorphism.
pub fn is_order_isomorphic(j1: &OrderedSubgraph, j2: &OrderedSubgraph) -> Option<OrderIsomorphism> {
    if j1.vertex_count() != j2.vertex_count() || j1.edges.len() != j2.edges.len() {
        return None;
    }
    if j1.positional_edges() != j2.positional_edges() {
        return None;
    }
    Some(OrderIsomorphism {
        pairs: j1
            .vertices
            .iter()
            .copied()
            .zip(j2.vertices.iter().copied())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(1, 0))
        );
        assert_eq!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::from_edges(4, [(3, 0), (1, 0), (2, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(0, 3) && g.has_edge(3, 0));
        let mut h = g.clone();
        assert!(h.remove_edge(0, 3));
        assert!(!h.has_edge(3, 0));
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn order_round_trip() {
        let o = VertexOrder::from_sequence(vec![2, 0, 1]).unwrap();
        assert_eq!(o.rank(2), 0);
        assert!(o.less(2, 0));
        for r in 0..3 {
            assert_eq!(o.rank(o.vertex_at(r)), r);
        }
        assert!(VertexOrder::from_sequence(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = OrderedGraph::with_identity_order(k(3));
        let s = induced_ordered_subgraph(&tri, &[0, 1]).unwrap();
        assert_eq!(s.edges(), &[Edge::new(0, 1)]);
        assert_eq!(induced_ordered_subgraph(&tri, &[0, 1, 2]).unwrap(), tri.whole());

        let k4 = OrderedGraph::with_identity_order(k(4));
        let s = induced_ordered_subgraph(&k4, &[0, 1, 2]).unwrap();
        // brute force: every pair of the chosen vertices is adjacent in K4
        let mut expected = Vec::new();
        for u in 0..3 {
            for v in u + 1..3 {
                if k4.graph.has_edge(u, v) {
                    expected.push(Edge::new(u, v));
                }
            }
        }
        assert_eq!(s.edges(), expected.as_slice());
        assert!(induced_ordered_subgraph(&k4, &[0, 9]).is_err());
    }

    #[test]
    fn inherited_order_is_host_order() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let og = OrderedGraph::new(g, VertexOrder::from_sequence(vec![2, 1, 0]).unwrap()).unwrap();
        let s = induced_ordered_subgraph(&og, &[0, 2, 1]).unwrap();
        assert_eq!(s.vertices(), &[2, 1, 0]);
    }

    #[test]
    fn order_isomorphism_examples() {
        let g = Graph::from_edges(6, [(0, 1), (2, 3), (0, 2)]).unwrap();
        let og = OrderedGraph::with_identity_order(g);
        let a = induced_ordered_subgraph(&og, &[0, 1]).unwrap();
        let b = induced_ordered_subgraph(&og, &[2, 3]).unwrap();
        let iso = is_order_isomorphic(&a, &b).unwrap();
        assert_eq!(iso.pairs, vec![(0, 2), (1, 3)]);
        let same = is_order_isomorphic(&a, &a).unwrap();
        assert_eq!(same.pairs, vec![(0, 0), (1, 1)]);

        // a<b<c with {ab, bc} versus {ac, bc}
        let p = Graph::from_edges(6, [(0, 1), (1, 2), (3, 5), (4, 5)]).unwrap();
        let op = OrderedGraph::with_identity_order(p);
        let j1 = induced_ordered_subgraph(&op, &[0, 1, 2]).unwrap();
        let j2 = induced_ordered_subgraph(&op, &[3, 4, 5]).unwrap();
        assert!(is_order_isomorphic(&j1, &j2).is_none());
    }
}
