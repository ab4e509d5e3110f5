//! Prefixes, useful pairs, similarity, stratas, nadirs, spines and stable
//! sets over an ordered host graph and a connected pattern.
//!
//! A useful pair `(G', U)` taken from an H-subgraph `J` has a rigid shape:
//! `V(G') \ U` is a whole component `C` of `J - U`, and `U` is exactly the
//! neighbourhood of `C` in `J`, lying entirely below `C`. Host-wide
//! enumeration builds pairs that way; the exhaustive definitions are kept for
//! spines and for cross-checking.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bitset::BitSet;
use crate::graph::{find_h_copies, Edge, Graph, OrderedGraph, OrderedSubgraph, Pattern, VertexId};
use crate::search::{max_compatible_family, FamilyProblem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("the subgraph is not an induced subgraph of the host H-subgraph")]
    NotInduced,
    #[error("the vertex set is not contained in the subgraph")]
    NotSubset,
    #[error("the useful pair is empty")]
    EmptyPair,
    #[error("the strata has no members")]
    EmptyStrata,
    #[error("vertex {0} is not a nadir of the strata")]
    NotANadir(VertexId),
    #[error("more than {0} H-subgraphs through a vertex")]
    CopyLimit(usize),
    #[error("strata search exceeded its node budget")]
    SearchBudget,
}

type Result<T> = core::result::Result<T, StructureError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureLimits {
    pub max_copies: usize,
    pub max_search_nodes: u64,
}

impl Default for StructureLimits {
    fn default() -> Self {
        StructureLimits {
            max_copies: 200_000,
            max_search_nodes: 20_000_000,
        }
    }
}

/// An ordered subgraph together with a prefix. The prefix is kept ascending
/// in the host order, which makes it the first `|U|` vertices of the body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UsefulPair {
    body: OrderedSubgraph,
    prefix: Vec<VertexId>,
}

impl UsefulPair {
    /// Checks the definition against the H-subgraph `j`.
    pub fn new(j: &OrderedSubgraph, body: OrderedSubgraph, prefix: &[VertexId]) -> Result<Self> {
        if !is_useful_pair(j, &body, prefix)? {
            return Err(StructureError::NotInduced);
        }
        Ok(Self::assemble(body, prefix))
    }

    fn assemble(body: OrderedSubgraph, prefix: &[VertexId]) -> Self {
        let prefix = body
            .vertices()
            .iter()
            .copied()
            .filter(|v| prefix.contains(v))
            .collect();
        UsefulPair { body, prefix }
    }

    pub fn body(&self) -> &OrderedSubgraph {
        &self.body
    }

    pub fn prefix(&self) -> &[VertexId] {
        &self.prefix
    }

    pub fn max_prefix(&self) -> Option<VertexId> {
        self.prefix.last().copied()
    }

    /// Body vertices outside the prefix, ascending in the host order.
    pub fn rest(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.body.vertices().iter().copied().filter(|v| !self.prefix.contains(v))
    }

    pub fn similarity_key(&self) -> SimilarityKey {
        let mut prefix = self.prefix.clone();
        prefix.sort_unstable();
        SimilarityKey {
            prefix,
            size: self.body.vertex_count(),
            edges: self.body.positional_edges(),
        }
    }

    fn outside_prefix_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.body
            .edges()
            .iter()
            .copied()
            .filter(|e| !(self.prefix.contains(&e.low()) && self.prefix.contains(&e.high())))
    }
}

/// Two pairs are similar exactly when their keys agree: the prefix sets are
/// equal and the positional bijection is an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimilarityKey {
    pub prefix: Vec<VertexId>,
    pub size: usize,
    pub edges: Vec<(usize, usize)>,
}

fn check_induced(j: &OrderedSubgraph, g: &OrderedSubgraph) -> Result<()> {
    if !g.vertices().iter().all(|&v| j.contains(v)) {
        return Err(StructureError::NotInduced);
    }
    if j.induced(g.vertices()).edges() != g.edges() {
        return Err(StructureError::NotInduced);
    }
    Ok(())
}

/// The three prefix conditions for `d` in `g` inside the H-subgraph `j`.
pub fn is_prefix(j: &OrderedSubgraph, g: &OrderedSubgraph, d: &[VertexId]) -> Result<bool> {
    check_induced(j, g)?;
    if !d.iter().all(|&v| g.contains(v)) {
        return Err(StructureError::NotSubset);
    }
    if d.is_empty() {
        return Ok(false);
    }
    let rest: Vec<VertexId> = g.vertices().iter().copied().filter(|v| !d.contains(v)).collect();
    let has_outside_neighbour = d.iter().all(|&u| g.neighbors_within(u).any(|w| rest.contains(&w)));
    if !has_outside_neighbour {
        return Ok(false);
    }
    let pos = |v| g.position(v).unwrap();
    if !d.iter().all(|&u| rest.iter().all(|&w| pos(w) > pos(u))) {
        return Ok(false);
    }
    let boundary_in_d = g
        .vertices()
        .iter()
        .all(|&v| d.contains(&v) || j.neighbors_within(v).all(|w| g.contains(w)));
    Ok(boundary_in_d)
}

/// A prefix whose complement in the body induces a connected graph of `j`.
pub fn is_useful_pair(j: &OrderedSubgraph, g: &OrderedSubgraph, u: &[VertexId]) -> Result<bool> {
    if g.is_empty() {
        return Ok(false);
    }
    if !is_prefix(j, g, u)? {
        return Ok(false);
    }
    let rest: Vec<VertexId> = g.vertices().iter().copied().filter(|v| !u.contains(v)).collect();
    Ok(j.is_connected_on(&rest))
}

pub fn are_similar(p1: &UsefulPair, p2: &UsefulPair) -> bool {
    p1.similarity_key() == p2.similarity_key()
}

/// Smallest body vertex outside the prefix.
pub fn nadir(p: &UsefulPair) -> Result<VertexId> {
    p.rest().next().ok_or(StructureError::EmptyPair)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spine {
    pub pairs: Vec<UsefulPair>,
}

/// All useful pairs `(J[S], S ∩ U)`, by exhaustive search over `S ⊆ V(J)`.
pub fn spine(j: &OrderedSubgraph, u: &[VertexId]) -> Spine {
    let vs = j.vertices();
    let k = vs.len();
    assert!(k < 32, "spine enumeration is exhaustive over subsets");
    let mut pairs = Vec::new();
    for mask in 1u32..(1 << k) {
        let s: Vec<VertexId> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| vs[i]).collect();
        let prefix: Vec<VertexId> = s.iter().copied().filter(|v| u.contains(v)).collect();
        let body = j.induced(&s);
        if is_useful_pair(j, &body, &prefix).expect("induced by construction") {
            pairs.push(UsefulPair::assemble(body, &prefix));
        }
    }
    Spine { pairs }
}

/// Every vertex of `j` outside `u` lies in some spine body outside its prefix.
pub fn is_stable(j: &OrderedSubgraph, u: &[VertexId]) -> bool {
    let sp = spine(j, u);
    j.vertices()
        .iter()
        .filter(|v| !u.contains(v))
        .all(|&w| sp.pairs.iter().any(|p| p.rest().any(|x| x == w)))
}

/// Useful pairs of `j` with prefix exactly `u`, one per qualifying
/// component of `j - u`.
pub fn useful_pairs_with_prefix(j: &OrderedSubgraph, u: &[VertexId]) -> Vec<UsefulPair> {
    let rest: Vec<VertexId> = j.vertices().iter().copied().filter(|v| !u.contains(v)).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &rest {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        seen.insert(start);
        let mut i = 0;
        while i < comp.len() {
            let x = comp[i];
            i += 1;
            for y in j.neighbors_within(x) {
                if !u.contains(&y) && seen.insert(y) {
                    comp.push(y);
                }
            }
        }
        let mut boundary = BTreeSet::new();
        for &x in &comp {
            for y in j.neighbors_within(x) {
                if u.contains(&y) {
                    boundary.insert(y);
                }
            }
        }
        if boundary.len() != u.len() || u.is_empty() {
            continue;
        }
        let pos = |v| j.position(v).unwrap();
        let top_of_u = u.iter().map(|&x| pos(x)).max().unwrap();
        let bottom_of_c = comp.iter().map(|&x| pos(x)).min().unwrap();
        if top_of_u < bottom_of_c {
            let mut s = comp.clone();
            s.extend_from_slice(u);
            out.push(UsefulPair::assemble(j.induced(&s), u));
        }
    }
    out.sort();
    out
}

/// Host, pattern and degree source for strata searches. Degrees in all
/// thresholds come from `original`, which may differ from the host's graph.
#[derive(Clone, Copy)]
pub struct StrataContext<'a> {
    pub host: &'a OrderedGraph,
    pub original: &'a Graph,
    pub pattern: &'a Pattern,
    pub limits: StructureLimits,
}

impl<'a> StrataContext<'a> {
    pub fn new(host: &'a OrderedGraph, pattern: &'a Pattern) -> Self {
        StrataContext {
            host,
            original: &host.graph,
            pattern,
            limits: StructureLimits::default(),
        }
    }

    pub fn with_original(mut self, original: &'a Graph) -> Self {
        self.original = original;
        self
    }

    pub fn h_subgraphs_through(&self, v: VertexId) -> Result<Vec<OrderedSubgraph>> {
        let found = find_h_copies(&self.host.graph, self.pattern, self.limits.max_copies, Some(v));
        if !found.exhausted {
            return Err(StructureError::CopyLimit(self.limits.max_copies));
        }
        Ok(found
            .copies
            .iter()
            .map(|c| OrderedSubgraph::from_parts(self.host, c.vertices(), c.edges(self.pattern.graph())))
            .collect())
    }

    /// Every useful pair of the host (over all H-subgraphs) whose prefix has
    /// maximum `v`, deduplicated, in sorted order.
    pub fn useful_pairs_with_max(&self, v: VertexId) -> Result<Vec<UsefulPair>> {
        let mut out = BTreeSet::new();
        for j in self.h_subgraphs_through(v)? {
            let below: Vec<VertexId> = j
                .vertices()
                .iter()
                .copied()
                .take_while(|&x| x != v)
                .collect();
            assert!(below.len() < 32);
            for mask in 0u32..(1 << below.len()) {
                let mut u: Vec<VertexId> = (0..below.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| below[i])
                    .collect();
                u.push(v);
                out.extend(useful_pairs_with_prefix(&j, &u));
            }
        }
        Ok(out.into_iter().collect())
    }

    fn candidates(&self, u: &[VertexId], template: &UsefulPair) -> Result<Vec<UsefulPair>> {
        let key = template.similarity_key();
        let mut sorted_u = u.to_vec();
        sorted_u.sort_unstable();
        if sorted_u != key.prefix {
            return Ok(Vec::new());
        }
        let Some(top) = self.host.order.max_of(u) else {
            return Ok(Vec::new());
        };
        Ok(self
            .useful_pairs_with_max(top)?
            .into_iter()
            .filter(|p| p.similarity_key() == key)
            .collect())
    }

    /// Maximum strata with prefix `u` whose members are similar to `template`.
    pub fn max_strata(&self, u: &[VertexId], template: &UsefulPair) -> Result<Strata> {
        let cands = self.candidates(u, template)?;
        self.best_strata(u, cands)
    }

    /// Largest strata among the given candidates (all with prefix `u`).
    pub fn best_strata(&self, u: &[VertexId], cands: Vec<UsefulPair>) -> Result<Strata> {
        let chosen = max_family_outside_prefix(&cands, self.limits.max_search_nodes)?;
        let mut prefix = u.to_vec();
        self.host.order.sort(&mut prefix);
        Ok(Strata {
            prefix,
            members: chosen.into_iter().map(|i| cands[i].clone()).collect(),
        })
    }

    /// Size of the largest strata with prefix `u`, similar to `template`,
    /// whose only nadir is `v`.
    pub fn max_single_nadir_strata(&self, u: &[VertexId], template: &UsefulPair, v: VertexId) -> Result<Strata> {
        let cands: Vec<UsefulPair> = self
            .candidates(u, template)?
            .into_iter()
            .filter(|p| nadir(p) == Ok(v))
            .collect();
        self.best_strata(u, cands)
    }

    pub fn classify_nadir(&self, strata: &Strata, v: VertexId, delta: &BigRational) -> Result<NadirClass> {
        let template = strata.members.first().ok_or(StructureError::EmptyStrata)?;
        if !strata.nadirs().contains(&v) {
            return Err(StructureError::NotANadir(v));
        }
        let size = self.max_single_nadir_strata(&strata.prefix, template, v)?.members.len();
        let top = *strata.prefix.last().expect("nonempty prefix");
        Ok(classify_by_size(size, self.original.degree(top), delta))
    }
}

/// Weak iff `size ≤ deg/δ`, compared exactly as `size·δ ≤ deg`.
pub fn classify_by_size(size: usize, degree: usize, delta: &BigRational) -> NadirClass {
    let lhs = BigRational::from_integer(BigInt::from(size)) * delta;
    if lhs <= BigRational::from_integer(BigInt::from(degree)) {
        NadirClass::Weak
    } else {
        NadirClass::Strong
    }
}

/// Lexicographically least maximum subfamily whose members pairwise share
/// no edge outside the common prefix.
pub(crate) fn max_family_outside_prefix(cands: &[UsefulPair], max_nodes: u64) -> Result<Vec<usize>> {
    let n = cands.len();
    let mut conflicts = vec![BitSet::new(n); n];
    let edge_sets: Vec<BTreeSet<Edge>> = cands.iter().map(|c| c.outside_prefix_edges().collect()).collect();
    for a in 0..n {
        for b in a + 1..n {
            if !edge_sets[a].is_disjoint(&edge_sets[b]) {
                conflicts[a].insert(b);
                conflicts[b].insert(a);
            }
        }
    }
    max_compatible_family(&FamilyProblem {
        conflicts: &conflicts,
        classes: None,
        upper_bound: None,
        max_nodes,
    })
    .map_err(|_| StructureError::SearchBudget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NadirClass {
    Weak,
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    /// Ascending in the host order.
    pub prefix: Vec<VertexId>,
    pub members: Vec<UsefulPair>,
}

impl Strata {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Distinct nadirs, ascending by id.
    pub fn nadirs(&self) -> Vec<VertexId> {
        let set: BTreeSet<VertexId> = self.members.iter().filter_map(|m| nadir(m).ok()).collect();
        set.into_iter().collect()
    }

    /// Every edge of every member body, deduplicated.
    pub fn edges(&self) -> Vec<Edge> {
        let set: BTreeSet<Edge> = self
            .members
            .iter()
            .flat_map(|m| m.body.edges().iter().copied())
            .collect();
        set.into_iter().collect()
    }

    /// Checks the strata conditions: common prefix, pairwise similar, and
    /// edges shared only inside the prefix.
    pub fn is_valid(&self) -> bool {
        let Some(first) = self.members.first() else {
            return true;
        };
        let key = first.similarity_key();
        let sets: Vec<BTreeSet<Edge>> = self.members.iter().map(|m| m.outside_prefix_edges().collect()).collect();
        self.members.iter().all(|m| m.prefix == self.prefix && m.similarity_key() == key)
            && (0..sets.len()).all(|a| (a + 1..sets.len()).all(|b| sets[a].is_disjoint(&sets[b])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substrata {
    pub strata: Strata,
    /// Set when fewer than the requested number of members were found.
    pub shortfall: bool,
}

/// Greedily keeps members whose vertices outside the prefix avoid all
/// previously kept members.
pub fn extract_vertex_disjoint_substrata(strata: &Strata, target: usize) -> Substrata {
    let mut used = BTreeSet::new();
    let mut members = Vec::new();
    for m in &strata.members {
        let rest: Vec<VertexId> = m.rest().collect();
        if rest.iter().any(|v| used.contains(v)) {
            continue;
        }
        used.extend(rest);
        members.push(m.clone());
    }
    Substrata {
        shortfall: members.len() < target,
        strata: Strata {
            prefix: strata.prefix.clone(),
            members,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{induced_ordered_subgraph, VertexOrder};

    fn og(n: usize, edges: &[(usize, usize)]) -> OrderedGraph {
        OrderedGraph::with_identity_order(Graph::from_edges(n, edges.iter().copied()).unwrap())
    }

    fn whole(g: &OrderedGraph) -> OrderedSubgraph {
        g.whole()
    }

    #[test]
    fn prefix_examples() {
        let t = og(3, &[(0, 1), (1, 2), (0, 2)]);
        let j = whole(&t);
        assert!(is_prefix(&j, &j, &[0]).unwrap());
        assert!(!is_prefix(&j, &j, &[1]).unwrap());
        assert!(!is_prefix(&j, &j, &[0, 1, 2]).unwrap());
        assert!(!is_prefix(&j, &j, &[]).unwrap());
        assert!(is_useful_pair(&j, &j, &[0]).unwrap());
    }

    #[test]
    fn disconnected_rest_is_not_useful() {
        // prefix 0 joined to two separate edges
        let g = og(5, &[(0, 1), (1, 2), (0, 3), (3, 4)]);
        let j = whole(&g);
        assert!(is_prefix(&j, &j, &[0]).unwrap());
        assert!(!is_useful_pair(&j, &j, &[0]).unwrap());
        let empty = j.induced(&[]);
        assert!(!is_useful_pair(&j, &empty, &[]).unwrap());
    }

    #[test]
    fn nadir_examples() {
        let t = og(3, &[(0, 1), (1, 2), (0, 2)]);
        let j = whole(&t);
        let p = UsefulPair::new(&j, j.clone(), &[0]).unwrap();
        assert_eq!(nadir(&p), Ok(1));
        let e = og(2, &[(0, 1)]);
        let je = whole(&e);
        assert_eq!(nadir(&UsefulPair::new(&je, je.clone(), &[0]).unwrap()), Ok(1));
    }

    #[test]
    fn spine_examples() {
        let t = og(3, &[(0, 1), (1, 2), (0, 2)]);
        let j = whole(&t);
        let sp = spine(&j, &[0]);
        assert_eq!(sp.pairs.len(), 1);
        assert_eq!(sp.pairs[0].body(), &j);
        assert_eq!(sp.pairs[0].prefix(), &[0]);
        assert!(spine(&j, &[0, 1, 2]).pairs.is_empty());
        assert!(is_stable(&j, &[0]));
        assert!(is_stable(&j, &[0, 1, 2]));
        assert!(!is_stable(&j, &[1]));
    }

    #[test]
    fn component_construction_matches_exhaustive_search() {
        let g = og(6, &[(0, 1), (1, 2), (2, 3), (0, 3), (3, 4), (4, 5), (1, 5)]);
        let j = whole(&g);
        for mask in 1u32..64 {
            let u: Vec<VertexId> = (0..6).filter(|i| mask & (1 << i) != 0).collect();
            let exhaustive: Vec<UsefulPair> = spine(&j, &u)
                .pairs
                .into_iter()
                .filter(|p| p.prefix() == u.as_slice())
                .collect();
            let mut exhaustive = exhaustive;
            exhaustive.sort();
            assert_eq!(useful_pairs_with_prefix(&j, &u), exhaustive, "u = {u:?}");
        }
    }

    #[test]
    fn similarity_and_strata_on_shared_apex_triangles() {
        // triangles {a, x_i, y_i} with a = 6 on top of the order
        let mut edges = Vec::new();
        for i in 0..3 {
            let (x, y) = (2 * i, 2 * i + 1);
            edges.extend([(x, y), (x, 6), (y, 6)]);
        }
        let g = Graph::from_edges(7, edges).unwrap();
        let order = VertexOrder::from_sequence(vec![6, 0, 1, 2, 3, 4, 5]).unwrap();
        let host = OrderedGraph::new(g, order).unwrap();
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let pattern = Pattern::new(&k3).unwrap();
        let ctx = StrataContext::new(&host, &pattern);
        let pairs = ctx.useful_pairs_with_max(6).unwrap();
        let template = pairs.iter().find(|p| p.prefix() == [6]).unwrap().clone();
        assert!(pairs.iter().filter(|p| p.prefix() == [6]).all(|p| are_similar(p, &template)));
        let strata = ctx.max_strata(&[6], &template).unwrap();
        assert_eq!(strata.len(), 3);
        assert!(strata.is_valid());
        let sub = extract_vertex_disjoint_substrata(&strata, 2);
        assert_eq!(sub.strata.len(), 3);
        assert!(!sub.shortfall);
    }

    #[test]
    fn substrata_drops_members_sharing_a_vertex() {
        let g = og(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let a = UsefulPair::assemble(induced_ordered_subgraph(&g, &[0, 1, 3]).unwrap(), &[0]);
        let b = UsefulPair::assemble(induced_ordered_subgraph(&g, &[0, 2, 3]).unwrap(), &[0]);
        let s = Strata {
            prefix: vec![0],
            members: vec![a.clone(), b],
        };
        let out = extract_vertex_disjoint_substrata(&s, 2);
        assert_eq!(out.strata.members, vec![a]);
        assert!(out.shortfall);
    }

    #[test]
    fn classification_threshold_is_exact() {
        let four = BigRational::new(BigInt::from(16), BigInt::from(4));
        assert_eq!(classify_by_size(4, 16, &BigRational::from_integer(BigInt::from(4))), NadirClass::Weak);
        assert_eq!(classify_by_size(4, 16, &BigRational::from_integer(BigInt::from(5))), NadirClass::Strong);
        assert_eq!(classify_by_size(1, 4, &four), NadirClass::Weak);
    }
}
