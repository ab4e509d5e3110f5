//! Admissible paths, target sets, path packings, admissibility of orders and
//! graphs, and chains.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::flow::disjoint_paths_bound;
use crate::graph::{Graph, OrderedGraph, VertexId, VertexOrder};
use crate::search::{max_compatible_family, FamilyProblem};

/// Largest graph accepted by [`exact_admissibility`] unless a cap is given.
pub const EXACT_ADMISSIBILITY_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdmissibilityError {
    #[error("a path needs at least one vertex")]
    EmptyPath,
    #[error("vertex {0} repeats in the path")]
    RepeatedVertex(VertexId),
    #[error("vertex {vertex} is not in a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("path uses {0}-{1}, which is not an edge")]
    MissingEdge(VertexId, VertexId),
    #[error("more than {limit} admissible paths start at vertex {root}")]
    PathLimit { root: VertexId, limit: usize },
    #[error("packing search at vertex {root} exceeded its node budget")]
    SearchBudget { root: VertexId },
    #[error("exact admissibility is capped at {cap} vertices (got {n}); use greedy_admissibility_order")]
    TooLarge { n: usize, cap: usize },
    #[error("path is not a chain")]
    NotAChain,
}

type Result<T> = core::result::Result<T, AdmissibilityError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibilityLimits {
    /// Admissible paths enumerated per root.
    pub max_paths: usize,
    /// Branch-and-bound nodes per packing.
    pub max_search_nodes: u64,
}

impl Default for AdmissibilityLimits {
    fn default() -> Self {
        AdmissibilityLimits {
            max_paths: 1_000_000,
            max_search_nodes: 50_000_000,
        }
    }
}

/// A simple path, given by its vertex sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Path(Vec<VertexId>);

impl Path {
    pub fn new(vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(AdmissibilityError::EmptyPath);
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(AdmissibilityError::RepeatedVertex(*v));
            }
        }
        Ok(Path(vertices))
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> VertexId {
        self.0[0]
    }

    pub fn end(&self) -> VertexId {
        *self.0.last().unwrap()
    }

    pub fn internal(&self) -> &[VertexId] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    /// Vertices `i..=j`, reversed when `i > j`.
    pub fn slice(&self, i: usize, j: usize) -> Path {
        if i <= j {
            Path(self.0[i..=j].to_vec())
        } else {
            let mut v = self.0[j..=i].to_vec();
            v.reverse();
            Path(v)
        }
    }

    fn check_in(&self, g: &Graph) -> Result<()> {
        for &v in &self.0 {
            if v >= g.n() {
                return Err(AdmissibilityError::VertexOutOfRange { vertex: v, n: g.n() });
            }
        }
        for w in self.0.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(AdmissibilityError::MissingEdge(w[0], w[1]));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPacking {
    pub root: VertexId,
    pub paths: Vec<Path>,
}

impl PathPacking {
    pub fn size(&self) -> usize {
        self.paths.len()
    }
}

fn admissible_shape(order: &VertexOrder, vs: &[VertexId]) -> bool {
    let (start, end) = (vs[0], vs[vs.len() - 1]);
    vs.len() >= 2 && order.less(end, start) && vs[1..vs.len() - 1].iter().all(|&x| order.less(start, x))
}

/// End below the start, internal vertices above it, at most `r` edges.
pub fn is_admissible_path(g: &OrderedGraph, p: &Path, r: usize) -> Result<bool> {
    p.check_in(&g.graph)?;
    Ok(p.len() <= r && admissible_shape(&g.order, p.vertices()))
}

/// Endpoints of admissible paths from `v` of length at most `i`, ascending by id.
///
/// A shortest walk from `v` through vertices above `v` is a simple path, so
/// breadth-first distances in that region decide reachability exactly.
pub fn target_set(g: &OrderedGraph, v: VertexId, i: usize) -> Vec<VertexId> {
    target_set_in(&g.graph, v, i, &|x| g.order.less(v, x), &|x| g.order.less(x, v))
}

fn target_set_in(
    g: &Graph,
    v: VertexId,
    i: usize,
    above: &dyn Fn(VertexId) -> bool,
    below: &dyn Fn(VertexId) -> bool,
) -> Vec<VertexId> {
    if i == 0 {
        return Vec::new();
    }
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut frontier = vec![v];
    let mut out = BitSet::new(g.n());
    let mut d = 0;
    // `frontier` holds vertices at distance d; each may take one descending step
    while !frontier.is_empty() && d < i {
        let mut next = Vec::new();
        for &x in &frontier {
            for &y in g.neighbors(x) {
                if below(y) {
                    out.insert(y);
                } else if above(y) && !dist.contains_key(&y) && d + 1 < i {
                    dist.insert(y, d + 1);
                    next.push(y);
                }
            }
        }
        frontier = next;
        d += 1;
    }
    out.iter().collect()
}

/// Every admissible path from `v` of length at most `r`, in depth-first order.
pub fn admissible_paths(
    g: &OrderedGraph,
    v: VertexId,
    r: usize,
    limits: &AdmissibilityLimits,
) -> Result<Vec<Path>> {
    let above = |x| g.order.less(v, x);
    Ok(enumerate_paths(&g.graph, v, r, &above, limits)?
        .into_iter()
        .map(Path)
        .collect())
}

fn enumerate_paths(
    g: &Graph,
    v: VertexId,
    r: usize,
    above: &dyn Fn(VertexId) -> bool,
    limits: &AdmissibilityLimits,
) -> Result<Vec<Vec<VertexId>>> {
    fn go(
        g: &Graph,
        r: usize,
        above: &dyn Fn(VertexId) -> bool,
        limits: &AdmissibilityLimits,
        path: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) -> Result<()> {
        let x = *path.last().unwrap();
        let d = path.len() - 1;
        for &y in g.neighbors(x) {
            if path.contains(&y) {
                continue;
            }
            if above(y) {
                if d + 1 < r {
                    path.push(y);
                    go(g, r, above, limits, path, out)?;
                    path.pop();
                }
            } else {
                if out.len() == limits.max_paths {
                    return Err(AdmissibilityError::PathLimit {
                        root: path[0],
                        limit: limits.max_paths,
                    });
                }
                let mut p = path.clone();
                p.push(y);
                out.push(p);
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    if r > 0 {
        go(g, r, above, limits, &mut vec![v], &mut out)?;
    }
    Ok(out)
}

/// Maximum packing from `v` where "above v" is given by a predicate, so the
/// same routine serves fixed orders and partial orders under construction.
fn packing_with(
    g: &Graph,
    v: VertexId,
    r: usize,
    above: &dyn Fn(VertexId) -> bool,
    limits: &AdmissibilityLimits,
) -> Result<Vec<Vec<VertexId>>> {
    let below = |x: VertexId| x != v && !above(x);
    let flow = disjoint_paths_bound(g, v, above, &below);
    if flow == 0 {
        return Ok(Vec::new());
    }
    let mut paths = enumerate_paths(g, v, r, above, limits)?;
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    // a path whose vertex set contains another's can always be swapped for it
    let mut kept: Vec<(Vec<VertexId>, BitSet)> = Vec::new();
    for p in paths {
        let mut set = BitSet::new(g.n());
        for &x in &p[1..] {
            set.insert(x);
        }
        let dominated = kept.iter().any(|(q, qs)| {
            q.last() == p.last() && qs.iter().all(|x| set.contains(x))
        });
        if !dominated {
            kept.push((p, set));
        }
    }

    let mut endpoint_class: BTreeMap<VertexId, usize> = BTreeMap::new();
    let classes: Vec<usize> = kept
        .iter()
        .map(|(p, _)| {
            let k = endpoint_class.len();
            *endpoint_class.entry(*p.last().unwrap()).or_insert(k)
        })
        .collect();
    let mut by_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (i, (p, _)) in kept.iter().enumerate() {
        for &x in &p[1..] {
            by_vertex.entry(x).or_default().push(i);
        }
    }
    let mut conflicts = vec![BitSet::new(kept.len()); kept.len()];
    for group in by_vertex.values() {
        for &a in group {
            for &b in group {
                if a != b {
                    conflicts[a].insert(b);
                }
            }
        }
    }
    let bound = flow.min(endpoint_class.len());
    let chosen = max_compatible_family(&FamilyProblem {
        conflicts: &conflicts,
        classes: Some(&classes),
        upper_bound: Some(bound),
        max_nodes: limits.max_search_nodes,
    })
    .map_err(|_| AdmissibilityError::SearchBudget { root: v })?;
    Ok(chosen.into_iter().map(|i| kept[i].0.clone()).collect())
}

/// Maximum admissible path packing rooted at `v`.
pub fn max_path_packing(g: &OrderedGraph, v: VertexId, r: usize) -> Result<PathPacking> {
    max_path_packing_with(g, v, r, &AdmissibilityLimits::default())
}

pub fn max_path_packing_with(
    g: &OrderedGraph,
    v: VertexId,
    r: usize,
    limits: &AdmissibilityLimits,
) -> Result<PathPacking> {
    let above = |x| g.order.less(v, x);
    let paths = packing_with(&g.graph, v, r, &above, limits)?;
    Ok(PathPacking {
        root: v,
        paths: paths.into_iter().map(Path).collect(),
    })
}

/// Largest packing size over all vertices.
pub fn admissibility_of_order(g: &OrderedGraph, r: usize) -> Result<usize> {
    admissibility_of_order_with(g, r, &AdmissibilityLimits::default())
}

pub fn admissibility_of_order_with(
    g: &OrderedGraph,
    r: usize,
    limits: &AdmissibilityLimits,
) -> Result<usize> {
    let mut best = 0;
    for v in g.graph.vertices() {
        best = best.max(max_path_packing_with(g, v, r, limits)?.size());
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityOrder {
    pub value: usize,
    pub order: VertexOrder,
}

/// Minimum admissibility over all orders of `g`, with a minimising order.
pub fn exact_admissibility(g: &Graph, r: usize) -> Result<AdmissibilityOrder> {
    exact_admissibility_capped(g, r, EXACT_ADMISSIBILITY_CAP)
}

/// The packing at `v` depends only on the set of vertices above it, so the
/// minimum over orders is a minimum over chains of subsets, built from the top.
pub fn exact_admissibility_capped(g: &Graph, r: usize, cap: usize) -> Result<AdmissibilityOrder> {
    let n = g.n();
    if n > cap || n >= 30 {
        return Err(AdmissibilityError::TooLarge { n, cap });
    }
    let limits = AdmissibilityLimits::default();
    let full = (1u32 << n) - 1;
    // value[mask]: best achievable max over vertices outside `mask`, given `mask` is on top
    let mut value = vec![0usize; 1 << n];
    let mut choice = vec![usize::MAX; 1 << n];
    for mask in (0..full).rev() {
        let mut best = usize::MAX;
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let above = |x: VertexId| mask & (1 << x) != 0;
            let pp = packing_with(g, v, r, &above, &limits)?.len();
            let val = pp.max(value[(mask | (1 << v)) as usize]);
            if val < best {
                best = val;
                choice[mask as usize] = v;
            }
        }
        value[mask as usize] = best;
    }
    let mut top_down = Vec::with_capacity(n);
    let mut mask = 0u32;
    while mask != full {
        let v = choice[mask as usize];
        top_down.push(v);
        mask |= 1 << v;
    }
    top_down.reverse();
    Ok(AdmissibilityOrder {
        value: if n == 0 { 0 } else { value[0] },
        order: VertexOrder::from_sequence(top_down).expect("every vertex placed once"),
    })
}

/// Builds an order from the top down, always placing next the vertex with
/// the smallest packing against the vertices already placed (ties by id).
pub fn greedy_admissibility_order(g: &Graph, r: usize) -> Result<AdmissibilityOrder> {
    let n = g.n();
    let limits = AdmissibilityLimits::default();
    let mut placed = BitSet::new(n);
    let mut pp = vec![0usize; n];
    for (v, slot) in pp.iter_mut().enumerate() {
        *slot = packing_with(g, v, r, &|x| placed.contains(x), &limits)?.len();
    }
    let mut top_down = Vec::with_capacity(n);
    let mut achieved = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&x| !placed.contains(x))
            .min_by_key(|&x| (pp[x], x))
            .unwrap();
        achieved = achieved.max(pp[v]);
        placed.insert(v);
        top_down.push(v);
        // only vertices within distance r of v can see their packing change
        let mut ball = vec![v];
        let mut seen = BitSet::new(n);
        seen.insert(v);
        for _ in 0..r {
            let mut next = Vec::new();
            for &x in &ball {
                for &y in g.neighbors(x) {
                    if !seen.contains(y) {
                        seen.insert(y);
                        next.push(y);
                    }
                }
            }
            ball.extend(next);
        }
        for u in seen.iter() {
            if !placed.contains(u) {
                pp[u] = packing_with(g, u, r, &|x| placed.contains(x), &limits)?.len();
            }
        }
    }
    top_down.reverse();
    Ok(AdmissibilityOrder {
        value: achieved,
        order: VertexOrder::from_sequence(top_down).expect("every vertex placed once"),
    })
}

/// Every vertex before the end lies above it, and no subpath (read in
/// either direction) is an admissible path longer than `r`.
pub fn is_chain(g: &OrderedGraph, p: &Path, r: usize) -> Result<bool> {
    p.check_in(&g.graph)?;
    let vs = p.vertices();
    let k = p.len();
    if k == 0 || !vs[..k].iter().all(|&w| g.order.less(vs[k], w)) {
        return Ok(false);
    }
    for a in 0..=k {
        for b in a + r + 1..=k {
            if admissible_shape(&g.order, &vs[a..=b]) {
                return Ok(false);
            }
            let mut rev = vs[a..=b].to_vec();
            rev.reverse();
            if admissible_shape(&g.order, &rev) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    pub segments: Vec<Path>,
}

impl ChainDecomposition {
    /// Concatenation of the segments, junctions counted once.
    pub fn concatenate(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            let skip = usize::from(i > 0);
            out.extend_from_slice(&s.vertices()[skip..]);
        }
        out
    }
}

/// Splits a chain into admissible segments; each junction is the first
/// later vertex below the current segment's start.
pub fn chain_decomposition(g: &OrderedGraph, p: &Path, r: usize) -> Result<ChainDecomposition> {
    if !is_chain(g, p, r)? {
        return Err(AdmissibilityError::NotAChain);
    }
    let vs = p.vertices();
    let mut segments = Vec::new();
    let mut s = 0;
    while s < p.len() {
        let j = (s + 1..vs.len())
            .find(|&j| g.order.less(vs[j], vs[s]))
            .expect("the chain end lies below every earlier vertex");
        segments.push(Path(vs[s..=j].to_vec()));
        s = j;
    }
    Ok(ChainDecomposition { segments })
}
