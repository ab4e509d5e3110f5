//! Brute-force reference implementations, written directly from the
//! definitions and sharing no code with the library's search routines.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hfree_core::generators::{gnp, random_order};
use hfree_core::graph::{Graph, OrderedGraph, VertexId};

pub fn random_ordered(n: usize, q: f64, seed: u64) -> OrderedGraph {
    let g = gnp(n, q, seed);
    OrderedGraph::new(g, random_order(n, seed ^ 0xA5A5)).unwrap()
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.insert_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

fn lt(g: &OrderedGraph, a: VertexId, b: VertexId) -> bool {
    g.order.rank(a) < g.order.rank(b)
}

fn is_walkable(g: &OrderedGraph, p: &[VertexId]) -> bool {
    let distinct: BTreeSet<_> = p.iter().collect();
    distinct.len() == p.len() && p.windows(2).all(|w| g.graph.has_edge(w[0], w[1]))
}

/// Admissible in shape, with no length bound.
pub fn admissible_shape(g: &OrderedGraph, p: &[VertexId]) -> bool {
    p.len() >= 2
        && is_walkable(g, p)
        && lt(g, p[p.len() - 1], p[0])
        && p[1..p.len() - 1].iter().all(|&w| lt(g, p[0], w))
}

pub fn admissible(g: &OrderedGraph, p: &[VertexId], r: usize) -> bool {
    admissible_shape(g, p) && p.len() - 1 <= r
}

/// Every simple path starting at `v` with between 1 and `len` edges.
pub fn simple_paths_from(g: &OrderedGraph, v: VertexId, len: usize) -> Vec<Vec<VertexId>> {
    fn go(g: &OrderedGraph, cur: &mut Vec<VertexId>, len: usize, out: &mut Vec<Vec<VertexId>>) {
        if cur.len() > 1 {
            out.push(cur.clone());
        }
        if cur.len() - 1 == len {
            return;
        }
        let last = *cur.last().unwrap();
        for &w in g.graph.neighbors(last) {
            if !cur.contains(&w) {
                cur.push(w);
                go(g, cur, len, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![v], len, &mut out);
    out
}

pub fn admissible_paths(g: &OrderedGraph, v: VertexId, r: usize) -> Vec<Vec<VertexId>> {
    simple_paths_from(g, v, r)
        .into_iter()
        .filter(|p| admissible(g, p, r))
        .collect()
}

pub fn target(g: &OrderedGraph, v: VertexId, i: usize) -> BTreeSet<VertexId> {
    admissible_paths(g, v, i).iter().map(|p| *p.last().unwrap()).collect()
}

/// Largest family of admissible paths from `v` whose vertices after the root
/// are pairwise disjoint, by listing every family of pairwise disjoint path
/// vertex sets. Only the sets matter, so duplicates are merged first.
pub fn packing_size(g: &OrderedGraph, v: VertexId, r: usize) -> usize {
    let sets: BTreeSet<BTreeSet<VertexId>> = admissible_paths(g, v, r)
        .into_iter()
        .map(|p| p[1..].iter().copied().collect())
        .collect();
    let sets: Vec<BTreeSet<VertexId>> = sets.into_iter().collect();
    fn best(sets: &[BTreeSet<VertexId>], start: usize, used: &mut BTreeSet<VertexId>) -> usize {
        let mut top = 0;
        for i in start..sets.len() {
            if sets[i].is_disjoint(used) {
                used.extend(sets[i].iter().copied());
                top = top.max(1 + best(sets, i + 1, used));
                for x in &sets[i] {
                    used.remove(x);
                }
            }
        }
        top
    }
    best(&sets, 0, &mut BTreeSet::new())
}

pub fn admissibility(g: &OrderedGraph, r: usize) -> usize {
    g.graph.vertices().map(|v| packing_size(g, v, r)).max().unwrap_or(0)
}

/// Largest minimum degree met while repeatedly deleting a minimum-degree vertex.
pub fn degeneracy(g: &Graph) -> usize {
    let mut alive: BTreeSet<VertexId> = g.vertices().collect();
    let mut best = 0;
    while !alive.is_empty() {
        let deg = |v: VertexId| g.neighbors(v).iter().filter(|w| alive.contains(w)).count();
        let v = *alive.iter().min_by_key(|&&v| deg(v)).unwrap();
        best = best.max(deg(v));
        alive.remove(&v);
    }
    best
}

pub fn is_chain(g: &OrderedGraph, p: &[VertexId], r: usize) -> bool {
    if p.len() < 2 || !is_walkable(g, p) {
        return false;
    }
    let end = p[p.len() - 1];
    if !p[..p.len() - 1].iter().all(|&w| lt(g, end, w)) {
        return false;
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if j - i <= r {
                continue;
            }
            let fwd = &p[i..=j];
            let bwd: Vec<VertexId> = fwd.iter().rev().copied().collect();
            if admissible_shape(g, fwd) || admissible_shape(g, &bwd) {
                return false;
            }
        }
    }
    true
}

/// Endpoints of all chains from `x` with at most `len` edges.
pub fn chain_endpoints(g: &OrderedGraph, x: VertexId, len: usize, r: usize) -> BTreeSet<VertexId> {
    simple_paths_from(g, x, len)
        .into_iter()
        .filter(|p| is_chain(g, p, r))
        .map(|p| *p.last().unwrap())
        .collect()
}

/// Every way of cutting `p` into consecutive admissible segments.
pub fn admissible_segmentations(g: &OrderedGraph, p: &[VertexId], r: usize) -> Vec<Vec<Vec<VertexId>>> {
    let k = p.len() - 1;
    let mut out = Vec::new();
    for cuts in 0u32..(1 << k.saturating_sub(1)) {
        let mut junctions = vec![0];
        junctions.extend((1..k).filter(|i| cuts >> (i - 1) & 1 == 1));
        junctions.push(k);
        let segs: Vec<Vec<VertexId>> = junctions.windows(2).map(|w| p[w[0]..=w[1]].to_vec()).collect();
        if segs.iter().all(|s| admissible(g, s, r)) {
            out.push(segs);
        }
    }
    out
}

/// Whether deleting `k` edges can destroy every copy of `h`, by trying all edge subsets.
pub fn h_free_after_some_deletion(g: &Graph, h: &Graph, k: usize) -> bool {
    let edges: Vec<_> = g.edges().collect();
    fn choose(
        g: &Graph,
        h: &Graph,
        edges: &[hfree_core::graph::Edge],
        start: usize,
        k: usize,
        removed: &mut Vec<hfree_core::graph::Edge>,
    ) -> bool {
        let mut cur = g.clone();
        for e in removed.iter() {
            cur.remove_edge(e.low(), e.high());
        }
        if contains_copy(&cur, h) {
            if k == 0 {
                return false;
            }
            for i in start..edges.len() {
                removed.push(edges[i]);
                if choose(g, h, edges, i + 1, k - 1, removed) {
                    return true;
                }
                removed.pop();
            }
            return false;
        }
        true
    }
    choose(g, h, &edges, 0, k, &mut Vec::new())
}

/// Injective edge-preserving map search, straight recursion over host vertices.
pub fn contains_copy(g: &Graph, h: &Graph) -> bool {
    count_maps(g, h, true) > 0
}

/// Number of injective edge-preserving maps from `h` into `g`.
pub fn count_maps(g: &Graph, h: &Graph, stop_at_first: bool) -> usize {
    fn go(g: &Graph, h: &Graph, map: &mut Vec<VertexId>, stop: bool) -> usize {
        let x = map.len();
        if x == h.n() {
            return 1;
        }
        let mut total = 0;
        for v in g.vertices() {
            if map.contains(&v) {
                continue;
            }
            if h.neighbors(x).iter().filter(|&&y| y < x).all(|&y| g.has_edge(map[y], v)) {
                map.push(v);
                total += go(g, h, map, stop);
                map.pop();
                if stop && total > 0 {
                    return total;
                }
            }
        }
        total
    }
    go(g, h, &mut Vec::new(), stop_at_first)
}

pub fn automorphisms(h: &Graph) -> usize {
    count_maps(h, h, false)
}
