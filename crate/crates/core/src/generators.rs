//! Seeded instance generators. Instances aimed at the tester come with a
//! certificate: an explicit order bounding the r-admissibility and an
//! edge-disjoint packing of pattern copies bounding the distance to H-freeness.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::admissibility::{admissibility_of_order, exact_admissibility, greedy_admissibility_order, AdmissibilityError};
use crate::graph::{Edge, Graph, HCopy, OrderedGraph, Pattern, PatternError, VertexId, VertexOrder};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("degree bound {d} is unattainable on {n} vertices")]
    DegreeUnattainable { n: usize, d: usize },
    #[error("{copies} edge-disjoint copies of a {h}-vertex pattern do not fit in {n} vertices")]
    Infeasible { copies: usize, h: usize, n: usize },
    #[error("epsilon must be positive")]
    Epsilon,
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Admissibility(#[from] AdmissibilityError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("packing member {0} is not a copy of the pattern")]
    NotACopy(usize),
    #[error("packing members {0} and {1} share edge {2:?}")]
    SharedEdge(usize, usize, Edge),
    #[error("packing has {found} members but {claimed} are claimed")]
    PackingSize { found: usize, claimed: usize },
    #[error("the order has admissibility {found}, above the claimed {claimed}")]
    Admissibility { found: usize, claimed: usize },
    #[error("the order does not cover the graph")]
    OrderSize,
    #[error(transparent)]
    Check(#[from] AdmissibilityError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceCertificate {
    pub generator: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub r: usize,
    /// `adm_r` of the graph under `order` is at most this.
    pub admissibility_bound: usize,
    pub order: VertexOrder,
    /// At least this many edges must be deleted to destroy every copy.
    pub farness_lower_bound: usize,
    pub packing: Vec<HCopy>,
}

/// Rechecks every claim of `cert` against `g`.
pub fn verify_certificate(g: &Graph, h: &Graph, cert: &InstanceCertificate) -> Result<(), CertificateError> {
    let mut owner: alloc::collections::BTreeMap<Edge, usize> = Default::default();
    for (i, c) in cert.packing.iter().enumerate() {
        let mut vs = c.map.clone();
        vs.sort_unstable();
        vs.dedup();
        if c.map.len() != h.n() || vs.len() != h.n() || vs.last().is_some_and(|&v| v >= g.n()) {
            return Err(CertificateError::NotACopy(i));
        }
        for e in c.edges(h) {
            if !g.contains_edge(e) {
                return Err(CertificateError::NotACopy(i));
            }
            if let Some(&j) = owner.get(&e) {
                return Err(CertificateError::SharedEdge(j, i, e));
            }
            owner.insert(e, i);
        }
    }
    if cert.packing.len() < cert.farness_lower_bound {
        return Err(CertificateError::PackingSize {
            found: cert.packing.len(),
            claimed: cert.farness_lower_bound,
        });
    }
    if cert.order.len() != g.n() {
        return Err(CertificateError::OrderSize);
    }
    let og = OrderedGraph::new(g.clone(), cert.order.clone()).map_err(|_| CertificateError::OrderSize)?;
    let found = admissibility_of_order(&og, cert.r)?;
    if found > cert.admissibility_bound {
        return Err(CertificateError::Admissibility {
            found,
            claimed: cert.admissibility_bound,
        });
    }
    Ok(())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: impl IntoIterator<Item = (VertexId, VertexId)>) -> Graph {
    let mut g = Graph::empty(n);
    for (u, v) in edges {
        g.insert_edge(u, v);
    }
    g
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs three vertices");
    let mut g = path(n);
    g.insert_edge(0, n - 1);
    g
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// Triangle 0-1-2 with a pendant vertex 3 on 2.
pub fn paw() -> Graph {
    build(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
}

/// `k` triangles sharing vertex 0.
pub fn friendship(k: usize) -> Graph {
    build(2 * k + 1, (0..k).flat_map(|i| [(0, 2 * i + 1), (0, 2 * i + 2), (2 * i + 1, 2 * i + 2)]))
}

/// `w × hgt` grid, vertex `(x, y)` numbered `y·w + x`.
pub fn grid(w: usize, hgt: usize) -> Graph {
    let mut g = Graph::empty(w * hgt);
    for y in 0..hgt {
        for x in 0..w {
            let v = y * w + x;
            if x + 1 < w {
                g.insert_edge(v, v + 1);
            }
            if y + 1 < hgt {
                g.insert_edge(v, v + w);
            }
        }
    }
    g
}

/// Replaces every edge by a path of `t` edges through `t − 1` new vertices.
pub fn subdivide(g: &Graph, t: usize) -> Graph {
    assert!(t >= 1, "subdivision length must be at least 1");
    if t == 1 {
        return g.clone();
    }
    let mut out = Graph::empty(g.n());
    for e in g.edges() {
        let fresh = out.add_vertices(t - 1);
        let mut prev = e.low();
        for x in fresh {
            out.insert_edge(prev, x);
            prev = x;
        }
        out.insert_edge(prev, e.high());
    }
    out
}

pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    build(n, (1..n).map(|v| (rng.gen_range(0..v), v)).collect::<Vec<_>>())
}

/// Erdős–Rényi `G(n, q)`.
pub fn gnp(n: usize, q: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(q) {
                g.insert_edge(u, v);
            }
        }
    }
    g
}

pub fn random_order(n: usize, seed: u64) -> VertexOrder {
    let mut seq: Vec<VertexId> = (0..n).collect();
    seq.shuffle(&mut rng(seed));
    VertexOrder::from_sequence(seq).expect("a permutation")
}

/// Random pairing of `d` stubs per vertex; loops and repeated pairs are dropped,
/// so the result is simple with maximum degree at most `d`.
pub fn random_bounded_degree(n: usize, d: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if d > 0 && d >= n {
        return Err(GeneratorError::DegreeUnattainable { n, d });
    }
    let mut rng = rng(seed);
    let mut stubs: Vec<VertexId> = (0..n).flat_map(|v| core::iter::repeat_n(v, d)).collect();
    stubs.shuffle(&mut rng);
    let mut g = Graph::empty(n);
    for pair in stubs.chunks_exact(2) {
        if pair[0] != pair[1] {
            g.insert_edge(pair[0], pair[1]);
        }
    }
    Ok(g)
}

fn component_order(h: &Graph, r: usize) -> Result<(usize, Vec<VertexId>), GeneratorError> {
    let best = if h.n() <= crate::admissibility::EXACT_ADMISSIBILITY_CAP {
        exact_admissibility(h, r)?
    } else {
        greedy_admissibility_order(h, r)?
    };
    Ok((best.value, best.order.sequence().to_vec()))
}

/// `k` vertex-disjoint copies of `h` followed by `pad` isolated vertices.
pub fn disjoint_copies(h: &Graph, k: usize, pad: usize, r: usize) -> Result<(Graph, InstanceCertificate), GeneratorError> {
    Pattern::new(h)?;
    let m = h.n();
    let mut g = Graph::empty(k * m + pad);
    let mut packing = Vec::with_capacity(k);
    for c in 0..k {
        for e in h.edges() {
            g.insert_edge(c * m + e.low(), c * m + e.high());
        }
        packing.push(HCopy {
            map: (c * m..(c + 1) * m).collect(),
        });
    }
    let (value, local) = component_order(h, r)?;
    let mut seq: Vec<VertexId> = (k * m..k * m + pad).collect();
    for c in 0..k {
        seq.extend(local.iter().map(|&x| c * m + x));
    }
    let cert = InstanceCertificate {
        generator: "disjoint_copies".to_string(),
        params: vec![
            ("k".to_string(), k.to_string()),
            ("pad".to_string(), pad.to_string()),
            ("r".to_string(), r.to_string()),
        ],
        seed: None,
        r,
        admissibility_bound: if k == 0 { 0 } else { value },
        order: VertexOrder::from_sequence(seq).expect("a permutation"),
        farness_lower_bound: k,
        packing,
    };
    Ok((g, cert))
}

/// `⌈εn⌉` edge-disjoint copies of `h` on `n` vertices plus a background of
/// maximum degree `d`. Copies are vertex-disjoint while the pool allows and
/// otherwise placed at random positions that share no edge with earlier ones.
pub fn planted_far_instance(
    h: &Graph,
    n: usize,
    epsilon: &BigRational,
    d: usize,
    r: usize,
    seed: u64,
) -> Result<(Graph, InstanceCertificate), GeneratorError> {
    Pattern::new(h)?;
    if !epsilon.is_positive() {
        return Err(GeneratorError::Epsilon);
    }
    let m = h.n();
    let want = (epsilon * BigRational::from_integer(BigInt::from(n)))
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);
    let infeasible = GeneratorError::Infeasible { copies: want, h: m, n };
    if m > n || want.saturating_mul(h.edge_count()) > n * n.saturating_sub(1) / 2 {
        return Err(infeasible);
    }
    let mut rng = rng(seed);
    let mut g = Graph::empty(n);
    let mut packing = Vec::with_capacity(want);
    let mut pool: Vec<VertexId> = (0..n).collect();
    pool.shuffle(&mut rng);
    let disjoint = (n / m).min(want);
    for c in 0..disjoint {
        let map = pool[c * m..(c + 1) * m].to_vec();
        for e in h.edges() {
            g.insert_edge(map[e.low()], map[e.high()]);
        }
        packing.push(HCopy { map });
    }
    let attempts_per_copy = 1000;
    while packing.len() < want {
        let mut placed = false;
        for _ in 0..attempts_per_copy {
            let map: Vec<VertexId> = rand::seq::index::sample(&mut rng, n, m).into_vec();
            if h.edges().all(|e| !g.has_edge(map[e.low()], map[e.high()])) {
                for e in h.edges() {
                    g.insert_edge(map[e.low()], map[e.high()]);
                }
                packing.push(HCopy { map });
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(infeasible);
        }
    }
    if d > 0 {
        // only adds edges, so the planted packing stays an edge-disjoint packing
        let background = random_bounded_degree(n, d, rng.gen())?;
        for e in background.edges() {
            g.insert_edge(e.low(), e.high());
        }
    }
    let best = greedy_admissibility_order(&g, r)?;
    let cert = InstanceCertificate {
        generator: "planted_far_instance".to_string(),
        params: vec![
            ("n".to_string(), n.to_string()),
            ("epsilon".to_string(), format!("{epsilon}")),
            ("d".to_string(), d.to_string()),
            ("r".to_string(), r.to_string()),
        ],
        seed: Some(seed),
        r,
        admissibility_bound: best.value,
        order: best.order,
        farness_lower_bound: packing.len(),
        packing,
    };
    Ok((g, cert))
}

/// Whether the number of deletions `k` makes `g` at least ε-far (`k ≥ εn`).
pub fn is_far(k: usize, n: usize, epsilon: &BigRational) -> bool {
    if epsilon.is_zero() {
        return true;
    }
    BigRational::from_integer(BigInt::from(k)) >= epsilon * BigRational::from_integer(BigInt::from(n))
}
