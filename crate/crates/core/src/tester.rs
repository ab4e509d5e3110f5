//! The H-freeness tester: sample seed vertices, grow a knowledge graph by
//! rounds of random-neighbor queries, and reject exactly when the knowledge
//! graph contains a copy of H.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::{find_h_copies, Edge, Graph, HCopy, Pattern, PatternError, VertexId};
use crate::oracle::{NeighborOracle, OracleError};

/// Base of the logarithm in the exponent of beta.
pub const BETA_LOG_BASE: u32 = 2;

/// Default hard cap on neighbor queries, and on the ceiling accepted without force.
pub const DEFAULT_QUERY_LIMIT: u64 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamMode {
    Theory,
    Practical,
}

/// User-supplied constants for practical mode. Missing thresholds fall back
/// to their formula values; they only matter for analysis, not for running.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PracticalOverrides {
    pub alpha: Option<BigRational>,
    pub beta: Option<BigRational>,
    pub delta: Option<BigRational>,
    pub xi1: Option<u64>,
    pub xi2: Option<u64>,
    pub xi3: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryBudget {
    pub limit: u64,
    /// Accept parameters whose ceiling exceeds `limit`; runs then abort at the limit.
    pub force: bool,
}

impl Default for QueryBudget {
    fn default() -> Self {
        QueryBudget {
            limit: DEFAULT_QUERY_LIMIT,
            force: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TesterParams {
    pub epsilon: BigRational,
    pub p: u64,
    pub r: u64,
    pub mode: ParamMode,
    pub epsilon_prime: BigRational,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub delta: BigRational,
    pub xi1: BigUint,
    pub xi2: BigUint,
    pub xi3: BigUint,
    /// Worst-case number of neighbor queries of one run.
    pub query_ceiling: BigUint,
    pub budget: QueryBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("epsilon must lie in (0, 1]")]
    Epsilon,
    #[error("p must be at least 2")]
    P,
    #[error("r must be at least 2")]
    R,
    #[error("practical mode needs {0}")]
    Missing(&'static str),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("query ceiling {ceiling} exceeds the budget {limit}")]
    OverBudget { ceiling: String, limit: u64 },
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

fn rat(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn ceil_to_uint(x: &BigRational) -> BigUint {
    x.ceil().to_integer().to_biguint().unwrap_or_default()
}

/// Smallest `k` with `2^k ≥ r^(16 r²)`, i.e. `⌈16 r² log₂ r⌉` computed exactly.
pub fn beta_exponent(r: u64) -> u64 {
    let x = BigUint::from(r).pow((16 * r * r) as u32);
    (x - BigUint::one()).bits()
}

/// Parses decimal (`0.25`), fraction (`1/3`) or integer text exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, ParamError> {
    let err = || ParamError::Parse(String::from(s));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| err())?;
        let b: BigInt = b.trim().parse().map_err(|_| err())?;
        if b.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits = alloc::format!("{int_part}{frac_part}");
    if !digits.bytes().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let q = BigRational::new(num, den);
    Ok(if neg { -q } else { q })
}

/// `ξ1 · Σ_{s=1}^{ξ2} (1+ξ3)^{s-1} ξ3 = ξ1 · ((1+ξ3)^{ξ2} − 1)`.
pub fn query_ceiling(xi1: &BigUint, xi2: &BigUint, xi3: &BigUint) -> BigUint {
    let base = xi3 + BigUint::one();
    let mut pow = BigUint::one();
    let mut k = BigUint::zero();
    while &k < xi2 {
        pow *= &base;
        k += 1u32;
    }
    xi1 * (pow - BigUint::one())
}

/// Parameters of one tester configuration.
pub fn derive_parameters(
    epsilon: &BigRational,
    p: u64,
    r: u64,
    mode: ParamMode,
    overrides: &PracticalOverrides,
    budget: QueryBudget,
) -> Result<TesterParams, ParamError> {
    if !epsilon.is_positive() || *epsilon > BigRational::one() {
        return Err(ParamError::Epsilon);
    }
    if p < 2 {
        return Err(ParamError::P);
    }
    if r < 2 {
        return Err(ParamError::R);
    }
    let eps_p = epsilon / rat(2);
    let theory_alpha = rat(8 * p * p) / &eps_p;
    let theory_beta = || {
        let pk = BigInt::from(p).pow(beta_exponent(r) as u32);
        BigRational::from_integer(pk * 8) / &eps_p
    };
    let theory_delta = |beta: &BigRational| beta * beta * beta * rat(4096 * r);

    let (alpha, beta, delta, xi1, xi2, xi3) = match mode {
        ParamMode::Theory => {
            let beta = theory_beta();
            let delta = theory_delta(&beta);
            let xi1 = ceil_to_uint(&(rat(20) * &theory_alpha / &eps_p));
            let xi2 = BigUint::from(r * r + 3 * r + 1);
            let base = ceil_to_uint(&(rat(20 * r) * &delta));
            let xi3 = base.div_ceil(&BigUint::from(r)) * r;
            (theory_alpha, beta, delta, xi1, xi2, xi3)
        }
        ParamMode::Practical => {
            let positive = |name, x: &Option<BigRational>, default: BigRational| match x {
                None => Ok(default),
                Some(q) if q.is_positive() => Ok(q.clone()),
                Some(_) => Err(ParamError::NotPositive(name)),
            };
            let alpha = positive("alpha", &overrides.alpha, theory_alpha)?;
            let beta = match &overrides.beta {
                Some(_) => positive("beta", &overrides.beta, BigRational::zero())?,
                None => theory_beta(),
            };
            let delta = match &overrides.delta {
                Some(_) => positive("delta", &overrides.delta, BigRational::zero())?,
                None => theory_delta(&beta),
            };
            let xi = |name, x: Option<u64>| match x {
                None => Err(ParamError::Missing(name)),
                Some(0) => Err(ParamError::NotPositive(name)),
                Some(v) => Ok(BigUint::from(v)),
            };
            (
                alpha,
                beta,
                delta,
                xi("xi1", overrides.xi1)?,
                xi("xi2", overrides.xi2)?,
                xi("xi3", overrides.xi3)?,
            )
        }
    };
    let ceiling = if xi2 > BigUint::from(4096u32) {
        // at least 2^4096 queries; not worth materializing
        return Err(ParamError::OverBudget {
            ceiling: String::from("astronomical"),
            limit: budget.limit,
        });
    } else {
        query_ceiling(&xi1, &xi2, &xi3)
    };
    if !budget.force && ceiling > BigUint::from(budget.limit) {
        let digits = ceiling.to_string();
        let shown = if digits.len() > 40 {
            alloc::format!("~10^{}", digits.len() - 1)
        } else {
            digits
        };
        return Err(ParamError::OverBudget {
            ceiling: shown,
            limit: budget.limit,
        });
    }
    Ok(TesterParams {
        epsilon: epsilon.clone(),
        p,
        r,
        mode,
        epsilon_prime: eps_p,
        alpha,
        beta,
        delta,
        xi1,
        xi2,
        xi3,
        query_ceiling: ceiling,
        budget,
    })
}

/// Evaluates the formulas without the budget check, for inspection.
pub fn theory_parameters_unchecked(epsilon: &BigRational, p: u64, r: u64) -> Result<TesterParams, ParamError> {
    derive_parameters(
        epsilon,
        p,
        r,
        ParamMode::Theory,
        &PracticalOverrides::default(),
        QueryBudget {
            limit: DEFAULT_QUERY_LIMIT,
            force: true,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TesterError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("the pattern has {h} vertices but r is {r}")]
    PatternTooLarge { h: usize, r: u64 },
    #[error("loop count {0} does not fit a machine word")]
    TooLargeToRun(&'static str),
    #[error("query budget of {limit} exhausted")]
    QueryBudgetExceeded { limit: u64 },
    #[error("{given} initial vertices exceed xi1")]
    TooManyInitialVertices { given: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Check for a copy after every round and stop at the first one.
    pub early_exit: bool,
    /// Use these vertices as the seed set instead of uniform draws.
    pub initial: Option<Vec<VertexId>>,
}

/// Discovered vertices and edges with the round at which each first appeared.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    vertex_round: BTreeMap<VertexId, usize>,
    edge_round: BTreeMap<Edge, usize>,
}

impl KnowledgeGraph {
    fn add_vertex(&mut self, v: VertexId, round: usize) -> bool {
        if self.vertex_round.contains_key(&v) {
            return false;
        }
        self.vertex_round.insert(v, round);
        true
    }

    fn add_edge(&mut self, e: Edge, round: usize) -> bool {
        if self.edge_round.contains_key(&e) {
            return false;
        }
        self.edge_round.insert(e, round);
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_round.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_round.len()
    }

    pub fn vertex_round(&self, v: VertexId) -> Option<usize> {
        self.vertex_round.get(&v).copied()
    }

    pub fn edge_round(&self, e: Edge) -> Option<usize> {
        self.edge_round.get(&e).copied()
    }

    /// Vertices of `G_s`, ascending by id.
    pub fn vertices_at(&self, s: usize) -> Vec<VertexId> {
        self.vertex_round.iter().filter(|(_, &r)| r <= s).map(|(&v, _)| v).collect()
    }

    pub fn edges_at(&self, s: usize) -> Vec<Edge> {
        self.edge_round.iter().filter(|(_, &r)| r <= s).map(|(&e, _)| e).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, usize)> + '_ {
        self.vertex_round.iter().map(|(&v, &r)| (v, r))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.edge_round.iter().map(|(&e, &r)| (e, r))
    }

    /// `G_s` as a graph on the host's vertex ids.
    pub fn graph_at(&self, n: usize, s: usize) -> Graph {
        let mut g = Graph::empty(n);
        for e in self.edges_at(s) {
            g.insert_edge(e.low(), e.high());
        }
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RoundTrace {
    pub round: usize,
    pub queries: u64,
    pub new_vertices: usize,
    pub new_edges: usize,
    pub vertices_after: usize,
    pub edges_after: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub queries: u64,
    /// Outer rounds executed.
    pub rounds: usize,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    /// A copy of the pattern inside the knowledge graph when rejecting.
    pub witness: Option<HCopy>,
    pub witness_edges: Vec<Edge>,
    pub stats: RunStats,
    pub knowledge: KnowledgeGraph,
    pub trace: Vec<RoundTrace>,
}

/// Per-round query and discovery counts; entry 0 is the seeding round.
pub fn query_trace(verdict: &Verdict) -> &[RoundTrace] {
    &verdict.trace
}

fn to_u64(x: &BigUint, name: &'static str) -> Result<u64, TesterError> {
    x.to_u64().ok_or(TesterError::TooLargeToRun(name))
}

/// Runs the tester against `oracle`.
pub fn test_h_freeness(
    oracle: &mut dyn NeighborOracle,
    h: &Graph,
    params: &TesterParams,
    options: &RunOptions,
) -> Result<Verdict, TesterError> {
    let pattern = Pattern::new(h)?;
    if h.n() as u64 > params.r {
        return Err(TesterError::PatternTooLarge { h: h.n(), r: params.r });
    }
    let xi1 = to_u64(&params.xi1, "xi1")?;
    let xi2 = to_u64(&params.xi2, "xi2")? as usize;
    let xi3 = to_u64(&params.xi3, "xi3")?;
    let n = oracle.vertex_count();
    let start_queries = oracle.query_count();
    let limit = params.budget.limit;

    let mut k = KnowledgeGraph::default();
    let mut trace = Vec::with_capacity(xi2 + 1);
    match &options.initial {
        Some(init) => {
            if init.len() as u64 > xi1 {
                return Err(TesterError::TooManyInitialVertices { given: init.len() });
            }
            for &v in init {
                k.add_vertex(v, 0);
            }
        }
        None => {
            for _ in 0..xi1 {
                let v = oracle.uniform_vertex()?;
                k.add_vertex(v, 0);
            }
        }
    }
    trace.push(RoundTrace {
        round: 0,
        queries: 0,
        new_vertices: k.vertex_count(),
        new_edges: 0,
        vertices_after: k.vertex_count(),
        edges_after: 0,
    });

    let mut queries = 0u64;
    let mut witness = None;
    let mut rounds = 0;
    for s in 1..=xi2 {
        let snapshot: Vec<VertexId> = k.vertex_round.keys().copied().collect();
        let mut t = RoundTrace {
            round: s,
            ..RoundTrace::default()
        };
        for v in snapshot {
            for _ in 0..xi3 {
                if queries >= limit {
                    return Err(TesterError::QueryBudgetExceeded { limit });
                }
                queries += 1;
                t.queries += 1;
                let u = match oracle.random_neighbor(v) {
                    Ok(u) => u,
                    Err(OracleError::IsolatedVertex(_)) => continue,
                    Err(e) => return Err(e.into()),
                };
                if k.add_vertex(u, s) {
                    t.new_vertices += 1;
                }
                if k.add_edge(Edge::new(v, u), s) {
                    t.new_edges += 1;
                }
            }
        }
        t.vertices_after = k.vertex_count();
        t.edges_after = k.edge_count();
        trace.push(t);
        rounds = s;
        if options.early_exit {
            witness = first_copy(&k, n, s, &pattern);
            if witness.is_some() {
                break;
            }
        }
    }
    if !options.early_exit {
        witness = first_copy(&k, n, rounds, &pattern);
    }
    debug_assert_eq!(oracle.query_count() - start_queries, queries);

    let witness_edges = witness.as_ref().map(|w| w.edges(h)).unwrap_or_default();
    Ok(Verdict {
        outcome: if witness.is_some() { Outcome::Reject } else { Outcome::Accept },
        witness,
        witness_edges,
        stats: RunStats {
            queries,
            rounds,
            vertices: k.vertex_count(),
            edges: k.edge_count(),
        },
        knowledge: k,
        trace,
    })
}

fn first_copy(k: &KnowledgeGraph, n: usize, s: usize, pattern: &Pattern) -> Option<HCopy> {
    let g = k.graph_at(n, s);
    let used: BTreeSet<VertexId> = k.edges_at(s).iter().flat_map(|e| [e.low(), e.high()]).collect();
    if used.len() < pattern.vertex_count() {
        return None;
    }
    let mut found = find_h_copies(&g, pattern, 1, None);
    found.copies.pop()
}
