//! Random-neighbor oracle access to a hidden graph.
//!
//! The only counted operation is a neighbor query. Uniform vertex draws use
//! public knowledge (the vertex count) and are free.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("vertex {0} has no neighbors")]
    IsolatedVertex(VertexId),
    #[error("vertex {vertex} is not in a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("the replay script is exhausted")]
    ScriptExhausted,
    #[error("scripted answer {answer} is not a neighbor of {vertex}")]
    NotANeighbor { vertex: VertexId, answer: VertexId },
}

/// What a tester may know about its input.
pub trait NeighborOracle {
    fn vertex_count(&self) -> usize;
    /// Counts as one query even when it fails.
    fn random_neighbor(&mut self, v: VertexId) -> Result<VertexId, OracleError>;
    fn uniform_vertex(&mut self) -> Result<VertexId, OracleError>;
    fn query_count(&self) -> u64;
}

/// Seeded oracle over a graph.
pub struct OracleSession<'g> {
    graph: &'g Graph,
    rng: ChaCha8Rng,
    queries: u64,
}

impl<'g> OracleSession<'g> {
    pub fn new(graph: &'g Graph, seed: u64) -> Self {
        OracleSession {
            graph,
            rng: ChaCha8Rng::seed_from_u64(seed),
            queries: 0,
        }
    }
}

impl NeighborOracle for OracleSession<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn random_neighbor(&mut self, v: VertexId) -> Result<VertexId, OracleError> {
        self.queries += 1;
        if v >= self.graph.n() {
            return Err(OracleError::VertexOutOfRange { vertex: v, n: self.graph.n() });
        }
        let nb = self.graph.neighbors(v);
        if nb.is_empty() {
            return Err(OracleError::IsolatedVertex(v));
        }
        Ok(nb[self.rng.gen_range(0..nb.len())])
    }

    fn uniform_vertex(&mut self) -> Result<VertexId, OracleError> {
        if self.graph.n() == 0 {
            return Err(OracleError::EmptyGraph);
        }
        Ok(self.rng.gen_range(0..self.graph.n()))
    }

    fn query_count(&self) -> u64 {
        self.queries
    }
}

/// Answers from fixed scripts, for deterministic tests.
pub struct ReplayOracle<'g> {
    graph: &'g Graph,
    vertices: Vec<VertexId>,
    answers: Vec<VertexId>,
    next_vertex: usize,
    next_answer: usize,
    queries: u64,
}

impl<'g> ReplayOracle<'g> {
    /// `vertices` feeds uniform draws and `answers` feeds neighbor queries.
    pub fn new(graph: &'g Graph, vertices: Vec<VertexId>, answers: Vec<VertexId>) -> Self {
        ReplayOracle {
            graph,
            vertices,
            answers,
            next_vertex: 0,
            next_answer: 0,
            queries: 0,
        }
    }
}

impl NeighborOracle for ReplayOracle<'_> {
    fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    fn random_neighbor(&mut self, v: VertexId) -> Result<VertexId, OracleError> {
        self.queries += 1;
        let Some(&answer) = self.answers.get(self.next_answer) else {
            return Err(OracleError::ScriptExhausted);
        };
        self.next_answer += 1;
        if v >= self.graph.n() || !self.graph.has_edge(v, answer) {
            return Err(OracleError::NotANeighbor { vertex: v, answer });
        }
        Ok(answer)
    }

    fn uniform_vertex(&mut self) -> Result<VertexId, OracleError> {
        let Some(&v) = self.vertices.get(self.next_vertex) else {
            return Err(OracleError::ScriptExhausted);
        };
        self.next_vertex += 1;
        Ok(v)
    }

    fn query_count(&self) -> u64 {
        self.queries
    }
}

/// Seed for item `index` of stream `domain` under `root`. Each value is a
/// pure function of its inputs, so work items can run in any order.
pub fn derive_seed(root: u64, domain: u64, index: u64) -> u64 {
    let mut z = root ^ splitmix(domain.wrapping_add(0x9E37_79B9_7F4A_7C15));
    z = splitmix(z ^ splitmix(index));
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn unique_neighbor_and_counting() {
        let g = path3();
        let mut s = OracleSession::new(&g, 7);
        for _ in 0..10 {
            assert_eq!(s.random_neighbor(0), Ok(1));
        }
        assert_eq!(s.query_count(), 10);
        s.uniform_vertex().unwrap();
        assert_eq!(s.query_count(), 10);
    }

    #[test]
    fn isolated_vertex_is_an_error_and_counts() {
        let g = Graph::empty(2);
        let mut s = OracleSession::new(&g, 1);
        assert_eq!(s.random_neighbor(1), Err(OracleError::IsolatedVertex(1)));
        assert_eq!(s.query_count(), 1);
        let one = Graph::empty(1);
        assert_eq!(OracleSession::new(&one, 3).uniform_vertex(), Ok(0));
    }

    #[test]
    fn same_seed_same_answers() {
        let g = Graph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let draw = |seed| {
            let mut s = OracleSession::new(&g, seed);
            (0..50).map(|_| s.random_neighbor(0).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
        assert_ne!(draw(11), draw(12));
    }

    #[test]
    fn replay_script() {
        let g = path3();
        let mut r = ReplayOracle::new(&g, vec![0], vec![1, 0]);
        assert_eq!(r.uniform_vertex(), Ok(0));
        assert_eq!(r.random_neighbor(0), Ok(1));
        assert_eq!(r.random_neighbor(2), Err(OracleError::NotANeighbor { vertex: 2, answer: 0 }));
        assert_eq!(r.random_neighbor(1), Err(OracleError::ScriptExhausted));
        assert_eq!(r.uniform_vertex(), Err(OracleError::ScriptExhausted));
    }

    #[test]
    fn derived_seeds_differ_across_indices_and_domains() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(42, 0, i)).collect();
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_ne!(derive_seed(42, 0, 3), derive_seed(42, 1, 3));
        assert_eq!(derive_seed(42, 5, 9), derive_seed(42, 5, 9));
    }
}
