//! Graph, order and certificate files.
//!
//! Edge lists are plain text: `#` starts a comment, the first data line is
//! `n` or `n m`, and every further line is one edge `u v` with 0-based ids.
//! The JSON form is `{"n": 4, "edges": [[0, 1], [1, 2]]}`. Orders are a
//! whitespace-separated vertex sequence, lowest first, or a JSON array.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use hfree_core::generators::InstanceCertificate;
use hfree_core::graph::{Edge, Graph, HCopy, VertexOrder};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|e| [e.low(), e.high()]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, HarnessError> {
        Graph::from_edges(self.n, self.edges.iter().map(|&[u, v]| (u, v)))
            .map_err(|e| HarnessError::Config(format!("bad graph: {e}")))
    }
}

pub fn edge_pairs(edges: &[Edge]) -> Vec<[usize; 2]> {
    edges.iter().map(|e| [e.low(), e.high()]).collect()
}

pub fn parse_edge_list(text: &str) -> Result<Graph, HarnessError> {
    let bad = |line: usize, what: &str| HarnessError::Config(format!("edge list line {line}: {what}"));
    let mut header: Option<(usize, Option<usize>)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(i + 1, "expected non-negative integers"))?;
        match (header, nums.as_slice()) {
            (None, [n]) => header = Some((*n, None)),
            (None, [n, m]) => header = Some((*n, Some(*m))),
            (None, _) => return Err(bad(i + 1, "header must be `n` or `n m`")),
            (Some(_), [u, v]) => edges.push((*u, *v)),
            (Some(_), _) => return Err(bad(i + 1, "edge lines hold exactly two ids")),
        }
    }
    let (n, m) = header.ok_or_else(|| HarnessError::Config("edge list has no header".into()))?;
    let g = Graph::from_edges(n, edges.iter().copied()).map_err(|e| HarnessError::Config(format!("bad graph: {e}")))?;
    if let Some(m) = m {
        if m != g.edge_count() {
            return Err(HarnessError::Config(format!(
                "header declares {m} edges, found {}",
                g.edge_count()
            )));
        }
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.low(), e.high());
    }
    out
}

/// Parses either file form, telling them apart by a leading `{`.
pub fn parse_graph(text: &str) -> Result<Graph, HarnessError> {
    if text.trim_start().starts_with('{') {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("graph JSON: {e}")))?;
        j.to_graph()
    } else {
        parse_edge_list(text)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph, HarnessError> {
    parse_graph(&read(path)?)
}

pub fn parse_order(text: &str, n: usize) -> Result<VertexOrder, HarnessError> {
    let seq: Vec<usize> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("order JSON: {e}")))?
    } else {
        text.split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| HarnessError::Config("order must list vertex ids".into()))?
    };
    if seq.len() != n {
        return Err(HarnessError::Config(format!("order lists {} vertices, graph has {n}", seq.len())));
    }
    VertexOrder::from_sequence(seq).map_err(|e| HarnessError::Config(format!("bad order: {e}")))
}

pub fn read_order(path: &Path, n: usize) -> Result<VertexOrder, HarnessError> {
    parse_order(&read(path)?, n)
}

pub fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// JSON mirror of an instance certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub generator: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub r: usize,
    pub admissibility_bound: usize,
    pub order: Vec<usize>,
    pub farness_lower_bound: usize,
    pub packing: Vec<Vec<usize>>,
}

impl CertificateJson {
    pub fn from_certificate(c: &InstanceCertificate) -> Self {
        CertificateJson {
            generator: c.generator.clone(),
            params: c.params.clone(),
            seed: c.seed,
            r: c.r,
            admissibility_bound: c.admissibility_bound,
            order: c.order.sequence().to_vec(),
            farness_lower_bound: c.farness_lower_bound,
            packing: c.packing.iter().map(|h| h.map.clone()).collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<InstanceCertificate, HarnessError> {
        Ok(InstanceCertificate {
            generator: self.generator.clone(),
            params: self.params.clone(),
            seed: self.seed,
            r: self.r,
            admissibility_bound: self.admissibility_bound,
            order: VertexOrder::from_sequence(self.order.clone())
                .map_err(|e| HarnessError::Config(format!("certificate order: {e}")))?,
            farness_lower_bound: self.farness_lower_bound,
            packing: self.packing.iter().map(|m| HCopy { map: m.clone() }).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = hfree_core::generators::cycle(5);
        assert_eq!(parse_graph(&write_edge_list(&g)).unwrap(), g);
        let json = serde_json::to_string(&GraphJson::from_graph(&g)).unwrap();
        assert_eq!(parse_graph(&json).unwrap(), g);
    }

    #[test]
    fn comments_and_bare_header() {
        let g = parse_graph("# two edges\n3\n0 1 # first\n\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_inputs_are_config_errors() {
        for bad in ["", "3 2\n0 1\n", "3\n0 1 2\n", "3\n0 5\n", "x\n", "3\n1 1\n"] {
            assert!(matches!(parse_graph(bad), Err(HarnessError::Config(_))), "{bad:?}");
        }
    }

    #[test]
    fn orders_in_both_forms() {
        assert_eq!(parse_order("2 0 1", 3).unwrap().sequence(), &[2, 0, 1]);
        assert_eq!(parse_order("[1, 0]", 2).unwrap().sequence(), &[1, 0]);
        assert!(parse_order("0 0 1", 3).is_err());
        assert!(parse_order("0 1", 3).is_err());
    }
}
