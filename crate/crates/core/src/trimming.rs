//! The four-step trimming fixpoint. Trimming is an analysis tool: it builds
//! a subgraph on which the tester's discovery guarantees can be argued, and
//! reports exactly which edges each step removed.
//!
//! Every degree threshold reads the degree in the original graph. Paths and
//! stratas are searched in the current, partially trimmed graph.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::admissibility::{admissible_paths, target_set, AdmissibilityError, AdmissibilityLimits};
use crate::bitset::BitSet;
use crate::graph::{Edge, Graph, OrderedGraph, Pattern, PatternError, VertexId};
use crate::search::{max_compatible_family, FamilyProblem};
use crate::structure::{
    classify_by_size, nadir, NadirClass, SimilarityKey, StrataContext, StructureError, StructureLimits,
    UsefulPair,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimParams {
    pub r: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub delta: BigRational,
}

impl TrimParams {
    pub fn from_integers(r: usize, alpha: u64, beta: u64, delta: u64) -> Self {
        let q = |x: u64| BigRational::from_integer(BigInt::from(x));
        TrimParams {
            r,
            alpha: q(alpha),
            beta: q(beta),
            delta: q(delta),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrimStep {
    HighDegree = 1,
    Paths = 2,
    Strata = 3,
    WeakStrata = 4,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrimError {
    #[error("thresholds must be at least 1 and r at least 1")]
    InvalidParams,
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("step {step:?} at vertex {vertex}: {error}")]
    Paths {
        step: TrimStep,
        vertex: VertexId,
        error: AdmissibilityError,
    },
    #[error("step {step:?} at vertex {vertex}: {error}")]
    Structure {
        step: TrimStep,
        vertex: VertexId,
        error: StructureError,
    },
    #[error("path search budget exceeded at vertex {vertex}")]
    Budget { step: TrimStep, vertex: VertexId },
    #[error("after removing a maximum packing, a length-{length} path from {vertex} to {target} survives")]
    StepTwoIncomplete {
        vertex: VertexId,
        target: VertexId,
        length: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemovedEdge {
    pub edge: Edge,
    pub step: TrimStep,
    pub trigger: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrimReport {
    pub removed_per_step: [usize; 4],
    pub removed_edges: Vec<RemovedEdge>,
    /// Full sweeps run, including the final one that removed nothing.
    pub rounds: usize,
}

impl TrimReport {
    pub fn total_removed(&self) -> usize {
        self.removed_per_step.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrimLimits {
    pub paths: AdmissibilityLimits,
    pub structure: StructureLimits,
    pub max_sweeps: usize,
}

impl Default for TrimLimits {
    fn default() -> Self {
        TrimLimits {
            paths: AdmissibilityLimits::default(),
            structure: StructureLimits::default(),
            max_sweeps: 10_000,
        }
    }
}

fn int(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

struct Trimmer<'a> {
    original: &'a OrderedGraph,
    current: OrderedGraph,
    pattern: Pattern,
    params: &'a TrimParams,
    limits: TrimLimits,
    report: TrimReport,
}

impl Trimmer<'_> {
    fn remove(&mut self, e: Edge, step: TrimStep, trigger: VertexId) -> bool {
        if self.current.graph.remove_edge(e.low(), e.high()) {
            self.report.removed_per_step[step as usize - 1] += 1;
            self.report.removed_edges.push(RemovedEdge { edge: e, step, trigger });
            true
        } else {
            false
        }
    }

    fn degree(&self, v: VertexId) -> usize {
        self.original.graph.degree(v)
    }

    fn step_one(&mut self, v: VertexId) -> bool {
        if int(self.degree(v)) <= self.params.alpha {
            return false;
        }
        let mut any = false;
        for u in target_set(self.original, v, 1) {
            any |= self.remove(Edge::new(u, v), TrimStep::HighDegree, v);
        }
        any
    }

    fn step_two(&mut self, v: VertexId) -> Result<bool, TrimError> {
        let deg = int(self.degree(v));
        if self.params.beta > deg {
            return Ok(false);
        }
        let err = |error| TrimError::Paths {
            step: TrimStep::Paths,
            vertex: v,
            error,
        };
        let mut any = false;
        for i in 1..=self.params.r {
            for u in target_set(&self.current, v, i) {
                let paths = self.paths_of_length(v, u, i).map_err(err)?;
                if paths.is_empty() {
                    continue;
                }
                let family = self.max_edge_disjoint(v, u, &paths)?;
                if int(family.len()) * &self.params.beta > deg {
                    continue;
                }
                for &k in &family {
                    for w in paths[k].windows(2) {
                        any |= self.remove(Edge::new(w[0], w[1]), TrimStep::Paths, v);
                    }
                }
                if !self.paths_of_length(v, u, i).map_err(err)?.is_empty() {
                    return Err(TrimError::StepTwoIncomplete {
                        vertex: v,
                        target: u,
                        length: i,
                    });
                }
            }
        }
        Ok(any)
    }

    fn paths_of_length(&self, v: VertexId, u: VertexId, i: usize) -> Result<Vec<Vec<VertexId>>, AdmissibilityError> {
        Ok(admissible_paths(&self.current, v, i, &self.limits.paths)?
            .into_iter()
            .filter(|p| p.len() == i && p.end() == u)
            .map(|p| p.vertices().to_vec())
            .collect())
    }

    fn max_edge_disjoint(&self, v: VertexId, u: VertexId, paths: &[Vec<VertexId>]) -> Result<Vec<usize>, TrimError> {
        let edge_sets: Vec<Vec<Edge>> = paths
            .iter()
            .map(|p| {
                let mut e: Vec<Edge> = p.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
                e.sort_unstable();
                e
            })
            .collect();
        let n = paths.len();
        let mut conflicts = alloc::vec![BitSet::new(n); n];
        for a in 0..n {
            for b in a + 1..n {
                if edge_sets[a].iter().any(|e| edge_sets[b].binary_search(e).is_ok()) {
                    conflicts[a].insert(b);
                    conflicts[b].insert(a);
                }
            }
        }
        let g = &self.current.graph;
        max_compatible_family(&FamilyProblem {
            conflicts: &conflicts,
            classes: None,
            upper_bound: Some(g.degree(v).min(g.degree(u))),
            max_nodes: self.limits.paths.max_search_nodes,
        })
        .map_err(|_| TrimError::Budget {
            step: TrimStep::Paths,
            vertex: v,
        })
    }

    fn classes_at(&self, v: VertexId, step: TrimStep) -> Result<BTreeMap<SimilarityKey, Vec<UsefulPair>>, TrimError> {
        let mut ctx = StrataContext::new(&self.current, &self.pattern).with_original(&self.original.graph);
        ctx.limits = self.limits.structure;
        let pairs = ctx.useful_pairs_with_max(v).map_err(|error| TrimError::Structure {
            step,
            vertex: v,
            error,
        })?;
        let mut classes: BTreeMap<SimilarityKey, Vec<UsefulPair>> = BTreeMap::new();
        for p in pairs {
            classes.entry(p.similarity_key()).or_default().push(p);
        }
        Ok(classes)
    }

    /// Steps 3 and 4 share one loop: each similarity class is one template.
    /// After a removal the classes are rebuilt, since other candidates may
    /// have lost their witnessing H-subgraphs.
    fn strata_step(&mut self, v: VertexId, step: TrimStep) -> Result<bool, TrimError> {
        let deg = int(self.degree(v));
        if self.params.beta >= deg {
            return Ok(false);
        }
        let serr = |error| TrimError::Structure { step, vertex: v, error };
        let mut any = false;
        let mut after: Option<SimilarityKey> = None;
        let mut classes = self.classes_at(v, step)?;
        loop {
            let next = match &after {
                None => classes.keys().next().cloned(),
                Some(k) => classes
                    .range((core::ops::Bound::Excluded(k.clone()), core::ops::Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            let mut cands = classes[&key].clone();
            let mut ctx = StrataContext::new(&self.current, &self.pattern).with_original(&self.original.graph);
            ctx.limits = self.limits.structure;
            if step == TrimStep::WeakStrata {
                let mut by_nadir: BTreeMap<VertexId, Vec<UsefulPair>> = BTreeMap::new();
                for c in &cands {
                    by_nadir.entry(nadir(c).map_err(serr)?).or_default().push(c.clone());
                }
                let mut weak = Vec::new();
                for (w, group) in by_nadir {
                    let size = ctx.best_strata(&key.prefix, group).map_err(serr)?.len();
                    if classify_by_size(size, self.degree(v), &self.params.delta) == NadirClass::Weak {
                        weak.push(w);
                    }
                }
                cands.retain(|c| weak.contains(&nadir(c).unwrap()));
            }
            let strata = ctx.best_strata(&key.prefix, cands).map_err(serr)?;
            after = Some(key);
            if strata.is_empty() || int(strata.len()) * &self.params.beta >= deg {
                continue;
            }
            let mut removed_here = false;
            for e in strata.edges() {
                removed_here |= self.remove(e, step, v);
            }
            if removed_here {
                any = true;
                classes = self.classes_at(v, step)?;
            }
        }
        Ok(any)
    }
}

/// Trims `g` to a fixpoint. Vertices are swept in ascending order of `g`.
pub fn trim(g: &OrderedGraph, h: &Graph, params: &TrimParams) -> Result<(OrderedGraph, TrimReport), TrimError> {
    trim_with(g, h, params, TrimLimits::default())
}

pub fn trim_with(
    g: &OrderedGraph,
    h: &Graph,
    params: &TrimParams,
    limits: TrimLimits,
) -> Result<(OrderedGraph, TrimReport), TrimError> {
    let one = BigRational::one();
    if params.r == 0 || params.alpha < one || params.beta < one || params.delta < one {
        return Err(TrimError::InvalidParams);
    }
    let mut t = Trimmer {
        original: g,
        current: g.clone(),
        pattern: Pattern::new(h)?,
        params,
        limits,
        report: TrimReport::default(),
    };
    loop {
        t.report.rounds += 1;
        let mut changed = false;
        for rank in 0..g.n() {
            let v = g.order.vertex_at(rank);
            changed |= t.step_one(v);
            changed |= t.step_two(v)?;
            changed |= t.strata_step(v, TrimStep::Strata)?;
            changed |= t.strata_step(v, TrimStep::WeakStrata)?;
        }
        if !changed || t.report.rounds >= limits.max_sweeps {
            break;
        }
    }
    Ok((t.current, t.report))
}

/// Returns the first surviving edge whose upper endpoint has original
/// degree above `alpha`.
pub fn verify_light_edges(trimmed: &OrderedGraph, original: &Graph, alpha: &BigRational) -> Result<(), Edge> {
    for e in trimmed.graph.edges() {
        let upper = if trimmed.less(e.low(), e.high()) { e.high() } else { e.low() };
        if int(original.degree(upper)) > *alpha {
            return Err(e);
        }
    }
    Ok(())
}
