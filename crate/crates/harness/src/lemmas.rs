//! Monte-Carlo checks of the tester's discovery guarantees.
//!
//! Each check builds a small fixture, trims it with the fixture's constants,
//! re-verifies the guarantee's hypotheses on the trimmed graph, and then
//! measures how often the promised event happens in real tester runs. The
//! observed frequency is compared with the guaranteed lower bound evaluated
//! at the same constants. Only practical constants are used: at the formula
//! values every bound is either vacuous or the run is far too large.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use hfree_core::admissibility::{is_admissible_path, is_chain, Path};
use hfree_core::generators::{self as gen};
use hfree_core::graph::{
    distance_to_h_freeness, find_h_copies, DistanceLimits, Edge, Graph, OrderedGraph, Pattern, VertexId,
    VertexOrder,
};
use hfree_core::oracle::{derive_seed, OracleSession};
use hfree_core::structure::{NadirClass, StrataContext};
use hfree_core::tester::{
    derive_parameters, test_h_freeness, KnowledgeGraph, ParamMode, PracticalOverrides, QueryBudget, RunOptions,
    TesterParams,
};
use hfree_core::trimming::{trim, verify_light_edges, TrimParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::experiment::thread_pool;
use crate::report::VERSION;
use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaId {
    /// The seed set meets a copy in a far trimmed graph.
    SeedHit,
    /// A discovered vertex leads to the end of a chain below it.
    ChainDescent,
    /// Any discovered vertex of a copy leads to the copy's minimum.
    CopyMinimum,
    /// A vertex with many disjoint admissible paths down to `u` leads to `u`.
    NadirDescent,
    /// The top prefix vertex of a weak strata leads to many of its nadirs.
    NadirSpread,
    /// A fully discovered copy gets all of its edges discovered.
    EdgeCompletion,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::SeedHit,
        LemmaId::ChainDescent,
        LemmaId::CopyMinimum,
        LemmaId::NadirDescent,
        LemmaId::NadirSpread,
        LemmaId::EdgeCompletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::SeedHit => "seed-hit",
            LemmaId::ChainDescent => "chain-descent",
            LemmaId::CopyMinimum => "copy-minimum",
            LemmaId::NadirDescent => "nadir-descent",
            LemmaId::NadirSpread => "nadir-spread",
            LemmaId::EdgeCompletion => "edge-completion",
        }
    }

    fn domain(self) -> u64 {
        0x100 + self as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum LemmaStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Constants of one check. Overrides replace the fixture defaults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaConstants {
    pub epsilon: BigRational,
    pub p: u64,
    pub r: usize,
    pub alpha: BigRational,
    pub beta: BigRational,
    pub delta: BigRational,
    pub xi1: u64,
    pub xi2: u64,
    pub xi3: u64,
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn qi(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

impl LemmaConstants {
    fn apply(&mut self, o: &PracticalOverrides) {
        if let Some(a) = &o.alpha {
            self.alpha = a.clone();
        }
        if let Some(b) = &o.beta {
            self.beta = b.clone();
        }
        if let Some(d) = &o.delta {
            self.delta = d.clone();
        }
        self.xi1 = o.xi1.unwrap_or(self.xi1);
        self.xi2 = o.xi2.unwrap_or(self.xi2);
        self.xi3 = o.xi3.unwrap_or(self.xi3);
    }

    fn tester_params(&self) -> Result<TesterParams, HarnessError> {
        let o = PracticalOverrides {
            alpha: Some(self.alpha.clone()),
            beta: Some(self.beta.clone()),
            delta: Some(self.delta.clone()),
            xi1: Some(self.xi1),
            xi2: Some(self.xi2),
            xi3: Some(self.xi3),
        };
        derive_parameters(
            &self.epsilon,
            self.p,
            self.r as u64,
            ParamMode::Practical,
            &o,
            QueryBudget::default(),
        )
        .map_err(|e| HarnessError::Config(e.to_string()))
    }

    fn trim_params(&self) -> TrimParams {
        TrimParams {
            r: self.r,
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            delta: self.delta.clone(),
        }
    }

    fn listing(&self) -> Vec<(String, String)> {
        [
            ("epsilon", self.epsilon.to_string()),
            ("p", self.p.to_string()),
            ("r", self.r.to_string()),
            ("alpha", self.alpha.to_string()),
            ("beta", self.beta.to_string()),
            ("delta", self.delta.to_string()),
            ("xi1", self.xi1.to_string()),
            ("xi2", self.xi2.to_string()),
            ("xi3", self.xi3.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub version: String,
    pub lemma: String,
    pub fixture: String,
    pub n: usize,
    pub constants: Vec<(String, String)>,
    pub hypotheses: Vec<String>,
    pub trials: u64,
    pub successes: u64,
    pub aborts: u64,
    pub frequency: f64,
    pub bound: f64,
    pub status: LemmaStatus,
}

impl LemmaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "hfree {} lemma check {}", self.version, self.lemma);
        let _ = writeln!(t, "fixture    {} (n = {})", self.fixture, self.n);
        let consts: Vec<String> = self.constants.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(t, "constants  {}", consts.join(" "));
        for h in &self.hypotheses {
            let _ = writeln!(t, "verified   {h}");
        }
        let _ = writeln!(
            t,
            "observed   {}/{} = {:.4} (aborts {})",
            self.successes, self.trials, self.frequency, self.aborts
        );
        let _ = writeln!(t, "bound      {:.6}", self.bound);
        let _ = writeln!(t, "status     {:?}", self.status);
        t
    }
}

type Event = Box<dyn Fn(&KnowledgeGraph) -> bool + Send + Sync>;

struct Prepared {
    fixture: &'static str,
    graph: Graph,
    pattern: Graph,
    constants: LemmaConstants,
    initial: Option<Vec<VertexId>>,
    bound: f64,
    hypotheses: Vec<String>,
    event: Event,
}

fn hyp(ok: bool, what: impl Into<String>, list: &mut Vec<String>) -> Result<(), HarnessError> {
    let what = what.into();
    if ok {
        list.push(what);
        Ok(())
    } else {
        Err(HarnessError::Hypothesis(what))
    }
}

/// `1 − k·(1 − 1/δ)^{ξ3}`.
fn descent_bound(k: usize, c: &LemmaConstants) -> f64 {
    1.0 - k as f64 * (1.0 - 1.0 / f(&c.delta)).powf(c.xi3 as f64)
}

/// Trims `g` under `order` and checks the light-edge guarantee on the result.
fn trimmed(
    g: &Graph,
    order: VertexOrder,
    h: &Graph,
    c: &LemmaConstants,
    list: &mut Vec<String>,
) -> Result<OrderedGraph, HarnessError> {
    let og = OrderedGraph::new(g.clone(), order).map_err(|e| HarnessError::Config(e.to_string()))?;
    let (t, report) = trim(&og, h, &c.trim_params()).map_err(|e| HarnessError::Hypothesis(e.to_string()))?;
    list.push(format!(
        "trimmed graph computed ({} of {} edges removed)",
        report.total_removed(),
        g.edge_count()
    ));
    hyp(
        verify_light_edges(&t, g, &c.alpha).is_ok(),
        "every trimmed edge has a light upper endpoint",
        list,
    )?;
    Ok(t)
}

fn has_all_edges(g: &Graph, path: &[VertexId]) -> bool {
    path.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

fn rounds_fit(k: usize, c: &LemmaConstants, list: &mut Vec<String>) -> Result<(), HarnessError> {
    hyp(c.xi2 as usize >= k, format!("{k} rounds fit in xi2 = {}", c.xi2), list)
}

fn alpha_le_delta(c: &LemmaConstants, list: &mut Vec<String>) -> Result<(), HarnessError> {
    hyp(c.alpha <= c.delta, "alpha <= delta", list)
}

/// Disjoint triangles with `leaves` pendant vertices on every triangle
/// vertex; triangle vertices come first in the order.
fn decorated_triangles(k: usize, leaves: usize) -> Graph {
    let mut g = gen::disjoint_copies(&gen::complete(3), k, 0, 3).expect("triangles").0;
    for v in 0..3 * k {
        for leaf in g.add_vertices(leaves) {
            g.insert_edge(v, leaf);
        }
    }
    g
}

fn prepare(lemma: LemmaId, overrides: &PracticalOverrides) -> Result<Prepared, HarnessError> {
    let mut hyps = Vec::new();
    match lemma {
        LemmaId::SeedHit => {
            let h = gen::complete(3);
            let (g, cert) = gen::disjoint_copies(&h, 30, 210, 3).map_err(|e| HarnessError::Config(e.to_string()))?;
            let mut c = LemmaConstants {
                epsilon: q(1, 5),
                p: cert.admissibility_bound.max(2) as u64,
                r: 3,
                alpha: qi(32),
                beta: qi(4),
                delta: qi(64),
                xi1: 40,
                xi2: 1,
                xi3: 1,
            };
            c.apply(overrides);
            let t = trimmed(&g, cert.order.clone(), &h, &c, &mut hyps)?;
            let eps_p = &c.epsilon / qi(2);
            let d = distance_to_h_freeness(&t.graph, &h, DistanceLimits::default())
                .map_err(|e| HarnessError::Config(e.to_string()))?;
            hyps.push(format!("trimmed distance at least {}", d.lower()));
            hyp(
                qi(d.lower()) >= &eps_p * qi(g.n()),
                format!("trimmed graph is {eps_p}-far"),
                &mut hyps,
            )?;
            let pattern = Pattern::new(&h).map_err(|e| HarnessError::Config(e.to_string()))?;
            let found = find_h_copies(&t.graph, &pattern, usize::MAX, None);
            let hit: BTreeSet<VertexId> = found.copies.iter().flat_map(|c| c.vertices()).collect();
            let bound = 1.0 - (1.0 - f(&eps_p) / f(&c.alpha)).powf(c.xi1 as f64);
            Ok(Prepared {
                fixture: "30 disjoint triangles and 210 isolated vertices, pattern K3",
                graph: g,
                pattern: h,
                constants: c,
                initial: None,
                bound,
                hypotheses: hyps,
                event: Box::new(move |k| k.vertices_at(0).iter().any(|v| hit.contains(v))),
            })
        }
        LemmaId::ChainDescent => {
            // spine 0-1-2-3-4-5 in id order, two pendant leaves on 1..=5
            let len = 5;
            let mut g = gen::path(len + 1);
            for v in 1..=len {
                for leaf in g.add_vertices(2) {
                    g.insert_edge(v, leaf);
                }
            }
            let h = gen::path(3);
            let mut c = LemmaConstants {
                epsilon: q(1, 2),
                p: 2,
                r: 3,
                alpha: qi(4),
                beta: qi(5),
                delta: qi(8),
                xi1: 1,
                xi2: len as u64,
                xi3: 16,
            };
            c.apply(overrides);
            let t = trimmed(&g, VertexOrder::identity(g.n()), &h, &c, &mut hyps)?;
            let chain: Vec<VertexId> = (0..=len).rev().collect();
            let (u, v) = (len, 0);
            hyp(t.less(v, u), "start is above end in the order", &mut hyps)?;
            hyp(
                has_all_edges(&t.graph, &chain)
                    && is_chain(&t, &Path::new(chain.clone()).expect("path"), c.r).unwrap_or(false),
                format!("chain {chain:?} of length {len} survives trimming"),
                &mut hyps,
            )?;
            alpha_le_delta(&c, &mut hyps)?;
            rounds_fit(len, &c, &mut hyps)?;
            let bound = descent_bound(len, &c);
            Ok(Prepared {
                fixture: "path 0..5 with two pendant leaves per inner vertex, chain 5 -> 0",
                graph: g,
                pattern: h,
                constants: c,
                initial: Some(vec![u]),
                bound,
                hypotheses: hyps,
                event: Box::new(move |k| k.vertex_round(v).is_some_and(|s| s <= len)),
            })
        }
        LemmaId::CopyMinimum => {
            let g = decorated_triangles(8, 2);
            let h = gen::complete(3);
            let mut c = LemmaConstants {
                epsilon: q(1, 2),
                p: 2,
                r: 3,
                alpha: qi(4),
                beta: qi(5),
                delta: qi(8),
                xi1: 1,
                xi2: 3,
                xi3: 24,
            };
            c.apply(overrides);
            let r = c.r;
            let t = trimmed(&g, VertexOrder::identity(g.n()), &h, &c, &mut hyps)?;
            let (lo, hi) = (0, 2);
            hyp(
                has_all_edges(&t.graph, &[0, 1, 2, 0]),
                "triangle {0, 1, 2} survives trimming",
                &mut hyps,
            )?;
            hyp(h.n() <= r, "pattern fits in r", &mut hyps)?;
            alpha_le_delta(&c, &mut hyps)?;
            rounds_fit(r, &c, &mut hyps)?;
            let bound = descent_bound(r, &c);
            Ok(Prepared {
                fixture: "8 disjoint triangles with two pendant leaves per vertex, start at the top of one",
                graph: g,
                pattern: h,
                constants: c,
                initial: Some(vec![hi]),
                bound,
                hypotheses: hyps,
                event: Box::new(move |k| k.vertex_round(lo).is_some_and(|s| s <= r)),
            })
        }
        LemmaId::NadirDescent => {
            // u = 0 < v = 1 < middles 2..=5 < leaves, paths v-m-u
            let (u, v) = (0, 1);
            let mut g = Graph::empty(2);
            let middles: Vec<VertexId> = g.add_vertices(4).collect();
            for &m in &middles {
                g.insert_edge(v, m);
                g.insert_edge(m, u);
            }
            for leaf in g.add_vertices(12) {
                g.insert_edge(v, leaf);
            }
            let h = gen::cycle(4);
            let mut c = LemmaConstants {
                epsilon: q(1, 2),
                p: 2,
                r: 4,
                alpha: qi(4),
                beta: qi(8),
                delta: qi(4),
                xi1: 1,
                xi2: 4,
                xi3: 12,
            };
            c.apply(overrides);
            let r = c.r;
            let t = trimmed(&g, VertexOrder::identity(g.n()), &h, &c, &mut hyps)?;
            hyp(t.less(u, v), "start is above end in the order", &mut hyps)?;
            let family: Vec<Vec<VertexId>> = middles.iter().map(|&m| vec![v, m, u]).collect();
            let admissible = family.iter().all(|p| {
                has_all_edges(&t.graph, p)
                    && is_admissible_path(&t, &Path::new(p.clone()).expect("path"), r).unwrap_or(false)
            });
            hyp(admissible, "all four paths are admissible in the trimmed graph", &mut hyps)?;
            let edges: BTreeSet<Edge> = family
                .iter()
                .flat_map(|p| p.windows(2).map(|w| Edge::new(w[0], w[1])).collect::<Vec<_>>())
                .collect();
            hyp(edges.len() == 2 * family.len(), "the paths are edge-disjoint", &mut hyps)?;
            hyp(
                qi(family.len()) * &c.delta >= qi(g.degree(v)),
                format!("{} paths >= deg(v)/delta = {}/{}", family.len(), g.degree(v), c.delta),
                &mut hyps,
            )?;
            alpha_le_delta(&c, &mut hyps)?;
            rounds_fit(r, &c, &mut hyps)?;
            let bound = descent_bound(r, &c);
            Ok(Prepared {
                fixture: "vertex with 4 two-edge paths down to one target and 12 pendant leaves",
                graph: g,
                pattern: h,
                constants: c,
                initial: Some(vec![v]),
                bound,
                hypotheses: hyps,
                event: Box::new(move |k| k.vertex_round(u).is_some_and(|s| s <= r)),
            })
        }
        LemmaId::NadirSpread => {
            let g = gen::star(900);
            let h = gen::complete(2);
            let mut c = LemmaConstants {
                epsilon: q(1, 2),
                p: 2,
                r: 2,
                alpha: qi(2),
                beta: q(11, 10),
                delta: qi(860),
                xi1: 1,
                xi2: 2,
                xi3: 620,
            };
            c.apply(overrides);
            let r = c.r;
            let t = trimmed(&g, VertexOrder::identity(g.n()), &h, &c, &mut hyps)?;
            let (beta, delta) = (f(&c.beta), f(&c.delta));
            hyp(
                (r as f64 - 1.0) * (1.0 - 1.0 / delta).powf(c.xi3 as f64) < 0.5,
                "(r-1)(1-1/delta)^xi3 < 1/2",
                &mut hyps,
            )?;
            hyp(
                delta / (64.0 * beta * beta) > 16.0 * (r as f64).ln(),
                "delta/(64 beta^2) > 16 ln r",
                &mut hyps,
            )?;
            hyp(qi(c.xi3 as usize) * qi(2) * &c.beta > c.delta, "xi3 > delta/(2 beta)", &mut hyps)?;
            let pattern = Pattern::new(&h).map_err(|e| HarnessError::Config(e.to_string()))?;
            let ctx = StrataContext::new(&t, &pattern).with_original(&g);
            let serr = |e: hfree_core::structure::StructureError| HarnessError::Hypothesis(e.to_string());
            let pairs = ctx.useful_pairs_with_max(0).map_err(serr)?;
            let template = pairs
                .iter()
                .find(|p| p.prefix() == [0])
                .ok_or_else(|| HarnessError::Hypothesis("no useful pair with prefix {0}".into()))?;
            let strata = ctx.max_strata(&[0], template).map_err(serr)?;
            hyps.push(format!("strata with prefix {{0}} has {} members", strata.len()));
            hyp(
                qi(strata.len()) * &c.beta >= qi(g.degree(0)),
                "strata size >= deg/beta",
                &mut hyps,
            )?;
            let nadirs = strata.nadirs();
            let mut all_weak = true;
            for &x in &nadirs {
                all_weak &= ctx.classify_nadir(&strata, x, &c.delta).map_err(serr)? == NadirClass::Weak;
            }
            hyp(all_weak, "every nadir is weak", &mut hyps)?;
            rounds_fit(r, &c, &mut hyps)?;
            // at least delta/(16 beta^2) nadirs, compared exactly
            let need = &c.delta / (qi(16) * &c.beta * &c.beta);
            let nadir_set: BTreeSet<VertexId> = nadirs.into_iter().collect();
            Ok(Prepared {
                fixture: "star with 900 leaves, center lowest, pattern K2",
                graph: g,
                pattern: h,
                constants: c,
                initial: Some(vec![0]),
                bound: 1.0 - 1.0 / (20.0 * r as f64),
                hypotheses: hyps,
                event: Box::new(move |k| {
                    let seen = k.vertices_at(r).into_iter().filter(|v| nadir_set.contains(v)).count();
                    qi(seen) >= need
                }),
            })
        }
        LemmaId::EdgeCompletion => {
            let g = decorated_triangles(10, 3);
            let h = gen::complete(3);
            let mut c = LemmaConstants {
                epsilon: q(1, 2),
                p: 2,
                r: 3,
                alpha: qi(5),
                beta: qi(6),
                delta: qi(40),
                xi1: 3,
                xi2: 3,
                xi3: 40,
            };
            c.apply(overrides);
            let r = c.r;
            let t = trimmed(&g, VertexOrder::identity(g.n()), &h, &c, &mut hyps)?;
            let j = [Edge::new(0, 1), Edge::new(1, 2), Edge::new(0, 2)];
            hyp(
                j.iter().all(|e| t.graph.contains_edge(*e)),
                "triangle {0, 1, 2} survives trimming",
                &mut hyps,
            )?;
            // the per-edge factor counts delta draws from the upper endpoint
            hyp(qi(c.xi3 as usize) >= c.delta, "xi3 >= delta", &mut hyps)?;
            rounds_fit(r, &c, &mut hyps)?;
            let a = f(&c.alpha);
            let bound = 1.0 - (r * r) as f64 * (1.0 - 1.0 / a).powf(f(&c.delta));
            Ok(Prepared {
                fixture: "10 disjoint triangles with three pendant leaves per vertex, one triangle seeded",
                graph: g,
                pattern: h,
                constants: c,
                initial: Some(vec![0, 1, 2]),
                bound,
                hypotheses: hyps,
                event: Box::new(move |k| j.iter().all(|&e| k.edge_round(e).is_some_and(|s| s <= r))),
            })
        }
    }
}

pub fn status(frequency: f64, bound: f64) -> LemmaStatus {
    if bound <= 0.0 || bound >= 1.0 {
        LemmaStatus::Inconclusive
    } else if frequency >= bound {
        LemmaStatus::Pass
    } else {
        LemmaStatus::Fail
    }
}

/// Runs `trials` instrumented tester runs for `lemma`. Runs that abort
/// count as trials without the event.
pub fn lemma_check(
    lemma: LemmaId,
    overrides: &PracticalOverrides,
    trials: u64,
    seed_root: u64,
    jobs: usize,
) -> Result<LemmaReport, HarnessError> {
    let prep = prepare(lemma, overrides)?;
    let params = prep.constants.tester_params()?;
    let options = RunOptions {
        early_exit: false,
        initial: prep.initial.clone(),
    };
    let pool = thread_pool(jobs)?;
    let results: Vec<Option<bool>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let mut oracle = OracleSession::new(&prep.graph, derive_seed(seed_root, lemma.domain(), i));
                test_h_freeness(&mut oracle, &prep.pattern, &params, &options)
                    .ok()
                    .map(|v| (prep.event)(&v.knowledge))
            })
            .collect()
    });
    let successes = results.iter().filter(|r| **r == Some(true)).count() as u64;
    let aborts = results.iter().filter(|r| r.is_none()).count() as u64;
    let frequency = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
    Ok(LemmaReport {
        version: VERSION.to_string(),
        lemma: lemma.name().to_string(),
        fixture: prep.fixture.to_string(),
        n: prep.graph.n(),
        constants: prep.constants.listing(),
        hypotheses: prep.hypotheses,
        trials,
        successes,
        aborts,
        frequency,
        bound: prep.bound,
        status: status(frequency, prep.bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        assert_eq!(status(0.9, 0.5), LemmaStatus::Pass);
        assert_eq!(status(0.5, 0.5), LemmaStatus::Pass);
        assert_eq!(status(0.4, 0.5), LemmaStatus::Fail);
        assert_eq!(status(1.0, -2.0), LemmaStatus::Inconclusive);
        assert_eq!(status(1.0, 0.0), LemmaStatus::Inconclusive);
        assert_eq!(status(1.0, 1.0), LemmaStatus::Inconclusive);
    }

    #[test]
    fn every_fixture_meets_its_hypotheses() {
        for l in LemmaId::ALL {
            let p = prepare(l, &PracticalOverrides::default()).unwrap_or_else(|e| panic!("{}: {e}", l.name()));
            assert!(p.bound > 0.0 && p.bound < 1.0, "{}: {}", l.name(), p.bound);
        }
    }

    #[test]
    fn loose_delta_makes_the_descent_bound_vacuous() {
        let o = PracticalOverrides {
            delta: Some(qi(100)),
            ..Default::default()
        };
        let rep = lemma_check(LemmaId::ChainDescent, &o, 50, 1, 2).unwrap();
        assert!(rep.bound <= 0.0);
        assert_eq!(rep.status, LemmaStatus::Inconclusive);
    }

    #[test]
    fn broken_hypotheses_are_reported() {
        // alpha above delta
        let o = PracticalOverrides {
            alpha: Some(qi(9)),
            ..Default::default()
        };
        assert!(matches!(prepare(LemmaId::ChainDescent, &o), Err(HarnessError::Hypothesis(_))));
        // too few rounds for the chain
        let o = PracticalOverrides {
            xi2: Some(2),
            ..Default::default()
        };
        assert!(matches!(prepare(LemmaId::ChainDescent, &o), Err(HarnessError::Hypothesis(_))));
        // a tiny degree threshold strips the far instance's triangles
        let o = PracticalOverrides {
            alpha: Some(qi(1)),
            ..Default::default()
        };
        assert!(matches!(prepare(LemmaId::SeedHit, &o), Err(HarnessError::Hypothesis(_))));
    }

    #[test]
    fn same_seed_same_report() {
        let o = PracticalOverrides::default();
        let a = lemma_check(LemmaId::CopyMinimum, &o, 200, 5, 1).unwrap();
        let b = lemma_check(LemmaId::CopyMinimum, &o, 200, 5, 4).unwrap();
        assert_eq!(a, b);
    }
}
