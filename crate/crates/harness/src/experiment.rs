//! Monte-Carlo batches of tester runs.
//!
//! Every trial derives its seeds from the root seed and its index alone, and
//! results are merged by index, so the output does not depend on the worker
//! count or on scheduling.

use std::time::Instant;

use hfree_core::graph::{Edge, Graph};
use hfree_core::oracle::{derive_seed, OracleSession};
use hfree_core::tester::{test_h_freeness, Outcome, RunOptions, TesterError, TesterParams};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::manifest::{params_fingerprint, ExperimentConfig};
use crate::report::{Summary, WitnessEcho};
use crate::HarnessError;

/// Bumped whenever the column set or order changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 9] = [
    "instance_id",
    "gen_seed",
    "test_seed",
    "n",
    "params_fp",
    "verdict",
    "queries",
    "rounds",
    "ms",
];

const GEN_DOMAIN: u64 = 1;
const TEST_DOMAIN: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictLabel {
    Accept,
    Reject,
    Abort,
}

/// One CSV row. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance_id: u64,
    pub gen_seed: u64,
    pub test_seed: u64,
    pub n: usize,
    pub params_fp: String,
    pub verdict: VerdictLabel,
    pub queries: u64,
    pub rounds: usize,
    pub ms: u64,
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub witness: Option<Vec<Edge>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub outcomes: Vec<TrialOutcome>,
    pub summary: Summary,
}

impl ExperimentResult {
    pub fn records(&self) -> impl Iterator<Item = &TrialRecord> {
        self.outcomes.iter().map(|o| &o.record)
    }

    pub fn csv(&self) -> String {
        records_to_csv(self.records())
    }
}

pub fn records_to_csv<'a>(records: impl IntoIterator<Item = &'a TrialRecord>) -> String {
    // headers are written by hand so that an empty batch still has them
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in records {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("ascii output")
}

pub fn parse_csv(text: &str) -> Result<Vec<TrialRecord>, HarnessError> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| HarnessError::Config(format!("trial CSV: {e}")))
}

pub fn gen_seed(root: u64, instance: u64) -> u64 {
    derive_seed(root, GEN_DOMAIN, instance)
}

pub fn test_seed(root: u64, instance: u64, trial: u64) -> u64 {
    derive_seed(derive_seed(root, TEST_DOMAIN, instance), TEST_DOMAIN, trial)
}

pub fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, HarnessError> {
    if jobs == 0 {
        return Err(HarnessError::Config("jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Io(format!("thread pool: {e}")))
}

/// Runs every trial of `config`. Configuration problems are errors; problems
/// inside a trial, including generator failures, become `abort` rows.
pub fn run_trials(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    let h = config.pattern.build()?;
    let params = config.params.resolve(&h)?;
    let r = params.r as usize;
    let fp = params_fingerprint(&params);
    let pool = thread_pool(config.jobs)?;
    let root = config.seed_root;

    let outcomes = pool.install(|| {
        let instances: Vec<(u64, Result<Graph, String>)> = (0..config.instances)
            .into_par_iter()
            .map(|i| {
                let seed = gen_seed(root, i);
                (seed, config.generator.build(seed, r).map(|(g, _)| g).map_err(|e| e.to_string()))
            })
            .collect();
        let jobs: Vec<(u64, u64)> = (0..config.instances)
            .flat_map(|i| (0..config.trials).map(move |t| (i, t)))
            .collect();
        jobs.into_par_iter()
            .map(|(i, t)| {
                let (gseed, graph) = &instances[i as usize];
                let record = TrialRecord {
                    instance_id: i,
                    gen_seed: *gseed,
                    test_seed: test_seed(root, i, t),
                    n: graph.as_ref().map_or(0, |g| g.n()),
                    params_fp: fp.clone(),
                    verdict: VerdictLabel::Abort,
                    queries: 0,
                    rounds: 0,
                    ms: 0,
                };
                match graph {
                    Ok(g) => run_one(g, &h, &params, config, record),
                    Err(e) => TrialOutcome {
                        record,
                        witness: None,
                        error: Some(format!("generator: {e}")),
                    },
                }
            })
            .collect::<Vec<_>>()
    });
    let summary = Summary::from_outcomes(&config.name, &fp, &params.query_ceiling, &outcomes);
    Ok(ExperimentResult { outcomes, summary })
}

fn run_one(
    g: &Graph,
    h: &Graph,
    params: &TesterParams,
    config: &ExperimentConfig,
    mut record: TrialRecord,
) -> TrialOutcome {
    let start = Instant::now();
    let mut oracle = OracleSession::new(g, record.test_seed);
    let options = RunOptions {
        early_exit: config.early_exit,
        initial: None,
    };
    let result = test_h_freeness(&mut oracle, h, params, &options);
    if config.timing {
        record.ms = start.elapsed().as_millis() as u64;
    }
    match result {
        Ok(v) => {
            record.queries = v.stats.queries;
            record.rounds = v.stats.rounds;
            let over = BigUint::from(record.queries) > params.query_ceiling;
            record.verdict = match v.outcome {
                _ if over => VerdictLabel::Abort,
                Outcome::Accept => VerdictLabel::Accept,
                Outcome::Reject => VerdictLabel::Reject,
            };
            TrialOutcome {
                record,
                witness: v.witness.map(|_| v.witness_edges),
                error: over.then(|| "query count above the ceiling".to_string()),
            }
        }
        Err(e) => {
            if let TesterError::QueryBudgetExceeded { limit } = e {
                record.queries = limit;
            }
            TrialOutcome {
                record,
                witness: None,
                error: Some(e.to_string()),
            }
        }
    }
}

/// First rejecting trial in index order, with its witness edges.
pub fn first_witness(outcomes: &[TrialOutcome]) -> Option<WitnessEcho> {
    outcomes.iter().find_map(|o| {
        o.witness.as_ref().map(|w| WitnessEcho {
            instance_id: o.record.instance_id,
            test_seed: o.record.test_seed,
            edges: crate::format::edge_pairs(w),
        })
    })
}
