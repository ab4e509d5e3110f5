//! Batch summaries as text and JSON.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::experiment::{first_witness, TrialOutcome, TrialRecord, VerdictLabel, CSV_SCHEMA_VERSION};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEcho {
    pub instance_id: u64,
    pub test_seed: u64,
    pub edges: Vec<[usize; 2]>,
}

/// Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub csv_schema: u32,
    pub name: String,
    pub params_fp: String,
    pub query_ceiling: String,
    pub trials: u64,
    pub accepts: u64,
    pub rejects: u64,
    pub aborts: u64,
    /// Rejections over completed (non-abort) trials.
    pub rejection_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub queries_max: u64,
    /// Over completed trials.
    pub queries_mean: f64,
    pub witness: Option<WitnessEcho>,
    /// First few distinct abort causes.
    pub abort_reasons: Vec<String>,
}

/// Wilson score interval at 95%; `(0, 0)` for no trials.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 0.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // the endpoints are exactly 0 and 1 at the extremes; avoid rounding dust
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

const MAX_REASONS: usize = 5;

impl Summary {
    /// Counts and rates from the CSV rows alone.
    pub fn from_records<'a>(
        name: &str,
        params_fp: &str,
        ceiling: &BigUint,
        records: impl IntoIterator<Item = &'a TrialRecord>,
    ) -> Summary {
        let (mut trials, mut accepts, mut rejects, mut aborts) = (0u64, 0u64, 0u64, 0u64);
        let (mut qmax, mut qsum) = (0u64, 0u128);
        for r in records {
            trials += 1;
            match r.verdict {
                VerdictLabel::Accept => accepts += 1,
                VerdictLabel::Reject => rejects += 1,
                VerdictLabel::Abort => aborts += 1,
            }
            if r.verdict != VerdictLabel::Abort {
                qmax = qmax.max(r.queries);
                qsum += r.queries as u128;
            }
        }
        let done = accepts + rejects;
        let (lo, hi) = wilson_interval(rejects, done);
        Summary {
            version: VERSION.to_string(),
            csv_schema: CSV_SCHEMA_VERSION,
            name: name.to_string(),
            params_fp: params_fp.to_string(),
            query_ceiling: ceiling.to_string(),
            trials,
            accepts,
            rejects,
            aborts,
            rejection_rate: if done == 0 { 0.0 } else { rejects as f64 / done as f64 },
            wilson_low: lo,
            wilson_high: hi,
            queries_max: qmax,
            queries_mean: if done == 0 { 0.0 } else { qsum as f64 / done as f64 },
            witness: None,
            abort_reasons: Vec::new(),
        }
    }

    pub fn from_outcomes(name: &str, params_fp: &str, ceiling: &BigUint, outcomes: &[TrialOutcome]) -> Summary {
        let mut s = Summary::from_records(name, params_fp, ceiling, outcomes.iter().map(|o| &o.record));
        s.witness = first_witness(outcomes);
        for e in outcomes.iter().filter_map(|o| o.error.as_ref()) {
            if s.abort_reasons.len() == MAX_REASONS {
                break;
            }
            if !s.abort_reasons.contains(e) {
                s.abort_reasons.push(e.clone());
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let _ = writeln!(t, "hfree {} (csv schema {})", self.version, self.csv_schema);
        if !self.name.is_empty() {
            let _ = writeln!(t, "experiment      {}", self.name);
        }
        let _ = writeln!(t, "params          {}", self.params_fp);
        let _ = writeln!(t, "query ceiling   {}", self.query_ceiling);
        let _ = writeln!(
            t,
            "trials          {} (accept {}, reject {}, abort {})",
            self.trials, self.accepts, self.rejects, self.aborts
        );
        let _ = writeln!(
            t,
            "rejection rate  {:.4}  [{:.4}, {:.4}] Wilson 95%",
            self.rejection_rate, self.wilson_low, self.wilson_high
        );
        let _ = writeln!(t, "queries         max {}, mean {:.1}", self.queries_max, self.queries_mean);
        if let Some(w) = &self.witness {
            let edges: Vec<String> = w.edges.iter().map(|[u, v]| format!("{u}-{v}")).collect();
            let _ = writeln!(
                t,
                "witness         instance {} seed {}: {}",
                w.instance_id,
                w.test_seed,
                edges.join(" ")
            );
        }
        for r in &self.abort_reasons {
            let _ = writeln!(t, "abort           {r}");
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(verdict: VerdictLabel, queries: u64) -> TrialRecord {
        TrialRecord {
            instance_id: 0,
            gen_seed: 1,
            test_seed: 2,
            n: 3,
            params_fp: "x".into(),
            verdict,
            queries,
            rounds: 1,
            ms: 0,
        }
    }

    #[test]
    fn empty_batch_is_zeroed() {
        let s = Summary::from_outcomes("", "x", &BigUint::from(0u32), &[]);
        assert_eq!((s.trials, s.accepts, s.rejects, s.aborts), (0, 0, 0, 0));
        assert_eq!((s.rejection_rate, s.wilson_low, s.wilson_high), (0.0, 0.0, 0.0));
        assert_eq!((s.queries_max, s.queries_mean), (0, 0.0));
        assert!(s.witness.is_none());
    }

    #[test]
    fn witness_is_echoed() {
        let o = TrialOutcome {
            record: rec(VerdictLabel::Reject, 9),
            witness: Some(vec![hfree_core::graph::Edge::new(0, 1), hfree_core::graph::Edge::new(1, 2)]),
            error: None,
        };
        let s = Summary::from_outcomes("", "x", &BigUint::from(10u32), &[o]);
        assert_eq!(s.witness.as_ref().unwrap().edges, vec![[0, 1], [1, 2]]);
        assert!(s.to_text().contains("0-1 1-2"));
        assert!(s.to_json().contains("\"witness\""));
    }

    #[test]
    fn mixed_counts_and_rates() {
        let rows = [
            rec(VerdictLabel::Accept, 4),
            rec(VerdictLabel::Reject, 8),
            rec(VerdictLabel::Reject, 6),
            rec(VerdictLabel::Abort, 100),
        ];
        let s = Summary::from_records("", "x", &BigUint::from(10u32), &rows);
        assert_eq!((s.trials, s.accepts, s.rejects, s.aborts), (4, 1, 2, 1));
        assert_eq!(s.rejection_rate, 2.0 / 3.0);
        assert_eq!(s.queries_max, 8);
        assert_eq!(s.queries_mean, 6.0);
    }

    #[test]
    fn json_keys_keep_declaration_order() {
        let s = Summary::from_records("", "x", &BigUint::from(1u32), &[]);
        let json = s.to_json();
        let keys = ["version", "csv_schema", "name", "params_fp", "query_ceiling", "trials", "accepts"];
        let pos: Vec<usize> = keys.iter().map(|k| json.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn wilson_reference_values() {
        // 8 of 10: standard textbook interval (0.4902, 0.9433)
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4, "{lo} {hi}");
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.0370).abs() < 1e-4);
        assert_eq!(wilson_interval(5, 5).1, 1.0);
    }
}
