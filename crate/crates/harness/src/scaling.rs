//! Observed query counts as the input grows under fixed constants.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::experiment::run_trials;
use crate::manifest::ExperimentConfig;
use crate::HarnessError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub trials: u64,
    pub rejects: u64,
    pub aborts: u64,
    pub queries_max: u64,
    pub queries_mean: f64,
    pub query_ceiling: String,
}

/// Runs `base` once per size, rescaling its generator. Fails if any size
/// observes more queries than the ceiling.
pub fn query_scaling_experiment(base: &ExperimentConfig, sizes: &[usize]) -> Result<Vec<ScalingRow>, HarnessError> {
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut cfg = base.clone();
        cfg.generator = base.generator.with_size(n)?;
        let res = run_trials(&cfg)?;
        let s = &res.summary;
        let ceiling: BigUint = s.query_ceiling.parse().expect("ceiling is a decimal integer");
        if BigUint::from(s.queries_max) > ceiling {
            return Err(HarnessError::Invariant(format!(
                "n = {n}: observed {} queries above the ceiling {ceiling}",
                s.queries_max
            )));
        }
        rows.push(ScalingRow {
            n,
            trials: s.trials,
            rejects: s.rejects,
            aborts: s.aborts,
            queries_max: s.queries_max,
            queries_mean: s.queries_mean,
            query_ceiling: s.query_ceiling.clone(),
        });
    }
    Ok(rows)
}

pub fn scaling_table(rows: &[ScalingRow]) -> String {
    let mut t = String::from("n\ttrials\trejects\taborts\tqueries_max\tqueries_mean\tceiling\n");
    for r in rows {
        t.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{:.1}\t{}\n",
            r.n, r.trials, r.rejects, r.aborts, r.queries_max, r.queries_mean, r.query_ceiling
        ));
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifest::{GeneratorSpec, ParamsSpec, PatternSpec};

    fn base() -> ExperimentConfig {
        ExperimentConfig {
            name: String::new(),
            generator: GeneratorSpec::DisjointCopies {
                pattern: PatternSpec::named("k3"),
                copies: 1,
                pad: 0,
            },
            pattern: PatternSpec::named("k3"),
            params: ParamsSpec::from_inline("epsilon=1/3,xi1=20,xi2=3,xi3=4").unwrap(),
            instances: 1,
            trials: 4,
            seed_root: 3,
            jobs: 2,
            out: None,
            early_exit: false,
            timing: false,
        }
    }

    #[test]
    fn single_size_gives_one_row() {
        let rows = query_scaling_experiment(&base(), &[30]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].query_ceiling, (20u64 * (5u64.pow(3) - 1)).to_string());
        assert!(scaling_table(&rows).lines().count() == 2);
    }

    #[test]
    fn over_budget_params_are_refused_before_running() {
        let mut cfg = base();
        cfg.params = ParamsSpec::from_inline("epsilon=1/3,xi1=1000,xi2=40,xi3=1000").unwrap();
        assert!(matches!(
            query_scaling_experiment(&cfg, &[30, 300]),
            Err(HarnessError::Config(_))
        ));
    }
}
