//! Serializable experiment descriptions.

use std::path::PathBuf;

use hfree_core::generators::{self as gen, InstanceCertificate};
use hfree_core::graph::{Graph, Pattern};
use hfree_core::tester::{
    derive_parameters, parse_rational, ParamMode, PracticalOverrides, QueryBudget, TesterParams, DEFAULT_QUERY_LIMIT,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::format::{self, GraphJson};
use crate::HarnessError;

fn config_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(e.to_string())
}

/// A pattern by name (`k3`, `p3`, `c4`, `s3`, `paw`) or by explicit edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    Named(String),
    Edges(GraphJson),
}

impl PatternSpec {
    pub fn named(name: &str) -> Self {
        PatternSpec::Named(name.to_string())
    }

    pub fn build(&self) -> Result<Graph, HarnessError> {
        let g = match self {
            PatternSpec::Edges(j) => j.to_graph()?,
            PatternSpec::Named(name) => named_pattern(name)?,
        };
        Pattern::new(&g).map_err(config_err)?;
        Ok(g)
    }
}

fn named_pattern(name: &str) -> Result<Graph, HarnessError> {
    let name = name.trim().to_ascii_lowercase();
    if name == "paw" {
        return Ok(gen::paw());
    }
    let unknown = || HarnessError::Config(format!("unknown pattern {name:?}"));
    let (kind, size) = name.split_at(1.min(name.len()));
    let k: usize = size.parse().map_err(|_| unknown())?;
    match kind {
        "k" => Ok(gen::complete(k)),
        "p" => Ok(gen::path(k)),
        "c" if k >= 3 => Ok(gen::cycle(k)),
        "s" => Ok(gen::star(k)),
        _ => Err(unknown()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    DisjointCopies {
        pattern: PatternSpec,
        copies: usize,
        #[serde(default)]
        pad: usize,
    },
    Planted {
        pattern: PatternSpec,
        n: usize,
        epsilon: String,
        degree: usize,
    },
    RandomTree {
        n: usize,
    },
    BoundedDegree {
        n: usize,
        degree: usize,
    },
    Gnp {
        n: usize,
        q: f64,
    },
    Grid {
        width: usize,
        height: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Star {
        leaves: usize,
    },
    Complete {
        n: usize,
    },
    Friendship {
        k: usize,
    },
    Subdivide {
        base: Box<GeneratorSpec>,
        t: usize,
    },
    Union {
        parts: Vec<GeneratorSpec>,
    },
    File {
        path: PathBuf,
    },
    Inline {
        graph: GraphJson,
    },
}

impl GeneratorSpec {
    /// Builds one instance. Seeded families draw from `seed`; a union gives
    /// its parts consecutive seeds.
    pub fn build(&self, seed: u64, r: usize) -> Result<(Graph, Option<InstanceCertificate>), HarnessError> {
        use GeneratorSpec::*;
        let plain = |g: Graph| Ok((g, None));
        match self {
            DisjointCopies { pattern, copies, pad } => {
                let (g, c) = gen::disjoint_copies(&pattern.build()?, *copies, *pad, r).map_err(config_err)?;
                Ok((g, Some(c)))
            }
            Planted {
                pattern,
                n,
                epsilon,
                degree,
            } => {
                let eps = parse_rational(epsilon).map_err(config_err)?;
                let (g, c) =
                    gen::planted_far_instance(&pattern.build()?, *n, &eps, *degree, r, seed).map_err(config_err)?;
                Ok((g, Some(c)))
            }
            RandomTree { n } => plain(gen::random_tree(*n, seed)),
            BoundedDegree { n, degree } => plain(gen::random_bounded_degree(*n, *degree, seed).map_err(config_err)?),
            Gnp { n, q } => {
                if !(0.0..=1.0).contains(q) {
                    return Err(HarnessError::Config(format!("edge probability {q} outside [0, 1]")));
                }
                plain(gen::gnp(*n, *q, seed))
            }
            Grid { width, height } => plain(gen::grid(*width, *height)),
            Cycle { n } => {
                if *n < 3 {
                    return Err(HarnessError::Config("a cycle needs at least 3 vertices".into()));
                }
                plain(gen::cycle(*n))
            }
            Path { n } => plain(gen::path(*n)),
            Star { leaves } => plain(gen::star(*leaves)),
            Complete { n } => plain(gen::complete(*n)),
            Friendship { k } => plain(gen::friendship(*k)),
            Subdivide { base, t } => plain(gen::subdivide(&base.build(seed, r)?.0, *t)),
            Union { parts } => {
                let mut g = Graph::empty(0);
                for (i, part) in parts.iter().enumerate() {
                    g = g.disjoint_union(&part.build(seed.wrapping_add(i as u64), r)?.0);
                }
                plain(g)
            }
            File { path } => plain(format::read_graph(path)?),
            Inline { graph } => plain(graph.to_graph()?),
        }
    }

    /// The same family at `n` vertices, for scaling experiments.
    pub fn with_size(&self, n: usize) -> Result<GeneratorSpec, HarnessError> {
        use GeneratorSpec::*;
        let mut s = self.clone();
        match &mut s {
            DisjointCopies { pattern, copies, pad } => {
                let m = pattern.build()?.n();
                *copies = n / m;
                *pad = n % m;
            }
            Planted { n: k, .. }
            | RandomTree { n: k }
            | BoundedDegree { n: k, .. }
            | Gnp { n: k, .. }
            | Cycle { n: k }
            | Path { n: k } => *k = n,
            _ => return Err(HarnessError::Config("this generator has no size parameter".into())),
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Theory,
    #[default]
    Practical,
}

fn default_p() -> u64 {
    2
}

/// Tester constants as written in a config; resolved against the pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default)]
    pub mode: ModeSpec,
    pub epsilon: String,
    #[serde(default = "default_p")]
    pub p: u64,
    /// Defaults to the pattern size, at least 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi2: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi3: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_limit: Option<u64>,
    #[serde(default)]
    pub force: bool,
}

impl Default for ParamsSpec {
    fn default() -> Self {
        ParamsSpec {
            mode: ModeSpec::default(),
            epsilon: String::new(),
            p: default_p(),
            r: None,
            alpha: None,
            beta: None,
            delta: None,
            xi1: None,
            xi2: None,
            xi3: None,
            query_limit: None,
            force: false,
        }
    }
}

impl ParamsSpec {
    /// Reads a JSON file when `arg` names one, otherwise parses inline
    /// `key=value` pairs separated by commas.
    pub fn from_arg(arg: &str) -> Result<Self, HarnessError> {
        let path = std::path::Path::new(arg);
        if arg.ends_with(".json") || path.is_file() {
            return serde_json::from_str(&format::read(path)?).map_err(|e| config_err(format!("params file: {e}")));
        }
        if arg.trim_start().starts_with('{') {
            return serde_json::from_str(arg).map_err(|e| config_err(format!("params: {e}")));
        }
        Self::from_inline(arg)
    }

    pub fn from_inline(text: &str) -> Result<Self, HarnessError> {
        let mut map = serde_json::Map::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| config_err(format!("expected key=value, got {item:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            let value = match k {
                "p" | "r" | "xi1" | "xi2" | "xi3" | "query_limit" => serde_json::Value::from(
                    v.parse::<u64>()
                        .map_err(|_| config_err(format!("{k} must be a non-negative integer")))?,
                ),
                "force" => serde_json::Value::from(
                    v.parse::<bool>().map_err(|_| config_err("force must be true or false"))?,
                ),
                _ => serde_json::Value::from(v),
            };
            map.insert(k.to_string(), value);
        }
        serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| config_err(format!("params: {e}")))
    }

    /// Applies the non-default fields of `other` on top of `self`.
    pub fn overlay(&mut self, other: &ParamsSpec) {
        if !other.epsilon.is_empty() {
            self.epsilon = other.epsilon.clone();
        }
        macro_rules! take {
            ($($f:ident),*) => {$(if other.$f.is_some() { self.$f = other.$f.clone(); })*};
        }
        take!(r, alpha, beta, delta, xi1, xi2, xi3, query_limit);
        if other.p != default_p() {
            self.p = other.p;
        }
        self.force |= other.force;
    }

    pub fn overrides(&self) -> Result<PracticalOverrides, HarnessError> {
        let q = |x: &Option<String>| x.as_deref().map(parse_rational).transpose().map_err(config_err);
        Ok(PracticalOverrides {
            alpha: q(&self.alpha)?,
            beta: q(&self.beta)?,
            delta: q(&self.delta)?,
            xi1: self.xi1,
            xi2: self.xi2,
            xi3: self.xi3,
        })
    }

    pub fn resolve(&self, h: &Graph) -> Result<TesterParams, HarnessError> {
        let eps = parse_rational(&self.epsilon).map_err(config_err)?;
        let r = self.r.unwrap_or((h.n() as u64).max(2));
        let mode = match self.mode {
            ModeSpec::Theory => ParamMode::Theory,
            ModeSpec::Practical => ParamMode::Practical,
        };
        let budget = QueryBudget {
            limit: self.query_limit.unwrap_or(DEFAULT_QUERY_LIMIT),
            force: self.force,
        };
        derive_parameters(&eps, self.p, r, mode, &self.overrides()?, budget).map_err(config_err)
    }
}

/// Short stable digest of every resolved constant.
pub fn params_fingerprint(p: &TesterParams) -> String {
    let canon = format!(
        "mode={:?};eps={};p={};r={};alpha={};beta={};delta={};xi1={};xi2={};xi3={};limit={};force={}",
        p.mode,
        p.epsilon,
        p.p,
        p.r,
        p.alpha,
        p.beta,
        p.delta,
        p.xi1,
        p.xi2,
        p.xi3,
        p.budget.limit,
        p.budget.force
    );
    let digest = Sha256::digest(canon.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn one() -> u64 {
    1
}

fn one_job() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub generator: GeneratorSpec,
    pub pattern: PatternSpec,
    pub params: ParamsSpec,
    /// Distinct generated graphs; seeded generators draw one per index.
    #[serde(default = "one")]
    pub instances: u64,
    /// Tester runs per instance.
    pub trials: u64,
    #[serde(default)]
    pub seed_root: u64,
    #[serde(default = "one_job")]
    pub jobs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub early_exit: bool,
    /// Fill the `ms` column with wall time; off keeps output byte-stable.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| config_err(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_patterns() {
        assert_eq!(PatternSpec::named("k3").build().unwrap(), gen::complete(3));
        assert_eq!(PatternSpec::named("P3").build().unwrap(), gen::path(3));
        assert_eq!(PatternSpec::named("c4").build().unwrap(), gen::cycle(4));
        assert_eq!(PatternSpec::named("paw").build().unwrap(), gen::paw());
        for bad in ["k1", "c2", "q3", "", "k"] {
            assert!(PatternSpec::named(bad).build().is_err(), "{bad}");
        }
    }

    #[test]
    fn inline_and_json_params_agree() {
        let a = ParamsSpec::from_arg("epsilon=1/3,alpha=32,xi1=240,xi2=6,xi3=12").unwrap();
        let b = ParamsSpec::from_arg(r#"{"epsilon":"1/3","alpha":"32","xi1":240,"xi2":6,"xi3":12}"#).unwrap();
        assert_eq!(a, b);
        let k3 = gen::complete(3);
        let p = a.resolve(&k3).unwrap();
        assert_eq!(p.r, 3);
        assert_eq!(params_fingerprint(&p), params_fingerprint(&b.resolve(&k3).unwrap()));
        assert!(ParamsSpec::from_arg("epsilon=1/3,gamma=2").is_err());
        assert!(ParamsSpec::from_arg("xi1=-3").is_err());
    }

    #[test]
    fn fingerprint_tracks_constants() {
        let k3 = gen::complete(3);
        let a = ParamsSpec::from_inline("epsilon=1/3,xi1=240,xi2=6,xi3=12").unwrap();
        let b = ParamsSpec::from_inline("epsilon=1/3,xi1=240,xi2=6,xi3=13").unwrap();
        assert_ne!(
            params_fingerprint(&a.resolve(&k3).unwrap()),
            params_fingerprint(&b.resolve(&k3).unwrap())
        );
    }

    #[test]
    fn config_round_trip() {
        let cfg = ExperimentConfig {
            name: "tri".into(),
            generator: GeneratorSpec::DisjointCopies {
                pattern: PatternSpec::named("k3"),
                copies: 4,
                pad: 1,
            },
            pattern: PatternSpec::named("k3"),
            params: ParamsSpec::from_inline("epsilon=1/3,xi1=10,xi2=2,xi3=3").unwrap(),
            instances: 1,
            trials: 5,
            seed_root: 9,
            jobs: 2,
            out: None,
            early_exit: false,
            timing: false,
        };
        assert_eq!(ExperimentConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn sizes_rescale_families() {
        let s = GeneratorSpec::DisjointCopies {
            pattern: PatternSpec::named("k3"),
            copies: 1,
            pad: 0,
        };
        let (g, _) = s.with_size(301).unwrap().build(0, 3).unwrap();
        assert_eq!(g.n(), 301);
        assert_eq!(g.edge_count(), 300);
        assert!(GeneratorSpec::Grid { width: 2, height: 2 }.with_size(9).is_err());
    }
}
