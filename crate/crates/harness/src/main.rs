use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hfree::experiment::run_trials;
use hfree::format::{self, CertificateJson};
use hfree::lemmas::{lemma_check, LemmaId, LemmaStatus};
use hfree::manifest::{ExperimentConfig, GeneratorSpec, ModeSpec, ParamsSpec, PatternSpec};
use hfree::scaling::{query_scaling_experiment, scaling_table};
use hfree::HarnessError;
use hfree_core::admissibility::{admissibility_of_order, exact_admissibility, greedy_admissibility_order};
use hfree_core::graph::{distance_to_h_freeness, DistanceLimits, Graph, OrderedGraph, Pattern};
use hfree_core::structure::StrataContext;
use hfree_core::tester::parse_rational;
use hfree_core::trimming::{trim, TrimParams};
use serde_json::json;

#[derive(Parser)]
#[command(name = "hfree", version, about = "H-freeness testing experiments on bounded-admissibility graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph from a generator spec (JSON text or file).
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Radius used for the instance certificate.
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Edge-list output; a certificate, if any, goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// r-admissibility of a graph, for a given order or optimized.
    Adm {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = AdmMethod::Greedy)]
        method: AdmMethod,
    },
    /// Trim a graph and report the removed edges.
    Trim {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        delta: String,
        /// Edge list of the trimmed graph.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Edge-deletion distance to H-freeness.
    Dist {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        pattern: String,
    },
    /// Stratas whose top prefix vertex is the given vertex.
    Struct {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        vertex: usize,
        /// Classify nadirs as weak or strong against this threshold.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Run the tester on a graph file.
    Test {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long)]
        early_exit: bool,
    },
    /// Run an experiment config, optionally across several sizes.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        trials: Option<u64>,
        /// Comma-separated sizes for a query-scaling run.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Record wall time in the ms column.
        #[arg(long)]
        timing: bool,
    },
    /// Measure a discovery guarantee on its fixture.
    LemmaCheck {
        #[arg(long, value_enum)]
        lemma: Option<LemmaId>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Constant overrides: alpha, beta, delta, xi1, xi2, xi3.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct GraphInput {
    #[arg(long)]
    input: PathBuf,
    /// Vertex order file; defaults to a greedy low-admissibility order.
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// JSON file, JSON text, or inline key=value pairs.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeSpec>,
    /// Trial CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AdmMethod {
    Order,
    Greedy,
    Exact,
}

fn cfg_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Config(e.to_string())
}

fn load_ordered(input: &GraphInput, r: usize) -> Result<OrderedGraph, HarnessError> {
    let g = format::read_graph(&input.input)?;
    let order = match &input.order {
        Some(p) => format::read_order(p, g.n())?,
        None => greedy_admissibility_order(&g, r).map_err(cfg_err)?.order,
    };
    OrderedGraph::new(g, order).map_err(cfg_err)
}

fn pattern(name: &str) -> Result<Graph, HarnessError> {
    let spec = if name.trim_start().starts_with('{') {
        PatternSpec::Edges(serde_json::from_str(name).map_err(cfg_err)?)
    } else {
        PatternSpec::named(name)
    };
    spec.build()
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn json_or_file<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, HarnessError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        format::read(Path::new(arg))?
    };
    serde_json::from_str(&text).map_err(cfg_err)
}

fn apply_run_args(cfg: &mut ExperimentConfig, run: &RunArgs) -> Result<(), HarnessError> {
    if let Some(s) = run.seed {
        cfg.seed_root = s;
    }
    if let Some(j) = run.jobs {
        cfg.jobs = j;
    }
    if let Some(p) = &run.params {
        cfg.params.overlay(&ParamsSpec::from_arg(p)?);
    }
    if let Some(m) = run.mode {
        cfg.params.mode = m;
    }
    if let Some(o) = &run.out {
        cfg.out = Some(o.clone());
    }
    Ok(())
}

/// Writes the CSV if requested, prints the summary, and maps aborts to exit 1.
fn finish_batch(cfg: &ExperimentConfig) -> Result<ExitCode, HarnessError> {
    let res = run_trials(cfg)?;
    if let Some(out) = &cfg.out {
        format::write(out, &res.csv())?;
        format::write(&out.with_extension("summary.json"), &res.summary.to_json())?;
    }
    eprint!("{}", res.summary.to_text());
    println!("{}", res.summary.to_json());
    Ok(if res.summary.aborts > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Gen { spec, seed, r, out } => {
            let spec: GeneratorSpec = json_or_file(&spec)?;
            let (g, cert) = spec.build(seed, r)?;
            let text = format::write_edge_list(&g);
            match out {
                Some(path) => {
                    format::write(&path, &text)?;
                    if let Some(c) = cert {
                        let j = serde_json::to_string_pretty(&CertificateJson::from_certificate(&c)).expect("json");
                        format::write(&path.with_extension("cert.json"), &j)?;
                    }
                }
                None => print!("{text}"),
            }
        }
        Command::Adm { input, r, method } => {
            let g = format::read_graph(&input.input)?;
            let (value, order) = match (method, &input.order) {
                (AdmMethod::Order, Some(p)) => {
                    let order = format::read_order(p, g.n())?;
                    let og = OrderedGraph::new(g, order.clone()).map_err(cfg_err)?;
                    (admissibility_of_order(&og, r).map_err(cfg_err)?, order)
                }
                (AdmMethod::Order, None) => {
                    let og = OrderedGraph::with_identity_order(g);
                    (admissibility_of_order(&og, r).map_err(cfg_err)?, og.order)
                }
                (AdmMethod::Greedy, _) => {
                    let a = greedy_admissibility_order(&g, r).map_err(cfg_err)?;
                    (a.value, a.order)
                }
                (AdmMethod::Exact, _) => {
                    let a = exact_admissibility(&g, r).map_err(cfg_err)?;
                    (a.value, a.order)
                }
            };
            print_json(&json!({ "r": r, "value": value, "order": order.sequence() }));
        }
        Command::Trim {
            input,
            pattern: pat,
            r,
            alpha,
            beta,
            delta,
            out,
        } => {
            let og = load_ordered(&input, r)?;
            let h = pattern(&pat)?;
            let params = TrimParams {
                r,
                alpha: parse_rational(&alpha).map_err(cfg_err)?,
                beta: parse_rational(&beta).map_err(cfg_err)?,
                delta: parse_rational(&delta).map_err(cfg_err)?,
            };
            let (t, rep) = trim(&og, &h, &params).map_err(|e| HarnessError::Invariant(e.to_string()))?;
            if let Some(path) = out {
                format::write(&path, &format::write_edge_list(&t.graph))?;
            }
            let removed: Vec<_> = rep
                .removed_edges
                .iter()
                .map(|e| json!({ "edge": [e.edge.low(), e.edge.high()], "step": e.step as u8, "trigger": e.trigger }))
                .collect();
            print_json(&json!({
                "removed_per_step": rep.removed_per_step,
                "sweeps": rep.rounds,
                "edges_left": t.graph.edge_count(),
                "removed": removed,
            }));
        }
        Command::Dist { input, pattern: pat } => {
            let g = format::read_graph(&input.input)?;
            let h = pattern(&pat)?;
            let d = distance_to_h_freeness(&g, &h, DistanceLimits::default()).map_err(cfg_err)?;
            print_json(&json!({ "lower": d.lower(), "upper": d.upper(), "exact": d.exact() }));
        }
        Command::Struct {
            input,
            pattern: pat,
            vertex,
            delta,
        } => {
            let h = pattern(&pat)?;
            let og = load_ordered(&input, h.n().max(2))?;
            if vertex >= og.n() {
                return Err(cfg_err(format!("vertex {vertex} out of range")));
            }
            let pat = Pattern::new(&h).map_err(cfg_err)?;
            let ctx = StrataContext::new(&og, &pat);
            let serr = |e: hfree_core::structure::StructureError| HarnessError::Invariant(e.to_string());
            let delta = delta.as_deref().map(parse_rational).transpose().map_err(cfg_err)?;
            let pairs = ctx.useful_pairs_with_max(vertex).map_err(serr)?;
            let mut seen = std::collections::BTreeSet::new();
            let mut out = Vec::new();
            for p in &pairs {
                if !seen.insert((p.prefix().to_vec(), p.similarity_key())) {
                    continue;
                }
                let s = ctx.max_strata(p.prefix(), p).map_err(serr)?;
                let nadirs = s.nadirs();
                let mut classes = Vec::new();
                if let Some(d) = &delta {
                    for &x in &nadirs {
                        classes.push(format!("{:?}", ctx.classify_nadir(&s, x, d).map_err(serr)?).to_lowercase());
                    }
                }
                let members: Vec<_> = s
                    .members
                    .iter()
                    .map(|m| json!({ "vertices": m.body().vertices(), "edges": format::edge_pairs(m.body().edges()) }))
                    .collect();
                out.push(json!({
                    "prefix": s.prefix,
                    "size": s.len(),
                    "nadirs": nadirs,
                    "nadir_classes": classes,
                    "members": members,
                }));
            }
            print_json(&json!({ "vertex": vertex, "useful_pairs": pairs.len(), "stratas": out }));
        }
        Command::Test {
            input,
            pattern: pat,
            run,
            trials,
            early_exit,
        } => {
            let mut cfg = ExperimentConfig {
                name: input.display().to_string(),
                generator: GeneratorSpec::File { path: input },
                pattern: PatternSpec::named(&pat),
                params: ParamsSpec::default(),
                instances: 1,
                trials,
                seed_root: 0,
                jobs: 1,
                out: None,
                early_exit,
                timing: false,
            };
            if pat.trim_start().starts_with('{') {
                cfg.pattern = PatternSpec::Edges(serde_json::from_str(&pat).map_err(cfg_err)?);
            }
            apply_run_args(&mut cfg, &run)?;
            if cfg.params.epsilon.is_empty() {
                return Err(cfg_err("--params must set epsilon"));
            }
            return finish_batch(&cfg);
        }
        Command::Bench {
            config,
            run,
            trials,
            sizes,
            timing,
        } => {
            let mut cfg = ExperimentConfig::from_json(&format::read(&config)?)?;
            apply_run_args(&mut cfg, &run)?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            cfg.timing |= timing;
            if sizes.is_empty() {
                return finish_batch(&cfg);
            }
            let rows = query_scaling_experiment(&cfg, &sizes)?;
            print!("{}", scaling_table(&rows));
            if rows.iter().any(|r| r.aborts > 0) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::LemmaCheck {
            lemma,
            trials,
            seed,
            jobs,
            params,
            json,
        } => {
            let overrides = match params {
                Some(p) => {
                    let mut spec = ParamsSpec::from_inline(&format!("epsilon=1,{p}"))?;
                    spec.epsilon.clear();
                    spec.overrides()?
                }
                None => Default::default(),
            };
            let lemmas = lemma.map_or(LemmaId::ALL.to_vec(), |l| vec![l]);
            let mut code = ExitCode::SUCCESS;
            for l in lemmas {
                let rep = lemma_check(l, &overrides, trials, seed, jobs)?;
                if json {
                    println!("{}", rep.to_json());
                } else {
                    print!("{}", rep.to_text());
                }
                if rep.status == LemmaStatus::Fail || rep.aborts > 0 {
                    code = ExitCode::from(1);
                }
            }
            return Ok(code);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hfree: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
