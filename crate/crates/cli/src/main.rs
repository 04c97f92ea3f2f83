use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use difactor::conditions::{applicability, sigma11, woodall_value, Bound, ConditionReport, Instance};
use difactor::generators::{
    gen_min_out_degree, gen_pair_degree, gen_random_lasvergnas, gen_random_woodall, gen_sharpness_degree,
    gen_sharpness_order,
};
use difactor::oracle::{
    explore, oracle_directed_2factor, oracle_disjoint_cycles, oracle_m_2factor, ExploreMode, ExploreParams,
    OracleBudget,
};
use difactor::partition::{solve, solve_m_2factor, SolveOptions, SolveOutcome, SolveStatus};
use difactor::transforms::{bipartite_to_digraph, digraph_to_bipartite};
use difactor::verify::{verify_directed_2factor, verify_m_2factor};
use difactor::{DirectedTwoFactor, GraphError, MTwoFactor, Vertex};
use difactor_cli::dot::{bipartite_dot, digraph_dot};
use difactor_cli::{parse, serialize, InstanceFile, ParseError};

#[derive(Parser)]
#[command(name = "difactor", version, about = "Directed 2-factors with exactly k cycles")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    JsonLines,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Node limit of the exhaustive search.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit of the exhaustive search, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl BudgetArgs {
    fn budget(&self) -> OracleBudget {
        let mut b = OracleBudget::default();
        if let Some(n) = self.budget_nodes {
            b.max_nodes = n;
        }
        if let Some(t) = self.timeout {
            b.time_limit = Duration::from_secs_f64(t.max(0.0));
        }
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find a 2-factor with exactly k cycles and verify it.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Minimum cycle length (default 3 for digraphs, 6 for bipartite graphs).
        #[arg(long)]
        min_len: Option<usize>,
        /// Do not fall back to exhaustive search.
        #[arg(long)]
        no_fallback: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Report the degree condition and which existence results apply.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Convert between a digraph and its split bipartite graph.
    Transform {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exhaustive search for a 2-factor (or disjoint cycles) with k cycles.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        min_len: Option<usize>,
        /// Ask for k disjoint cycles instead of a spanning factor (digraphs only).
        #[arg(long)]
        disjoint: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Write a generated instance.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Offset added to the degree threshold of the random families.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        margin: i64,
        /// Pair-degree threshold (pair-degree family) or minimum out-degree (min-out family).
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample condition-satisfying digraphs and search for counterexamples.
    Explore {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Graphviz export, optionally with a solved factor highlighted.
    Dot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        min_len: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    SharpnessDegree,
    SharpnessOrder,
    Woodall,
    Lasvergnas,
    PairDegree,
    MinOut,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Problem1,
    BermondThomassen,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Usage(String),
    #[error("witness failed re-verification: {0}")]
    Verification(String),
}

/// 0 success or feasible; 1 verified infeasible or hypothesis unmet; 2 error or budget.
#[derive(Clone, Copy)]
enum Exit {
    Ok,
    Negative,
    Inconclusive,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> ExitCode {
        ExitCode::from(match e {
            Exit::Ok => 0,
            Exit::Negative => 1,
            Exit::Inconclusive => 2,
        })
    }
}

/// An ordered result block; `dot` carries the Graphviz rendering when one exists.
struct Block {
    fields: Vec<(&'static str, Value)>,
    dot: Option<String>,
}

impl Block {
    fn new(command: &str) -> Block {
        Block { fields: vec![("command", json!(command))], dot: None }
    }

    fn put(&mut self, key: &'static str, value: impl Into<Value>) -> &mut Block {
        self.fields.push((key, value.into()));
        self
    }

    fn emit(&self, format: Format) {
        match (format, &self.dot) {
            (Format::Dot, Some(d)) => print!("{d}"),
            (Format::JsonLines, _) => {
                let map: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                println!("{}", Value::Object(map));
            }
            _ => {
                for (k, v) in &self.fields {
                    match v {
                        Value::Array(items) if items.iter().all(Value::is_array) && !items.is_empty() => {
                            for item in items {
                                println!("{k}={}", plain_list(item));
                            }
                        }
                        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
                            for item in items {
                                println!("{k}={item}");
                            }
                        }
                        Value::Array(_) => println!("{k}={}", plain_list(v)),
                        Value::String(s) => println!("{k}={s}"),
                        other => println!("{k}={other}"),
                    }
                }
            }
        }
    }
}

fn plain_list(v: &Value) -> String {
    match v {
        Value::Array(items) => items.iter().map(plain_list).collect::<Vec<_>>().join(" "),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read_instance(path: &PathBuf) -> Result<InstanceFile, CliError> {
    let name = path.display().to_string();
    let text = if name == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io { path: name.clone(), source })?;
        s
    } else {
        fs::read_to_string(path).map_err(|source| CliError::Io { path: name.clone(), source })?
    };
    parse(&text).map_err(|source| CliError::Parse { path: name, source })
}

fn bound_json(b: Bound) -> Value {
    match b {
        Bound::Finite(v) => json!(v),
        Bound::Unbounded => json!("unbounded"),
    }
}

fn directed_cycles(f: &DirectedTwoFactor) -> Value {
    json!(f.cycles)
}

fn bipartite_cycles(f: &MTwoFactor) -> Value {
    Value::Array(f.cycles.iter().map(|c| json!(c.iter().map(Vertex::to_string).collect::<Vec<_>>())).collect())
}

fn status_name(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Solved => "solved",
        SolveStatus::HypothesisUnmet => "hypothesis-unmet",
        SolveStatus::FallbackExhausted => "fallback-exhausted",
    }
}

fn solve_exit<F>(out: &SolveOutcome<F>) -> Exit {
    match out.status {
        SolveStatus::Solved => Exit::Ok,
        _ if out.certified_infeasible => Exit::Negative,
        SolveStatus::HypothesisUnmet => Exit::Negative,
        SolveStatus::FallbackExhausted => Exit::Inconclusive,
    }
}

fn solve_block<F>(out: &SolveOutcome<F>, cycles: Option<Value>) -> Block {
    let mut b = Block::new("solve");
    b.put("status", status_name(out.status))
        .put("k", out.k)
        .put("gate_met", out.gate_met)
        .put("route", format!("{:?}", out.route).to_lowercase())
        .put("certified_infeasible", out.certified_infeasible);
    if let Some(c) = cycles {
        b.put("cycles", c);
    }
    b
}

fn options(min_len: Option<usize>, no_fallback: bool, budget: &BudgetArgs) -> SolveOptions {
    SolveOptions { min_len, exact_fallback: !no_fallback, budget: budget.budget(), ..SolveOptions::default() }
}

fn run_solve(inst: &InstanceFile, k: usize, opts: &SolveOptions) -> Result<(Block, Exit), CliError> {
    match inst {
        InstanceFile::Digraph(d) => {
            let out = solve(d, k, opts);
            if let Some(f) = &out.factor {
                let rep = verify_directed_2factor(d, f, k, opts.min_len.unwrap_or(3));
                if !rep.passed {
                    return Err(CliError::Verification(format!("{:?}", rep.violations)));
                }
            }
            let mut b = solve_block(&out, out.factor.as_ref().map(directed_cycles));
            b.dot = Some(digraph_dot(d, out.factor.as_ref()));
            Ok((b, solve_exit(&out)))
        }
        InstanceFile::Bipartite(g, m) => {
            let out = solve_m_2factor(g, m, k, opts)?;
            if let Some(f) = &out.factor {
                let rep = verify_m_2factor(g, m, f, k, opts.min_len.unwrap_or(6))?;
                if !rep.passed {
                    return Err(CliError::Verification(format!("{:?}", rep.violations)));
                }
            }
            let mut b = solve_block(&out, out.factor.as_ref().map(bipartite_cycles));
            b.dot = Some(bipartite_dot(g, m, out.factor.as_ref()));
            Ok((b, solve_exit(&out)))
        }
    }
}

fn condition_fields(b: &mut Block, name: &'static str, r: &ConditionReport) {
    b.put(name, bound_json(r.value))
        .put("threshold", r.threshold)
        .put("satisfied", r.satisfied)
        .put("witness", r.witness.map_or(Value::Null, |(a, c)| json!([a, c])));
}

fn run(cli: &Cli) -> Result<Exit, CliError> {
    let format = cli.format;
    match &cli.command {
        Command::Solve { input, k, min_len, no_fallback, budget } => {
            let inst = read_instance(input)?;
            let (b, exit) = run_solve(&inst, *k, &options(*min_len, *no_fallback, budget))?;
            b.emit(format);
            Ok(exit)
        }
        Command::Check { input, k } => {
            let inst = read_instance(input)?;
            let mut b = Block::new("check");
            let (report, instance) = match &inst {
                InstanceFile::Digraph(d) => {
                    let r = woodall_value(d)?;
                    condition_fields(&mut b, "woodall_value", &r);
                    (r, Instance::Digraph(d))
                }
                InstanceFile::Bipartite(g, _) => {
                    let r = sigma11(g)?;
                    condition_fields(&mut b, "sigma11", &r);
                    (r, Instance::Bipartite(g))
                }
            };
            let apps: Vec<Value> = applicability(instance, *k)
                .iter()
                .map(|a| json!({"theorem": a.theorem.name(), "met": a.met, "missing": a.missing}))
                .collect();
            b.put("k", *k).put("applicability", apps);
            b.emit(format);
            Ok(if report.satisfied { Exit::Ok } else { Exit::Negative })
        }
        Command::Transform { input } => {
            let out = match read_instance(input)? {
                InstanceFile::Digraph(d) => {
                    let (g, m, _) = digraph_to_bipartite(&d);
                    InstanceFile::Bipartite(g, m)
                }
                InstanceFile::Bipartite(g, m) => InstanceFile::Digraph(bipartite_to_digraph(&g, &m)?.0),
            };
            emit_instance(format, "transform", &out);
            Ok(Exit::Ok)
        }
        Command::Oracle { input, k, min_len, disjoint, budget } => {
            let inst = read_instance(input)?;
            let budget = budget.budget();
            let mut b = Block::new("oracle");
            let (verdict, witness) = match &inst {
                InstanceFile::Digraph(d) => {
                    let min_len = min_len.unwrap_or(3);
                    if *disjoint {
                        let r = oracle_disjoint_cycles(d, *k, min_len, &budget);
                        (r.verdict(), r.witness().map(|c| json!(c)))
                    } else {
                        let r = oracle_directed_2factor(d, *k, min_len, &budget);
                        (r.verdict(), r.witness().map(directed_cycles))
                    }
                }
                InstanceFile::Bipartite(g, m) => {
                    if *disjoint {
                        return Err(CliError::Usage("--disjoint applies to digraphs only".into()));
                    }
                    let r = oracle_m_2factor(g, m, *k, min_len.unwrap_or(6), &budget)?;
                    (r.verdict(), r.witness().map(bipartite_cycles))
                }
            };
            b.put("k", *k).put("verdict", verdict);
            if let Some(w) = witness {
                b.put("cycles", w);
            }
            b.emit(format);
            Ok(match verdict {
                "feasible" => Exit::Ok,
                "infeasible" => Exit::Negative,
                _ => Exit::Inconclusive,
            })
        }
        Command::Gen { family, n, k, margin, threshold, seed } => {
            let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("this family needs --{flag}")));
            let inst = match family {
                Family::SharpnessDegree => InstanceFile::Digraph(gen_sharpness_degree(need(*n, "n")?)?),
                Family::SharpnessOrder => InstanceFile::Digraph(gen_sharpness_order(need(*k, "k")?)?),
                Family::Woodall => InstanceFile::Digraph(gen_random_woodall(need(*n, "n")?, *margin, *seed)?),
                Family::Lasvergnas => {
                    let (g, m) = gen_random_lasvergnas(need(*n, "n")?, *margin, *seed)?;
                    InstanceFile::Bipartite(g, m)
                }
                Family::PairDegree => {
                    let t = threshold.ok_or_else(|| CliError::Usage("this family needs --threshold".into()))?;
                    InstanceFile::Digraph(gen_pair_degree(need(*n, "n")?, t, *seed))
                }
                Family::MinOut => {
                    let t = threshold.ok_or_else(|| CliError::Usage("this family needs --threshold".into()))?;
                    let t = usize::try_from(t).map_err(|_| CliError::Usage("--threshold must be non-negative".into()))?;
                    InstanceFile::Digraph(gen_min_out_degree(need(*n, "n")?, t, *seed))
                }
            };
            emit_instance(format, "gen", &inst);
            Ok(Exit::Ok)
        }
        Command::Explore { mode, n_min, n_max, k, samples, seed, budget } => {
            let mode = match mode {
                Mode::Problem1 => ExploreMode::Problem1,
                Mode::BermondThomassen => ExploreMode::BermondThomassen,
            };
            let params = ExploreParams {
                mode,
                n_min: *n_min,
                n_max: *n_max,
                k: *k,
                samples: *samples,
                seed: *seed,
                budget: budget.budget(),
            };
            let rep = explore(&params)?;
            let mut b = Block::new("explore");
            b.put("mode", json!(rep.mode))
                .put("k", rep.k)
                .put("samples", rep.samples)
                .put("feasible", rep.feasible)
                .put("budget_hits", rep.budget_hits)
                .put("violations", rep.violations.len())
                .put("mean_arcs", format!("{:.3}", rep.mean_arcs))
                .put("orders", json!(rep.orders));
            let cex: Vec<Value> = rep.violations.iter().map(|c| json!(c)).collect();
            if !cex.is_empty() {
                b.put("counterexamples", cex);
            }
            b.emit(format);
            Ok(if !rep.violations.is_empty() {
                Exit::Negative
            } else if rep.budget_hits > 0 {
                Exit::Inconclusive
            } else {
                Exit::Ok
            })
        }
        Command::Dot { input, k, min_len } => {
            let inst = read_instance(input)?;
            let dot = match (&inst, k) {
                (_, Some(k)) => run_solve(&inst, *k, &options(*min_len, false, &BudgetArgs { budget_nodes: None, timeout: None }))?
                    .0
                    .dot
                    .expect("solve renders DOT"),
                (InstanceFile::Digraph(d), None) => digraph_dot(d, None),
                (InstanceFile::Bipartite(g, m), None) => bipartite_dot(g, m, None),
            };
            print!("{dot}");
            Ok(Exit::Ok)
        }
    }
}

fn emit_instance(format: Format, command: &str, inst: &InstanceFile) {
    match format {
        Format::JsonLines => {
            let mut b = Block::new(command);
            b.put("instance", serialize(inst));
            b.emit(format);
        }
        Format::Dot => match inst {
            InstanceFile::Digraph(d) => print!("{}", digraph_dot(d, None)),
            InstanceFile::Bipartite(g, m) => print!("{}", bipartite_dot(g, m, None)),
        },
        Format::Text => print!("{}", serialize(inst)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DIFACTOR_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(exit) => exit.into(),
        Err(e) => {
            eprintln!("error: {e}");
            Exit::Inconclusive.into()
        }
    }
}
