//! Subcommands. Each returns an [`Outcome`]; `main` only prints it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fraccover::criterion::{is_covered, is_critical_covered};
use fraccover::extremal::{build_extremal, demonstrate_sharpness, SubCheck};
use fraccover::factor::{find_factor, is_covered_constructive, is_critical_covered_constructive, verify_factor, PinSet};
use fraccover::hypothesis::{check_condition, min_neighborhood_profile};
use fraccover::io::{detect_format, emit_graph, parse_graph, Format};
use fraccover::{EnumerationCap, Graph, NeighborhoodCondition, Params};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::experiments;
use crate::ledger::write_ledger_file;
use crate::{EXIT_DISAGREEMENT, EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK};

pub const THEOREM2_CONFIG: &str = include_str!("../configs/theorem2.conf");

#[derive(Debug, Parser)]
#[command(name = "fraccover", version, about = "Fractional [a,b]-covered and (a,b,k)-critical covered graph checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide coveredness (or critical coveredness when k > 0) by the subset criterion.
    CheckCovered {
        graph: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Also run the flow oracle; exit 3 if the engines disagree.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Check the neighborhood hypothesis by exhaustive enumeration.
    CheckHypothesis {
        graph: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = "split")]
        condition: NeighborhoodCondition,
        /// Include the minimum |N(X)| per |X|.
        #[arg(long)]
        profile: bool,
    },
    /// Minimum neighborhood size for each subset size.
    Profile {
        graph: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Find a fractional [a,b]-factor, optionally with one edge pinned to 1.
    Factor {
        graph: PathBuf,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        /// Edge `u,v` that must carry weight 1.
        #[arg(long)]
        pin: Option<String>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write a member of the extremal family.
    GenExtremal {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        t: u64,
        /// Output file; the graph goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "edgelist")]
        format: Format,
    },
    /// Run every check on a member of the extremal family.
    Sharpness {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = EnumerationCap::DEFAULT.get())]
        cap: usize,
    },
    /// Run an experiment described by a key=value config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Dense random graphs and complete graphs against the critical-coveredness theorem.
    VerifyTheorem2 {
        /// Defaults to the built-in dense schedule.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Criterion versus oracle on all labeled graphs up to n-max, or on a graph6 corpus.
    Crosscheck {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        n_min: usize,
        #[arg(long, default_value = "1,1 1,2 2,2 2,3")]
        params: String,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Sets a = b = r.
    #[arg(long)]
    pub r: Option<u32>,
    /// Force k = 0.
    #[arg(long)]
    pub corollary1: bool,
    /// Force a = b.
    #[arg(long)]
    pub corollary2: bool,
    /// Force a = b and k = 0.
    #[arg(long)]
    pub corollary3: bool,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<Params, String> {
        let equal = self.corollary2 || self.corollary3 || self.r.is_some();
        let zero_k = self.corollary1 || self.corollary3;
        let (a, b) = match (self.r, self.a, self.b) {
            (Some(r), None, None) => (r, r),
            (Some(_), _, _) => return Err("--r cannot be combined with --a/--b".into()),
            (None, Some(a), None) if equal => (a, a),
            (None, None, Some(b)) if equal => (b, b),
            (None, Some(a), Some(b)) => (a, b),
            _ => return Err("need --a and --b (or --r)".into()),
        };
        if equal && a != b {
            return Err(format!("this preset needs a = b, got a={a}, b={b}"));
        }
        let k = match self.k {
            Some(k) if zero_k && k != 0 => return Err(format!("this preset needs k = 0, got k={k}")),
            Some(k) => k,
            None => 0,
        };
        Params::new(a, b, k).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input format (edgelist or graph6); detected when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = EnumerationCap::DEFAULT.get())]
    pub cap: usize,
}

#[derive(Debug, Clone, Args, Default)]
pub struct OverrideArgs {
    /// Config override `key=value`; repeatable, applied after the file.
    #[arg(long = "set")]
    pub set: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub cap: Option<usize>,
}

impl OverrideArgs {
    fn pairs(&self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| format!("--set expects key=value, got {s:?}"))?;
            out.push((k.trim().to_string(), v.trim().to_string()));
        }
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k.to_string(), v));
            }
        };
        push("seed", self.seed.map(|s| s.to_string()));
        push("trials", self.trials.map(|s| s.to_string()));
        push("output", self.output.as_ref().map(|p| p.display().to_string()));
        push("cap", self.cap.map(|s| s.to_string()));
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, v: &Value) -> Self {
        Self {
            code,
            stdout: format!("{}\n", serde_json::to_string_pretty(v).expect("serializable")),
            stderr: String::new(),
        }
    }

    fn error(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let format = format.unwrap_or_else(|| detect_format(&text));
    parse_graph(&text, format).map_err(|e| format!("{}: {e}", path.display()))
}

fn cap(c: usize) -> Result<EnumerationCap, String> {
    if c > fraccover::subsets::MAX_MASK_ORDER {
        return Err(format!("cap must be at most {}", fraccover::subsets::MAX_MASK_ORDER));
    }
    Ok(EnumerationCap::new(c))
}

/// Runs a parsed command line. `result_dir` is the ledger directory from the
/// environment, if any.
pub fn execute(cli: Cli, result_dir: Option<&Path>) -> Outcome {
    let r = match cli.command {
        Command::CheckCovered { graph, params, input, crosscheck } => check_covered(&graph, &params, &input, crosscheck),
        Command::CheckHypothesis { graph, params, input, condition, profile } => {
            check_hypothesis(&graph, &params, &input, condition, profile)
        }
        Command::Profile { graph, input } => profile(&graph, &input),
        Command::Factor { graph, a, b, pin, input } => factor(&graph, a, b, pin.as_deref(), &input),
        Command::GenExtremal { params, t, out, format } => gen_extremal(&params, t, out.as_deref(), format),
        Command::Sharpness { params, t, cap } => sharpness(&params, t, cap),
        Command::Experiment { config, overrides } => {
            overrides.pairs().and_then(|o| {
                let cfg = ExperimentConfig::load(&config, &o).map_err(|e| e.to_string())?;
                experiment(&cfg, result_dir)
            })
        }
        Command::VerifyTheorem2 { config, overrides } => overrides.pairs().and_then(|mut o| {
            o.push(("mode".into(), "theorem2-random".into()));
            let cfg = match config {
                Some(path) => ExperimentConfig::load(&path, &o),
                None => ExperimentConfig::parse(THEOREM2_CONFIG, &o),
            };
            experiment(&cfg.map_err(|e| e.to_string())?, result_dir)
        }),
        Command::Crosscheck { n_max, n_min, params, corpus, overrides } => overrides.pairs().and_then(|o| {
            let mut text = format!("params = {params}\noutput = crosscheck.csv\n");
            match &corpus {
                Some(path) => text.push_str(&format!("mode = corpus\ncorpus = {}\n", path.display())),
                None => text.push_str(&format!("mode = oracle-exhaustive\nn = {n_min}..{n_max}\n")),
            }
            let cfg = ExperimentConfig::parse(&text, &o).map_err(|e| e.to_string())?;
            experiment(&cfg, result_dir)
        }),
    };
    r.unwrap_or_else(Outcome::error)
}

fn check_covered(path: &Path, params: &ParamArgs, input: &InputArgs, crosscheck: bool) -> Result<Outcome, String> {
    let p = params.resolve()?;
    let g = read_graph(path, input.format)?;
    let cap = cap(input.cap)?;
    let verdict = if p.k == 0 {
        is_covered(&g, p.a, p.b, cap)
    } else {
        is_critical_covered(&g, p.a, p.b, p.k, cap)
    }
    .map_err(|e| e.to_string())?;
    let mut out = verdict.to_json();
    let mut code = if verdict.covered { EXIT_OK } else { EXIT_NEGATIVE };
    if crosscheck {
        let oracle = if p.k == 0 {
            is_covered_constructive(&g, p.a, p.b).map(|v| v.is_covered())
        } else {
            is_critical_covered_constructive(&g, p.a, p.b, p.k).map(|v| v.covered)
        }
        .map_err(|e| e.to_string())?;
        out["oracle_covered"] = json!(oracle);
        if oracle != verdict.covered {
            code = EXIT_DISAGREEMENT;
        }
    }
    Ok(Outcome::json(code, &out))
}

fn check_hypothesis(
    path: &Path,
    params: &ParamArgs,
    input: &InputArgs,
    condition: NeighborhoodCondition,
    with_profile: bool,
) -> Result<Outcome, String> {
    let p = params.resolve()?;
    let g = read_graph(path, input.format)?;
    let cap = cap(input.cap)?;
    let mut report = check_condition(&g, p, condition, cap).map_err(|e| e.to_string())?;
    if with_profile {
        report.profile = Some(min_neighborhood_profile(&g, cap).map_err(|e| e.to_string())?);
    }
    let code = if report.holds { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::json(code, &report.to_json()))
}

fn profile(path: &Path, input: &InputArgs) -> Result<Outcome, String> {
    let g = read_graph(path, input.format)?;
    let prof = min_neighborhood_profile(&g, cap(input.cap)?).map_err(|e| e.to_string())?;
    let m: serde_json::Map<String, Value> = prof.iter().map(|(s, v)| (s.to_string(), json!(v))).collect();
    Ok(Outcome::json(EXIT_OK, &json!({"n": g.order(), "profile": m})))
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (u, v) = s.split_once(',').ok_or_else(|| format!("--pin expects u,v, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("--pin {s:?}: {e}"));
    Ok((p(u)?, p(v)?))
}

fn factor(path: &Path, a: u32, b: u32, pin: Option<&str>, input: &InputArgs) -> Result<Outcome, String> {
    let g = read_graph(path, input.format)?;
    let pins = match pin {
        Some(s) => PinSet::single(parse_pin(s)?),
        None => PinSet::new(),
    };
    match find_factor(&g, a, b, &pins).map_err(|e| e.to_string())? {
        Some(h) => {
            let ok = verify_factor(&g, a, b, &pins, &h).map_err(|e| e.to_string())?;
            let code = if ok { EXIT_OK } else { EXIT_DISAGREEMENT };
            Ok(Outcome::json(code, &h.to_json()))
        }
        None => Ok(Outcome::json(EXIT_NEGATIVE, &json!({"edges": null}))),
    }
}

fn gen_extremal(params: &ParamArgs, t: u64, out: Option<&Path>, format: Format) -> Result<Outcome, String> {
    let p = params.resolve()?;
    let inst = build_extremal(p.a, p.b, p.k, t).map_err(|e| e.to_string())?;
    let text = emit_graph(&inst.graph, format);
    match out {
        None => Ok(Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }),
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(Outcome::json(
                EXIT_OK,
                &json!({
                    "path": path.display().to_string(),
                    "t": t,
                    "n": inst.n(),
                    "m": inst.graph.size(),
                    "A": inst.hub.to_vec(),
                    "B": inst.matched.to_vec(),
                }),
            ))
        }
    }
}

fn sharpness(params: &ParamArgs, t: u64, c: usize) -> Result<Outcome, String> {
    let p = params.resolve()?;
    let report = demonstrate_sharpness(p.a, p.b, p.k, t, cap(c)?).map_err(|e| e.to_string())?;
    let contradicted = report.theta != report.theta_closed_form
        || report.theta >= report.epsilon as i64
        || !report.t_matches
        || !report.boundary_x_le_t_ok
        || report.hypothesis_holds == SubCheck::Done(false)
        || report.criterion_covered == SubCheck::Done(true)
        || report.oracle_covered == SubCheck::Done(true);
    let code = if contradicted { EXIT_NEGATIVE } else { EXIT_OK };
    Ok(Outcome::json(code, &report.to_json()))
}

fn experiment(cfg: &ExperimentConfig, result_dir: Option<&Path>) -> Result<Outcome, String> {
    let out = experiments::run(cfg).map_err(|e| e.to_string())?;
    let path = cfg.ledger_path(result_dir);
    write_ledger_file(&path, &out.rows).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut o = Outcome::json(out.exit_code, &out.summary.to_json(Some(&path)));
    if out.summary.aborted {
        let r = out.rows.last().expect("aborted run has a fatal row");
        o.stderr = format!(
            "{} on {} ({}) with a={} b={} k={}: graph6 {} certificate {}\n",
            r.category.as_str(),
            r.instance,
            r.source,
            r.a,
            r.b,
            r.k,
            r.graph6,
            if r.certificate.is_empty() { "-" } else { &r.certificate },
        );
    }
    Ok(o)
}
