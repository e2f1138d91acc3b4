//! Instance generation, per-instance evaluation and run summaries.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use fraccover::criterion::{is_critical_covered, CriterionError};
use fraccover::extremal::{build_extremal, demonstrate_sharpness, valid_t_values};
use fraccover::factor::{is_critical_covered_constructive, verify_factor, FactorError, PinSet};
use fraccover::graph::{complete, gnp, GraphError};
use fraccover::hypothesis::{check_hypothesis, degree_consequence_ok, order_bound_ok, HypothesisError};
use fraccover::io::parse_graph6_corpus;
use fraccover::{EnumerationCap, Graph, Params};
use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::config::{ExperimentConfig, Mode};
use crate::ledger::{graph_identity, Category, LedgerRecord, Tri, Verdict};
use crate::EXIT_OK;

pub const PRNG_NAME: &str = "chacha8/v1";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("corpus {path}: {msg}")]
    Corpus { path: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How to materialize one instance; graphs are built inside the workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Gnp { index: usize, n: usize, p: Ratio<u64>, seed: u64 },
    Complete(usize),
    Labeled { n: usize, code: u64 },
    Corpus { index: usize, file: String, graph: Graph },
    Extremal { t: u64 },
}

impl Source {
    fn id(&self, p: Params) -> String {
        match self {
            Source::Gnp { index, .. } => format!("gnp-{index:04}"),
            Source::Complete(n) => format!("K{n}"),
            Source::Labeled { n, code } => format!("labeled-n{n}-{code}"),
            Source::Corpus { index, .. } => format!("corpus-{index:05}"),
            Source::Extremal { t } => format!("extremal-{}-{}-{}-{t}", p.a, p.b, p.k),
        }
    }

    fn label(&self) -> String {
        match self {
            Source::Gnp { p, .. } => format!("gnp p={p}"),
            Source::Complete(_) => "complete".into(),
            Source::Labeled { .. } => "labeled".into(),
            Source::Corpus { file, .. } => format!("corpus {file}"),
            Source::Extremal { .. } => "extremal".into(),
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Source::Gnp { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    fn graph(&self, p: Params) -> Result<Graph, RunError> {
        Ok(match self {
            Source::Gnp { n, p, seed, .. } => gnp(*n, *p, *seed)?,
            Source::Complete(n) => complete(*n),
            Source::Labeled { n, code } => labeled_graph(*n, *code),
            Source::Corpus { graph, .. } => graph.clone(),
            Source::Extremal { t } => {
                build_extremal(p.a, p.b, p.k, *t)
                    .expect("sweep only yields valid t")
                    .graph
            }
        })
    }
}

/// The graph whose edge set is the bit pattern `code` over pairs `u < v` in
/// lexicographic order.
pub fn labeled_graph(n: usize, code: u64) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges = pairs.enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, e)| e);
    Graph::from_edges(n, edges).expect("pairs are distinct and in range")
}

/// Every (source, parameters) pair of a run, in ledger order.
pub fn tasks(cfg: &ExperimentConfig) -> Result<Vec<(Source, Params)>, RunError> {
    let mut sources = Vec::new();
    match cfg.mode {
        Mode::Theorem2Random | Mode::OracleRandom => {
            let sizes = cfg.n_max - cfg.n_min + 1;
            let dens = cfg.densities.len();
            for index in 0..cfg.trials {
                sources.push(Source::Gnp {
                    index,
                    n: cfg.n_min + (index / dens) % sizes,
                    p: cfg.densities[index % dens],
                    seed: cfg.seed.wrapping_add(index as u64),
                });
            }
            if cfg.complete {
                sources.extend((cfg.n_min..=cfg.n_max).map(Source::Complete));
            }
        }
        Mode::OracleExhaustive => {
            for n in cfg.n_min..=cfg.n_max {
                let pairs = n * n.saturating_sub(1) / 2;
                sources.extend((0..1u64 << pairs).map(|code| Source::Labeled { n, code }));
            }
        }
        Mode::Corpus => {
            let path = cfg.corpus.as_deref().expect("validated");
            let err = |msg: String| RunError::Corpus { path: path.display().to_string(), msg };
            let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
            let graphs = parse_graph6_corpus(&text).map_err(|e| err(e.to_string()))?;
            let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
            sources.extend(graphs.into_iter().enumerate().map(|(index, graph)| Source::Corpus {
                index,
                file: file.clone(),
                graph,
            }));
        }
        Mode::SharpnessSweep => {
            return Ok(cfg
                .params
                .iter()
                .flat_map(|&p| {
                    valid_t_values(p.a, p.b)
                        .take_while(|&t| t <= cfg.t_max)
                        .map(move |t| (Source::Extremal { t }, p))
                })
                .collect());
        }
    }
    Ok(sources
        .into_iter()
        .flat_map(|s| cfg.params.iter().map(move |&p| (s.clone(), p)))
        .collect())
}

fn criterion_verdict(g: &Graph, p: Params, cap: EnumerationCap) -> (Verdict, Option<Value>) {
    match is_critical_covered(g, p.a, p.b, p.k, cap) {
        Ok(v) if v.covered => (Verdict::Positive, None),
        Ok(v) => (Verdict::Negative, Some(v.to_json())),
        Err(CriterionError::Cap(_)) => (Verdict::Skipped, None),
        Err(_) => (Verdict::NotApplicable, None),
    }
}

/// Oracle verdict, the number of witnesses checked, whether all passed, and
/// the failure description if any.
fn oracle_verdict(g: &Graph, p: Params) -> (Verdict, usize, bool, Option<Value>) {
    let v = match is_critical_covered_constructive(g, p.a, p.b, p.k) {
        Ok(v) => v,
        Err(FactorError::TooLargeForDeletion(_)) => return (Verdict::Skipped, 0, true, None),
        Err(_) => return (Verdict::NotApplicable, 0, true, None),
    };
    let mut checked = 0;
    let mut all_ok = true;
    for (q, witnesses) in &v.witnesses {
        let (h, _) = g.delete_vertices(q).expect("q is a vertex subset");
        for (&e, f) in witnesses {
            checked += 1;
            let ok = verify_factor(&h, p.a, p.b, &PinSet::single(e), f).unwrap_or(false);
            all_ok &= ok && f.is_half_integral();
        }
    }
    let failure = v.failure.map(|(q, edge)| {
        json!({"Q": q.to_vec(), "edge": edge.map(|(u, w)| vec![u, w])})
    });
    (Verdict::from(v.covered), checked, all_ok, failure)
}

/// Split hypothesis, order bound and degree consequence; `NotApplicable`
/// outside `2 <= a <= b` or where the threshold is undefined.
fn hypothesis_columns(g: &Graph, p: Params, cap: EnumerationCap) -> (Tri, Verdict, Tri) {
    if p.require_neighborhood_regime().is_err() {
        return (Tri::NotApplicable, Verdict::NotApplicable, Tri::NotApplicable);
    }
    let order = order_bound_ok(g.order(), p).map(Tri::from).unwrap_or(Tri::NotApplicable);
    let degree = degree_consequence_ok(g, p).map(Tri::from).unwrap_or(Tri::NotApplicable);
    let hyp = match check_hypothesis(g, p, cap) {
        Ok(r) => Verdict::from(r.holds),
        Err(HypothesisError::Cap(_)) => Verdict::Skipped,
        Err(_) => Verdict::NotApplicable,
    };
    (order, hyp, degree)
}

pub fn evaluate(source: &Source, p: Params, cap: EnumerationCap) -> Result<LedgerRecord, RunError> {
    let start = Instant::now();
    let g = source.graph(p)?;
    let (order_bound_ok, hypothesis, degree_bound_ok) = hypothesis_columns(&g, p, cap);
    let (criterion, criterion_cert) = criterion_verdict(&g, p, cap);
    let (oracle, factors_verified, witnesses_ok, oracle_failure) = oracle_verdict(&g, p);

    let disagree = matches!((criterion.known(), oracle.known()), (Some(c), Some(o)) if c != o);
    let premise = order_bound_ok == Tri::Yes && hypothesis == Verdict::Positive;
    let category = if disagree || !witnesses_ok {
        Category::Disagreement
    } else if matches!(source, Source::Extremal { .. }) {
        Category::Sharpness
    } else if !premise {
        Category::Unconstrained
    } else if degree_bound_ok == Tri::No {
        Category::DegreeViolation
    } else if criterion == Verdict::Negative || oracle == Verdict::Negative {
        Category::Counterexample
    } else if criterion == Verdict::Positive && oracle == Verdict::Positive {
        Category::Confirmed
    } else {
        Category::Incomplete
    };

    let mut cert = Map::new();
    if let Some(c) = criterion_cert {
        cert.insert("criterion".into(), c);
    }
    if let Some(f) = oracle_failure {
        cert.insert("oracle_failure".into(), f);
    }
    if !witnesses_ok {
        cert.insert("witness_verification".into(), json!("failed"));
    }
    if let Source::Extremal { t } = source {
        if let Ok(report) = demonstrate_sharpness(p.a, p.b, p.k, *t, cap) {
            cert.insert("sharpness".into(), report.to_json());
        }
    }
    let certificate = if cert.is_empty() {
        String::new()
    } else {
        Value::Object(cert).to_string()
    };

    let (graph6, graph_sha256) = graph_identity(&g);
    Ok(LedgerRecord {
        instance: source.id(p),
        source: source.label(),
        graph6,
        graph_sha256,
        n: g.order(),
        m: g.size(),
        a: p.a,
        b: p.b,
        k: p.k,
        seed: source.seed(),
        prng: source.seed().map(|_| PRNG_NAME),
        order_bound_ok,
        hypothesis,
        degree_bound_ok,
        criterion,
        oracle,
        factors_verified,
        category,
        certificate,
        wall_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Summary {
    pub mode: String,
    pub rows: usize,
    pub categories: BTreeMap<&'static str, usize>,
    /// Rows where both engines ran and agreed.
    pub agreements: usize,
    pub hypothesis_holds: usize,
    pub skipped: usize,
    pub factors_verified: usize,
    /// The run stopped at the first fatal row.
    pub aborted: bool,
}

impl Summary {
    pub fn to_json(&self, ledger: Option<&Path>) -> Value {
        json!({
            "mode": self.mode,
            "rows": self.rows,
            "categories": self.categories,
            "agreements": self.agreements,
            "hypothesis_holds": self.hypothesis_holds,
            "skipped": self.skipped,
            "factors_verified": self.factors_verified,
            "aborted": self.aborted,
            "ledger": ledger.map(|p| p.display().to_string()),
        })
    }

    pub fn count(&self, c: Category) -> usize {
        self.categories.get(c.as_str()).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<LedgerRecord>,
    pub summary: Summary,
    pub exit_code: i32,
}

/// Evaluates every task on the rayon pool. Rows keep task order; the ledger
/// stops at the first row forcing a nonzero exit.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let tasks = tasks(cfg)?;
    let mut rows = tasks
        .par_iter()
        .map(|(s, p)| evaluate(s, *p, cfg.cap))
        .collect::<Result<Vec<_>, _>>()?;
    let fatal = rows.iter().position(|r| r.category.exit_code().is_some());
    let exit_code = match fatal {
        Some(i) => {
            rows.truncate(i + 1);
            rows[i].category.exit_code().expect("fatal row")
        }
        None => EXIT_OK,
    };
    let mut summary = Summary {
        mode: cfg.mode.name().to_string(),
        rows: rows.len(),
        aborted: fatal.is_some(),
        ..Summary::default()
    };
    for r in &rows {
        *summary.categories.entry(r.category.as_str()).or_default() += 1;
        if let (Some(c), Some(o)) = (r.criterion.known(), r.oracle.known()) {
            summary.agreements += usize::from(c == o);
        }
        summary.hypothesis_holds += usize::from(r.hypothesis == Verdict::Positive);
        summary.skipped += usize::from(
            [r.criterion, r.oracle, r.hypothesis].contains(&Verdict::Skipped),
        );
        summary.factors_verified += r.factors_verified;
    }
    Ok(RunOutcome { rows, summary, exit_code })
}
