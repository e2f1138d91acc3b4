//! Versioned CSV ledger, one row per (instance, parameters) check.

use std::io::Write;
use std::path::Path;

use fraccover::io::emit_graph6;
use fraccover::Graph;
use sha2::{Digest, Sha256};

pub const LEDGER_VERSION: u32 = 1;

pub const COLUMNS: [&str; 21] = [
    "ledger_version",
    "instance",
    "source",
    "graph6",
    "graph_sha256",
    "n",
    "m",
    "a",
    "b",
    "k",
    "seed",
    "prng",
    "order_bound_ok",
    "hypothesis",
    "degree_bound_ok",
    "criterion",
    "oracle",
    "factors_verified",
    "category",
    "certificate",
    "wall_ms",
];

/// Column whose value varies between identical runs.
pub const TIMING_COLUMN: &str = "wall_ms";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerRecord {
    pub instance: String,
    pub source: String,
    pub graph6: String,
    pub graph_sha256: String,
    pub n: usize,
    pub m: usize,
    pub a: u32,
    pub b: u32,
    pub k: u32,
    pub seed: Option<u64>,
    pub prng: Option<&'static str>,
    pub order_bound_ok: Tri,
    pub hypothesis: Verdict,
    pub degree_bound_ok: Tri,
    pub criterion: Verdict,
    pub oracle: Verdict,
    pub factors_verified: usize,
    pub category: Category,
    /// Compact JSON; empty when there is nothing to certify.
    pub certificate: String,
    pub wall_ms: u128,
}

/// Three-valued column: `true`, `false`, or `n/a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    NotApplicable,
}

impl Tri {
    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "true",
            Tri::No => "false",
            Tri::NotApplicable => "n/a",
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

/// Outcome of a check that may not have run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
    /// Over the enumeration cap.
    Skipped,
    /// Outside the parameter regime of the check.
    NotApplicable,
}

impl Verdict {
    pub fn known(self) -> Option<bool> {
        match self {
            Verdict::Positive => Some(true),
            Verdict::Negative => Some(false),
            _ => None,
        }
    }

    fn column(self, yes: &'static str, no: &'static str) -> &'static str {
        match self {
            Verdict::Positive => yes,
            Verdict::Negative => no,
            Verdict::Skipped => "skipped",
            Verdict::NotApplicable => "n/a",
        }
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    /// Order bound and hypothesis hold and both engines report covered.
    Confirmed,
    /// Hypothesis or order bound fails (or is not applicable); engines compared only.
    Unconstrained,
    /// Member of the extremal family; never counted as a counterexample.
    Sharpness,
    /// Hypothesis holds but at least one engine was skipped.
    Incomplete,
    /// Criterion and oracle disagree, or a witness failed verification.
    Disagreement,
    /// Hypothesis holds and the graph is not critical covered.
    Counterexample,
    /// Hypothesis holds and the minimum degree is below the implied bound.
    DegreeViolation,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Confirmed => "confirmed",
            Category::Unconstrained => "unconstrained",
            Category::Sharpness => "sharpness",
            Category::Incomplete => "incomplete",
            Category::Disagreement => "disagreement",
            Category::Counterexample => "counterexample",
            Category::DegreeViolation => "degree-violation",
        }
    }

    /// Process exit code this category forces, if any.
    pub fn exit_code(self) -> Option<i32> {
        match self {
            Category::Disagreement => Some(crate::EXIT_DISAGREEMENT),
            Category::Counterexample | Category::DegreeViolation => Some(crate::EXIT_COUNTEREXAMPLE),
            _ => None,
        }
    }
}

/// Graph6 text and its SHA-256, the identity of a graph in the ledger.
pub fn graph_identity(g: &Graph) -> (String, String) {
    let g6 = emit_graph6(g);
    let hash = format!("{:x}", Sha256::digest(g6.as_bytes()));
    (g6, hash)
}

impl LedgerRecord {
    pub fn fields(&self) -> [String; 21] {
        [
            LEDGER_VERSION.to_string(),
            self.instance.clone(),
            self.source.clone(),
            self.graph6.clone(),
            self.graph_sha256.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.a.to_string(),
            self.b.to_string(),
            self.k.to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.prng.unwrap_or("").to_string(),
            self.order_bound_ok.as_str().to_string(),
            self.hypothesis.column("holds", "fails").to_string(),
            self.degree_bound_ok.as_str().to_string(),
            self.criterion.column("covered", "not-covered").to_string(),
            self.oracle.column("covered", "not-covered").to_string(),
            self.factors_verified.to_string(),
            self.category.as_str().to_string(),
            self.certificate.clone(),
            self.wall_ms.to_string(),
        ]
    }
}

pub fn write_ledger<W: Write>(out: W, rows: &[LedgerRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_ledger_file(path: &Path, rows: &[LedgerRecord]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let file = std::fs::File::create(path)?;
    write_ledger(std::io::BufWriter::new(file), rows).map_err(std::io::Error::other)
}

/// Rows of a ledger with the timing column removed, for reproducibility
/// comparisons.
pub fn without_timing(text: &str) -> csv::Result<Vec<Vec<String>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let header = COLUMNS.iter().position(|c| *c == TIMING_COLUMN).expect("timing column");
    r.records()
        .map(|rec| {
            rec.map(|rec| {
                rec.iter()
                    .enumerate()
                    .filter(|(i, _)| *i != header)
                    .map(|(_, f)| f.to_string())
                    .collect()
            })
        })
        .collect()
}
