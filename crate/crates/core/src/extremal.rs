//! The sharpness family `K_{((a-1)t+2)/b + k} ∨ ((t+1)/2)K₂`.
//!
//! Hub vertices `A` come first (`0..|A|`), the matching side `B` follows with
//! partners on consecutive labels. Deleting any `k` hub vertices `D` leaves a
//! graph whose pair `S = A ∖ D`, `T = B` has `θ = 3 - a < 2 = ε`, while every
//! vertex set of `G` either dominates or satisfies the ratio inequality.

use serde_json::{json, Value};
use thiserror::Error;

use crate::criterion::{self, CriterionError};
use crate::factor::{self, FactorError};
use crate::graph::{complete, join, matching, Graph};
use crate::hypothesis::{self, HypothesisError, NeighborhoodCondition};
use crate::params::{ParamError, Params};
use crate::subsets::EnumerationCap;
use crate::vset::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtremalError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("t={t} must be odd so that (t+1)/2 is an integer; {}", next_hint(*.next))]
    EvenT { t: u64, next: Option<u64> },
    #[error("b={b} does not divide (a-1)t+2 = {value} for t={t}; {}", next_hint(*.next))]
    NotDivisible { t: u64, b: u32, value: u64, next: Option<u64> },
    #[error(transparent)]
    Criterion(#[from] CriterionError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Hypothesis(#[from] HypothesisError),
}

fn next_hint(next: Option<u64>) -> String {
    match next {
        Some(t) => format!("smallest larger valid t is {t}"),
        None => "no valid t exists for these (a, b)".to_string(),
    }
}

fn t_is_valid(a: u32, b: u32, t: u64) -> bool {
    t % 2 == 1 && ((a as u64 - 1) * t + 2).is_multiple_of(b as u64)
}

/// Valid `t` in increasing order: odd, with `b | (a-1)t + 2`. Empty when no
/// residue class works (e.g. `a = b = 2`).
pub fn valid_t_values(a: u32, b: u32) -> impl Iterator<Item = u64> {
    // Validity depends only on t mod 2b.
    let period = 2 * b as u64;
    let residues: Vec<u64> = (0..period).filter(|&t| t_is_valid(a, b, t)).collect();
    let any = !residues.is_empty();
    (0u64..)
        .take_while(move |_| any)
        .flat_map(move |block| residues.clone().into_iter().map(move |r| block * period + r))
}

pub fn smallest_valid_t_above(a: u32, b: u32, t: u64) -> Option<u64> {
    valid_t_values(a, b).find(|&x| x > t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalInstance {
    pub params: Params,
    pub t: u64,
    pub graph: Graph,
    /// Hub clique, `|A| = ((a-1)t+2)/b + k`.
    pub hub: VertexSet,
    /// Matching side, `|B| = t + 1`.
    pub matched: VertexSet,
}

impl ExtremalInstance {
    pub fn n(&self) -> usize {
        self.graph.order()
    }

    /// Canonical deletion set: the first `k` hub labels.
    pub fn deleted(&self) -> VertexSet {
        (0..self.params.k as usize).collect()
    }
}

pub fn build_extremal(a: u32, b: u32, k: u32, t: u64) -> Result<ExtremalInstance, ExtremalError> {
    let params = Params::neighborhood(a, b, k)?;
    if t.is_multiple_of(2) {
        return Err(ExtremalError::EvenT { t, next: smallest_valid_t_above(a, b, t) });
    }
    let value = (a as u64 - 1) * t + 2;
    if !value.is_multiple_of(b as u64) {
        return Err(ExtremalError::NotDivisible {
            t,
            b,
            value,
            next: smallest_valid_t_above(a, b, t),
        });
    }
    let hub_size = (value / b as u64 + k as u64) as usize;
    let pairs = t.div_ceil(2) as usize;
    let graph = join(&complete(hub_size), &matching(pairs));
    let n = graph.order();
    Ok(ExtremalInstance {
        params,
        t,
        graph,
        hub: (0..hub_size).collect(),
        matched: (hub_size..n).collect(),
    })
}

/// Checks that for every `X ⊆ B`, `|N(X)| = |A| + |X|`, and that the ratio
/// inequality `|N(X)| >= ρ|X|` holds exactly when `|X| <= t`. Sets of each
/// size are enumerated when `|B|` is small enough, otherwise one
/// representative per size (all sets of a size are equivalent under the
/// automorphisms swapping pairs).
pub fn boundary_holds(inst: &ExtremalInstance) -> Result<bool, ExtremalError> {
    let n = inst.n();
    let (rho_num, rho_den) = {
        let r = hypothesis::ratio(n, inst.params)?;
        (*r.numer(), *r.denom())
    };
    let hub = inst.hub.len();
    let b_labels = inst.matched.to_vec();
    let sizes_ok = |x: &VertexSet| -> Result<bool, ExtremalError> {
        let nx = inst.graph.neighborhood(x)?.len();
        let s = x.len() as i64;
        let expands = nx as i64 * rho_den >= rho_num * s;
        Ok(nx == hub + x.len() && expands == (s as u64 <= inst.t))
    };
    if b_labels.len() <= 16 {
        for mask in 1u64..1 << b_labels.len() {
            let x: VertexSet = (0..b_labels.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| b_labels[i])
                .collect();
            if !sizes_ok(&x)? {
                return Ok(false);
            }
        }
    } else {
        for s in 1..=b_labels.len() {
            if !sizes_ok(&b_labels[..s].iter().copied().collect())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of a sub-check that may be skipped when the instance is too large.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubCheck<T> {
    Done(T),
    Skipped(String),
}

impl<T: Copy> SubCheck<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            SubCheck::Done(v) => Some(*v),
            SubCheck::Skipped(_) => None,
        }
    }
}

impl SubCheck<bool> {
    fn to_json(&self) -> Value {
        match self {
            SubCheck::Done(v) => json!(v),
            SubCheck::Skipped(_) => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpnessReport {
    pub params: Params,
    pub t: u64,
    pub n: usize,
    /// Recomputed from `H = G - D` with `S = A ∖ D`, `T = B`.
    pub theta: i64,
    pub epsilon: u8,
    /// `3 - a`.
    pub theta_closed_form: i64,
    /// `T` recomputed from `S = A ∖ D` equals `B`.
    pub t_matches: bool,
    /// Disjunctive condition on `G` (dominate or expand, every `X`).
    pub hypothesis_holds: SubCheck<bool>,
    /// Split condition on `G`; fails on this family.
    pub split_hypothesis_holds: SubCheck<bool>,
    pub split_violating_x: Option<VertexSet>,
    pub criterion_covered: SubCheck<bool>,
    pub oracle_covered: SubCheck<bool>,
    pub boundary_x_le_t_ok: bool,
}

impl SharpnessReport {
    pub fn skipped(&self) -> Vec<&str> {
        [
            ("hypothesis", &self.hypothesis_holds),
            ("split_hypothesis", &self.split_hypothesis_holds),
            ("criterion", &self.criterion_covered),
            ("oracle", &self.oracle_covered),
        ]
        .into_iter()
        .filter(|(_, c)| matches!(c, SubCheck::Skipped(_)))
        .map(|(name, _)| name)
        .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "params": {"a": self.params.a, "b": self.params.b, "k": self.params.k},
            "t": self.t,
            "n": self.n,
            "theta": self.theta,
            "epsilon": self.epsilon,
            "theta_closed_form": self.theta_closed_form,
            "hypothesis_holds": self.hypothesis_holds.to_json(),
            "split_hypothesis_holds": self.split_hypothesis_holds.to_json(),
            "split_violating_X": self.split_violating_x.as_ref().map(VertexSet::to_vec),
            "criterion_covered": self.criterion_covered.to_json(),
            "oracle_covered": self.oracle_covered.to_json(),
            "boundary_X_le_t_ok": self.boundary_x_le_t_ok,
            "skipped": self.skipped(),
        })
    }
}

fn capped<T, E>(r: Result<T, E>) -> Result<SubCheck<T>, E>
where
    E: CapLike,
{
    match r {
        Ok(v) => Ok(SubCheck::Done(v)),
        Err(e) if e.is_cap() => Ok(SubCheck::Skipped(e.to_string())),
        Err(e) => Err(e),
    }
}

trait CapLike: std::fmt::Display {
    fn is_cap(&self) -> bool;
}

impl CapLike for CriterionError {
    fn is_cap(&self) -> bool {
        matches!(self, CriterionError::Cap(_))
    }
}

impl CapLike for HypothesisError {
    fn is_cap(&self) -> bool {
        matches!(self, HypothesisError::Cap(_))
    }
}

/// Builds the instance and runs every sub-check; checks over the enumeration
/// cap are reported as skipped. The factor oracle runs when the criterion did
/// (it has no cap of its own but costs one flow per edge).
pub fn demonstrate_sharpness(a: u32, b: u32, k: u32, t: u64, cap: EnumerationCap) -> Result<SharpnessReport, ExtremalError> {
    let inst = build_extremal(a, b, k, t)?;
    let g = &inst.graph;
    let d = inst.deleted();
    let (h, map) = g.delete_vertices(&d)?;
    let to_h = |x: &VertexSet| -> VertexSet {
        map.iter().enumerate().filter(|(_, v)| x.contains(**v)).map(|(i, _)| i).collect()
    };
    let s_h = to_h(&inst.hub.difference(&d));
    let b_h = to_h(&inst.matched);
    let (t_h, theta) = criterion::theta(&h, &s_h, a, b)?;
    let epsilon = criterion::epsilon(&h, &s_h, &t_h, a)?;

    let hypothesis_holds = capped(
        hypothesis::check_condition(g, inst.params, NeighborhoodCondition::Disjunctive, cap).map(|r| r.holds),
    )?;
    let split = capped(hypothesis::check_hypothesis(g, inst.params, cap))?;
    let (split_hypothesis_holds, split_violating_x) = match split {
        SubCheck::Done(r) => (SubCheck::Done(r.holds), r.violating_x),
        SubCheck::Skipped(why) => (SubCheck::Skipped(why), None),
    };
    let criterion_covered = capped(criterion::is_covered(&h, a, b, cap).map(|v| v.covered))?;
    let oracle_covered = match criterion_covered {
        SubCheck::Done(_) => SubCheck::Done(factor::is_covered_constructive(&h, a, b)?.is_covered()),
        SubCheck::Skipped(ref why) => SubCheck::Skipped(why.clone()),
    };

    Ok(SharpnessReport {
        params: inst.params,
        t,
        n: inst.n(),
        theta,
        epsilon,
        theta_closed_form: 3 - a as i64,
        t_matches: t_h == b_h,
        hypothesis_holds,
        split_hypothesis_holds,
        split_violating_x,
        criterion_covered,
        oracle_covered,
        boundary_x_le_t_ok: boundary_holds(&inst)?,
    })
}

impl From<crate::graph::GraphError> for ExtremalError {
    fn from(e: crate::graph::GraphError) -> Self {
        ExtremalError::Criterion(CriterionError::Graph(e))
    }
}
