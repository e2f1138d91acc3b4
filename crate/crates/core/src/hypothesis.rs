//! Neighborhood conditions for fractional `(a,b,k)`-critical coveredness.
//!
//! With `n = |V(G)|`, write `ρ = (a+b-1)(n-1) / (b(n-1) - bk - 2)` and
//! `τ = ⌊((b(n-1) - bk)·n - 2(n-1)) / ((a+b-1)(n-1))⌋`. Two conditions on
//! vertex sets `X` are checked:
//!
//! * [`NeighborhoodCondition::Split`]: `N(X) = V` whenever `|X| >= τ`, and
//!   `|N(X)| >= ρ|X|` whenever `|X| < τ`. Together with
//!   `n >= ((a+b-2)(2a+b-3)+2)/b + bk/(b-1)` this guarantees critical
//!   coveredness.
//! * [`NeighborhoodCondition::Disjunctive`]: every `X` has `N(X) = V` or
//!   `|N(X)| >= ρ|X|`, with no size split. The extremal family satisfies this
//!   weaker condition without being critical covered.
//!
//! `X = ∅` satisfies both vacuously. All comparisons are cross-multiplied
//! integer comparisons.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::params::{ParamError, Params};
use crate::subsets::{self, CapExceeded, EnumerationCap};
use crate::vset::VertexSet;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("order n={n} outside the valid range for {params}: {what}")]
    Regime { n: usize, params: Params, what: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeighborhoodCondition {
    Split,
    Disjunctive,
}

impl NeighborhoodCondition {
    pub fn name(self) -> &'static str {
        match self {
            NeighborhoodCondition::Split => "split",
            NeighborhoodCondition::Disjunctive => "disjunctive",
        }
    }
}

impl fmt::Display for NeighborhoodCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for NeighborhoodCondition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "split" => Ok(Self::Split),
            "disjunctive" => Ok(Self::Disjunctive),
            other => Err(format!("unknown condition `{other}` (split|disjunctive)")),
        }
    }
}

/// Numerator and denominator of `ρ`, unreduced.
fn ratio_parts(n: usize, p: Params) -> Result<(i64, i64), HypothesisError> {
    p.require_neighborhood_regime()?;
    if n < 2 {
        return Err(HypothesisError::Regime { n, params: p, what: "need n >= 2" });
    }
    let (n1, a, b, k) = (n as i64 - 1, p.a as i64, p.b as i64, p.k as i64);
    let den = b * n1 - b * k - 2;
    if den <= 0 {
        return Err(HypothesisError::Regime {
            n,
            params: p,
            what: "b(n-1) - bk - 2 must be positive",
        });
    }
    Ok(((a + b - 1) * n1, den))
}

/// `⌊((b(n-1) - bk)·n - 2(n-1)) / ((a+b-1)(n-1))⌋`.
pub fn threshold(n: usize, p: Params) -> Result<u64, HypothesisError> {
    p.require_neighborhood_regime()?;
    if n < 2 {
        return Err(HypothesisError::Regime { n, params: p, what: "need n >= 2" });
    }
    let (n0, a, b, k) = (n as i128, p.a as i128, p.b as i128, p.k as i128);
    let num = (b * (n0 - 1) - b * k) * n0 - 2 * (n0 - 1);
    let den = (a + b - 1) * (n0 - 1);
    if num <= 0 {
        return Err(HypothesisError::Regime {
            n,
            params: p,
            what: "threshold numerator must be positive",
        });
    }
    Ok((num / den) as u64)
}

/// `(a+b-1)(n-1) / (b(n-1) - bk - 2)`, reduced.
pub fn ratio(n: usize, p: Params) -> Result<Rational, HypothesisError> {
    let (num, den) = ratio_parts(n, p)?;
    Ok(Rational::new(num, den))
}

/// `((a+b-2)(2a+b-3) + 2)/b + bk/(b-1)`.
pub fn order_bound(p: Params) -> Result<Rational, HypothesisError> {
    p.require_neighborhood_regime()?;
    let (a, b, k) = (p.a as i64, p.b as i64, p.k as i64);
    Ok(Rational::new((a + b - 2) * (2 * a + b - 3) + 2, b) + Rational::new(b * k, b - 1))
}

pub fn order_bound_ok(n: usize, p: Params) -> Result<bool, HypothesisError> {
    Ok(Rational::from(n as i64) >= order_bound(p)?)
}

/// Lower bound on `δ(G)` implied by the split condition:
/// `((a-1)n + b + bk + 2) / (a+b-1)`.
pub fn degree_bound(n: usize, p: Params) -> Result<Rational, HypothesisError> {
    p.require_neighborhood_regime()?;
    let (n, a, b, k) = (n as i64, p.a as i64, p.b as i64, p.k as i64);
    Ok(Rational::new((a - 1) * n + b + b * k + 2, a + b - 1))
}

pub fn degree_consequence_ok(g: &Graph, p: Params) -> Result<bool, HypothesisError> {
    let bound = degree_bound(g.order(), p)?;
    Ok(Rational::from(g.min_degree()? as i64) >= bound)
}

/// Threshold as displayed for `k = 0`: `⌊(bn-2)/(a+b-1)⌋`.
pub fn threshold_k0_closed_form(n: usize, a: u32, b: u32) -> u64 {
    ((b as u64 * n as u64).saturating_sub(2)) / (a as u64 + b as u64 - 1)
}

/// Order bound as displayed for `a = b = r`: `6r - 12 + 8/r + rk/(r-1)`.
pub fn order_bound_regular_closed_form(r: u32, k: u32) -> Rational {
    let (r, k) = (r as i64, k as i64);
    Rational::from(6 * r - 12) + Rational::new(8, r) + Rational::new(r * k, r - 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub n: usize,
    pub params: Params,
    pub condition: NeighborhoodCondition,
    pub order_bound_ok: bool,
    pub threshold: u64,
    pub ratio: Rational,
    pub holds: bool,
    pub violating_x: Option<VertexSet>,
    pub profile: Option<BTreeMap<usize, usize>>,
}

impl HypothesisReport {
    /// `{"n", "a", "b", "k", "condition", "order_bound_ok", "threshold",
    /// "ratio": "p/q", "holds", "violating_X"}`
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "n": self.n,
            "a": self.params.a,
            "b": self.params.b,
            "k": self.params.k,
            "condition": self.condition.name(),
            "order_bound_ok": self.order_bound_ok,
            "threshold": self.threshold,
            "ratio": format!("{}/{}", self.ratio.numer(), self.ratio.denom()),
            "holds": self.holds,
            "violating_X": self.violating_x.as_ref().map(VertexSet::to_vec),
        });
        if let Some(profile) = &self.profile {
            let m: serde_json::Map<String, Value> =
                profile.iter().map(|(s, v)| (s.to_string(), json!(v))).collect();
            v["profile"] = Value::Object(m);
        }
        v
    }
}

struct MaskNeighborhoods {
    adj: Vec<u64>,
    full: u64,
}

impl MaskNeighborhoods {
    fn new(g: &Graph, cap: EnumerationCap) -> Result<Self, CapExceeded> {
        cap.check(g.order())?;
        let n = g.order();
        Ok(Self {
            adj: g.masks().expect("cap never exceeds 64"),
            full: if n == 64 { u64::MAX } else { (1 << n) - 1 },
        })
    }

    #[inline]
    fn of(&self, x: u64) -> u64 {
        let mut m = x;
        let mut nb = 0;
        while m != 0 {
            nb |= self.adj[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        nb
    }
}

/// Enumerates every nonempty `X` and reports the canonical-order-first
/// violation of `condition`.
pub fn check_condition(
    g: &Graph,
    p: Params,
    condition: NeighborhoodCondition,
    cap: EnumerationCap,
) -> Result<HypothesisReport, HypothesisError> {
    let n = g.order();
    let (num, den) = ratio_parts(n, p)?;
    let thr = threshold(n, p)?;
    let nb = MaskNeighborhoods::new(g, cap)?;
    let expands = |x: u64, nx: u64| (nx.count_ones() as i64) * den >= num * x.count_ones() as i64;
    let hit = subsets::find_first(n, 1, |x| {
        let nx = nb.of(x);
        let dominates = nx == nb.full;
        match condition {
            NeighborhoodCondition::Split if x.count_ones() as u64 >= thr => !dominates,
            NeighborhoodCondition::Split => !expands(x, nx),
            NeighborhoodCondition::Disjunctive => !dominates && !expands(x, nx),
        }
    });
    Ok(HypothesisReport {
        n,
        params: p,
        condition,
        order_bound_ok: order_bound_ok(n, p)?,
        threshold: thr,
        ratio: Rational::new(num, den),
        holds: hit.is_none(),
        violating_x: hit.map(VertexSet::from_mask),
        profile: None,
    })
}

/// The split condition (the hypothesis that implies critical coveredness).
pub fn check_hypothesis(g: &Graph, p: Params, cap: EnumerationCap) -> Result<HypothesisReport, HypothesisError> {
    check_condition(g, p, NeighborhoodCondition::Split, cap)
}

/// For each size `s` in `1..=n`, the minimum of `|N(X)|` over `|X| = s`.
pub fn min_neighborhood_profile(g: &Graph, cap: EnumerationCap) -> Result<BTreeMap<usize, usize>, HypothesisError> {
    let nb = MaskNeighborhoods::new(g, cap)?;
    let mins = subsets::min_by_size(g.order(), |x| nb.of(x).count_ones() as u64);
    Ok(mins.into_iter().enumerate().map(|(i, m)| (i + 1, m as usize)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, join, matching};

    fn p(a: u32, b: u32, k: u32) -> Params {
        Params::neighborhood(a, b, k).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold(11, p(2, 3, 0)).unwrap(), 7);
        assert_eq!(threshold(11, p(2, 3, 1)).unwrap(), 6);
        assert_eq!(threshold(11, p(2, 2, 0)).unwrap(), 6);
        assert_eq!(threshold_k0_closed_form(11, 2, 2), 6);
        assert!(threshold(1, p(2, 3, 0)).is_err());
        assert!(matches!(threshold(4, p(2, 3, 5)), Err(HypothesisError::Regime { .. })));
        assert!(threshold(11, Params::new(1, 3, 0).unwrap()).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(11, p(2, 3, 0)).unwrap(), Rational::new(10, 7));
        assert_eq!(ratio(11, p(2, 2, 0)).unwrap(), Rational::new(5, 3));
        // b(n-1) - bk - 2 = 2*1 - 2 = 0
        assert!(ratio(2, p(2, 2, 0)).is_err());
    }

    #[test]
    fn order_bound_examples() {
        assert_eq!(order_bound(p(2, 3, 0)).unwrap(), Rational::new(14, 3));
        assert!(order_bound_ok(11, p(2, 3, 0)).unwrap());
        assert!(!order_bound_ok(4, p(2, 3, 0)).unwrap());
        assert_eq!(order_bound(p(2, 2, 0)).unwrap(), Rational::from(4));
        assert_eq!(order_bound_regular_closed_form(2, 0), Rational::from(4));
    }

    #[test]
    fn degree_bound_examples() {
        let g = join(&complete(3), &matching(4));
        assert_eq!(degree_bound(11, p(2, 3, 0)).unwrap(), Rational::from(4));
        assert!(degree_consequence_ok(&g, p(2, 3, 0)).unwrap());
        let two_k2 = matching(2);
        assert_eq!(degree_bound(4, p(2, 2, 0)).unwrap(), Rational::new(8, 3));
        assert!(!degree_consequence_ok(&two_k2, p(2, 2, 0)).unwrap());
        let with_isolated = crate::graph::disjoint_union(&complete(5), &crate::graph::Graph::empty(1));
        assert!(!degree_consequence_ok(&with_isolated, p(2, 2, 0)).unwrap());
    }

    #[test]
    fn hypothesis_examples() {
        let cap = EnumerationCap::DEFAULT;
        let r = check_hypothesis(&matching(2), p(2, 2, 0), cap).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violating_x, Some(set(&[0])));
        let r = check_hypothesis(&complete(11), p(2, 3, 0), cap).unwrap();
        assert!(r.holds && r.order_bound_ok);
        assert_eq!(r.violating_x, None);
    }

    #[test]
    fn extremal_graph_satisfies_only_the_disjunctive_form() {
        let g = join(&complete(3), &matching(4));
        let cap = EnumerationCap::DEFAULT;
        let d = check_condition(&g, p(2, 3, 0), NeighborhoodCondition::Disjunctive, cap).unwrap();
        assert!(d.holds);
        // Threshold is 7 = t; B minus its last vertex has 7 members and misses
        // that vertex's partner.
        let s = check_hypothesis(&g, p(2, 3, 0), cap).unwrap();
        assert!(!s.holds);
        assert_eq!(s.violating_x, Some(set(&[3, 4, 5, 6, 7, 8, 9])));
    }

    #[test]
    fn profile_examples() {
        let cap = EnumerationCap::DEFAULT;
        let k4 = min_neighborhood_profile(&complete(4), cap).unwrap();
        assert_eq!(k4, BTreeMap::from([(1, 3), (2, 4), (3, 4), (4, 4)]));
        let m = min_neighborhood_profile(&matching(2), cap).unwrap();
        assert_eq!(m, BTreeMap::from([(1, 1), (2, 2), (3, 3), (4, 4)]));
        assert_eq!(min_neighborhood_profile(&matching(5), cap).unwrap()[&1], 1);
    }

    #[test]
    fn json_shape() {
        let r = check_hypothesis(&matching(2), p(2, 2, 0), EnumerationCap::DEFAULT).unwrap();
        let j = r.to_json();
        assert_eq!(j["ratio"], json!("9/4"));
        assert_eq!(j["violating_X"], json!([0]));
        assert_eq!(j["threshold"], json!(2));
        let ok = check_hypothesis(&complete(11), p(2, 3, 0), EnumerationCap::DEFAULT).unwrap();
        assert!(ok.to_json()["violating_X"].is_null());
    }
}
