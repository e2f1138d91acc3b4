//! Structural criterion for fractional `[a,b]`-coveredness.
//!
//! For `S ⊆ V(G)` let `T = {x ∉ S : d_{G-S}(x) <= a}` and
//! `θ(S,T) = b|S| + Σ_{x∈T} d_{G-S}(x) - a|T|`. The graph is fractional
//! `[a,b]`-covered iff `θ(S,T) >= ε(S)` for every `S`, where
//!
//! * `ε(S) = 2` if `S` spans an edge;
//! * `ε(S) = 1` if `S` is independent and some edge joins `S` to
//!   `V ∖ (S ∪ T)`, or some edge `uv` has `u ∈ S`, `v ∈ T` and
//!   `d_{G-S}(v) = a`;
//! * `ε(S) = 0` otherwise.
//!
//! Everything here is exact integer arithmetic.

use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::params::{ParamError, Params};
use crate::subsets::{self, CapExceeded, EnumerationCap};
use crate::vset::VertexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriterionError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot delete {k} vertices from a graph of order {n}")]
    TooManyDeletions { k: u32, n: usize },
}

/// A violated inequality `θ < ε`, stated in the labels of the input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionCertificate {
    /// Deleted vertices (empty for plain coveredness).
    pub q: VertexSet,
    pub s: VertexSet,
    pub t: VertexSet,
    pub theta: i64,
    pub epsilon: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageVerdict {
    pub covered: bool,
    pub certificate: Option<CriterionCertificate>,
    /// Deterministic count: every subset up to and including the reported
    /// violation in canonical order, summed over the deletion sets visited.
    pub subsets_examined: u64,
}

pub fn compute_t(g: &Graph, s: &VertexSet, a: u32) -> Result<VertexSet, GraphError> {
    g.check_set(s)?;
    Ok((0..g.order())
        .filter(|&x| !s.contains(x) && g.degree_outside(x, s) <= a as usize)
        .collect())
}

pub fn epsilon(g: &Graph, s: &VertexSet, t: &VertexSet, a: u32) -> Result<u8, GraphError> {
    if !g.is_independent(s)? {
        return Ok(2);
    }
    g.check_set(t)?;
    let rest = s.union(t).complement(g.order());
    let to_rest = s.iter().any(|u| !g.neighbors(u).is_disjoint(&rest));
    let tight = t
        .iter()
        .any(|v| g.degree_outside(v, s) == a as usize && !g.neighbors(v).is_disjoint(s));
    Ok(u8::from(to_rest || tight))
}

/// Returns `T` and `θ(S,T)`.
pub fn theta(g: &Graph, s: &VertexSet, a: u32, b: u32) -> Result<(VertexSet, i64), GraphError> {
    let t = compute_t(g, s, a)?;
    let dt: usize = t.iter().map(|x| g.degree_outside(x, s)).sum();
    let value = b as i64 * s.len() as i64 + dt as i64 - a as i64 * t.len() as i64;
    Ok((t, value))
}

/// Word-level evaluation on a graph with `n <= 64`.
#[derive(Clone, Copy)]
pub(crate) struct MaskCriterion<'a> {
    pub adj: &'a [u64],
    pub full: u64,
    pub a: u32,
    pub b: u32,
}

impl MaskCriterion<'_> {
    #[inline]
    pub fn theta(&self, s: u64) -> (u64, i64) {
        let out = self.full & !s;
        let (mut t, mut dt) = (0u64, 0i64);
        let mut rest = out;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            let d = (self.adj[x as usize] & out).count_ones();
            if d <= self.a {
                t |= 1 << x;
                dt += d as i64;
            }
        }
        let th = self.b as i64 * s.count_ones() as i64 + dt - self.a as i64 * t.count_ones() as i64;
        (t, th)
    }

    #[inline]
    pub fn epsilon(&self, s: u64, t: u64) -> u8 {
        let mut m = s;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.adj[u] & s != 0 {
                return 2;
            }
        }
        let rest = self.full & !(s | t);
        let out = self.full & !s;
        let mut m = s;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.adj[u] & rest != 0 {
                return 1;
            }
        }
        let mut m = t;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            if self.adj[v] & s != 0 && (self.adj[v] & out).count_ones() == self.a {
                return 1;
            }
        }
        0
    }

    /// `Some((T, θ, ε))` when `S` violates the criterion.
    #[inline]
    pub fn violation(&self, s: u64) -> Option<(u64, i64, u8)> {
        let (t, th) = self.theta(s);
        // ε never exceeds 2.
        if th >= 2 {
            return None;
        }
        let eps = self.epsilon(s, t);
        (th < eps as i64).then_some((t, th, eps))
    }
}

fn masks_for(g: &Graph, cap: EnumerationCap) -> Result<Vec<u64>, CriterionError> {
    cap.check(g.order())?;
    Ok(g.masks().expect("cap never exceeds 64"))
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Exhaustive check over all `2^n` subsets; reports the canonical-order-first
/// violating `S`.
pub fn is_covered(g: &Graph, a: u32, b: u32, cap: EnumerationCap) -> Result<CoverageVerdict, CriterionError> {
    Params::new(a, b, 0)?;
    let adj = masks_for(g, cap)?;
    let n = g.order();
    let mc = MaskCriterion { adj: &adj, full: full_mask(n), a, b };
    let hit = subsets::find_first(n, 0, |s| mc.violation(s).is_some());
    Ok(match hit {
        None => CoverageVerdict {
            covered: true,
            certificate: None,
            subsets_examined: 1u64 << n,
        },
        Some(s) => {
            let (t, theta, epsilon) = mc.violation(s).expect("hit is a violation");
            CoverageVerdict {
                covered: false,
                certificate: Some(CriterionCertificate {
                    q: VertexSet::new(),
                    s: VertexSet::from_mask(s),
                    t: VertexSet::from_mask(t),
                    theta,
                    epsilon,
                }),
                subsets_examined: subsets::canonical_rank(n, s),
            }
        }
    })
}

/// `G - Q` is covered for every `Q` with `|Q| = k`, visited in lexicographic
/// order. The certificate is translated back to the labels of `g`.
pub fn is_critical_covered(
    g: &Graph,
    a: u32,
    b: u32,
    k: u32,
    cap: EnumerationCap,
) -> Result<CoverageVerdict, CriterionError> {
    Params::new(a, b, k)?;
    let n = g.order();
    if k as usize > n {
        return Err(CriterionError::TooManyDeletions { k, n });
    }
    cap.check(n)?;
    let mut examined = 0u64;
    let mut failure = None;
    let mut qs = Vec::new();
    subsets::for_each_of_size(n, k as usize, |q| qs.push(q));
    for q in qs {
        let q = VertexSet::from_mask(q);
        let (h, map) = g.delete_vertices(&q)?;
        let verdict = is_covered(&h, a, b, cap)?;
        examined += verdict.subsets_examined;
        if let Some(c) = verdict.certificate {
            let lift = |x: &VertexSet| x.iter().map(|v| map[v]).collect::<VertexSet>();
            failure = Some(CriterionCertificate {
                s: lift(&c.s),
                t: lift(&c.t),
                q,
                ..c
            });
            break;
        }
    }
    Ok(CoverageVerdict {
        covered: failure.is_none(),
        certificate: failure,
        subsets_examined: examined,
    })
}

impl CriterionCertificate {
    /// Recomputes `T`, `θ`, `ε` on `G - Q` and checks they match the stored
    /// values and that `θ < ε`.
    pub fn verify(&self, g: &Graph, a: u32, b: u32) -> Result<bool, GraphError> {
        let (h, map) = g.delete_vertices(&self.q)?;
        let mut back = vec![usize::MAX; g.order()];
        for (i, &v) in map.iter().enumerate() {
            back[v] = i;
        }
        let to_h = |x: &VertexSet| -> Option<VertexSet> {
            x.iter().map(|v| back.get(v).copied().filter(|&i| i != usize::MAX)).collect()
        };
        let (Some(s), Some(t_stored)) = (to_h(&self.s), to_h(&self.t)) else {
            return Ok(false);
        };
        let (t, th) = theta(&h, &s, a, b)?;
        let eps = epsilon(&h, &s, &t, a)?;
        Ok(t == t_stored && th == self.theta && eps == self.epsilon && th < eps as i64)
    }
}

fn labels(x: &VertexSet) -> Value {
    Value::from(x.to_vec())
}

impl CoverageVerdict {
    /// `{"covered", "Q", "S", "T", "theta", "epsilon", "subsets_examined"}`;
    /// certificate fields are `null` when covered.
    pub fn to_json(&self) -> Value {
        match &self.certificate {
            Some(c) => json!({
                "covered": self.covered,
                "Q": labels(&c.q),
                "S": labels(&c.s),
                "T": labels(&c.t),
                "theta": c.theta,
                "epsilon": c.epsilon,
                "subsets_examined": self.subsets_examined,
            }),
            None => json!({
                "covered": self.covered,
                "Q": null,
                "S": null,
                "T": null,
                "theta": null,
                "epsilon": null,
                "subsets_examined": self.subsets_examined,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, join, matching};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn star2() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn extremal_2_3_0_7() -> Graph {
        join(&complete(3), &matching(4))
    }

    #[test]
    fn compute_t_examples() {
        assert_eq!(compute_t(&complete(4), &VertexSet::new(), 1).unwrap(), VertexSet::new());
        assert_eq!(compute_t(&star2(), &set(&[0]), 1).unwrap(), set(&[1, 2]));
        let g = extremal_2_3_0_7();
        assert_eq!(compute_t(&g, &set(&[0, 1, 2]), 2).unwrap(), set(&[3, 4, 5, 6, 7, 8, 9, 10]));
    }

    #[test]
    fn epsilon_examples() {
        let k3 = complete(3);
        let s = set(&[0, 1]);
        let t = compute_t(&k3, &s, 1).unwrap();
        assert_eq!(epsilon(&k3, &s, &t, 1).unwrap(), 2);
        let t0 = compute_t(&k3, &VertexSet::new(), 1).unwrap();
        assert_eq!(epsilon(&k3, &VertexSet::new(), &t0, 1).unwrap(), 0);
        // P3, S = {middle}: T = both ends with degree 0 != a, nothing left over.
        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let t = compute_t(&p3, &set(&[1]), 1).unwrap();
        assert_eq!(t, set(&[0, 2]));
        assert_eq!(epsilon(&p3, &set(&[1]), &t, 1).unwrap(), 0);
    }

    #[test]
    fn epsilon_tight_t_endpoint() {
        // P4 0-1-2-3, S = {1}: T = {0, 2, 3} at a = 1; vertex 2 has d_{G-S} = 1 = a
        // and is adjacent to S.
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = set(&[1]);
        let t = compute_t(&p4, &s, 1).unwrap();
        assert_eq!(t, set(&[0, 2, 3]));
        assert_eq!(epsilon(&p4, &s, &t, 1).unwrap(), 1);
        // Same S at a = 2: vertex 2 now has degree 1 != a, all of V∖S is in T.
        let t2 = compute_t(&p4, &s, 2).unwrap();
        assert_eq!(epsilon(&p4, &s, &t2, 2).unwrap(), 0);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&complete(4), &VertexSet::new(), 1, 1).unwrap(), (VertexSet::new(), 0));
        let g = extremal_2_3_0_7();
        let (t, th) = theta(&g, &set(&[0, 1, 2]), 2, 3).unwrap();
        assert_eq!(t.len(), 8);
        assert_eq!(th, 1);
        assert_eq!(theta(&star2(), &set(&[0]), 1, 1).unwrap(), (set(&[1, 2]), -1));
    }

    #[test]
    fn is_covered_examples() {
        assert!(is_covered(&cycle(4), 1, 1, EnumerationCap::DEFAULT).unwrap().covered);

        let v = is_covered(&star2(), 1, 1, EnumerationCap::DEFAULT).unwrap();
        assert!(!v.covered);
        let c = v.certificate.unwrap();
        assert_eq!((c.s, c.theta, c.epsilon), (set(&[0]), -1, 0));

        let v = is_covered(&extremal_2_3_0_7(), 2, 3, EnumerationCap::DEFAULT).unwrap();
        let c = v.certificate.unwrap();
        assert_eq!(c.s, set(&[0, 1, 2]));
        assert_eq!(c.t, (3..11).collect());
        assert_eq!((c.theta, c.epsilon), (1, 2));
    }

    #[test]
    fn critical_examples() {
        let g = cycle(5);
        let plain = is_covered(&g, 1, 2, EnumerationCap::DEFAULT).unwrap();
        let k0 = is_critical_covered(&g, 1, 2, 0, EnumerationCap::DEFAULT).unwrap();
        assert_eq!(plain, k0);

        let g = join(&complete(4), &matching(4));
        let v = is_critical_covered(&g, 2, 3, 1, EnumerationCap::DEFAULT).unwrap();
        let c = v.certificate.unwrap();
        assert_eq!(c.q, set(&[0]));
        assert_eq!(c.s, set(&[1, 2, 3]));
        assert_eq!(c.t, (4..12).collect());
        assert!(c.verify(&g, 2, 3).unwrap());
    }

    #[test]
    fn errors() {
        let big = complete(23);
        assert!(matches!(
            is_covered(&big, 1, 1, EnumerationCap::DEFAULT),
            Err(CriterionError::Cap(CapExceeded { n: 23, cap: 22 }))
        ));
        assert!(matches!(is_covered(&complete(3), 2, 1, EnumerationCap::DEFAULT), Err(CriterionError::Params(_))));
        assert!(matches!(
            is_critical_covered(&complete(3), 1, 1, 4, EnumerationCap::DEFAULT),
            Err(CriterionError::TooManyDeletions { .. })
        ));
    }

    #[test]
    fn json_shape() {
        let v = is_covered(&star2(), 1, 1, EnumerationCap::DEFAULT).unwrap();
        let j = v.to_json();
        assert_eq!(j["S"], json!([0]));
        assert_eq!(j["Q"], json!([]));
        assert_eq!(j["theta"], json!(-1));
        assert_eq!(j["covered"], json!(false));
        let ok = is_covered(&cycle(4), 1, 1, EnumerationCap::DEFAULT).unwrap().to_json();
        assert_eq!(ok["subsets_examined"], json!(16));
        assert!(ok["S"].is_null());
    }
}
