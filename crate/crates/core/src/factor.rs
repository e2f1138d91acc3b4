//! Constructive fractional `[a,b]`-factors via integral circulations on the
//! bipartite double cover.
//!
//! Every vertex `v` is split into an out-copy `v'` and an in-copy `v''`; an
//! edge `uv` becomes the unit arcs `u'→v''` and `v'→u''`. A source feeds each
//! `v'` with `[a, b]` units and each `v''` drains `[a, b]` units to a sink,
//! which returns the flow to the source. Pinned edges get lower bound 1 on
//! both arcs. An integral circulation `x` yields
//! `h(uv) = (x(u'v'') + x(v'u'')) / 2 ∈ {0, 1/2, 1}`, and any fractional
//! factor yields a fractional circulation, so integrality of the flow
//! polytope makes the reduction exact.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use serde_json::{json, Value};
use thiserror::Error;

use crate::flow::Circulation;
use crate::graph::{Graph, GraphError};
use crate::params::{ParamError, Params};
use crate::subsets;
use crate::vset::VertexSet;

pub type Weight = Ratio<i64>;
pub type Edge = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("pinned pair {0}-{1} is not an edge")]
    InvalidPin(usize, usize),
    #[error("weight given for {0}-{1}, which is not an edge")]
    NotAnEdge(usize, usize),
    #[error("no weight given for edge {0}-{1}")]
    MissingEdge(usize, usize),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot delete {k} vertices from a graph of order {n}")]
    TooManyDeletions { k: u32, n: usize },
    #[error("deletion sets need order <= 64, got {0}")]
    TooLargeForDeletion(usize),
}

fn norm((u, v): Edge) -> Edge {
    (u.min(v), u.max(v))
}

/// Edges required to carry weight exactly 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PinSet(BTreeSet<Edge>);

impl PinSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(e: Edge) -> Self {
        Self(BTreeSet::from([norm(e)]))
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.0.contains(&norm(e))
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.iter().copied()
    }

    fn validate(&self, g: &Graph) -> Result<(), FactorError> {
        match self.0.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            Some(&(u, v)) => Err(FactorError::InvalidPin(u, v)),
            None => Ok(()),
        }
    }
}

impl FromIterator<Edge> for PinSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Self(iter.into_iter().map(norm).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalFactor {
    weights: BTreeMap<Edge, Weight>,
}

impl FractionalFactor {
    pub fn new<I: IntoIterator<Item = (Edge, Weight)>>(weights: I) -> Self {
        Self {
            weights: weights.into_iter().map(|(e, w)| (norm(e), w)).collect(),
        }
    }

    pub fn weight(&self, e: Edge) -> Option<Weight> {
        self.weights.get(&norm(e)).copied()
    }

    pub fn weights(&self) -> impl Iterator<Item = (Edge, Weight)> + '_ {
        self.weights.iter().map(|(&e, &w)| (e, w))
    }

    /// `d^h(v)`: total weight on edges at `v`.
    pub fn degree(&self, v: usize) -> Weight {
        self.weights
            .iter()
            .filter(|((x, y), _)| *x == v || *y == v)
            .map(|(_, w)| *w)
            .sum()
    }

    pub fn is_half_integral(&self) -> bool {
        self.weights.values().all(|w| (*w * 2).is_integer() && *w >= Weight::from(0) && *w <= Weight::from(1))
    }

    /// `{"edges": [[u, v, "0" | "1/2" | "1"], ...]}`
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .weights
            .iter()
            .map(|(&(u, v), w)| json!([u, v, w.to_string()]))
            .collect();
        json!({ "edges": edges })
    }
}

fn build_network(g: &Graph, a: u32, b: u32, pins: &PinSet) -> (Circulation, Vec<(Edge, usize, usize)>) {
    let n = g.order();
    let (src, snk) = (2 * n, 2 * n + 1);
    let (a, b) = (a as i64, b as i64);
    let mut net = Circulation::new(2 * n + 2);
    for v in 0..n {
        net.add_arc(src, v, a, b);
        net.add_arc(n + v, snk, a, b);
    }
    net.add_arc(snk, src, 0, b * n as i64);
    let arcs = g
        .edges()
        .map(|(u, v)| {
            let lo = i64::from(pins.contains((u, v)));
            let fwd = net.add_arc(u, n + v, lo, 1);
            let bwd = net.add_arc(v, n + u, lo, 1);
            ((u, v), fwd, bwd)
        })
        .collect();
    (net, arcs)
}

/// A half-integral fractional `[a,b]`-factor with weight 1 on every pin, or
/// `None` when none exists.
pub fn find_factor(g: &Graph, a: u32, b: u32, pins: &PinSet) -> Result<Option<FractionalFactor>, FactorError> {
    Params::new(a, b, 0)?;
    pins.validate(g)?;
    let (net, arcs) = build_network(g, a, b, pins);
    let Some(x) = net.solve() else {
        return Ok(None);
    };
    Ok(Some(FractionalFactor {
        weights: arcs
            .into_iter()
            .map(|(e, f, r)| (e, Weight::new(x[f] + x[r], 2)))
            .collect(),
    }))
}

/// Exact check of range, degree and pin constraints. `h` must be defined on
/// exactly `E(G)`.
pub fn verify_factor(g: &Graph, a: u32, b: u32, pins: &PinSet, h: &FractionalFactor) -> Result<bool, FactorError> {
    if let Some(&(u, v)) = h.weights.keys().find(|&&(u, v)| !g.has_edge(u, v)) {
        return Err(FactorError::NotAnEdge(u, v));
    }
    if let Some((u, v)) = g.edges().find(|e| !h.weights.contains_key(e)) {
        return Err(FactorError::MissingEdge(u, v));
    }
    pins.validate(g)?;
    let (zero, one) = (Weight::from(0), Weight::from(1));
    if h.weights.values().any(|w| *w < zero || *w > one) {
        return Ok(false);
    }
    if pins.iter().any(|e| h.weight(e) != Some(one)) {
        return Ok(false);
    }
    let mut deg = vec![zero; g.order()];
    for (&(u, v), &w) in &h.weights {
        deg[u] += w;
        deg[v] += w;
    }
    let (lo, hi) = (Weight::from(a as i64), Weight::from(b as i64));
    Ok(deg.iter().all(|d| lo <= *d && *d <= hi))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructiveVerdict {
    /// One pinned factor per edge (canonical edge order). An edgeless graph is
    /// covered iff it has a factor at all, and then the map is empty.
    Covered { witnesses: BTreeMap<Edge, FractionalFactor> },
    /// The first edge whose pinned problem is infeasible; `None` when the
    /// graph has no edges and no factor.
    NotCovered { failing_edge: Option<Edge> },
}

impl ConstructiveVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, ConstructiveVerdict::Covered { .. })
    }
}

pub fn is_covered_constructive(g: &Graph, a: u32, b: u32) -> Result<ConstructiveVerdict, FactorError> {
    Params::new(a, b, 0)?;
    if g.size() == 0 {
        return Ok(match find_factor(g, a, b, &PinSet::new())? {
            Some(_) => ConstructiveVerdict::Covered { witnesses: BTreeMap::new() },
            None => ConstructiveVerdict::NotCovered { failing_edge: None },
        });
    }
    let mut witnesses = BTreeMap::new();
    for e in g.edges() {
        match find_factor(g, a, b, &PinSet::single(e))? {
            Some(h) => {
                witnesses.insert(e, h);
            }
            None => return Ok(ConstructiveVerdict::NotCovered { failing_edge: Some(e) }),
        }
    }
    Ok(ConstructiveVerdict::Covered { witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalConstructiveVerdict {
    pub covered: bool,
    /// Offending deletion set and, if the remainder has edges, the failing
    /// edge in the labels of the input graph.
    pub failure: Option<(VertexSet, Option<Edge>)>,
    /// For each deletion set visited: the witnesses, in the labels of `G - Q`.
    pub witnesses: Vec<(VertexSet, BTreeMap<Edge, FractionalFactor>)>,
}

/// Constructive check that `G - Q` is covered for every `|Q| = k`, visiting
/// `Q` in lexicographic order.
pub fn is_critical_covered_constructive(
    g: &Graph,
    a: u32,
    b: u32,
    k: u32,
) -> Result<CriticalConstructiveVerdict, FactorError> {
    Params::new(a, b, k)?;
    let n = g.order();
    if k as usize > n {
        return Err(FactorError::TooManyDeletions { k, n });
    }
    let mut qs = Vec::new();
    // Deletion sets are enumerated as masks, which bounds n by 64 here.
    if n <= subsets::MAX_MASK_ORDER {
        subsets::for_each_of_size(n, k as usize, |q| qs.push(VertexSet::from_mask(q)));
    } else if k == 0 {
        qs.push(VertexSet::new());
    } else {
        return Err(FactorError::TooLargeForDeletion(n));
    }
    let mut witnesses = Vec::new();
    for q in qs {
        let (h, map) = g.delete_vertices(&q)?;
        match is_covered_constructive(&h, a, b)? {
            ConstructiveVerdict::Covered { witnesses: w } => witnesses.push((q, w)),
            ConstructiveVerdict::NotCovered { failing_edge } => {
                let edge = failing_edge.map(|(u, v)| (map[u], map[v]));
                return Ok(CriticalConstructiveVerdict {
                    covered: false,
                    failure: Some((q, edge)),
                    witnesses,
                });
            }
        }
    }
    Ok(CriticalConstructiveVerdict { covered: true, failure: None, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, join, matching};

    fn half() -> Weight {
        Weight::new(1, 2)
    }

    fn star2() -> Graph {
        Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    /// Brute force over all assignments in {0, 1/2, 1}^E.
    fn half_integral_solutions(g: &Graph, a: u32, b: u32, pins: &PinSet) -> Vec<FractionalFactor> {
        let edges: Vec<Edge> = g.edges().collect();
        let mut out = Vec::new();
        for code in 0..3usize.pow(edges.len() as u32) {
            let mut c = code;
            let h = FractionalFactor::new(edges.iter().map(|&e| {
                let w = Weight::new((c % 3) as i64, 2);
                c /= 3;
                (e, w)
            }));
            if verify_factor(g, a, b, pins, &h).unwrap() {
                out.push(h);
            }
        }
        out
    }

    #[test]
    fn k2_forced() {
        let h = find_factor(&complete(2), 1, 1, &PinSet::new()).unwrap().unwrap();
        assert_eq!(h.weight((0, 1)), Some(Weight::from(1)));
    }

    #[test]
    fn k3_all_halves() {
        let brute = half_integral_solutions(&complete(3), 1, 1, &PinSet::new());
        let all_half = FractionalFactor::new(complete(3).edges().map(|e| (e, half())));
        assert_eq!(brute, vec![all_half.clone()]);
        let h = find_factor(&complete(3), 1, 1, &PinSet::new()).unwrap().unwrap();
        assert_eq!(h, all_half);
        assert!((0..3).all(|v| h.degree(v) == Weight::from(1)));
    }

    #[test]
    fn star_with_pin_is_infeasible() {
        for e in [(0, 1), (0, 2)] {
            let pins = PinSet::single(e);
            assert!(half_integral_solutions(&star2(), 1, 1, &pins).is_empty());
            assert_eq!(find_factor(&star2(), 1, 1, &pins).unwrap(), None);
        }
    }

    #[test]
    fn invalid_pin() {
        assert_eq!(
            find_factor(&star2(), 1, 1, &PinSet::single((1, 2))),
            Err(FactorError::InvalidPin(1, 2))
        );
    }

    #[test]
    fn verify_examples() {
        let k2 = complete(2);
        let one = FractionalFactor::new([((0, 1), Weight::from(1))]);
        let h = FractionalFactor::new([((0, 1), half())]);
        assert!(verify_factor(&k2, 1, 1, &PinSet::new(), &one).unwrap());
        assert!(!verify_factor(&k2, 1, 1, &PinSet::new(), &h).unwrap());
        let k3h = FractionalFactor::new(complete(3).edges().map(|e| (e, half())));
        assert!(verify_factor(&complete(3), 1, 1, &PinSet::new(), &k3h).unwrap());
        assert!(!verify_factor(&complete(3), 1, 1, &PinSet::single((0, 1)), &k3h).unwrap());
        let over = FractionalFactor::new([((0, 1), Weight::new(3, 2))]);
        assert!(!verify_factor(&k2, 0, 3, &PinSet::new(), &over).unwrap());
    }

    #[test]
    fn verify_domain_errors() {
        let off = FractionalFactor::new([((0, 1), half()), ((1, 2), half()), ((0, 2), half())]);
        assert_eq!(verify_factor(&star2(), 1, 1, &PinSet::new(), &off), Err(FactorError::NotAnEdge(1, 2)));
        let partial = FractionalFactor::new([((0, 1), half())]);
        assert_eq!(
            verify_factor(&star2(), 1, 1, &PinSet::new(), &partial),
            Err(FactorError::MissingEdge(0, 2))
        );
    }

    #[test]
    fn c4_witnesses_are_perfect_matchings() {
        let g = c4();
        let ConstructiveVerdict::Covered { witnesses } = is_covered_constructive(&g, 1, 1).unwrap() else {
            panic!("C4 is 1-covered");
        };
        assert_eq!(witnesses.len(), 4);
        for (e, h) in &witnesses {
            assert_eq!(h.weight(*e), Some(Weight::from(1)));
            // The only completion is the perfect matching containing e.
            assert_eq!(h.weights().filter(|(_, w)| *w == Weight::from(1)).count(), 2);
            assert!(h.weights().all(|(_, w)| w == Weight::from(0) || w == Weight::from(1)));
        }
    }

    #[test]
    fn constructive_negative_examples() {
        assert_eq!(
            is_covered_constructive(&star2(), 1, 1).unwrap(),
            ConstructiveVerdict::NotCovered { failing_edge: Some((0, 1)) }
        );
        let g = join(&complete(3), &matching(4));
        assert!(!is_covered_constructive(&g, 2, 3).unwrap().is_covered());
    }

    #[test]
    fn edgeless_graphs() {
        assert!(is_covered_constructive(&Graph::empty(3), 0, 1).unwrap().is_covered());
        assert_eq!(
            is_covered_constructive(&Graph::empty(3), 1, 1).unwrap(),
            ConstructiveVerdict::NotCovered { failing_edge: None }
        );
        assert!(is_covered_constructive(&Graph::empty(0), 1, 1).unwrap().is_covered());
    }

    #[test]
    fn critical_constructive() {
        let g = join(&complete(4), &matching(4));
        let v = is_critical_covered_constructive(&g, 2, 3, 1).unwrap();
        assert!(!v.covered);
        let (q, edge) = v.failure.unwrap();
        assert_eq!(q.to_vec(), vec![0]);
        assert!(edge.is_some());
        let k8 = complete(8);
        let v = is_critical_covered_constructive(&k8, 2, 2, 1).unwrap();
        assert!(v.covered);
        assert_eq!(v.witnesses.len(), 8);
    }

    #[test]
    fn json_weights_are_exact_strings() {
        let h = find_factor(&complete(3), 1, 1, &PinSet::new()).unwrap().unwrap();
        assert_eq!(
            h.to_json(),
            json!({"edges": [[0, 1, "1/2"], [0, 2, "1/2"], [1, 2, "1/2"]]})
        );
        let z = FractionalFactor::new([((0, 1), Weight::from(0))]);
        assert_eq!(z.to_json(), json!({"edges": [[0, 1, "0"]]}));
    }
}
