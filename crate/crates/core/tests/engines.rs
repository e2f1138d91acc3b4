//! Cross-checks between the structural criterion and the flow-based oracle.

use fraccover::criterion::{self, is_covered, is_critical_covered};
use fraccover::factor::{self, find_factor, is_covered_constructive, verify_factor, PinSet};
use fraccover::graph::{complete, gnp, Graph};
use fraccover::EnumerationCap;
use num_rational::Ratio;
use proptest::prelude::*;

const PARAM_SET: [(u32, u32); 4] = [(1, 1), (1, 2), (2, 2), (2, 3)];

fn labeled_graph(n: usize, code: u64) -> Graph {
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, pairs.enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, e)| e)).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let code = bits.iter().enumerate().fold(0u64, |c, (i, &b)| c | (b as u64) << i);
            labeled_graph(n, code)
        })
    })
}

fn arb_params() -> impl Strategy<Value = (u32, u32)> {
    (0u32..4, 0u32..3).prop_map(|(a, d)| (a, a + d))
}

#[test]
fn engines_agree_on_all_graphs_up_to_five_vertices() {
    let cap = EnumerationCap::DEFAULT;
    for n in 0usize..=5 {
        for code in 0..1u64 << (n * n.saturating_sub(1) / 2) {
            let g = labeled_graph(n, code);
            for &(a, b) in &PARAM_SET {
                let c = is_covered(&g, a, b, cap).unwrap().covered;
                let o = is_covered_constructive(&g, a, b).unwrap().is_covered();
                assert_eq!(c, o, "n={n} code={code} a={a} b={b} {g:?}");
            }
        }
    }
}

#[test]
fn critical_k8_matches_oracle_on_each_deletion() {
    let k8 = complete(8);
    let cap = EnumerationCap::DEFAULT;
    let v = is_critical_covered(&k8, 2, 2, 1, cap).unwrap();
    for q in 0..8 {
        let (h, _) = k8.delete_vertices(&[q].into_iter().collect()).unwrap();
        assert_eq!(is_covered_constructive(&h, 2, 2).unwrap().is_covered(), v.covered);
    }
    assert!(v.covered);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn engines_agree_on_random_graphs(g in arb_graph(9), (a, b) in arb_params()) {
        let c = is_covered(&g, a, b, EnumerationCap::DEFAULT).unwrap();
        let o = is_covered_constructive(&g, a, b).unwrap();
        prop_assert_eq!(c.covered, o.is_covered());
        if let Some(cert) = &c.certificate {
            prop_assert!(cert.verify(&g, a, b).unwrap());
        }
    }

    #[test]
    fn epsilon_bounded_by_set_size(g in arb_graph(8), mask in any::<u8>(), a in 0u32..4) {
        let s: fraccover::VertexSet = (0..g.order()).filter(|i| mask >> i & 1 == 1).collect();
        let (t, _) = criterion::theta(&g, &s, a, a + 1).unwrap();
        let eps = criterion::epsilon(&g, &s, &t, a).unwrap();
        prop_assert!(eps as usize <= s.len().min(2));
    }

    #[test]
    fn theta_monotone_in_b(g in arb_graph(8), mask in any::<u8>(), a in 0u32..3, b in 0u32..3, extra in 0u32..3) {
        let b = a + b;
        let s: fraccover::VertexSet = (0..g.order()).filter(|i| mask >> i & 1 == 1).collect();
        let (_, lo) = criterion::theta(&g, &s, a, b).unwrap();
        let (_, hi) = criterion::theta(&g, &s, a, b + extra).unwrap();
        prop_assert!(hi >= lo);
    }

    #[test]
    fn covered_is_monotone_in_b(g in arb_graph(8), (a, b) in arb_params()) {
        let cap = EnumerationCap::DEFAULT;
        if is_covered(&g, a, b, cap).unwrap().covered {
            prop_assert!(is_covered(&g, a, b + 1, cap).unwrap().covered);
        }
    }

    #[test]
    fn critical_certificates_are_sound(g in arb_graph(8), (a, b) in arb_params(), k in 0u32..3) {
        prop_assume!(k as usize <= g.order());
        let v = is_critical_covered(&g, a, b, k, EnumerationCap::DEFAULT).unwrap();
        prop_assert_eq!(v.covered, v.certificate.is_none());
        if let Some(c) = &v.certificate {
            prop_assert_eq!(c.q.len(), k as usize);
            prop_assert!(c.verify(&g, a, b).unwrap());
        }
        let o = factor::is_critical_covered_constructive(&g, a, b, k).unwrap();
        prop_assert_eq!(v.covered, o.covered);
    }

    #[test]
    fn adding_an_edge_keeps_certificate_checks_consistent(g in arb_graph(7), (a, b) in arb_params(), u in any::<prop::sample::Index>(), v in any::<prop::sample::Index>()) {
        let (u, v) = (u.index(g.order()), v.index(g.order()));
        if u == v || g.has_edge(u, v) {
            return Ok(());
        }
        let g2 = Graph::from_edges(g.order(), g.edges().chain([(u, v)])).unwrap();
        let verdict = is_covered(&g2, a, b, EnumerationCap::DEFAULT).unwrap();
        if let Some(c) = verdict.certificate {
            prop_assert!(c.verify(&g2, a, b).unwrap());
        }
    }
}

fn random_instance() -> impl Strategy<Value = (Graph, u32, u32, PinSet)> {
    (arb_graph(9), arb_params(), any::<prop::sample::Index>()).prop_map(|(g, (a, b), idx)| {
        let edges: Vec<_> = g.edges().collect();
        let pins = if edges.is_empty() {
            PinSet::new()
        } else {
            PinSet::single(edges[idx.index(edges.len())])
        };
        (g, a, b, pins)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn factors_are_valid_half_integral_and_deterministic((g, a, b, pins) in random_instance()) {
        let h = find_factor(&g, a, b, &pins).unwrap();
        prop_assert_eq!(&h, &find_factor(&g, a, b, &pins).unwrap());
        if let Some(h) = h {
            prop_assert!(verify_factor(&g, a, b, &pins, &h).unwrap());
            prop_assert!(h.is_half_integral());
            // Doubling gives integral edge values with doubled degree bounds.
            for v in 0..g.order() {
                let d = h.degree(v) * 2;
                prop_assert!(d.is_integer());
                prop_assert!(*d.numer() >= 2 * a as i64 && *d.numer() <= 2 * b as i64);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn feasibility_monotone((g, a, b, pins) in random_instance()) {
        if find_factor(&g, a, b, &pins).unwrap().is_some() {
            prop_assert!(find_factor(&g, a.saturating_sub(1), b, &pins).unwrap().is_some());
            prop_assert!(find_factor(&g, a, b + 1, &pins).unwrap().is_some());
        }
    }
}

#[test]
fn feasible_fraction_of_random_instances_is_substantial() {
    // Guards the property test above against vacuity: dense random graphs
    // with small bounds are mostly feasible.
    let mut feasible = 0;
    for seed in 0..200 {
        let g = gnp(8, Ratio::new(3, 4), seed).unwrap();
        let pins = g.edges().next().map(PinSet::single).unwrap_or_default();
        if find_factor(&g, 1, 2, &pins).unwrap().is_some() {
            feasible += 1;
        }
    }
    assert!(feasible > 150, "only {feasible} feasible");
}
