mod common;

use common::*;
use distirr::exact::{exact_strength, Strength, DEFAULT_BUDGET};
use distirr::greedy::{greedy_colour, greedy_colour_observed, greedy_strength_estimate, six_delta_bound, OrderPolicy};
use distirr::{is_r_irregular, Graph};
use proptest::prelude::*;

fn arb_policy() -> impl Strategy<Value = OrderPolicy> {
    prop_oneof![
        Just(OrderPolicy::AscendingDegree),
        Just(OrderPolicy::DescendingDegree),
        any::<u64>().prop_map(OrderPolicy::Random),
    ]
}

fn exact_value(g: &Graph, r: usize) -> u64 {
    match exact_strength(g, r, 10, DEFAULT_BUDGET).unwrap().strength {
        Strength::Exact(k) => k,
        other => panic!("no exact value: {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn success_is_verified_and_weights_freeze(g in arb_defined_graph(10), r in 1usize..=3, k in 1u64..=12, policy in arb_policy()) {
        let mut snapshots: Vec<(Vec<u64>, Vec<bool>)> = Vec::new();
        let res = greedy_colour_observed(&g, r, k, policy, |w, p| snapshots.push((w.to_vec(), p.to_vec()))).unwrap();
        prop_assert_eq!(res.succeeded(), res.conflicts_final == 0);
        if let Some(c) = &res.colouring {
            prop_assert!(is_r_irregular(&g, c, r, k));
        }
        let mut sorted = res.order_used.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..g.n()).collect::<Vec<_>>());
        for t in 0..snapshots.len() {
            for v in 0..g.n() {
                if snapshots[t].1[v] {
                    prop_assert!(snapshots[t..].iter().all(|(w, _)| w[v] == snapshots[t].0[v]));
                }
            }
        }
    }

    #[test]
    fn feasibility_is_monotone_in_k(g in arb_defined_graph(10), r in 1usize..=3, policy in arb_policy()) {
        let first = (1..=40).find(|&k| greedy_colour(&g, r, k, policy).unwrap().succeeded());
        if let Some(k0) = first {
            for k in k0..=k0 + 6 {
                prop_assert!(greedy_colour(&g, r, k, policy).unwrap().succeeded(), "success at {} but not at {}", k0, k);
            }
        }
    }

    #[test]
    fn estimate_dominates_exact_on_small_graphs(g in arb_sparse_graph(8, 10), r in 1usize..=2) {
        let est = greedy_strength_estimate(&g, r).unwrap();
        let s = exact_value(&g, r);
        if let Some(k) = est.k {
            prop_assert!(k >= s);
            prop_assert!(k <= est.bound);
        }
    }
}

#[test]
fn stars_get_their_leaf_count() {
    for s in 2..=5 {
        let g = star(s);
        assert_eq!(exact_value(&g, 2), s as u64);
        let est = greedy_strength_estimate(&g, 2).unwrap();
        assert_eq!(est.k, Some(s as u64));
        let res = est.result.unwrap();
        assert!(is_r_irregular(&g, res.colouring.as_ref().unwrap(), 2, s as u64));
    }
}

#[test]
fn catalog_estimates_stay_between_exact_and_bound() {
    let graphs = [path(3), path(5), complete(3), complete(4), cycle(4), cycle(5), cycle(7), star(3), petersen()];
    for g in graphs {
        for r in 1..=2 {
            let est = greedy_strength_estimate(&g, r).unwrap();
            let k = est.k.expect("estimate within the bound");
            assert_eq!(est.bound, six_delta_bound(&g, r));
            assert!(k <= est.bound);
            if g.m() <= 10 {
                assert!(k >= exact_value(&g, r));
            }
        }
    }
}

#[test]
fn small_examples() {
    let res = greedy_colour(&path(3), 2, 2, OrderPolicy::AscendingDegree).unwrap();
    let w = naive_weights(&path(3), res.colouring.as_ref().unwrap().colours());
    assert!(w[0] != w[1] && w[1] != w[2] && w[0] != w[2]);
    for policy in [OrderPolicy::AscendingDegree, OrderPolicy::DescendingDegree, OrderPolicy::Random(1)] {
        assert!(greedy_colour(&complete(3), 1, 3, policy).unwrap().succeeded());
        assert!(!greedy_colour(&complete(3), 1, 2, policy).unwrap().succeeded());
    }
}
