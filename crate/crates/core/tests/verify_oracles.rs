mod common;

use common::*;
use distirr::verify::{find_conflicts_with, ConflictStrategy, IncrementalWeights};
use distirr::{find_conflicts, is_r_irregular, weight_profile, EdgeColouring, Graph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn arb_instance(max_n: usize, k: u64) -> impl Strategy<Value = (Graph, Vec<u64>, usize)> {
    arb_graph(max_n).prop_flat_map(move |g| {
        let m = g.m();
        (Just(g), proptest::collection::vec(1..=k, m), 1usize..=4)
    })
}

fn as_triples(rep: &distirr::ConflictReport) -> Vec<(usize, usize, u64)> {
    rep.pairs.iter().map(|c| (c.u, c.v, c.weight)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn bucketed_and_pairwise_match_the_naive_oracle((g, colours, r) in arb_instance(10, 3)) {
        let dist = apsp(&g);
        let w = naive_weights(&g, &colours);
        let expected = naive_conflicts(&g, &dist, &w, r);
        let c = EdgeColouring::new(&g, colours.clone(), 3).unwrap();
        prop_assert_eq!(&weight_profile(&g, &c).weights, &w);
        prop_assert_eq!(as_triples(&find_conflicts(&g, &c, r).unwrap()), expected.clone());
        let pairwise = find_conflicts_with(&g, &w, r, ConflictStrategy::Pairwise, usize::MAX).unwrap();
        prop_assert_eq!(as_triples(&pairwise), expected.clone());
        prop_assert_eq!(is_r_irregular(&g, &c, r, 3), expected.is_empty());
        prop_assert!(!is_r_irregular(&g, &c, r, 0) || g.m() == 0);
    }

    #[test]
    fn handshake((g, colours, _r) in arb_instance(10, 5)) {
        let c = EdgeColouring::new(&g, colours.clone(), 5).unwrap();
        let total: u64 = weight_profile(&g, &c).weights.iter().sum();
        prop_assert_eq!(total, 2 * colours.iter().sum::<u64>());
    }

    #[test]
    fn unit_colouring_conflicts_are_adjacent_equal_degrees(g in arb_graph(10)) {
        let c = EdgeColouring::uniform(&g, 1).unwrap();
        let got = as_triples(&find_conflicts(&g, &c, 1).unwrap());
        let mut expected: Vec<(usize, usize, u64)> = g
            .edges()
            .iter()
            .filter(|&&(u, v)| g.degree(u) == g.degree(v))
            .map(|&(u, v)| (u.min(v), u.max(v), g.degree(u) as u64))
            .collect();
        expected.sort_unstable();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn capped_report_is_a_prefix((g, colours, r) in arb_instance(10, 2), cap in 0usize..4) {
        let w = naive_weights(&g, &colours);
        let full = naive_conflicts(&g, &apsp(&g), &w, r);
        let rep = find_conflicts_with(&g, &w, r, ConflictStrategy::Bucketed, cap).unwrap();
        prop_assert_eq!(rep.overflow, full.len() > cap);
        prop_assert_eq!(as_triples(&rep), full[..full.len().min(cap)].to_vec());
    }
}

#[test]
fn incremental_weights_agree_with_recomputation_over_1000_edit_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=12);
        let g = random_graph(&mut rng, n);
        if g.m() == 0 {
            continue;
        }
        let colours: Vec<u64> = (0..g.m()).map(|_| rng.gen_range(1..=20)).collect();
        let mut inc = IncrementalWeights::new(&g, colours);
        for _ in 0..rng.gen_range(1..=30) {
            let e = rng.gen_range(0..g.m());
            let (u, v) = g.edge(e);
            let before = inc.weights().to_vec();
            let old = inc.colour(e) as i64;
            let new = rng.gen_range(1..=40i64);
            if rng.gen_bool(0.5) {
                inc.set_colour(e, new as u64);
            } else {
                inc.add(e, new - old);
            }
            let delta = new - old;
            for x in 0..g.n() {
                let moved = inc.weight(x) as i64 - before[x] as i64;
                let want = if x == u || x == v { delta } else { 0 };
                assert_eq!(moved, want, "vertex {x} after editing edge {e}");
            }
            assert_eq!(inc.weights(), naive_weights(&g, inc.colours()).as_slice());
        }
    }
}

#[test]
fn petersen_profile_matches_per_vertex_sums() {
    let g = petersen();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let colours: Vec<u64> = (0..g.m()).map(|_| rng.gen_range(1..=3)).collect();
        let c = EdgeColouring::new(&g, colours.clone(), 3).unwrap();
        let profile = weight_profile(&g, &c).weights;
        for (v, &w) in profile.iter().enumerate() {
            let own: u64 = g.adjacency(v).iter().map(|&(_, e)| colours[e]).sum();
            assert_eq!(w, own);
        }
    }
}
