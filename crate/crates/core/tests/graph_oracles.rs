mod common;

use std::collections::HashSet;

use common::*;
use distirr::generate::{generate, Constraints, Family, GenSpec};
use distirr::io::{format_edge_list, parse_edge_list};
use distirr::{BallCache, Distance, Graph};
use proptest::prelude::*;

fn ball_matches_oracle(g: &Graph, r: usize) -> Result<(), TestCaseError> {
    let dist = apsp(g);
    let cache = BallCache::build(g, r).unwrap();
    for v in 0..g.n() {
        let expected: Vec<usize> =
            (0..g.n()).filter(|&u| u != v && dist[v][u].is_some_and(|d| d <= r)).collect();
        let ball = g.r_ball(v, r).unwrap();
        let mut got = ball.members.clone();
        got.sort_unstable();
        prop_assert_eq!(&got, &expected, "v={} r={}", v, r);
        let mut cached = cache.ball(v).to_vec();
        cached.sort_unstable();
        prop_assert_eq!(&cached, &expected);
        for u in 0..g.n() {
            let want = match dist[v][u] {
                Some(d) => Distance::Finite(d),
                None => Distance::Infinite,
            };
            prop_assert_eq!(g.distance(v, u).unwrap(), want);
        }
        let bound = g.degree(v) as u64 * (g.max_degree() as u64).pow(r as u32 - 1);
        prop_assert!(ball.len() as u64 <= bound);
    }
    Ok(())
}

#[test]
fn balls_match_distances_on_every_graph_up_to_six_vertices() {
    for n in 1..=6 {
        for mask in 0..1u64 << pair_count(n) {
            let g = from_mask(n, mask);
            for r in 1..=3 {
                ball_matches_oracle(&g, r).unwrap();
            }
        }
    }
}

proptest! {
    #[test]
    fn balls_match_distances_up_to_eight_vertices(g in arb_graph(8), r in 1usize..=4) {
        ball_matches_oracle(&g, r)?;
    }

    #[test]
    fn r_pairs_are_the_close_pairs_once(g in arb_graph(8), r in 1usize..=3) {
        let dist = apsp(&g);
        let pairs = g.all_r_pairs(r).unwrap();
        let set: HashSet<(usize, usize)> = pairs.iter().copied().collect();
        prop_assert_eq!(set.len(), pairs.len());
        for &(u, v) in &pairs {
            prop_assert!(u < v);
            prop_assert!(!set.contains(&(v, u)));
        }
        let expected: usize = (0..g.n())
            .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
            .filter(|&(u, v)| dist[u][v].is_some_and(|d| d <= r))
            .count();
        prop_assert_eq!(pairs.len(), expected);
        let half: usize = (0..g.n()).map(|v| g.r_ball(v, r).unwrap().len()).sum::<usize>() / 2;
        prop_assert_eq!(pairs.len(), half);
    }

    #[test]
    fn isolated_edge_means_two_degree_one_ends(g in arb_graph(8)) {
        let expected = g.edges().iter().any(|&(u, v)| g.degree(u) == 1 && g.degree(v) == 1);
        prop_assert_eq!(g.has_isolated_edge(), expected);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(9)) {
        let text = format_edge_list(&g, None);
        let lg = parse_edge_list(&text).unwrap();
        // isolated vertices do not appear in an edge list
        let mut back: HashSet<(String, String)> = HashSet::new();
        for &(u, v) in lg.graph.edges() {
            back.insert((lg.labels[u].clone(), lg.labels[v].clone()));
        }
        let orig: HashSet<(String, String)> =
            g.edges().iter().map(|&(u, v)| (u.to_string(), v.to_string())).collect();
        let back: HashSet<(String, String)> = back
            .into_iter()
            .map(|(a, b)| if a.parse::<usize>().unwrap() < b.parse::<usize>().unwrap() { (a, b) } else { (b, a) })
            .collect();
        prop_assert_eq!(back, orig);
    }
}

#[test]
fn petersen_balls_cover_everything_at_radius_two() {
    let g = petersen();
    for v in 0..10 {
        assert_eq!(g.r_ball(v, 2).unwrap().len(), 9);
        assert_eq!(g.r_ball(v, 1).unwrap().len(), 3);
    }
    assert_eq!(g.diameter(), Distance::Finite(2));
}

#[test]
fn generated_graphs_respect_ball_bound_and_round_trip() {
    let c = Constraints { min_degree: 2, forbid_isolated_edges: true };
    let specs = [
        GenSpec::new(Family::Cycle, 30, 0),
        GenSpec::new(Family::Gnp(0.1), 60, 3),
        GenSpec::new(Family::RandomRegular(5), 40, 9),
        GenSpec::new(Family::RandomRegular(16), 200, 7),
    ];
    for spec in specs {
        let spec = spec.with_constraints(c);
        let g = generate(&spec).unwrap();
        assert!(g.min_degree() >= 2 && !g.has_isolated_edge(), "{}", spec.id());
        for r in 1..=3 {
            let big = (g.max_degree() as u64).pow(r as u32 - 1);
            for v in 0..g.n() {
                assert!(g.r_ball(v, r).unwrap().len() as u64 <= g.degree(v) as u64 * big);
            }
        }
        let lg = parse_edge_list(&format_edge_list(&g, None)).unwrap();
        let relabel = |x: usize| lg.labels[x].parse::<usize>().unwrap();
        let orig: HashSet<(usize, usize)> = g.edges().iter().copied().collect();
        let back: HashSet<(usize, usize)> = lg
            .graph
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (relabel(u), relabel(v));
                (a.min(b), a.max(b))
            })
            .collect();
        assert_eq!(orig, back, "{}", spec.id());
        assert_eq!(generate(&spec).unwrap().edges(), g.edges(), "{} is not deterministic", spec.id());
    }
}
