use eccentric::graph::{naive_ecc, parse_graph, sssp, sssp_to_set, write_graph, Graph};
use eccentric::oracle::{apsp_naive, floyd_warshall};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (2usize..30).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u64..6), 0..3 * n).prop_map(move |raw| {
            let mut edges: Vec<(usize, usize, u64)> = (1..n).map(|v| (v - 1, v, 1 + (v as u64 % 3))).collect();
            edges.extend(raw.into_iter().filter(|(u, v, _)| u != v));
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn two_apsp_methods_agree(g in graph_strategy()) {
        prop_assert_eq!(apsp_naive(&g).unwrap(), floyd_warshall(&g).unwrap());
    }

    #[test]
    fn set_distance_is_minimum_over_sources(g in graph_strategy(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let set: Vec<usize> = picks.iter().map(|p| p.index(g.n())).collect();
        let multi = sssp_to_set(&g, &set).unwrap();
        for v in 0..g.n() {
            let best = set.iter().map(|&s| sssp(&g, s).unwrap().dist[v]).min().unwrap();
            prop_assert_eq!(multi.dist[v], best);
        }
    }

    #[test]
    fn text_round_trip(g in graph_strategy()) {
        let again = parse_graph(&write_graph(&g)).unwrap();
        prop_assert_eq!(apsp_naive(&again).unwrap(), apsp_naive(&g).unwrap());
    }

    #[test]
    fn eccentricities_are_row_maxima(g in graph_strategy()) {
        let d = floyd_warshall(&g).unwrap();
        let all: Vec<usize> = (0..g.n()).collect();
        let ecc = naive_ecc(&g, &all).unwrap();
        for v in 0..g.n() {
            prop_assert_eq!(ecc[v], *d[v].iter().max().unwrap());
        }
    }
}
