use eccentric::cliquesum::{
    ecc_cliquesum, merge_comparable, reduce_adhesions, shortcut_through, single_adhesion_max_dist, star_ecc,
    validate_td, CliquesumParams, StarParams, TreeDecomposition,
};
use eccentric::graph::{naive_ecc, Graph};
use eccentric::oracle::{apsp_naive, gen_instance, InstanceKind};
use eccentric::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// Connected random graph: a random tree plus extra edges, weights 1..=3.
fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=3)));
    }
    for _ in 0..extra {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            edges.push((u, v, rng.gen_range(1..=3)));
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Splits a random connected graph into A, B, C with no A-C edge: C is a
/// random ball-shaped set, B its outer neighborhood, A the rest.
fn random_partition(rng: &mut ChaCha8Rng) -> (Graph, Vec<usize>, Vec<usize>, Vec<usize>) {
    loop {
        let n = rng.gen_range(8..40);
        let g = random_connected(rng, n, n / 2);
        let seed = rng.gen_range(0..n);
        let target = rng.gen_range(1..n / 2);
        let mut c = vec![seed];
        let mut in_c = vec![false; n];
        in_c[seed] = true;
        let mut head = 0;
        while c.len() < target && head < c.len() {
            let v = c[head];
            head += 1;
            for x in g.neighbors(v) {
                if !in_c[x] && c.len() < target {
                    in_c[x] = true;
                    c.push(x);
                }
            }
        }
        let mut in_b = vec![false; n];
        for &v in &c {
            for x in g.neighbors(v) {
                in_b[x] = !in_c[x];
            }
        }
        let b: Vec<usize> = (0..n).filter(|&v| in_b[v]).collect();
        let a: Vec<usize> = (0..n).filter(|&v| !in_b[v] && !in_c[v]).collect();
        if !a.is_empty() && !b.is_empty() && b.len() <= 8 {
            c.sort_unstable();
            return (g, a, b, c);
        }
    }
}

#[test]
fn single_adhesion_equals_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..120 {
        let (g, a, b, c) = random_partition(&mut rng);
        let d = apsp_naive(&g).unwrap();
        let out = single_adhesion_max_dist(&g, &a, &b, &c).unwrap();
        for (i, &u) in a.iter().enumerate() {
            assert_eq!(out.a_side[i], c.iter().map(|&v| d[u][v]).max().unwrap());
        }
        for (i, &v) in c.iter().enumerate() {
            assert_eq!(out.c_side[i], a.iter().map(|&u| d[u][v]).max().unwrap());
        }
    }
}

#[test]
fn shortcut_graph_preserves_distances() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..120 {
        let (g, a, b, c) = random_partition(&mut rng);
        let d = apsp_naive(&g).unwrap();
        let (sub, kept) = shortcut_through(&g, &a, &b, &c).unwrap();
        let local = apsp_naive(&sub).unwrap();
        for (i, &u) in kept.iter().enumerate() {
            for (j, &v) in kept.iter().enumerate() {
                assert_eq!(local[i][j], d[u][v]);
            }
        }
    }
}

#[test]
fn ladder_cut_of_two() {
    // ladder 2 x 6; B = rungs at column 2
    let mut edges = Vec::new();
    for j in 0..6 {
        edges.push((j, j + 6));
        if j < 5 {
            edges.push((j, j + 1));
            edges.push((j + 6, j + 7));
        }
    }
    let g = Graph::unweighted(12, &edges).unwrap();
    let a = vec![0, 1, 6, 7];
    let b = vec![2, 8];
    let c = vec![3, 4, 5, 9, 10, 11];
    let d = apsp_naive(&g).unwrap();
    let out = single_adhesion_max_dist(&g, &a, &b, &c).unwrap();
    for (i, &u) in a.iter().enumerate() {
        assert_eq!(out.a_side[i], c.iter().map(|&v| d[u][v]).max().unwrap());
    }
}

#[test]
fn empty_partition_sides() {
    let g = Graph::unweighted(2, &[(0, 1)]).unwrap();
    assert!(matches!(single_adhesion_max_dist(&g, &[], &[0, 1], &[]), Err(Error::EmptySide(_))));
}

proptest! {
    #[test]
    fn thinning_bounds(adhesions in prop::collection::vec(prop::collection::btree_set(0usize..40, 0..14), 0..8)) {
        let adhesions: Vec<Vec<usize>> = adhesions.into_iter().map(|s| s.into_iter().collect()).collect();
        let (thin, removed) = reduce_adhesions(&adhesions);
        let rounds: usize = adhesions.iter().map(|a| a.len().saturating_sub(4).div_ceil(5)).sum();
        prop_assert!(removed.len() <= 5 * rounds);
        for (t, a) in thin.iter().zip(&adhesions) {
            prop_assert!(t.len() <= 4);
            prop_assert!(t.iter().all(|v| a.contains(v)));
        }
    }
}

#[test]
fn chain_instances_match_naive() {
    for seed in 0..6 {
        let inst = gen_instance(InstanceKind::CliquesumChain, seed, 8).unwrap();
        let td = inst.td.as_ref().unwrap();
        assert!(validate_td(&inst.graph, td, 3).passed());
        let expected = naive_ecc(&inst.graph, &all(inst.graph.n())).unwrap();
        let params = CliquesumParams { k: 3, naive_threshold: Some(0), ..CliquesumParams::default() };
        let out = ecc_cliquesum(&inst.graph, td, &params).unwrap();
        assert!(out.stats.heavy_edges > 0 && out.stats.star_subtrees > 0, "{:?}", out.stats);
        assert_eq!(out.ecc, expected, "seed {seed}");
        let out = ecc_cliquesum(&inst.graph, td, &CliquesumParams { k: 3, ..CliquesumParams::default() }).unwrap();
        assert_eq!(out.ecc, expected, "seed {seed}");
    }
}

#[test]
fn chain_with_varied_thresholds() {
    let inst = gen_instance(InstanceKind::CliquesumChain, 9, 6).unwrap();
    let td = inst.td.as_ref().unwrap();
    let expected = naive_ecc(&inst.graph, &all(inst.graph.n())).unwrap();
    for heavy in [1.0, 150.0, 300.0, 1e9] {
        let params = CliquesumParams {
            k: 3,
            heavy_threshold: Some(heavy),
            naive_threshold: Some(0),
            star: StarParams { heavy_threshold: Some(40.0), r: Some(16), ..StarParams::default() },
            ..CliquesumParams::default()
        };
        assert_eq!(ecc_cliquesum(&inst.graph, td, &params).unwrap().ecc, expected, "heavy {heavy}");
    }
}

#[test]
fn star_instances_match_naive() {
    for seed in 0..6 {
        let inst = gen_instance(InstanceKind::StarGlue, seed, 16).unwrap();
        let expected = naive_ecc(&inst.graph, &all(inst.graph.n())).unwrap();
        let parts = inst.parts.as_ref().unwrap();
        for threshold in [None, Some(30.0), Some(1e9)] {
            let params = StarParams { heavy_threshold: threshold, ..StarParams::default() };
            let out = star_ecc(&inst.graph, &inst.apices, parts, &params).unwrap();
            assert_eq!(out.ecc, expected, "seed {seed} threshold {threshold:?}");
            if threshold == Some(30.0) && seed % 2 == 0 {
                assert!(out.stats.heavy_parts >= 1);
            }
        }
        let td = inst.td.as_ref().unwrap();
        let params = CliquesumParams { naive_threshold: Some(0), ..CliquesumParams::default() };
        assert_eq!(ecc_cliquesum(&inst.graph, td, &params).unwrap().ecc, expected);
    }
}

#[test]
fn single_bag_delegates() {
    let g = gen_instance(InstanceKind::Grid, 0, 9).unwrap().graph;
    let td = TreeDecomposition::new(81, vec![all(81)], vec![Vec::new()], Vec::new()).unwrap();
    let expected = naive_ecc(&g, &all(81)).unwrap();
    for naive in [Some(512), Some(0)] {
        let params = CliquesumParams { naive_threshold: naive, ..CliquesumParams::default() };
        assert_eq!(ecc_cliquesum(&g, &td, &params).unwrap().ecc, expected);
    }
}

#[test]
fn two_grids_on_a_triangle() {
    // two 5x5 grids sharing vertices 0, 1, 5 (a path plus a chord makes a triangle)
    let side = 5;
    let mut edges = Vec::new();
    let shared = [0, 1, 5];
    let second = |v: usize| if shared.contains(&v) { v } else { 25 + v - shared.iter().filter(|&&s| s < v).count() };
    for i in 0..side {
        for j in 0..side {
            let v = i * side + j;
            for (x, ok) in [(v + 1, j + 1 < side), (v + side, i + 1 < side)] {
                if ok {
                    edges.push((v, x));
                    edges.push((second(v), second(x)));
                }
            }
        }
    }
    edges.push((1, 5));
    let n = 25 + 22;
    let g = Graph::unweighted(n, &edges).unwrap();
    let bag0 = all(25);
    let mut bag1: Vec<usize> = (0..25).map(second).collect();
    bag1.sort_unstable();
    let td = TreeDecomposition::new(n, vec![bag0, bag1], vec![Vec::new(); 2], vec![(0, 1)]).unwrap();
    assert!(validate_td(&g, &td, 3).passed());
    let expected = naive_ecc(&g, &all(n)).unwrap();
    for heavy in [Some(1.0), None] {
        let params = CliquesumParams { k: 3, heavy_threshold: heavy, naive_threshold: Some(0), ..Default::default() };
        assert_eq!(ecc_cliquesum(&g, &td, &params).unwrap().ecc, expected);
    }
}

#[test]
fn merged_bag_weight_is_linear() {
    for seed in 0..10 {
        for (kind, size) in [(InstanceKind::CliquesumChain, 8), (InstanceKind::StarGlue, 12)] {
            let inst = gen_instance(kind, seed, size).unwrap();
            let td = merge_comparable(inst.td.as_ref().unwrap());
            let k = 4;
            assert!(td.bag_weight() <= inst.graph.n() + 2 * k * td.edges.len());
        }
    }
}
