use eccentric::graph::{components, is_connected, Graph};
use eccentric::oracle::{gen_instance, InstanceKind};
use eccentric::profiles::{gen_profile_gadget, group_over_set, milestones};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gadget_profile_counts() {
    for (k, ell, expected) in [(2, 4, 5), (3, 8, 25)] {
        let gadget = gen_profile_gadget(k, ell).unwrap();
        let table = group_over_set(&gadget.graph, &gadget.path, gadget.anchors[0], &gadget.gadget).unwrap();
        assert_eq!(table.count(), expected);
    }
}

/// A connected set of `size` vertices grown from a random start.
fn connected_set(g: &Graph, rng: &mut ChaCha8Rng, size: usize) -> Vec<usize> {
    let mut set = vec![rng.gen_range(0..g.n())];
    while set.len() < size {
        let mut frontier: Vec<usize> =
            set.iter().flat_map(|&v| g.neighbors(v)).filter(|x| !set.contains(x)).collect();
        frontier.sort_unstable();
        frontier.dedup();
        let Some(&next) = frontier.choose(rng) else { break };
        set.push(next);
    }
    set
}

#[test]
fn milestone_bound_and_monotone_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..120u64 {
        let g = gen_instance(InstanceKind::RandomPlanarMesh, trial, 9).unwrap().graph;
        let size = rng.gen_range(1..=12);
        let set = connected_set(&g, &mut rng, size);
        let v0 = rng.gen_range(0..g.n());
        let report = milestones(&g, &set, v0).unwrap();
        let r = report.set.len();
        assert!(report.milestones.len() <= r * r + 1);
        for pair in report.profiles.windows(2) {
            assert!(pair[0].iter().zip(&pair[1]).all(|(a, b)| a <= b), "trial {trial}");
        }
    }
}

#[test]
fn grouping_does_not_depend_on_the_pivot() {
    let g = gen_instance(InstanceKind::RandomPlanarMesh, 4, 10).unwrap().graph;
    assert!(is_connected(&g));
    let set: Vec<usize> = vec![0, 1, 2, 3, 13, 23];
    let vertices: Vec<usize> = (0..g.n()).collect();
    let members = |pivot| {
        let mut groups: Vec<Vec<usize>> =
            group_over_set(&g, &set, pivot, &vertices).unwrap().classes.into_iter().map(|c| c.members).collect();
        groups.sort();
        groups
    };
    let base = members(set[0]);
    for &pivot in &set[1..] {
        assert_eq!(members(pivot), base);
    }
    assert_eq!(components(&g, &vec![true; g.n()]).len(), 1);
}
