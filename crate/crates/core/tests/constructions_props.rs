mod common;

use common::{naive_cliques, naive_min_partite_degree, v};
use kfactor::constructions::{
    complete_partite, perturb_with_log, random_min_degree, random_partite, theta, theta_blowup, BlowupSpec,
};
use proptest::prelude::*;

#[test]
fn theta_3x3_edges() {
    let g = theta(3, 3).unwrap();
    assert_eq!(g.vertex_count(), 9);
    // recount over all cross pairs by the adjacency rule
    let mut count = 0;
    for i in 0..3 {
        for i2 in (i + 1)..3 {
            for j in 0..3 {
                for j2 in 0..3 {
                    assert_eq!(g.has_edge(v(i, j), v(i2, j2)), j != j2);
                    count += usize::from(j != j2);
                }
            }
        }
    }
    assert_eq!(count, 18);
    assert_eq!(g.edge_count(), 18);
}

#[test]
fn blowup_degrees_are_exact() {
    for k in 2..=5 {
        for r in 1..=4 {
            for t in 1..=4 {
                let (g, _) = theta_blowup(&BlowupSpec::uniform(k, r, t)).unwrap();
                assert_eq!(g.min_partite_degree().unwrap(), (r - 1) * t, "k={k} r={r} t={t}");
            }
        }
    }
}

#[test]
fn blowups_below_threshold_are_clique_free() {
    for k in 3..=5 {
        for t in 1..=3 {
            let (g, _) = theta_blowup(&BlowupSpec::uniform(k, k - 1, t)).unwrap();
            assert!(naive_cliques(&g).is_empty(), "k={k} t={t}");
        }
    }
}

#[test]
fn unit_blowup_is_theta() {
    for k in 2..=4 {
        for r in 1..=4 {
            let (g, _) = theta_blowup(&BlowupSpec::uniform(k, r, 1)).unwrap();
            assert_eq!(g, theta(k, r).unwrap());
        }
    }
}

#[test]
fn min_degree_floor_is_met() {
    let (g, _) = random_min_degree(3, 6, 5, 0).unwrap();
    assert!(naive_min_partite_degree(&g) >= 5);
}

proptest! {
    #[test]
    fn random_min_degree_meets_floor(k in 2usize..=4, n in 1usize..=8, f in 0usize..=8, seed in any::<u64>()) {
        let floor = f.min(n);
        let (g, trace) = random_min_degree(k, n, floor, seed).unwrap();
        prop_assert!(naive_min_partite_degree(&g) >= floor);
        prop_assert_eq!(g.edge_count(), trace.base_edges + trace.added.len());
        let (again, _) = random_min_degree(k, n, floor, seed).unwrap();
        prop_assert_eq!(again, g);
    }

    #[test]
    fn perturb_changes_exactly_the_logged_pairs(n in 1usize..=5, p in 0u32..=10, flips in 0usize..=12, seed in any::<u64>()) {
        let g = random_partite(&[n, n, n], p as f64 / 10.0, seed).unwrap();
        let flips = flips.min(g.cross_pair_count());
        let (h, log) = perturb_with_log(&g, flips, seed ^ 1).unwrap();
        prop_assert_eq!(log.len(), flips);
        let added = log.iter().filter(|f| f.added).count() as i64;
        let removed = flips as i64 - added;
        prop_assert_eq!(h.edge_count() as i64 - g.edge_count() as i64, added - removed);
        let mut differing = 0;
        for x in g.vertices() {
            for y in g.vertices() {
                if x < y && g.has_edge(x, y) != h.has_edge(x, y) {
                    differing += 1;
                    prop_assert!(log.iter().any(|f| (f.u, f.v) == (x, y) || (f.u, f.v) == (y, x)));
                }
            }
        }
        prop_assert_eq!(differing, flips);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>()) {
        prop_assert_eq!(random_partite(&[4, 4, 4], 0.5, seed).unwrap(), random_partite(&[4, 4, 4], 0.5, seed).unwrap());
        let g = complete_partite(&[3, 3, 3]).unwrap();
        prop_assert_eq!(perturb_with_log(&g, 4, seed).unwrap(), perturb_with_log(&g, 4, seed).unwrap());
    }
}
