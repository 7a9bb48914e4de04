mod common;

use common::{naive_cliques, naive_factor_on, naive_has_factor, naive_max_matching, v};
use kfactor::constructions::{complete_partite, random_partite, theta_blowup, BlowupSpec};
use kfactor::graph::{PartiteGraph, VertexSet};
use kfactor::params::Limits;
use kfactor::solver::{
    count_crossing_cliques, enumerate_crossing_cliques, factor_on_subset, find_factor, max_matching, verify_matching,
};
use proptest::prelude::*;

fn tiny_graph() -> impl Strategy<Value = PartiteGraph> {
    (1usize..=3, 0u32..=10, any::<u64>()).prop_map(|(n, p, seed)| random_partite(&[n, n, n], p as f64 / 10.0, seed).unwrap())
}

/// Same graph with the vertices of each part shuffled by `perm`.
fn relabel(g: &PartiteGraph, perm: &[Vec<usize>]) -> PartiteGraph {
    PartiteGraph::from_edges(
        g.part_sizes(),
        g.edges().map(|(a, b)| (v(a.part, perm[a.part][a.index]), v(b.part, perm[b.part][b.index]))),
    )
    .unwrap()
}

#[test]
fn blowup_without_clique_has_no_factor() {
    let (g, _) = theta_blowup(&BlowupSpec::uniform(3, 2, 2)).unwrap();
    let r = find_factor(&g, &Limits::default()).unwrap();
    assert!(r.is_none());
    assert_eq!(r.decision_label(), "NONE");
}

#[test]
fn complete_graph_has_factor() {
    let g = complete_partite(&[4, 4, 4, 4]).unwrap();
    let r = find_factor(&g, &Limits::default()).unwrap();
    let f = r.factor().unwrap();
    assert_eq!(f.len(), 4);
    assert!(verify_matching(&g, f, Some(&g.vertex_set())).valid);
}

#[test]
fn tiny_budget_is_inconclusive_not_wrong() {
    let g = random_partite(&[6, 6, 6], 0.6, 3).unwrap();
    let r = find_factor(&g, &Limits::new(1, 60.0)).unwrap();
    assert!(r.is_found() || r.decision_label() == "INCONCLUSIVE");
}

proptest! {
    #[test]
    fn factor_decision_matches_oracle(g in tiny_graph()) {
        let r = find_factor(&g, &Limits::default()).unwrap();
        prop_assert_eq!(r.is_found(), naive_has_factor(&g));
        prop_assert_eq!(r.is_none(), !naive_has_factor(&g));
        if let Some(f) = r.factor() {
            prop_assert!(verify_matching(&g, f, Some(&g.vertex_set())).valid);
        }
    }

    #[test]
    fn subset_factor_matches_oracle(g in tiny_graph(), mask in any::<u16>()) {
        let set: VertexSet = g.vertices().filter(|x| mask >> (x.part * 3 + x.index) & 1 == 1).collect();
        let members: Vec<_> = set.iter().copied().collect();
        match factor_on_subset(&g, &set, &Limits::default()) {
            Ok(r) => {
                prop_assert_eq!(r.is_found(), naive_factor_on(&g, &members));
                if let Some(f) = r.factor() {
                    prop_assert!(verify_matching(&g, f, Some(&set)).valid);
                }
            }
            // unbalanced subsets are rejected up front and cannot factor
            Err(_) => prop_assert!(!naive_factor_on(&g, &members)),
        }
    }

    #[test]
    fn max_matching_matches_oracle(g in tiny_graph()) {
        let m = max_matching(&g, &Limits::default());
        prop_assert!(m.proven_maximum);
        prop_assert_eq!(m.matching.len(), naive_max_matching(&g));
        prop_assert!(verify_matching(&g, &m.matching, None).valid);
    }

    #[test]
    fn clique_enumeration_matches_oracle(g in tiny_graph()) {
        let mut got: Vec<Vec<usize>> = enumerate_crossing_cliques(&g, None).iter().map(|c| c.tuple().indices().to_vec()).collect();
        got.sort();
        prop_assert_eq!(&got, &naive_cliques(&g));
        prop_assert_eq!(count_crossing_cliques(&g), got.len() as u64);
    }

    #[test]
    fn adding_edges_never_destroys_a_factor(g in tiny_graph(), a in 0usize..3, b in 0usize..3) {
        let n = g.part_size(0);
        let (x, y) = (v(0, a % n), v(1, b % n));
        prop_assume!(!g.has_edge(x, y));
        let h = g.add_edge(x, y).unwrap();
        if find_factor(&g, &Limits::default()).unwrap().is_found() {
            prop_assert!(find_factor(&h, &Limits::default()).unwrap().is_found());
        }
        prop_assert!(max_matching(&h, &Limits::default()).matching.len() >= max_matching(&g, &Limits::default()).matching.len());
    }

    #[test]
    fn relabelling_preserves_the_answer(g in tiny_graph(), seed in any::<u64>()) {
        let n = g.part_size(0);
        let perm: Vec<Vec<usize>> = (0..3).map(|p| {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.rotate_left(((seed >> (8 * p)) as usize) % n);
            if seed >> (32 + p) & 1 == 1 { idx.reverse(); }
            idx
        }).collect();
        let h = relabel(&g, &perm);
        prop_assert_eq!(find_factor(&g, &Limits::default()).unwrap().is_found(), find_factor(&h, &Limits::default()).unwrap().is_found());
        prop_assert_eq!(count_crossing_cliques(&g), count_crossing_cliques(&h));
        prop_assert_eq!(max_matching(&g, &Limits::default()).matching.len(), max_matching(&h, &Limits::default()).matching.len());
    }
}
