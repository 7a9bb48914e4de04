mod common;

use std::collections::BTreeSet;

use common::{naive_cliques, naive_factor_on, subsets, v};
use kfactor::absorber::{
    absorb, absorbing_sets_for, build_absorber, enumerate_connectors, is_connector, prune_family, sample_family,
    AbsorbOutcome, AbsorberConfig, AbsorberOutcome, SamplingMode,
};
use kfactor::constructions::{complete_partite, random_partite, theta_blowup, BlowupSpec};
use kfactor::graph::{PartiteGraph, Rational, VertexId, VertexSet};
use kfactor::solver::{verify_matching, CrossingTuple};
use proptest::prelude::*;

/// Connectors of the given size by filtering every balanced candidate.
fn naive_connectors(g: &PartiteGraph, x: VertexId, y: VertexId, size: usize) -> Vec<Vec<VertexId>> {
    let k = g.k();
    let per = if size == k - 1 { 1 } else { 2 };
    let mut sets: Vec<Vec<VertexId>> = vec![Vec::new()];
    for p in 0..k {
        let pool: Vec<VertexId> = (0..g.part_size(p)).map(|i| v(p, i)).filter(|&u| u != x && u != y).collect();
        let take = if p == x.part { per - 1 } else { per };
        let choices = subsets(&pool, take);
        sets = sets
            .into_iter()
            .flat_map(|s| choices.iter().map(move |c| s.iter().chain(c).copied().collect::<Vec<_>>()))
            .collect();
    }
    sets.into_iter()
        .filter(|s| {
            let mut a = s.clone();
            a.push(x);
            let mut b = s.clone();
            b.push(y);
            naive_factor_on(g, &a) && naive_factor_on(g, &b)
        })
        .map(|mut s| {
            s.sort();
            s
        })
        .collect()
}

fn same_part_pairs(g: &PartiteGraph) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for p in 0..g.k() {
        for a in 0..g.part_size(p) {
            for b in (a + 1)..g.part_size(p) {
                out.push((v(p, a), v(p, b)));
            }
        }
    }
    out
}

#[test]
fn connectors_match_filter_on_blowup() {
    let (g, _) = theta_blowup(&BlowupSpec::uniform(3, 3, 2)).unwrap();
    for &(x, y) in same_part_pairs(&g).iter().step_by(7) {
        for size in [2, 5] {
            let mut want = naive_connectors(&g, x, y, size);
            want.sort();
            let got: Vec<Vec<VertexId>> = enumerate_connectors(&g, x, y, size, None).unwrap().into_iter().map(|c| c.set).collect();
            assert_eq!(got, want, "{x} {y} size {size}");
        }
    }
}

#[test]
fn connectors_match_filter_on_random_graphs() {
    for seed in 0..6 {
        let g = random_partite(&[4, 4, 4], 0.7, seed).unwrap();
        for (x, y) in same_part_pairs(&g) {
            let got: Vec<Vec<VertexId>> = enumerate_connectors(&g, x, y, 2, None).unwrap().into_iter().map(|c| c.set).collect();
            assert_eq!(got, naive_connectors(&g, x, y, 2), "seed {seed} {x} {y}");
        }
    }
}

#[test]
fn small_connectors_extend_by_disjoint_cliques() {
    for (k, n) in [(3, 4), (3, 5), (4, 3)] {
        let g = random_partite(&vec![n; k], 0.8, 11).unwrap();
        let cliques = naive_cliques(&g);
        for (x, y) in same_part_pairs(&g).into_iter().take(4) {
            for c in enumerate_connectors(&g, x, y, k - 1, None).unwrap() {
                for idx in &cliques {
                    let clique: Vec<VertexId> = idx.iter().enumerate().map(|(p, &i)| v(p, i)).collect();
                    if clique.iter().any(|u| *u == x || *u == y || c.set.contains(u)) {
                        continue;
                    }
                    let s: VertexSet = c.set.iter().chain(&clique).copied().collect();
                    assert!(is_connector(&g, x, y, &s).unwrap());
                }
            }
        }
    }
}

#[test]
fn complete_graph_has_125_absorbing_sets_per_triple() {
    let g = complete_partite(&[6, 6, 6]).unwrap();
    for t in [[0, 0, 0], [1, 3, 5], [5, 5, 2]] {
        let tuple = CrossingTuple::new(t.to_vec());
        let sets = absorbing_sets_for(&g, &tuple, None).unwrap();
        assert_eq!(sets.len(), 125);
        for a in &sets {
            assert!(naive_factor_on(&g, &a.set));
            let mut with_t = a.set.clone();
            with_t.extend(tuple.vertices());
            assert!(naive_factor_on(&g, &with_t));
            assert!((0..3).all(|p| a.set.iter().filter(|u| u.part == p).count() == 4));
        }
    }
}

#[test]
fn intersecting_pairs_match_recount() {
    let g = complete_partite(&[12, 12, 12]).unwrap();
    for seed in 0..5 {
        let family = sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: 20.0 }, seed).unwrap();
        let pruned = prune_family(&g, &family.sets).unwrap();
        let mut y = 0;
        for i in 0..family.sets.len() {
            let a: BTreeSet<_> = family.sets[i].iter().collect();
            for j in (i + 1)..family.sets.len() {
                y += u64::from(family.sets[j].iter().any(|u| a.contains(u)));
            }
        }
        assert_eq!(pruned.intersecting_pairs, y);
        let mut seen = BTreeSet::new();
        for m in &pruned.members {
            assert!(m.set.iter().all(|u| seen.insert(*u)));
        }
    }
}

#[test]
fn disjoint_family_is_kept_whole() {
    let g = complete_partite(&[8, 8, 8]).unwrap();
    let family: Vec<Vec<VertexId>> =
        (0..2).map(|b| (0..3).flat_map(|p| (0..4).map(move |i| v(p, 4 * b + i))).collect()).collect();
    let pruned = prune_family(&g, &family).unwrap();
    assert_eq!(pruned.intersecting_pairs, 0);
    assert_eq!(pruned.members.len(), 2);
}

#[test]
fn desk_sampling_mean_tracks_target() {
    let g = complete_partite(&[12, 12, 12]).unwrap();
    let total: usize = (0..200)
        .map(|seed| sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: 20.0 }, seed).unwrap().sets.len())
        .sum();
    let mean = total as f64 / 200.0;
    assert!((mean - 20.0).abs() <= 3.0, "mean {mean}");
}

#[test]
fn absorber_round_trip_on_complete_graph() {
    let g = complete_partite(&[9, 9, 9]).unwrap();
    let state = match build_absorber(&g, &AbsorberConfig::default()).unwrap() {
        AbsorberOutcome::Built(s) => s,
        AbsorberOutcome::Failure(f) => panic!("{f:?}"),
    };
    state.verify(&g).unwrap();
    let covered = state.covered();
    let free: Vec<Vec<usize>> = (0..3).map(|p| (0..9).filter(|&i| !covered.contains(&v(p, i))).collect()).collect();
    let w: VertexSet = (0..3).map(|p| v(p, free[p][0])).collect();
    let AbsorbOutcome::Absorbed { matching, .. } = absorb(&g, &state, &w).unwrap() else { panic!() };
    let mut need = covered;
    need.extend(w.iter().copied());
    assert!(verify_matching(&g, &matching, Some(&need)).valid);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn connector_relation_is_symmetric(seed in any::<u64>(), p in 0u32..=10, pick in any::<u64>()) {
        let g = random_partite(&[3, 3, 3], p as f64 / 10.0, seed).unwrap();
        let part = (pick % 3) as usize;
        let (x, y) = (v(part, 0), v(part, 1 + (pick >> 2) as usize % 2));
        let s: VertexSet = (0..3).filter(|&q| q != part).map(|q| v(q, (pick >> (4 + q)) as usize % 3)).collect();
        prop_assert_eq!(is_connector(&g, x, y, &s).unwrap(), is_connector(&g, y, x, &s).unwrap());
    }

    #[test]
    fn absorbing_sets_are_balanced(seed in any::<u64>()) {
        let g = random_partite(&[5, 5, 5], 0.85, seed).unwrap();
        let tuple = CrossingTuple::new(vec![0, 0, 0]);
        for a in absorbing_sets_for(&g, &tuple, Some(20)).unwrap() {
            for p in 0..3 {
                prop_assert_eq!(a.set.iter().filter(|u| u.part == p).count(), 4);
            }
            prop_assert!(verify_matching(&g, &a.carrier_factor, Some(&a.set.iter().copied().collect())).valid);
        }
    }

    #[test]
    fn absorber_state_json_round_trips(seed in 0u64..20) {
        let g = complete_partite(&[9, 9, 9]).unwrap();
        let cfg = AbsorberConfig { seed, ..AbsorberConfig::default() };
        if let AbsorberOutcome::Built(s) = build_absorber(&g, &cfg).unwrap() {
            let text = s.to_json();
            let back: kfactor::absorber::AbsorberState = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
