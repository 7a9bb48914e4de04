mod common;

use common::{naive_best_grid, naive_density, naive_min_partite_degree, v};
use kfactor::constructions::{complete_partite, perturb, random_min_degree, random_partite, theta_blowup, BlowupSpec};
use kfactor::extremal::{
    approximate_to_theta, deficiency_profile, is_delta_extremal, kk_count_check, lemma3_dichotomy, minimize_edges,
    size_window, Detection, Lemma3Overrides, SearchRegime,
};
use kfactor::graph::{PartiteGraph, Rational, VertexId};
use kfactor::params::Limits;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Densities here have denominators at most 36, so this is below any gap.
fn just_below(x: Rational) -> Rational {
    x - q(1, 10_000)
}

#[test]
fn exhaustive_theta_search_agrees_with_full_scan() {
    let shapes = [(3, 3, q(0, 1)), (4, 2, q(1, 2)), (4, 3, q(1, 2)), (5, 2, q(1, 5)), (6, 2, q(1, 3)), (6, 3, q(0, 1))];
    let mut checked = 0;
    for (i, &(n, r, eps)) in shapes.iter().cycle().take(50).enumerate() {
        let g = random_partite(&[n, n, n], 0.3 + 0.1 * (i % 5) as f64, i as u64).unwrap();
        let t = q(n as i64, r as i64);
        let Some((lo, hi)) = size_window(t, eps) else { continue };
        let Some(best) = naive_best_grid(&g, r, &vec![lo; r], &vec![hi; r], &vec![true; r]) else { continue };
        let hit = approximate_to_theta(&g, r, t, eps, best, &Limits::default()).unwrap();
        let cert = hit.found().unwrap_or_else(|| panic!("instance {i}: expected a certificate at {best}"));
        assert_eq!(cert.max_same_row_density, best, "instance {i}");
        assert_eq!(cert.regime, SearchRegime::Exhaustive);
        cert.verify(&g).unwrap();
        if best > q(0, 1) {
            let miss = approximate_to_theta(&g, r, t, eps, just_below(best), &Limits::default()).unwrap();
            assert!(miss.is_refuted(), "instance {i}");
        }
        checked += 1;
    }
    assert_eq!(checked, 50);
}

#[test]
fn exhaustive_extremality_agrees_with_full_scan() {
    for seed in 0..20u64 {
        let n = 3 + (seed % 4) as usize;
        let g = random_partite(&[n, n, n], 0.5, seed).unwrap();
        let m = n / 3;
        let best = naive_best_grid(&g, 2, &[m, n - m], &[m, n - m], &[true, false]).unwrap();
        let hit = is_delta_extremal(&g, best, &Limits::default()).unwrap();
        let cert = hit.found().expect("certificate at the optimum");
        assert_eq!(cert.max_density, best);
        cert.verify(&g).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(naive_density(&g, &cert.sets[i], &cert.sets[j]) <= best);
            }
        }
        if best > q(0, 1) {
            assert!(is_delta_extremal(&g, just_below(best), &Limits::default()).unwrap().is_refuted());
        }
    }
}

#[test]
fn blowups_are_recovered_exactly() {
    for k in 2..=4 {
        for r in 1..=4 {
            for t in 1..=3 {
                if r * t > 6 {
                    continue;
                }
                let (g, truth) = theta_blowup(&BlowupSpec::uniform(k, r, t)).unwrap();
                let d = approximate_to_theta(&g, r, q(t as i64, 1), q(0, 1), q(0, 1), &Limits::default()).unwrap();
                let cert = d.found().unwrap_or_else(|| panic!("k={k} r={r} t={t}"));
                assert_eq!(cert.max_same_row_density, q(0, 1));
                assert_eq!(cert.size_slack, q(0, 1));
                if r > 1 {
                    assert_eq!(cert.partition, truth);
                }
            }
        }
    }
}

#[test]
fn perturbed_blowup_has_certificate() {
    let (g, _) = theta_blowup(&BlowupSpec::uniform(3, 3, 4)).unwrap();
    let h = perturb(&g, 5, 2).unwrap();
    let d = approximate_to_theta(&h, 3, q(4, 1), q(1, 4), q(1, 10), &Limits::default()).unwrap();
    let cert = d.found().expect("certificate");
    cert.verify(&h).unwrap();
    assert!(cert.size_slack <= q(1, 4));
    for i in 0..3 {
        for i2 in (i + 1)..3 {
            for j in 0..3 {
                let a = cert.partition.group_vertices(i, j);
                let b = cert.partition.group_vertices(i2, j);
                assert!(naive_density(&h, &a, &b) <= q(1, 10));
            }
        }
    }
}

#[test]
fn extremality_examples() {
    let (g, truth) = theta_blowup(&BlowupSpec::uniform(3, 3, 2)).unwrap();
    let cert = is_delta_extremal(&g, q(0, 1), &Limits::default()).unwrap().into_found().unwrap();
    assert_eq!(cert.max_density, q(0, 1));
    for p in 0..3 {
        assert!((0..3).any(|row| cert.sets[p] == truth.group_vertices(p, row)));
    }
    let k = complete_partite(&[6, 6, 6]).unwrap();
    let miss = is_delta_extremal(&k, q(1, 2), &Limits::default()).unwrap();
    assert!(matches!(miss, Detection::NotFound { refuted: true, regime: SearchRegime::Exhaustive, .. }));
    let h = perturb(&g, 3, 0).unwrap();
    let cert = is_delta_extremal(&h, q(1, 5), &Limits::default()).unwrap().into_found().unwrap();
    cert.verify(&h).unwrap();
}

#[test]
fn dense_counts() {
    let g = complete_partite(&[20, 20, 20]).unwrap();
    let r = kk_count_check(&g, q(1, 256)).unwrap();
    assert_eq!(r.count, 8000);
    assert!(r.pass);
    let h = g.remove_edge(v(0, 0), v(1, 0)).unwrap().remove_edge(v(1, 1), v(2, 1)).unwrap().remove_edge(v(0, 2), v(2, 2)).unwrap();
    let r = kk_count_check(&h, q(1, 256)).unwrap();
    // each removed edge kills the 20 triangles through it, with no overlap
    assert_eq!(r.count, 8000 - 60);
    assert!(r.pass);
    let r = kk_count_check(&complete_partite(&[8; 4]).unwrap(), q(1, 625)).unwrap();
    assert_eq!((r.count, r.part_size_product), (4096, 4096));
    assert!(r.pass);
    assert!(kk_count_check(&g, q(1, 10)).is_err());
}

#[test]
fn lemma3_examples() {
    let (h, truth) = theta_blowup(&BlowupSpec::uniform(3, 2, 3)).unwrap();
    let r = lemma3_dichotomy(&h, q(3, 1), q(1, 10), Lemma3Overrides::default(), &Limits::default()).unwrap();
    assert_eq!(r.clique_count, 0);
    assert!(!r.count_branch && r.approximation_branch && r.holds());
    let tight = Lemma3Overrides { epsilon: Some(q(0, 1)), delta: Some(q(0, 1)) };
    let r = lemma3_dichotomy(&h, q(3, 1), q(1, 10), tight, &Limits::default()).unwrap();
    assert_eq!(r.approximation.found().unwrap().partition, truth);

    let c = complete_partite(&[4, 4, 4]).unwrap();
    let r = lemma3_dichotomy(&c, q(2, 1), q(1, 10), tight, &Limits::default()).unwrap();
    assert_eq!(r.clique_count, 64);
    assert!(r.count_branch);

    let (b, _) = theta_blowup(&BlowupSpec::uniform(3, 2, 4)).unwrap();
    let p = perturb(&b, 2, 0).unwrap();
    let r = lemma3_dichotomy(&p, q(4, 1), q(1, 10), tight, &Limits::default()).unwrap();
    assert_eq!(r.count_branch, Rational::from_integer(r.clique_count as i64) >= r.count_threshold);
}

#[test]
fn minimize_edges_leaves_only_critical_edges() {
    for seed in 0..20u64 {
        let n = 3 + (seed % 6) as usize;
        let floor = (2 * n) / 3;
        let (g, _) = random_min_degree(3, n, floor, seed).unwrap();
        let m = minimize_edges(&g, floor).unwrap();
        assert!(naive_min_partite_degree(&m) >= floor);
        for (a, b) in m.edges() {
            assert!(g.has_edge(a, b));
            assert!(naive_min_partite_degree(&m.remove_edge(a, b).unwrap()) < floor, "seed {seed}: {a}{b} not critical");
        }
    }
    let g = complete_partite(&[3, 3, 3]).unwrap();
    assert_eq!(minimize_edges(&g, 0).unwrap().edge_count(), 0);
    let once = minimize_edges(&g, 2).unwrap();
    assert_eq!(minimize_edges(&once, 2).unwrap(), once);
}

fn neighbours(g: &PartiteGraph, x: VertexId, part: usize) -> Vec<usize> {
    (0..g.part_size(part)).filter(|&i| g.has_edge(x, v(part, i))).collect()
}

proptest! {
    #[test]
    fn deficiency_splits_partition_each_part(seed in any::<u64>(), n in 2usize..=7, p in 0u32..=10) {
        let g = random_partite(&[n, n, n], p as f64 / 10.0, seed).unwrap();
        let (x, y) = (v(0, 0), v(0, 1));
        let prof = deficiency_profile(&g, x, y, Some(q(1, 100))).unwrap();
        for split in &prof.parts {
            prop_assert!(split.part != 0);
            let mut all: Vec<usize> = [&split.only_x, &split.only_y, &split.both, &split.neither].into_iter().flatten().copied().collect();
            all.sort();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            let nx = neighbours(&g, x, split.part);
            let ny = neighbours(&g, y, split.part);
            prop_assert_eq!(split.only_x.len() + split.both.len(), nx.len());
            prop_assert_eq!(split.only_y.len() + split.both.len(), ny.len());
            prop_assert!(split.both.iter().all(|i| nx.contains(i) && ny.contains(i)));
            prop_assert!(split.neither.iter().all(|i| !nx.contains(i) && !ny.contains(i)));
        }
    }

    #[test]
    fn certificates_verify_from_raw_densities(seed in any::<u64>(), n in 3usize..=6) {
        let g = random_partite(&[n, n, n], 0.4, seed).unwrap();
        if let Some(cert) = approximate_to_theta(&g, 2, q(n as i64, 2), q(1, 2), q(1, 2), &Limits::default()).unwrap().into_found() {
            prop_assert!(cert.verify(&g).is_ok());
            prop_assert!(cert.max_same_row_density <= q(1, 2));
            let text = cert.to_json();
            let back: kfactor::extremal::ApproximationCertificate = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, cert);
        }
    }
}
