use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::bounds::{absorbing_capacity, matching_size_bound, paper_selection_probability, BoundCheck};
use crate::constructions::rng_from_seed;
use crate::graph::{Bitset, PartiteGraph, Rational, VertexId, VertexSet};
use crate::solver::{verify_matching, CliqueMatching, CrossingTuple};

use super::{binomial, small_factor, AbsorberError};

/// How the selection probability of the random family is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SamplingMode {
    /// `p = α^{4k−3} n^{1−2k(k−1)}`.
    Paper,
    /// `p = target / (number of balanced 2k(k−1)-sets)`, capped at 1.
    Desk { target: f64 },
}

/// Number of balanced `2k(k−1)`-subsets of a graph with `n` vertices per
/// part, `C(n, 2(k−1))^k`, saturating.
pub fn balanced_set_count(k: usize, n: usize) -> u128 {
    let per_part = binomial(n, 2 * (k - 1));
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(per_part))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySample {
    pub mode: SamplingMode,
    pub p: f64,
    pub candidates: u128,
    /// `p · candidates`
    pub expected: f64,
    /// Sorted sets in lexicographic order.
    pub sets: Vec<Vec<VertexId>>,
}

fn unrank_combination(n: usize, c: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(c);
    let mut left = c;
    let mut x = 0;
    while left > 0 {
        let with_x = binomial(n - x - 1, left - 1);
        if rank < with_x {
            out.push(x);
            left -= 1;
        } else {
            rank -= with_x;
        }
        x += 1;
    }
    out
}

/// The balanced set of the given rank; part 0 is the most significant digit,
/// so rank order is lexicographic order.
fn unrank_balanced(k: usize, n: usize, mut rank: u128) -> Vec<VertexId> {
    let c = 2 * (k - 1);
    let base = binomial(n, c);
    let mut digits = vec![0u128; k];
    for p in (0..k).rev() {
        digits[p] = rank % base;
        rank /= base;
    }
    digits
        .iter()
        .enumerate()
        .flat_map(|(p, &d)| unrank_combination(n, c, d).into_iter().map(move |i| VertexId::new(p, i)))
        .collect()
}

/// Selects each balanced `2k(k−1)`-set independently with probability `p`.
///
/// The family is never materialized: the number of selected sets is drawn
/// from `Binomial(candidates, p)` and that many distinct ranks are drawn
/// uniformly, which has the same distribution.
pub fn sample_family(g: &PartiteGraph, alpha: Rational, mode: SamplingMode, seed: u64) -> Result<FamilySample, AbsorberError> {
    let n = g.balanced_size().map_err(|_| AbsorberError::Unbalanced(g.part_sizes().to_vec()))?;
    let k = g.k();
    let candidates = balanced_set_count(k, n);
    let p = match mode {
        SamplingMode::Paper => paper_selection_probability(alpha, k, n),
        // a target above the candidate count selects everything
        SamplingMode::Desk { target } => match candidates {
            0 => 0.0,
            c => (target / c as f64).min(1.0),
        },
    };
    if !(0.0..=1.0).contains(&p) {
        return Err(AbsorberError::Probability(p));
    }
    let total = u64::try_from(candidates).map_err(|_| AbsorberError::TooManyCandidates(candidates))?;
    let mut rng = rng_from_seed(seed);
    let count = if p == 0.0 || total == 0 {
        0
    } else if p == 1.0 {
        total
    } else {
        Binomial::new(total, p).map_err(|_| AbsorberError::Probability(p))?.sample(&mut rng)
    };
    let ranks: Vec<u128> = if count == 0 {
        Vec::new()
    } else if count.saturating_mul(2) > total {
        let len = usize::try_from(total).map_err(|_| AbsorberError::TooManyCandidates(candidates))?;
        let mut v: Vec<u128> = index::sample(&mut rng, len, count as usize).into_iter().map(|i| i as u128).collect();
        v.sort_unstable();
        v
    } else {
        let mut chosen = BTreeSet::new();
        while (chosen.len() as u64) < count {
            chosen.insert(rng.random_range(0..total) as u128);
        }
        chosen.into_iter().collect()
    };
    let sets = ranks.into_iter().map(|r| unrank_balanced(k, n, r)).collect();
    Ok(FamilySample { mode, p, candidates, expected: p * candidates as f64, sets })
}

/// A surviving family member and the factor of its carrier.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberMember {
    pub set: Vec<VertexId>,
    pub factor: CliqueMatching,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrunedFamily {
    pub members: Vec<AbsorberMember>,
    /// Number of intersecting pairs in the input family.
    pub intersecting_pairs: u64,
    pub dropped_nonfactor: usize,
    pub dropped_overlap: usize,
}

/// Drops the sets whose carrier has no factor, then keeps each remaining
/// set only if it is disjoint from every set already kept.
pub fn prune_family(g: &PartiteGraph, family: &[Vec<VertexId>]) -> Result<PrunedFamily, AbsorberError> {
    let offsets: Vec<usize> = g
        .part_sizes()
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let total = g.vertex_count();
    let mut masks = Vec::with_capacity(family.len());
    for set in family {
        let mut b = Bitset::new(total);
        for &v in set {
            g.check_vertex(v)?;
            b.insert(offsets[v.part] + v.index);
        }
        masks.push(b);
    }
    let mut intersecting_pairs = 0;
    for i in 0..masks.len() {
        for j in (i + 1)..masks.len() {
            if masks[i].and_count(&masks[j]) > 0 {
                intersecting_pairs += 1;
            }
        }
    }
    let mut members = Vec::new();
    let mut used = Bitset::new(total);
    let (mut dropped_nonfactor, mut dropped_overlap) = (0, 0);
    for (set, mask) in family.iter().zip(&masks) {
        let vs: VertexSet = set.iter().copied().collect();
        let Some(factor) = small_factor(g, &vs)? else {
            dropped_nonfactor += 1;
            continue;
        };
        if used.and_count(mask) > 0 {
            dropped_overlap += 1;
            continue;
        }
        used.union_with(mask);
        members.push(AbsorberMember { set: vs.into_iter().collect(), factor });
    }
    Ok(PrunedFamily { members, intersecting_pairs, dropped_nonfactor, dropped_overlap })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberConfig {
    pub alpha: Rational,
    pub mode: SamplingMode,
    pub seed: u64,
    /// Number of random crossing tuples whose `|ℒ(T) ∩ 𝓕′|` is reported.
    pub probes: usize,
}

impl Default for AbsorberConfig {
    fn default() -> Self {
        AbsorberConfig { alpha: Rational::new(1, 10), mode: SamplingMode::Desk { target: 10.0 }, seed: 0, probes: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberStats {
    pub p: f64,
    pub candidates: u128,
    pub expected: f64,
    pub sampled: usize,
    pub intersecting_pairs: u64,
    pub dropped_nonfactor: usize,
    pub dropped_overlap: usize,
    pub kept: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleProbe {
    pub tuple: CrossingTuple,
    /// Members disjoint from the tuple that absorb it.
    pub absorbing_members: usize,
}

/// The pruned family `𝓕′` and the matching `M` made of its members' factors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberState {
    pub k: usize,
    pub n: usize,
    pub config: AbsorberConfig,
    pub members: Vec<AbsorberMember>,
    pub matching: CliqueMatching,
    pub stats: AbsorberStats,
    pub probes: Vec<TupleProbe>,
    pub checks: Vec<BoundCheck>,
}

impl AbsorberState {
    pub fn covered(&self) -> VertexSet {
        self.members.iter().flat_map(|m| m.set.iter().copied()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("absorber serialization is infallible")
    }

    /// Recomputes disjointness, carrier balance and the cover of `M`.
    pub fn verify(&self, g: &PartiteGraph) -> Result<(), String> {
        let mut seen = VertexSet::new();
        for (i, m) in self.members.iter().enumerate() {
            for &v in &m.set {
                if !seen.insert(v) {
                    return Err(format!("member {i} overlaps an earlier member at {v}"));
                }
            }
            let own: VertexSet = m.set.iter().copied().collect();
            let verdict = verify_matching(g, &m.factor, Some(&own));
            if !verdict.valid {
                return Err(format!("member {i}: {}", verdict.diagnostic()));
            }
        }
        let verdict = verify_matching(g, &self.matching, Some(&seen));
        if !verdict.valid {
            return Err(format!("matching: {}", verdict.diagnostic()));
        }
        if self.matching.len() != self.members.len() * 2 * (self.k - 1) {
            return Err("matching size is not 2(k-1) per member".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberFailure {
    pub guarantee: String,
    pub detail: String,
    pub stats: AbsorberStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AbsorberOutcome {
    Built(AbsorberState),
    Failure(AbsorberFailure),
}

fn probe_tuples(g: &PartiteGraph, count: usize, seed: u64) -> Vec<CrossingTuple> {
    let mut rng = rng_from_seed(seed ^ 0x5bd1_e995);
    (0..count).map(|_| CrossingTuple::new(g.part_sizes().iter().map(|&s| rng.random_range(0..s)).collect())).collect()
}

/// Samples, prunes and assembles the absorbing matching.
pub fn build_absorber(g: &PartiteGraph, config: &AbsorberConfig) -> Result<AbsorberOutcome, AbsorberError> {
    let n = g.balanced_size().map_err(|_| AbsorberError::Unbalanced(g.part_sizes().to_vec()))?;
    let k = g.k();
    let sample = sample_family(g, config.alpha, config.mode, config.seed)?;
    let pruned = prune_family(g, &sample.sets)?;
    let stats = AbsorberStats {
        p: sample.p,
        candidates: sample.candidates,
        expected: sample.expected,
        sampled: sample.sets.len(),
        intersecting_pairs: pruned.intersecting_pairs,
        dropped_nonfactor: pruned.dropped_nonfactor,
        dropped_overlap: pruned.dropped_overlap,
        kept: pruned.members.len(),
    };
    if !sample.sets.is_empty() && pruned.members.is_empty() {
        return Ok(AbsorberOutcome::Failure(AbsorberFailure {
            guarantee: "absorbing matching".into(),
            detail: format!("none of the {} sampled sets has a K_k-factor", sample.sets.len()),
            stats,
        }));
    }
    let mut matching = CliqueMatching::default();
    for m in &pruned.members {
        matching.extend(m.factor.clone());
    }
    matching.canonicalize();
    let mut probes = Vec::new();
    if n > 0 {
        for tuple in probe_tuples(g, config.probes, config.seed) {
            let mut absorbing_members = 0;
            for m in &pruned.members {
                if m.set.iter().any(|&v| tuple.contains(v)) {
                    continue;
                }
                let mut with_t: VertexSet = m.set.iter().copied().collect();
                with_t.extend(tuple.vertices());
                if small_factor(g, &with_t)?.is_some() {
                    absorbing_members += 1;
                }
            }
            probes.push(TupleProbe { tuple, absorbing_members });
        }
    }
    let mut checks = vec![
        BoundCheck::upper("sampled family size", "2 E|F|", 2.0 * sample.expected, sample.sets.len() as f64),
        BoundCheck::upper("absorbing matching size", "2(k-1) alpha^(4k-2) n", matching_size_bound(config.alpha, k, n), matching.len() as f64),
    ];
    for probe in &probes {
        checks.push(BoundCheck::lower(
            &format!("|L(T) ∩ F'| for T = {}", probe.tuple),
            "alpha^(8k-6) n / 4",
            absorbing_capacity(config.alpha, k, n),
            probe.absorbing_members as f64,
        ));
    }
    let state = AbsorberState {
        k,
        n,
        config: config.clone(),
        members: pruned.members,
        matching,
        stats,
        probes,
        checks,
    };
    state.verify(g).unwrap_or_else(|e| panic!("absorber state failed verification: {e}"));
    Ok(AbsorberOutcome::Built(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete_partite;

    #[test]
    fn unrank_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..binomial(5, 2)).map(|r| unrank_combination(5, 2, r)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[9], vec![3, 4]);
    }

    #[test]
    fn extreme_probabilities() {
        let g = complete_partite(&[5, 5, 5]).unwrap();
        let none = sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: 0.0 }, 1).unwrap();
        assert!(none.sets.is_empty());
        let all = sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: 125.0 }, 1).unwrap();
        assert_eq!(all.sets.len(), 125);
        assert_eq!(all.candidates, 125);
        let capped = sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: 200.0 }, 1).unwrap();
        assert_eq!((capped.p, capped.sets.len()), (1.0, 125));
        assert!(matches!(
            sample_family(&g, Rational::new(1, 10), SamplingMode::Desk { target: -1.0 }, 1),
            Err(AbsorberError::Probability(_))
        ));
    }

    #[test]
    fn paper_mode_underflows_to_nothing() {
        let g = complete_partite(&[6, 6, 6]).unwrap();
        let s = sample_family(&g, Rational::new(1, 10), SamplingMode::Paper, 0).unwrap();
        assert!(s.p < 1e-10);
        assert!(s.sets.is_empty());
    }

    #[test]
    fn overlapping_pair_keeps_one() {
        let g = complete_partite(&[5, 5, 5]).unwrap();
        let a: Vec<VertexId> = (0..3).flat_map(|p| (0..4).map(move |i| VertexId::new(p, i))).collect();
        let b: Vec<VertexId> = (0..3).flat_map(|p| (1..5).map(move |i| VertexId::new(p, i))).collect();
        let pruned = prune_family(&g, &[a.clone(), b]).unwrap();
        assert_eq!(pruned.intersecting_pairs, 1);
        assert_eq!(pruned.members.len(), 1);
        assert_eq!(pruned.members[0].set, a);
    }

    #[test]
    fn edgeless_graph_fails() {
        let g = PartiteGraph::empty(&[6, 6, 6]).unwrap();
        let cfg = AbsorberConfig { mode: SamplingMode::Desk { target: 5.0 }, seed: 3, ..AbsorberConfig::default() };
        assert!(matches!(build_absorber(&g, &cfg).unwrap(), AbsorberOutcome::Failure(_)));
    }

    #[test]
    fn empty_family_is_vacuous() {
        let g = complete_partite(&[6, 6, 6]).unwrap();
        let cfg = AbsorberConfig { mode: SamplingMode::Desk { target: 0.0 }, ..AbsorberConfig::default() };
        let AbsorberOutcome::Built(state) = build_absorber(&g, &cfg).unwrap() else { panic!("expected a state") };
        assert!(state.matching.is_empty());
        assert!(state.verify(&g).is_ok());
    }
}
