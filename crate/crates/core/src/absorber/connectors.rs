use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::bounds::{large_connector_threshold, small_connector_threshold};
use crate::constructions::rng_from_seed;
use crate::graph::{is_balanced_set, PartiteGraph, Rational, VertexId, VertexSet};

use super::{for_each_product, small_factor, AbsorberError};

/// A set `S` such that both `G[{x} ∪ S]` and `G[{y} ∪ S]` have `K_k`-factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    pub x: VertexId,
    pub y: VertexId,
    /// Sorted.
    pub set: Vec<VertexId>,
}

impl Connector {
    /// Checks the definition with the factor solver.
    pub fn new(g: &PartiteGraph, x: VertexId, y: VertexId, set: Vec<VertexId>) -> Result<Option<Self>, AbsorberError> {
        let s: VertexSet = set.iter().copied().collect();
        if !is_connector(g, x, y, &s)? {
            return Ok(None);
        }
        Ok(Some(Connector { x, y, set: s.into_iter().collect() }))
    }
}

fn check_endpoints(g: &PartiteGraph, x: VertexId, y: VertexId) -> Result<(), AbsorberError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x.part != y.part {
        return Err(AbsorberError::NotSamePart(x, y));
    }
    if x == y {
        return Err(AbsorberError::SameVertex(x));
    }
    Ok(())
}

fn check_size(k: usize, size: usize) -> Result<(), AbsorberError> {
    if size != k - 1 && size != 2 * k - 1 {
        return Err(AbsorberError::ConnectorSize { size, small: k - 1, large: 2 * k - 1 });
    }
    Ok(())
}

/// Whether `s` connects `x` and `y`.
pub fn is_connector(g: &PartiteGraph, x: VertexId, y: VertexId, s: &VertexSet) -> Result<bool, AbsorberError> {
    check_endpoints(g, x, y)?;
    check_size(g.k(), s.len())?;
    for &v in s {
        g.check_vertex(v)?;
        if v == x || v == y {
            return Err(AbsorberError::NotDisjoint(v));
        }
    }
    let mut with_x = s.clone();
    with_x.insert(x);
    if !is_balanced_set(g.k(), &with_x) {
        return Err(AbsorberError::NotBalanced(format!("{{x}} ∪ S with |S| = {}", s.len())));
    }
    if small_factor(g, &with_x)?.is_none() {
        return Ok(false);
    }
    let mut with_y = s.clone();
    with_y.insert(y);
    Ok(small_factor(g, &with_y)?.is_some())
}

/// Every connector of the given size, in lexicographic order of the sorted
/// set, or the first `cap` of them.
pub fn enumerate_connectors(
    g: &PartiteGraph,
    x: VertexId,
    y: VertexId,
    size: usize,
    cap: Option<usize>,
) -> Result<Vec<Connector>, AbsorberError> {
    check_endpoints(g, x, y)?;
    let k = g.k();
    check_size(k, size)?;
    let per_part = if size == k - 1 { 1 } else { 2 };
    let pools: Vec<Vec<usize>> = (0..k)
        .map(|p| {
            if p == x.part {
                (0..g.part_size(p)).filter(|&i| i != x.index && i != y.index).collect()
            } else {
                (0..g.part_size(p)).collect()
            }
        })
        .collect();
    let counts: Vec<usize> = (0..k).map(|p| if p == x.part { per_part - 1 } else { per_part }).collect();
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut err = None;
    if cap > 0 {
        for_each_product(&pools, &counts, &mut |chosen| {
            let set: Vec<VertexId> =
                chosen.iter().enumerate().flat_map(|(p, idx)| idx.iter().map(move |&i| VertexId::new(p, i))).collect();
            match Connector::new(g, x, y, set) {
                Ok(Some(c)) => out.push(c),
                Ok(None) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            out.len() < cap
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityOptions {
    pub alpha: Rational,
    /// Check at most this many pairs, sampled with `seed`.
    pub max_pairs: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairReachability {
    pub x: VertexId,
    pub y: VertexId,
    pub small: u64,
    pub large: u64,
    /// Neither count reaches its threshold.
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReachabilityReport {
    /// `α³ n^{k−1}`
    pub small_threshold: f64,
    /// `α³ n^{2k−1}`
    pub large_threshold: f64,
    pub total_pairs: usize,
    pub pairs: Vec<PairReachability>,
    pub flagged: usize,
}

/// Exact connector counts for every same-part pair (or a seeded sample of
/// them), compared with the reachability thresholds.
pub fn reachability_report(g: &PartiteGraph, opts: &ReachabilityOptions) -> Result<ReachabilityReport, AbsorberError> {
    let n = g.balanced_size().map_err(|_| AbsorberError::Unbalanced(g.part_sizes().to_vec()))?;
    let k = g.k();
    let mut all = Vec::new();
    for p in 0..k {
        for a in 0..n {
            for b in (a + 1)..n {
                all.push((VertexId::new(p, a), VertexId::new(p, b)));
            }
        }
    }
    let total_pairs = all.len();
    let chosen: Vec<(VertexId, VertexId)> = match opts.max_pairs {
        Some(m) if m < total_pairs => {
            let mut idx = index::sample(&mut rng_from_seed(opts.seed), total_pairs, m).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| all[i]).collect()
        }
        _ => all,
    };
    let small_threshold = small_connector_threshold(opts.alpha, k, n);
    let large_threshold = large_connector_threshold(opts.alpha, k, n);
    let mut pairs = Vec::with_capacity(chosen.len());
    for (x, y) in chosen {
        let small = enumerate_connectors(g, x, y, k - 1, None)?.len() as u64;
        let large = enumerate_connectors(g, x, y, 2 * k - 1, None)?.len() as u64;
        let flagged = (small as f64) < small_threshold && (large as f64) < large_threshold;
        pairs.push(PairReachability { x, y, small, large, flagged });
    }
    let flagged = pairs.iter().filter(|p| p.flagged).count();
    Ok(ReachabilityReport { small_threshold, large_threshold, total_pairs, pairs, flagged })
}
