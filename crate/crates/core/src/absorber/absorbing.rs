use serde::{Deserialize, Serialize};

use crate::graph::{part_profile, PartiteGraph, VertexId, VertexSet};
use crate::solver::{CliqueMatching, CrossingTuple};

use super::{for_each_product, small_factor, AbsorberError};

/// A balanced `2k(k−1)`-set `A`, disjoint from the tuple `T`, such that both
/// `G[A]` and `G[A ∪ T]` have `K_k`-factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingSet {
    pub tuple: CrossingTuple,
    /// Sorted.
    pub set: Vec<VertexId>,
    pub carrier_factor: CliqueMatching,
    pub absorbed_factor: CliqueMatching,
}

impl AbsorbingSet {
    /// Verifies the definition; `Ok(None)` when either factor is missing.
    pub fn new(g: &PartiteGraph, tuple: &CrossingTuple, set: &VertexSet) -> Result<Option<Self>, AbsorberError> {
        tuple.check_in(g)?;
        let k = g.k();
        let profile = part_profile(k, set);
        if profile.iter().any(|&c| c != 2 * (k - 1)) {
            return Err(AbsorberError::NotBalanced(format!("absorbing candidate with part profile {profile:?}")));
        }
        for v in tuple.vertices() {
            if set.contains(&v) {
                return Err(AbsorberError::NotDisjoint(v));
            }
        }
        let Some(carrier_factor) = small_factor(g, set)? else {
            return Ok(None);
        };
        let mut with_t = set.clone();
        with_t.extend(tuple.vertices());
        let Some(absorbed_factor) = small_factor(g, &with_t)? else {
            return Ok(None);
        };
        Ok(Some(AbsorbingSet {
            tuple: tuple.clone(),
            set: set.iter().copied().collect(),
            carrier_factor,
            absorbed_factor,
        }))
    }
}

/// `ℒ(T)`: every absorbing set for `tuple`, in lexicographic order, or the
/// first `cap` of them.
pub fn absorbing_sets_for(
    g: &PartiteGraph,
    tuple: &CrossingTuple,
    cap: Option<usize>,
) -> Result<Vec<AbsorbingSet>, AbsorberError> {
    tuple.check_in(g)?;
    let k = g.k();
    let pools: Vec<Vec<usize>> =
        (0..k).map(|p| (0..g.part_size(p)).filter(|&i| i != tuple.indices()[p]).collect()).collect();
    let counts = vec![2 * (k - 1); k];
    let cap = cap.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut err = None;
    if cap > 0 {
        for_each_product(&pools, &counts, &mut |chosen| {
            let set: VertexSet =
                chosen.iter().enumerate().flat_map(|(p, idx)| idx.iter().map(move |&i| VertexId::new(p, i))).collect();
            match AbsorbingSet::new(g, tuple, &set) {
                Ok(Some(a)) => out.push(a),
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
