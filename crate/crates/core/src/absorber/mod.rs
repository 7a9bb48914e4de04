//! Connectors, absorbing sets, the sampled absorbing family and the
//! absorb-then-cover factor pipeline.

mod absorb;
mod absorbing;
mod connectors;
mod family;
mod pipeline;

use thiserror::Error;

use crate::extremal::ExtremalError;
use crate::graph::{GraphError, PartiteGraph, VertexId, VertexSet};
use crate::params::Limits;
use crate::solver::{factor_on_subset, CliqueMatching, FactorOutcome, SolverError};

pub use absorb::{absorb, AbsorbFailure, AbsorbOutcome};
pub use absorbing::{absorbing_sets_for, AbsorbingSet};
pub use connectors::{
    enumerate_connectors, is_connector, reachability_report, Connector, PairReachability, ReachabilityOptions,
    ReachabilityReport,
};
pub use family::{
    balanced_set_count, build_absorber, prune_family, sample_family, AbsorberConfig, AbsorberFailure, AbsorberMember,
    AbsorberOutcome, AbsorberState, AbsorberStats, FamilySample, PrunedFamily, SamplingMode, TupleProbe,
};
pub use pipeline::{full_pipeline, PipelineConfig, PipelineOutcome, PipelineReport, TraceEntry};

#[derive(Debug, Error, PartialEq)]
pub enum AbsorberError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
    #[error("graph must be balanced, got part sizes {0:?}")]
    Unbalanced(Vec<usize>),
    #[error("{0} and {1} must lie in the same part")]
    NotSamePart(VertexId, VertexId),
    #[error("x and y must be distinct, both are {0}")]
    SameVertex(VertexId),
    #[error("connector size {size} must be k-1 = {small} or 2k-1 = {large}")]
    ConnectorSize { size: usize, small: usize, large: usize },
    #[error("{0} is not a balanced set")]
    NotBalanced(String),
    #[error("{0} lies in both the set and the endpoints or tuple")]
    NotDisjoint(VertexId),
    #[error("selection probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("{0} candidate sets exceed the sampler's range")]
    TooManyCandidates(u128),
    #[error("W meets the absorbing matching at {0}")]
    OverlapsAbsorber(VertexId),
    #[error("minimum partite degree {actual} is below the configured floor {floor}")]
    BelowFloor { floor: usize, actual: usize },
}

/// A factor of `G[set]`. Callers pass balanced sets small enough that the
/// default budget always decides.
pub(crate) fn small_factor(g: &PartiteGraph, set: &VertexSet) -> Result<Option<CliqueMatching>, AbsorberError> {
    let search = factor_on_subset(g, set, &Limits::default())?;
    match search.outcome {
        FactorOutcome::Found(m) => Ok(Some(m)),
        FactorOutcome::None => Ok(None),
        FactorOutcome::Inconclusive => panic!("factor search on {} vertices ran out of budget", set.len()),
    }
}

/// `C(n, r)` in `u128`, saturating.
pub(crate) fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Calls `visit` on every `r`-subset of `items` in lexicographic order.
pub(crate) fn for_each_combination(items: &[usize], r: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == r {
            return visit(cur);
        }
        let need = r - cur.len();
        for pos in start..=items.len().saturating_sub(need) {
            if items.len() < need {
                break;
            }
            cur.push(items[pos]);
            let go = rec(items, r, pos + 1, cur, visit);
            cur.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(items, r, 0, &mut Vec::with_capacity(r), visit)
}

/// Visits every way of picking `counts[p]` vertices from `pools[p]` for all
/// parts at once, in lexicographic order of the resulting sorted vertex list.
pub(crate) fn for_each_product(
    pools: &[Vec<usize>],
    counts: &[usize],
    visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    fn rec(
        pools: &[Vec<usize>],
        counts: &[usize],
        part: usize,
        chosen: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if part == pools.len() {
            return visit(chosen);
        }
        for_each_combination(&pools[part], counts[part], &mut |combo| {
            chosen.push(combo.to_vec());
            let go = rec(pools, counts, part + 1, chosen, visit);
            chosen.pop();
            go
        })
    }
    rec(pools, counts, 0, &mut Vec::with_capacity(pools.len()), visit)
}
