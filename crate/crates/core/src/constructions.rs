//! Generators for the graph families used by the lab: the grid graph
//! Θ_{k×r} and its blow-ups, complete multipartite graphs, and seeded random
//! instances. Every generator is a deterministic function of its arguments.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extremal::GridPartition;
use crate::graph::{GraphError, PartiteGraph, VertexId};

#[derive(Debug, Error, PartialEq)]
pub enum ConstructionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("degree floor {floor} exceeds part size {n}")]
    FloorAboveN { floor: usize, n: usize },
    #[error("cannot flip {requested} pairs: only {available} cross-part pairs exist")]
    TooManyFlips { requested: usize, available: usize },
    #[error("blow-up spec needs r >= 1 and one size per column (r = {r}, {sizes} sizes)")]
    Spec { r: usize, sizes: usize },
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a Θ_{k×r} blow-up: every part gets `r` column groups whose sizes
/// are given by `sizes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    pub k: usize,
    pub r: usize,
    pub sizes: Vec<usize>,
}

impl BlowupSpec {
    /// All groups of size `t`.
    pub fn uniform(k: usize, r: usize, t: usize) -> Self {
        BlowupSpec { k, r, sizes: vec![t; r] }
    }

    /// Splits `part_size` into `r` groups whose sizes differ by at most one,
    /// larger groups first.
    pub fn split(k: usize, r: usize, part_size: usize) -> Self {
        let (q, rem) = (part_size / r.max(1), part_size % r.max(1));
        BlowupSpec { k, r, sizes: (0..r).map(|j| q + usize::from(j < rem)).collect() }
    }

    pub fn part_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Θ_{k×r}: parts of size `r`, with `(i, j) ~ (i', j')` iff `i ≠ i'` and `j ≠ j'`.
pub fn theta(k: usize, r: usize) -> Result<PartiteGraph, ConstructionError> {
    Ok(theta_blowup(&BlowupSpec::uniform(k, r, 1))?.0)
}

/// Θ_{k×r}(sizes) together with its ground-truth grid. Column `j` of each
/// part occupies a contiguous index range.
pub fn theta_blowup(spec: &BlowupSpec) -> Result<(PartiteGraph, GridPartition), ConstructionError> {
    if spec.r == 0 || spec.sizes.len() != spec.r {
        return Err(ConstructionError::Spec { r: spec.r, sizes: spec.sizes.len() });
    }
    let n = spec.part_size();
    let mut column = Vec::with_capacity(n);
    for (j, &s) in spec.sizes.iter().enumerate() {
        column.extend(std::iter::repeat(j).take(s));
    }
    let mut g = PartiteGraph::empty(&vec![n; spec.k])?;
    for p in 0..spec.k {
        for q in (p + 1)..spec.k {
            for a in 0..n {
                for b in 0..n {
                    if column[a] != column[b] {
                        g.set_edge(VertexId::new(p, a), VertexId::new(q, b), true);
                    }
                }
            }
        }
    }
    let grid = GridPartition::from_assignment(spec.r, &vec![column; spec.k]);
    Ok((g, grid))
}

/// Complete k-partite graph with the given part sizes.
pub fn complete_partite(sizes: &[usize]) -> Result<PartiteGraph, ConstructionError> {
    let mut g = PartiteGraph::empty(sizes)?;
    let pairs: Vec<_> = g.vertices().flat_map(|u| later_vertices(sizes, u).map(move |w| (u, w))).collect();
    for (u, w) in pairs {
        g.set_edge(u, w, true);
    }
    Ok(g)
}

fn later_vertices(sizes: &[usize], u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
    ((u.part + 1)..sizes.len()).flat_map(move |q| (0..sizes[q]).map(move |j| VertexId::new(q, j)))
}

/// Each cross-part pair present independently with probability `edge_prob`.
pub fn random_partite(sizes: &[usize], edge_prob: f64, seed: u64) -> Result<PartiteGraph, ConstructionError> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(ConstructionError::Probability(edge_prob));
    }
    let mut rng = rng_from_seed(seed);
    let mut g = PartiteGraph::empty(sizes)?;
    let pairs: Vec<_> = g.vertices().flat_map(|u| later_vertices(sizes, u).map(move |w| (u, w))).collect();
    for (u, w) in pairs {
        if rng.random_bool(edge_prob) {
            g.set_edge(u, w, true);
        }
    }
    Ok(g)
}

/// What the repair loop of [`random_min_degree`] did.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepairTrace {
    pub base_edge_prob: f64,
    pub base_edges: usize,
    pub added: Vec<[VertexId; 2]>,
}

/// Balanced random graph with δ* ≥ `floor`.
///
/// Starts from `random_partite` with edge probability `max(1/2, floor/n)`,
/// then visits vertices in order and, for each other part where the vertex
/// is deficient, adds edges to uniformly chosen non-neighbours until the
/// floor is met. Adding edges never lowers a degree, so one pass suffices.
pub fn random_min_degree(
    k: usize,
    n: usize,
    floor: usize,
    seed: u64,
) -> Result<(PartiteGraph, RepairTrace), ConstructionError> {
    if floor > n {
        return Err(ConstructionError::FloorAboveN { floor, n });
    }
    let base_edge_prob = if n == 0 { 0.5 } else { (floor as f64 / n as f64).max(0.5) };
    let sizes = vec![n; k];
    let mut g = random_partite(&sizes, base_edge_prob, seed)?;
    let base_edges = g.edge_count();
    let mut rng = rng_from_seed(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut added = Vec::new();
    let vertices: Vec<VertexId> = g.vertices().collect();
    for v in vertices {
        for q in (0..k).filter(|&q| q != v.part) {
            while g.degree_into(v, q) < floor {
                let missing: Vec<usize> = (0..n).filter(|&j| !g.neighbors_in(v, q).contains(j)).collect();
                let w = VertexId::new(q, missing[rng.random_range(0..missing.len())]);
                g.set_edge(v, w, true);
                added.push([v.min(w), v.max(w)]);
            }
        }
    }
    Ok((g, RepairTrace { base_edge_prob, base_edges, added }))
}

/// One toggled pair of a [`perturb_with_log`] run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flip {
    pub u: VertexId,
    pub v: VertexId,
    pub added: bool,
}

/// Toggles exactly `flip_count` distinct cross-part pairs.
pub fn perturb(g: &PartiteGraph, flip_count: usize, seed: u64) -> Result<PartiteGraph, ConstructionError> {
    Ok(perturb_with_log(g, flip_count, seed)?.0)
}

/// As [`perturb`], also returning the toggled pairs in canonical order.
pub fn perturb_with_log(
    g: &PartiteGraph,
    flip_count: usize,
    seed: u64,
) -> Result<(PartiteGraph, Vec<Flip>), ConstructionError> {
    let available = g.cross_pair_count();
    if flip_count > available {
        return Err(ConstructionError::TooManyFlips { requested: flip_count, available });
    }
    let mut rng = rng_from_seed(seed);
    let mut picks = index::sample(&mut rng, available, flip_count).into_vec();
    picks.sort_unstable();
    let mut out = g.clone();
    let mut flips = Vec::with_capacity(flip_count);
    for idx in picks {
        let (u, v) = cross_pair_at(g.part_sizes(), idx);
        let added = !out.has_edge(u, v);
        out.set_edge(u, v, added);
        flips.push(Flip { u, v, added });
    }
    Ok((out, flips))
}

/// The `idx`-th cross-part pair in canonical (lexicographic) order.
fn cross_pair_at(sizes: &[usize], mut idx: usize) -> (VertexId, VertexId) {
    for (p, &sp) in sizes.iter().enumerate() {
        let later: usize = sizes[p + 1..].iter().sum();
        for i in 0..sp {
            if idx < later {
                let mut j = idx;
                for (q, &sq) in sizes.iter().enumerate().skip(p + 1) {
                    if j < sq {
                        return (VertexId::new(p, i), VertexId::new(q, j));
                    }
                    j -= sq;
                }
            }
            idx -= later;
        }
    }
    unreachable!("cross pair index out of range")
}
