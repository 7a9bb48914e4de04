//! k-partite graphs and the degree, density and typicality primitives.
//!
//! Vertices are addressed as `(part, index)` with both coordinates 0-based.
//! Adjacency is stored per vertex as one [`Bitset`] per part, so the degree
//! of a vertex into any vertex set of a single part is a masked popcount.

mod bitset;
mod json;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bitset::Bitset;
pub use json::GraphFile;

/// Exact rational used for densities and thresholds.
pub type Rational = Ratio<i64>;

/// A vertex, identified by its part and its position inside that part.
///
/// Ordering is lexicographic on `(part, index)`, which is the tie-breaking
/// order used throughout the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct VertexId {
    pub part: usize,
    pub index: usize,
}

impl VertexId {
    pub const fn new(part: usize, index: usize) -> Self {
        VertexId { part, index }
    }
}

impl From<[usize; 2]> for VertexId {
    fn from([part, index]: [usize; 2]) -> Self {
        VertexId { part, index }
    }
}

impl From<VertexId> for [usize; 2] {
    fn from(v: VertexId) -> Self {
        [v.part, v.index]
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.part, self.index)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("a k-partite graph needs at least 2 parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("{0} and {1} lie in the same part")]
    SamePart(VertexId, VertexId),
    #[error("no edge between {0} and {1}")]
    MissingEdge(VertexId, VertexId),
    #[error("edge between {0} and {1} already present")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex set spans more than one part")]
    SetSpansParts,
    #[error("both sides of the pair lie in part {0}")]
    SamePartPair(usize),
    #[error("declared k = {declared} but {actual} part sizes were given")]
    PartCountMismatch { declared: usize, actual: usize },
    #[error("graph is not balanced: part sizes {0:?}")]
    Unbalanced(Vec<usize>),
    #[error("alpha must lie in [0, 1], got {0}")]
    AlphaOutOfRange(Rational),
    #[error("malformed graph JSON: {0}")]
    Json(String),
}

/// Two vertex sets taken from two distinct parts, as used by `d(A, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSubsetPair {
    pub part_a: usize,
    pub a: Vec<usize>,
    pub part_b: usize,
    pub b: Vec<usize>,
}

impl VertexSubsetPair {
    /// Builds a pair from explicit parts and indices; indices are sorted and
    /// deduplicated.
    pub fn new(
        part_a: usize,
        a: impl IntoIterator<Item = usize>,
        part_b: usize,
        b: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        if part_a == part_b {
            return Err(GraphError::SamePartPair(part_a));
        }
        let mut a: Vec<usize> = a.into_iter().collect();
        let mut b: Vec<usize> = b.into_iter().collect();
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        Ok(VertexSubsetPair { part_a, a, part_b, b })
    }

    /// Builds a pair from vertex lists; each list must be nonempty and lie in
    /// a single part.
    pub fn from_vertices(a: &[VertexId], b: &[VertexId]) -> Result<Self, GraphError> {
        let part_of = |s: &[VertexId]| -> Result<usize, GraphError> {
            let p = s.first().ok_or(GraphError::EmptySet)?.part;
            if s.iter().any(|v| v.part != p) {
                return Err(GraphError::SetSpansParts);
            }
            Ok(p)
        };
        let (pa, pb) = (part_of(a)?, part_of(b)?);
        Self::new(pa, a.iter().map(|v| v.index), pb, b.iter().map(|v| v.index))
    }

    /// The pair `(V_i, V_j)` of two whole parts.
    pub fn whole_parts(g: &PartiteGraph, i: usize, j: usize) -> Result<Self, GraphError> {
        Self::new(i, 0..g.part_size(i), j, 0..g.part_size(j))
    }
}

/// A k-partite graph with possibly unequal part sizes.
///
/// Values are immutable after construction; edge edits return new graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartiteGraph {
    part_sizes: Vec<usize>,
    offsets: Vec<usize>,
    // rows[offset(v)][p] = neighbours of v inside part p
    rows: Vec<Vec<Bitset>>,
}

impl PartiteGraph {
    /// Edgeless graph with the given part sizes.
    pub fn empty(part_sizes: &[usize]) -> Result<Self, GraphError> {
        if part_sizes.len() < 2 {
            return Err(GraphError::TooFewParts(part_sizes.len()));
        }
        let mut offsets = Vec::with_capacity(part_sizes.len());
        let mut acc = 0;
        for &s in part_sizes {
            offsets.push(acc);
            acc += s;
        }
        let template: Vec<Bitset> = part_sizes.iter().map(|&s| Bitset::new(s)).collect();
        Ok(PartiteGraph {
            part_sizes: part_sizes.to_vec(),
            offsets,
            rows: vec![template; acc],
        })
    }

    /// Builds a graph from an edge list. Duplicate edges are rejected.
    pub fn from_edges(
        part_sizes: &[usize],
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(part_sizes)?;
        for (u, v) in edges {
            g.check_pair(u, v)?;
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn k(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    pub fn part_size(&self, part: usize) -> usize {
        self.part_sizes[part]
    }

    pub fn vertex_count(&self) -> usize {
        self.rows.len()
    }

    /// Membership in 𝒢_k(n): all parts have the same size.
    pub fn is_balanced(&self) -> bool {
        self.part_sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// The common part size of a balanced graph.
    pub fn balanced_size(&self) -> Result<usize, GraphError> {
        if self.is_balanced() {
            Ok(self.part_sizes[0])
        } else {
            Err(GraphError::Unbalanced(self.part_sizes.clone()))
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.part < self.k() && v.index < self.part_sizes[v.part]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange(v))
        }
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u.part == v.part {
            return Err(GraphError::SamePart(u, v));
        }
        Ok(())
    }

    #[inline]
    fn slot(&self, v: VertexId) -> usize {
        self.offsets[v.part] + v.index
    }

    pub(crate) fn set_edge(&mut self, u: VertexId, v: VertexId, present: bool) {
        let (su, sv) = (self.slot(u), self.slot(v));
        if present {
            self.rows[su][v.part].insert(v.index);
            self.rows[sv][u.part].insert(u.index);
        } else {
            self.rows[su][v.part].remove(v.index);
            self.rows[sv][u.part].remove(u.index);
        }
    }

    /// All vertices in `(part, index)` order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.part_sizes
            .iter()
            .enumerate()
            .flat_map(|(p, &s)| (0..s).map(move |i| VertexId::new(p, i)))
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u.part != v.part && self.rows[self.slot(u)][v.part].contains(v.index)
    }

    /// Neighbours of `v` inside `part`, as a bitset over that part's indices.
    #[inline]
    pub fn neighbors_in(&self, v: VertexId, part: usize) -> &Bitset {
        &self.rows[self.slot(v)][part]
    }

    #[inline]
    pub fn degree_into(&self, v: VertexId, part: usize) -> usize {
        self.neighbors_in(v, part).count()
    }

    /// `deg_B(v)` for a set `B` of indices in `part`.
    pub fn degree_into_set(&self, v: VertexId, part: usize, set: &Bitset) -> usize {
        self.neighbors_in(v, part).and_count(set)
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Edges in canonical order: lower-part endpoint first, pairs sorted
    /// lexicographically.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            ((u.part + 1)..self.k()).flat_map(move |p| {
                self.neighbors_in(u, p).iter().map(move |i| (u, VertexId::new(p, i)))
            })
        })
    }

    /// Number of cross-part vertex pairs.
    pub fn cross_pair_count(&self) -> usize {
        let mut total = 0;
        for p in 0..self.k() {
            for q in (p + 1)..self.k() {
                total += self.part_sizes[p] * self.part_sizes[q];
            }
        }
        total
    }

    /// δ*(G): the minimum over vertices `v` and parts `p ≠ part(v)` of
    /// `|N(v) ∩ V_p|`.
    pub fn min_partite_degree(&self) -> Result<usize, GraphError> {
        if let Some(p) = self.part_sizes.iter().position(|&s| s == 0) {
            return Err(GraphError::EmptyPart(p));
        }
        let mut best = usize::MAX;
        for v in self.vertices() {
            for p in 0..self.k() {
                if p != v.part {
                    best = best.min(self.degree_into(v, p));
                }
            }
        }
        Ok(best)
    }

    fn pair_bitsets(&self, pair: &VertexSubsetPair) -> Result<(Bitset, Bitset), GraphError> {
        if pair.part_a == pair.part_b {
            return Err(GraphError::SamePartPair(pair.part_a));
        }
        for (p, set) in [(pair.part_a, &pair.a), (pair.part_b, &pair.b)] {
            if p >= self.k() {
                return Err(GraphError::VertexOutOfRange(VertexId::new(p, 0)));
            }
            if let Some(&i) = set.iter().find(|&&i| i >= self.part_sizes[p]) {
                return Err(GraphError::VertexOutOfRange(VertexId::new(p, i)));
            }
        }
        Ok((
            Bitset::from_indices(self.part_sizes[pair.part_a], pair.a.iter().copied()),
            Bitset::from_indices(self.part_sizes[pair.part_b], pair.b.iter().copied()),
        ))
    }

    /// e(A, B), the number of edges between the two sides of `pair`.
    pub fn edge_count_between(&self, pair: &VertexSubsetPair) -> Result<u64, GraphError> {
        let (_, b) = self.pair_bitsets(pair)?;
        Ok(self.edges_between(pair.part_a, &pair.a, pair.part_b, &b))
    }

    pub(crate) fn edges_between(&self, part_a: usize, a: &[usize], part_b: usize, b: &Bitset) -> u64 {
        a.iter()
            .map(|&i| self.degree_into_set(VertexId::new(part_a, i), part_b, b) as u64)
            .sum()
    }

    /// ē(A, B) = |A||B| − e(A, B).
    pub fn nonedge_count_between(&self, pair: &VertexSubsetPair) -> Result<u64, GraphError> {
        let e = self.edge_count_between(pair)?;
        Ok((pair.a.len() * pair.b.len()) as u64 - e)
    }

    /// d(A, B) = e(A, B) / (|A||B|), exactly.
    pub fn density(&self, pair: &VertexSubsetPair) -> Result<Rational, GraphError> {
        if pair.a.is_empty() || pair.b.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let e = self.edge_count_between(pair)?;
        Ok(Rational::new(e as i64, (pair.a.len() * pair.b.len()) as i64))
    }

    /// d̄(A, B) = ē(A, B) / (|A||B|) = 1 − d(A, B).
    pub fn nonedge_density(&self, pair: &VertexSubsetPair) -> Result<Rational, GraphError> {
        if pair.a.is_empty() || pair.b.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let ne = self.nonedge_count_between(pair)?;
        Ok(Rational::new(ne as i64, (pair.a.len() * pair.b.len()) as i64))
    }

    /// Vertices `a ∈ A` that are α-typical to `B`: `deg_B(a) ≥ (1 − α)|B|`.
    pub fn typical_vertices(
        &self,
        pair: &VertexSubsetPair,
        alpha: Rational,
    ) -> Result<Vec<VertexId>, GraphError> {
        if pair.b.is_empty() {
            return Err(GraphError::EmptySet);
        }
        if alpha < Rational::from_integer(0) || alpha > Rational::from_integer(1) {
            return Err(GraphError::AlphaOutOfRange(alpha));
        }
        let (_, b) = self.pair_bitsets(pair)?;
        let (num, den) = (*alpha.numer() as i128, *alpha.denom() as i128);
        let need = (den - num) * pair.b.len() as i128;
        Ok(pair
            .a
            .iter()
            .map(|&i| VertexId::new(pair.part_a, i))
            .filter(|&v| self.degree_into_set(v, pair.part_b, &b) as i128 * den >= need)
            .collect())
    }

    /// The subgraph induced on `keep`. Parts keep their order; within a part
    /// the surviving vertices are renumbered in increasing index order.
    pub fn induced<'a>(&self, keep: impl IntoIterator<Item = &'a VertexId>) -> InducedSubgraph {
        let mut origin: Vec<Vec<usize>> = vec![Vec::new(); self.k()];
        for v in keep {
            assert!(self.contains(*v), "induced: vertex {v} not in graph");
            origin[v.part].push(v.index);
        }
        for o in &mut origin {
            o.sort_unstable();
            o.dedup();
        }
        let sizes: Vec<usize> = origin.iter().map(Vec::len).collect();
        let mut graph = PartiteGraph::empty(&sizes).expect("k >= 2 already holds for the parent");
        for p in 0..self.k() {
            for (ni, &oi) in origin[p].iter().enumerate() {
                let u = VertexId::new(p, oi);
                for q in (p + 1)..self.k() {
                    let row = self.neighbors_in(u, q);
                    for (nj, &oj) in origin[q].iter().enumerate() {
                        if row.contains(oj) {
                            graph.set_edge(VertexId::new(p, ni), VertexId::new(q, nj), true);
                        }
                    }
                }
            }
        }
        InducedSubgraph { graph, origin }
    }

    /// A copy of the graph without the edge `uv`.
    pub fn remove_edge(&self, u: VertexId, v: VertexId) -> Result<PartiteGraph, GraphError> {
        self.check_pair(u, v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.set_edge(u, v, false);
        Ok(g)
    }

    /// A copy of the graph with the edge `uv` added.
    pub fn add_edge(&self, u: VertexId, v: VertexId) -> Result<PartiteGraph, GraphError> {
        self.check_pair(u, v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let mut g = self.clone();
        g.set_edge(u, v, true);
        Ok(g)
    }

    /// Whether every pair of the given vertices is adjacent.
    pub fn is_clique(&self, vs: &[VertexId]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }
}

/// An induced subgraph together with the map back to parent indices.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: PartiteGraph,
    /// `origin[p][i]` is the parent index of local vertex `(p, i)`.
    pub origin: Vec<Vec<usize>>,
}

impl InducedSubgraph {
    pub fn to_parent(&self, v: VertexId) -> VertexId {
        VertexId::new(v.part, self.origin[v.part][v.index])
    }

    pub fn from_parent(&self, v: VertexId) -> Option<VertexId> {
        self.origin
            .get(v.part)?
            .binary_search(&v.index)
            .ok()
            .map(|i| VertexId::new(v.part, i))
    }
}

/// Per-part counts of a vertex set.
pub fn part_profile(k: usize, set: &VertexSet) -> Vec<usize> {
    let mut counts = vec![0; k];
    for v in set {
        counts[v.part] += 1;
    }
    counts
}

/// A vertex set is balanced when it meets every part equally often.
pub fn is_balanced_set(k: usize, set: &VertexSet) -> bool {
    part_profile(k, set).windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: usize, i: usize) -> VertexId {
        VertexId::new(p, i)
    }

    fn complete(sizes: &[usize]) -> PartiteGraph {
        let g = PartiteGraph::empty(sizes).unwrap();
        let pairs: Vec<_> = g
            .vertices()
            .flat_map(|u| g.vertices().filter(move |w| w.part > u.part).map(move |w| (u, w)))
            .collect();
        PartiteGraph::from_edges(sizes, pairs).unwrap()
    }

    #[test]
    fn rejects_single_part() {
        assert_eq!(PartiteGraph::empty(&[3]), Err(GraphError::TooFewParts(1)));
    }

    #[test]
    fn rejects_intra_part_edge() {
        let err = PartiteGraph::from_edges(&[2, 2], [(v(0, 0), v(0, 1))]).unwrap_err();
        assert_eq!(err, GraphError::SamePart(v(0, 0), v(0, 1)));
    }

    #[test]
    fn min_degree_of_complete_graph() {
        assert_eq!(complete(&[4, 4, 4]).min_partite_degree().unwrap(), 4);
    }

    #[test]
    fn min_degree_rejects_empty_part() {
        let g = PartiteGraph::empty(&[2, 0, 2]).unwrap();
        assert_eq!(g.min_partite_degree(), Err(GraphError::EmptyPart(1)));
    }

    #[test]
    fn density_edge_cases() {
        let g = complete(&[3, 3]);
        let full = VertexSubsetPair::whole_parts(&g, 0, 1).unwrap();
        assert_eq!(g.density(&full).unwrap(), Rational::from_integer(1));
        assert_eq!(g.nonedge_density(&full).unwrap(), Rational::from_integer(0));

        let e = PartiteGraph::empty(&[3, 3]).unwrap();
        assert_eq!(e.nonedge_density(&full).unwrap(), Rational::from_integer(1));
        assert_eq!(e.nonedge_count_between(&full).unwrap(), 9);

        let empty_side = VertexSubsetPair::new(0, [], 1, [0, 1]).unwrap();
        assert_eq!(g.density(&empty_side), Err(GraphError::EmptySet));
        assert_eq!(g.nonedge_density(&empty_side), Err(GraphError::EmptySet));
    }

    #[test]
    fn complete_pair_minus_edge() {
        let g = complete(&[3, 4]).remove_edge(v(0, 1), v(1, 2)).unwrap();
        let pair = VertexSubsetPair::whole_parts(&g, 0, 1).unwrap();
        assert_eq!(g.density(&pair).unwrap(), Rational::new(11, 12));
    }

    #[test]
    fn remove_then_add_restores() {
        let g = complete(&[2, 3, 2]);
        let h = g.remove_edge(v(0, 0), v(2, 1)).unwrap();
        assert_ne!(g, h);
        assert_eq!(h.add_edge(v(2, 1), v(0, 0)).unwrap(), g);
        assert_eq!(
            h.remove_edge(v(0, 0), v(2, 1)),
            Err(GraphError::MissingEdge(v(0, 0), v(2, 1)))
        );
        assert!(g.min_partite_degree().unwrap() - h.min_partite_degree().unwrap() <= 1);
    }

    #[test]
    fn typical_vertices_extremes() {
        let g = complete(&[3, 3]);
        let pair = VertexSubsetPair::whole_parts(&g, 0, 1).unwrap();
        assert_eq!(g.typical_vertices(&pair, Rational::from_integer(0)).unwrap().len(), 3);
        let e = PartiteGraph::empty(&[3, 3]).unwrap();
        assert!(e.typical_vertices(&pair, Rational::new(9, 10)).unwrap().is_empty());
        let no_b = VertexSubsetPair::new(0, [0], 1, []).unwrap();
        assert_eq!(g.typical_vertices(&no_b, Rational::new(1, 2)), Err(GraphError::EmptySet));
    }

    #[test]
    fn induced_keeps_origin_map() {
        let g = complete(&[3, 3, 3]);
        assert_eq!(g.induced(&g.vertex_set()).graph, g);
        let none = g.induced(&VertexSet::new());
        assert_eq!(none.graph.part_sizes(), &[0, 0, 0]);
        let keep: VertexSet = [v(0, 2), v(1, 0), v(1, 2)].into_iter().collect();
        let sub = g.induced(&keep);
        assert_eq!(sub.graph.part_sizes(), &[1, 2, 0]);
        assert_eq!(sub.to_parent(v(1, 1)), v(1, 2));
        assert_eq!(sub.from_parent(v(0, 2)), Some(v(0, 0)));
        assert_eq!(sub.from_parent(v(0, 1)), None);
        assert_eq!(sub.graph.edge_count(), 2);
    }

    #[test]
    fn canonical_edge_order() {
        let g = PartiteGraph::from_edges(&[2, 2], [(v(1, 1), v(0, 1)), (v(0, 0), v(1, 0))]).unwrap();
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(v(0, 0), v(1, 0)), (v(0, 1), v(1, 1))]);
    }
}
