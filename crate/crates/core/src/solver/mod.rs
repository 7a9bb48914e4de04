//! Exact search and verification for crossing cliques, clique matchings and
//! clique factors.

mod enumerate;
mod factor;
mod matching;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, PartiteGraph, VertexId, VertexSet};

pub use enumerate::{count_crossing_cliques, enumerate_crossing_cliques};
pub use factor::{factor_on_subset, find_factor, FactorOutcome, FactorSearch, SearchStats};
pub use matching::{max_matching, MaxMatching};
pub use verify::{verify_matching, Defect, MatchingVerdict};

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("a factor needs equal part sizes, got {0:?}")]
    Unbalanced(Vec<usize>),
    #[error("tuple has {got} vertices, expected one per part ({k})")]
    TupleArity { got: usize, k: usize },
    #[error("tuple is not crossing: {0}")]
    NotCrossing(String),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
}

/// One vertex from each part, `indices[p]` being the vertex of part `p`.
/// No adjacency is implied.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexId>", into = "Vec<VertexId>")]
pub struct CrossingTuple {
    indices: Vec<usize>,
}

impl CrossingTuple {
    pub fn new(indices: Vec<usize>) -> Self {
        CrossingTuple { indices }
    }

    /// Accepts the vertices in any order; they must hit parts `0..len`
    /// exactly once each.
    pub fn from_vertices(vertices: &[VertexId]) -> Result<Self, SolverError> {
        let k = vertices.len();
        let mut indices = vec![usize::MAX; k];
        for v in vertices {
            if v.part >= k || indices[v.part] != usize::MAX {
                let listed: Vec<String> = vertices.iter().map(ToString::to_string).collect();
                return Err(SolverError::NotCrossing(listed.join(" ")));
            }
            indices[v.part] = v.index;
        }
        Ok(CrossingTuple { indices })
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn vertex(&self, part: usize) -> VertexId {
        VertexId::new(part, self.indices[part])
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.indices.iter().enumerate().map(|(p, &i)| VertexId::new(p, i))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.indices.get(v.part) == Some(&v.index)
    }

    /// Checks arity and index ranges against `g`.
    pub fn check_in(&self, g: &PartiteGraph) -> Result<(), SolverError> {
        if self.k() != g.k() {
            return Err(SolverError::TupleArity { got: self.k(), k: g.k() });
        }
        for v in self.vertices() {
            g.check_vertex(v)?;
        }
        Ok(())
    }

    pub fn is_clique_in(&self, g: &PartiteGraph) -> bool {
        let vs: Vec<VertexId> = self.vertices().collect();
        g.is_clique(&vs)
    }
}

impl TryFrom<Vec<VertexId>> for CrossingTuple {
    type Error = SolverError;

    fn try_from(vs: Vec<VertexId>) -> Result<Self, SolverError> {
        CrossingTuple::from_vertices(&vs)
    }
}

impl From<CrossingTuple> for Vec<VertexId> {
    fn from(t: CrossingTuple) -> Self {
        t.vertices().collect()
    }
}

impl fmt::Display for CrossingTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// A crossing tuple whose vertices are pairwise adjacent: a crossing `K_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CrossingClique(CrossingTuple);

impl CrossingClique {
    pub fn new(g: &PartiteGraph, tuple: CrossingTuple) -> Result<Self, SolverError> {
        tuple.check_in(g)?;
        let vs: Vec<VertexId> = tuple.vertices().collect();
        for (i, &u) in vs.iter().enumerate() {
            for &w in &vs[i + 1..] {
                if !g.has_edge(u, w) {
                    return Err(SolverError::NotAdjacent(u, w));
                }
            }
        }
        Ok(CrossingClique(tuple))
    }

    pub(crate) fn unchecked(indices: Vec<usize>) -> Self {
        CrossingClique(CrossingTuple::new(indices))
    }

    pub fn tuple(&self) -> &CrossingTuple {
        &self.0
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.vertices()
    }

    /// Relabels every vertex through `map`; part `p` stays part `p`.
    pub fn map_vertices(&self, mut map: impl FnMut(VertexId) -> VertexId) -> CrossingClique {
        CrossingClique(CrossingTuple::new(self.0.vertices().map(|v| map(v).index).collect()))
    }
}

impl fmt::Display for CrossingClique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Vertex-disjoint crossing cliques. Serializes as a JSON list of k-vectors
/// of `[part, index]`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CliqueMatching {
    pub cliques: Vec<CrossingClique>,
}

impl CliqueMatching {
    pub fn new(cliques: Vec<CrossingClique>) -> Self {
        CliqueMatching { cliques }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.cliques.iter().flat_map(|c| c.vertices()).collect()
    }

    pub fn extend(&mut self, other: CliqueMatching) {
        self.cliques.extend(other.cliques);
    }

    /// Sorts cliques into canonical order.
    pub fn canonicalize(&mut self) {
        self.cliques.sort();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matching serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
