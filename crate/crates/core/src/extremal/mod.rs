//! Detection and certification of extremal structure: Δ-extremality,
//! (ε, Δ)-approximation to Θ_{k×r}(t), dense clique counts, the sparse-clique
//! dichotomy, edge-minimal reduction and the neighbourhood split used when
//! two vertices fail to reach each other.
//!
//! Searches run exhaustively when every part has at most
//! [`EXHAUSTIVE_PART_LIMIT`] vertices; only then does a negative answer
//! refute. Larger parts use seeded multi-restart local search, and a
//! negative answer there is not a proof of anything.

mod approx;
mod counts;
mod extremality;
mod grid;
mod local;
mod structure;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, VertexId};

pub use approx::{approximate_to_theta, approximate_to_theta_with, size_window, ApproximationCertificate, ThetaQuery};
pub use counts::{kk_count_check, lemma3_dichotomy, KkCountReport, Lemma3Overrides, Lemma3Report};
pub use extremality::{is_delta_extremal, is_delta_extremal_with, ExtremalityCertificate};
pub use grid::GridPartition;
pub use structure::{deficiency_profile, minimize_edges, DeficiencyProfile, PartSplit};

/// Largest part size for which partition searches are exhaustive.
pub const EXHAUSTIVE_PART_LIMIT: usize = 6;

#[derive(Debug, Error, PartialEq)]
pub enum ExtremalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph must be balanced, got part sizes {0:?}")]
    Unbalanced(Vec<usize>),
    #[error("target set size floor(n/k) is zero (n = {n}, k = {k})")]
    Degenerate { n: usize, k: usize },
    #[error("r and t must satisfy r >= 1 and t > 0")]
    Shape,
    #[error("alpha {alpha} exceeds (k+1)^-4 = {max}")]
    AlphaTooLarge { alpha: String, max: String },
    #[error("density d(V_{i}, V_{j}) = {density} is below 1 - alpha")]
    SparsePair { i: usize, j: usize, density: String },
    #[error("part {part} has {size} vertices, fewer than (k-1)(1-eps)t = {required}")]
    PartTooSmall { part: usize, size: usize, required: String },
    #[error("vertex {vertex} misses {missing} vertices of part {part}, more than (1+eps)t = {allowed}")]
    TooManyNonNeighbors { vertex: VertexId, part: usize, missing: usize, allowed: String },
    #[error("minimum partite degree {actual} is below the floor {floor}")]
    BelowFloor { floor: usize, actual: usize },
    #[error("{0} and {1} must lie in the same part")]
    DifferentParts(VertexId, VertexId),
    #[error("x and y must be distinct, both are {0}")]
    SameVertex(VertexId),
}

/// How a partition search was carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchRegime {
    Exhaustive,
    Heuristic,
}

/// Outcome of a structure search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Detection<C> {
    Found(C),
    NotFound {
        /// `true` only when an exhaustive search completed, so no
        /// certificate exists.
        refuted: bool,
        regime: SearchRegime,
        nodes: u64,
    },
}

impl<C> Detection<C> {
    pub fn found(&self) -> Option<&C> {
        match self {
            Detection::Found(c) => Some(c),
            Detection::NotFound { .. } => None,
        }
    }

    pub fn into_found(self) -> Option<C> {
        match self {
            Detection::Found(c) => Some(c),
            Detection::NotFound { .. } => None,
        }
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Detection::NotFound { refuted: true, .. })
    }
}
