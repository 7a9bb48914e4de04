use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{PartiteGraph, VertexId, VertexSet};

use super::CliqueMatching;

/// Why a matching failed verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum Defect {
    WrongArity { clique: usize, len: usize },
    OutOfRange { clique: usize, vertex: VertexId },
    MissingEdge { clique: usize, u: VertexId, v: VertexId },
    Overlap { vertex: VertexId },
    Uncovered { vertex: VertexId },
    Extra { vertex: VertexId },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::WrongArity { clique, len } => write!(f, "clique #{clique} has {len} vertices"),
            Defect::OutOfRange { clique, vertex } => write!(f, "clique #{clique}: vertex {vertex} out of range"),
            Defect::MissingEdge { clique, u, v } => write!(f, "clique #{clique}: {u} and {v} not adjacent"),
            Defect::Overlap { vertex } => write!(f, "overlap: {vertex} used twice"),
            Defect::Uncovered { vertex } => write!(f, "required vertex {vertex} not covered"),
            Defect::Extra { vertex } => write!(f, "vertex {vertex} covered but not required"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingVerdict {
    pub valid: bool,
    pub defects: Vec<Defect>,
}

impl MatchingVerdict {
    pub fn diagnostic(&self) -> String {
        if self.valid {
            "ok".to_string()
        } else {
            self.defects.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        }
    }
}

/// Checks that every clique is a crossing `K_k` of `g`, that cliques are
/// pairwise disjoint, and, when `required_cover` is given, that the covered
/// vertices are exactly that set.
pub fn verify_matching(g: &PartiteGraph, m: &CliqueMatching, required_cover: Option<&VertexSet>) -> MatchingVerdict {
    let mut defects = Vec::new();
    let mut covered = VertexSet::new();
    for (ci, clique) in m.cliques.iter().enumerate() {
        let vs: Vec<VertexId> = clique.vertices().collect();
        if vs.len() != g.k() {
            defects.push(Defect::WrongArity { clique: ci, len: vs.len() });
        }
        let mut in_range = true;
        for &v in &vs {
            if !g.contains(v) {
                defects.push(Defect::OutOfRange { clique: ci, vertex: v });
                in_range = false;
            }
        }
        if in_range {
            for (a, &u) in vs.iter().enumerate() {
                for &w in &vs[a + 1..] {
                    if !g.has_edge(u, w) {
                        defects.push(Defect::MissingEdge { clique: ci, u, v: w });
                    }
                }
            }
        }
        for v in vs {
            if !covered.insert(v) {
                defects.push(Defect::Overlap { vertex: v });
            }
        }
    }
    if let Some(required) = required_cover {
        defects.extend(required.difference(&covered).map(|&v| Defect::Uncovered { vertex: v }));
        defects.extend(covered.difference(required).map(|&v| Defect::Extra { vertex: v }));
    }
    MatchingVerdict { valid: defects.is_empty(), defects }
}
