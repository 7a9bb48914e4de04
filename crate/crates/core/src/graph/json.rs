//! Canonical JSON graph format.
//!
//! `{ "k": int, "part_sizes": [int], "edges": [[[part,index],[part,index]], ...] }`
//! with the lower-part endpoint first and edges sorted lexicographically.
//! The writer puts one edge per line so files diff cleanly.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{GraphError, PartiteGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub k: usize,
    pub part_sizes: Vec<usize>,
    pub edges: Vec<[VertexId; 2]>,
}

impl From<&PartiteGraph> for GraphFile {
    fn from(g: &PartiteGraph) -> Self {
        GraphFile {
            k: g.k(),
            part_sizes: g.part_sizes().to_vec(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphFile> for PartiteGraph {
    type Error = GraphError;

    fn try_from(file: GraphFile) -> Result<Self, GraphError> {
        if file.k != file.part_sizes.len() {
            return Err(GraphError::PartCountMismatch {
                declared: file.k,
                actual: file.part_sizes.len(),
            });
        }
        PartiteGraph::from_edges(&file.part_sizes, file.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl PartiteGraph {
    /// Serializes to the canonical, diff-stable JSON text.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let sizes: Vec<String> = self.part_sizes().iter().map(usize::to_string).collect();
        write!(out, "{{\"k\":{},\"part_sizes\":[{}],\"edges\":[", self.k(), sizes.join(",")).unwrap();
        let mut first = true;
        for (u, v) in self.edges() {
            out.push_str(if first { "\n" } else { ",\n" });
            first = false;
            write!(out, "[[{},{}],[{},{}]]", u.part, u.index, v.part, v.index).unwrap();
        }
        if !first {
            out.push('\n');
        }
        out.push_str("]}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<PartiteGraph, GraphError> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        PartiteGraph::try_from(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        let g = PartiteGraph::from_edges(
            &[2, 1],
            [(VertexId::new(1, 0), VertexId::new(0, 1)), (VertexId::new(0, 0), VertexId::new(1, 0))],
        )
        .unwrap();
        assert_eq!(
            g.to_json(),
            "{\"k\":2,\"part_sizes\":[2,1],\"edges\":[\n[[0,0],[1,0]],\n[[0,1],[1,0]]\n]}\n"
        );
        let empty = PartiteGraph::empty(&[1, 1]).unwrap();
        assert_eq!(empty.to_json(), "{\"k\":2,\"part_sizes\":[1,1],\"edges\":[]}\n");
        assert_eq!(PartiteGraph::from_json(&empty.to_json()).unwrap(), empty);
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(PartiteGraph::from_json("{"), Err(GraphError::Json(_))));
        assert_eq!(
            PartiteGraph::from_json(r#"{"k":3,"part_sizes":[1,1],"edges":[]}"#),
            Err(GraphError::PartCountMismatch { declared: 3, actual: 2 })
        );
        assert_eq!(
            PartiteGraph::from_json(r#"{"k":2,"part_sizes":[1,1],"edges":[[[0,0],[1,4]]]}"#),
            Err(GraphError::VertexOutOfRange(VertexId::new(1, 4)))
        );
    }
}
