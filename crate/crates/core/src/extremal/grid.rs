use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::graph::{Bitset, GraphError, PartiteGraph, Rational, VertexId, VertexSubsetPair};

/// A split of every part `V_i` into `rows` labelled groups `V_{i1}, …, V_{ir}`.
///
/// Serialized as `{ "rows": r, "groups": [[[part,index], …], …] }` with one
/// group per `(part, row)` in part-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GridFile", into = "GridFile")]
pub struct GridPartition {
    rows: usize,
    /// `groups[part][row]`: sorted indices inside `part`.
    groups: Vec<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
struct GridFile {
    rows: usize,
    groups: Vec<Vec<VertexId>>,
}

impl TryFrom<GridFile> for GridPartition {
    type Error = String;

    fn try_from(file: GridFile) -> Result<Self, String> {
        if file.rows == 0 || file.groups.len() % file.rows != 0 {
            return Err(format!("{} groups cannot be split into rows of {}", file.groups.len(), file.rows));
        }
        let k = file.groups.len() / file.rows;
        let mut groups = vec![vec![Vec::new(); file.rows]; k];
        for (slot, members) in file.groups.into_iter().enumerate() {
            let (part, row) = (slot / file.rows, slot % file.rows);
            for v in members {
                if v.part != part {
                    return Err(format!("vertex {v} listed in a group of part {part}"));
                }
                groups[part][row].push(v.index);
            }
        }
        Ok(GridPartition::new(file.rows, groups))
    }
}

impl From<GridPartition> for GridFile {
    fn from(grid: GridPartition) -> Self {
        let groups = grid
            .groups
            .iter()
            .enumerate()
            .flat_map(|(p, rows)| {
                rows.iter().map(move |g| g.iter().map(|&i| VertexId::new(p, i)).collect())
            })
            .collect();
        GridFile { rows: grid.rows, groups }
    }
}

impl GridPartition {
    /// `groups[part][row]` lists indices; each group is sorted on entry.
    pub fn new(rows: usize, mut groups: Vec<Vec<Vec<usize>>>) -> Self {
        for part in &mut groups {
            for g in part.iter_mut() {
                g.sort_unstable();
            }
        }
        GridPartition { rows, groups }
    }

    /// Builds a grid from a per-vertex row assignment `rows_of[part][index]`.
    pub fn from_assignment(rows: usize, rows_of: &[Vec<usize>]) -> Self {
        let groups = rows_of
            .iter()
            .map(|assign| {
                let mut part = vec![Vec::new(); rows];
                for (i, &r) in assign.iter().enumerate() {
                    part[r].push(i);
                }
                part
            })
            .collect();
        GridPartition { rows, groups }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn k(&self) -> usize {
        self.groups.len()
    }

    pub fn group(&self, part: usize, row: usize) -> &[usize] {
        &self.groups[part][row]
    }

    pub fn group_vertices(&self, part: usize, row: usize) -> Vec<VertexId> {
        self.groups[part][row].iter().map(|&i| VertexId::new(part, i)).collect()
    }

    /// Checks that the groups of every part are disjoint and cover it.
    pub fn validate(&self, g: &PartiteGraph) -> Result<(), String> {
        if self.groups.len() != g.k() {
            return Err(format!("grid has {} parts, graph has {}", self.groups.len(), g.k()));
        }
        for (p, rows) in self.groups.iter().enumerate() {
            if rows.len() != self.rows {
                return Err(format!("part {p} has {} groups, expected {}", rows.len(), self.rows));
            }
            let mut seen = Bitset::new(g.part_size(p));
            for group in rows {
                for &i in group {
                    if i >= g.part_size(p) {
                        return Err(format!("vertex ({p},{i}) out of range"));
                    }
                    if seen.contains(i) {
                        return Err(format!("vertex ({p},{i}) appears in two groups"));
                    }
                    seen.insert(i);
                }
            }
            if seen.count() != g.part_size(p) {
                return Err(format!("groups of part {p} do not cover it"));
            }
        }
        Ok(())
    }

    /// max over groups of `||V_{ij}| − t| / t`.
    pub fn size_slack(&self, t: Rational) -> Rational {
        self.groups
            .iter()
            .flatten()
            .map(|g| (Rational::from_integer(g.len() as i64) - t).abs() / t)
            .max()
            .unwrap_or_else(|| Rational::from_integer(0))
    }

    /// `d(V_{ij}, V_{i'j'})`, or `None` if either group is empty.
    pub fn group_density(
        &self,
        g: &PartiteGraph,
        (i, j): (usize, usize),
        (i2, j2): (usize, usize),
    ) -> Result<Option<Rational>, GraphError> {
        let (a, b) = (&self.groups[i][j], &self.groups[i2][j2]);
        if a.is_empty() || b.is_empty() {
            return Ok(None);
        }
        let pair = VertexSubsetPair::new(i, a.iter().copied(), i2, b.iter().copied())?;
        g.density(&pair).map(Some)
    }

    /// max over `i ≠ i'` and rows `j` of `d(V_{ij}, V_{i'j})`; pairs with an
    /// empty side contribute nothing.
    pub fn max_same_row_density(&self, g: &PartiteGraph) -> Result<Rational, GraphError> {
        let mut best = Rational::from_integer(0);
        for i in 0..self.k() {
            for i2 in (i + 1)..self.k() {
                for j in 0..self.rows {
                    if let Some(d) = self.group_density(g, (i, j), (i2, j))? {
                        best = best.max(d);
                    }
                }
            }
        }
        Ok(best)
    }

    /// min over `i ≠ i'`, `j ≠ j'` of `d(V_{ij}, V_{i'j'})`, or `None` when
    /// no such pair of nonempty groups exists.
    pub fn min_cross_row_density(&self, g: &PartiteGraph) -> Result<Option<Rational>, GraphError> {
        let mut best: Option<Rational> = None;
        for i in 0..self.k() {
            for i2 in 0..self.k() {
                if i == i2 {
                    continue;
                }
                for j in 0..self.rows {
                    for j2 in 0..self.rows {
                        if j == j2 {
                            continue;
                        }
                        if let Some(d) = self.group_density(g, (i, j), (i2, j2))? {
                            best = Some(best.map_or(d, |b| b.min(d)));
                        }
                    }
                }
            }
        }
        Ok(best)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialization is infallible")
    }
}
