use serde::{Deserialize, Serialize};

use crate::graph::{PartiteGraph, Rational, VertexId};

use super::ExtremalError;

/// Greedily deletes edges in canonical order while both endpoints keep more
/// than `floor` neighbours in the other's part. A single pass suffices:
/// degrees only fall, so an edge kept once stays critical.
pub fn minimize_edges(g: &PartiteGraph, floor: usize) -> Result<PartiteGraph, ExtremalError> {
    let actual = g.min_partite_degree()?;
    if actual < floor {
        return Err(ExtremalError::BelowFloor { floor, actual });
    }
    let k = g.k();
    // deg[p][i][q]
    let mut deg: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|p| {
            (0..g.part_size(p)).map(|i| (0..k).map(|q| if q == p { 0 } else { g.degree_into(VertexId::new(p, i), q) }).collect()).collect()
        })
        .collect();
    let mut out = g.clone();
    for (u, v) in g.edges() {
        if deg[u.part][u.index][v.part] > floor && deg[v.part][v.index][u.part] > floor {
            out.set_edge(u, v, false);
            deg[u.part][u.index][v.part] -= 1;
            deg[v.part][v.index][u.part] -= 1;
        }
    }
    Ok(out)
}

/// Where the vertices of one other part sit relative to `N(x)` and `N(y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartSplit {
    pub part: usize,
    /// `N(x) \ N(y)`
    pub only_x: Vec<usize>,
    /// `N(y) \ N(x)`
    pub only_y: Vec<usize>,
    pub both: Vec<usize>,
    pub neither: Vec<usize>,
    /// `(1 − k²α) n/k < |only_x| ≤ (1 + kα) n/k`, when α is given.
    pub only_x_in_window: Option<bool>,
    pub only_y_in_window: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeficiencyProfile {
    pub x: VertexId,
    pub y: VertexId,
    pub alpha: Option<Rational>,
    pub window: Option<(Rational, Rational)>,
    pub parts: Vec<PartSplit>,
}

pub fn deficiency_profile(
    g: &PartiteGraph,
    x: VertexId,
    y: VertexId,
    alpha: Option<Rational>,
) -> Result<DeficiencyProfile, ExtremalError> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x.part != y.part {
        return Err(ExtremalError::DifferentParts(x, y));
    }
    if x == y {
        return Err(ExtremalError::SameVertex(x));
    }
    let k = g.k() as i64;
    let window = alpha.map(|a| {
        let n_over_k = Rational::new(g.part_size(x.part) as i64, k);
        let one = Rational::from_integer(1);
        ((one - a * k * k) * n_over_k, (one + a * k) * n_over_k)
    });
    let inside = |len: usize| {
        window.map(|(lo, hi)| {
            let s = Rational::from_integer(len as i64);
            lo < s && s <= hi
        })
    };
    let parts = (0..g.k())
        .filter(|&p| p != x.part)
        .map(|p| {
            let (nx, ny) = (g.neighbors_in(x, p), g.neighbors_in(y, p));
            let mut split = PartSplit {
                part: p,
                only_x: Vec::new(),
                only_y: Vec::new(),
                both: Vec::new(),
                neither: Vec::new(),
                only_x_in_window: None,
                only_y_in_window: None,
            };
            for i in 0..g.part_size(p) {
                match (nx.contains(i), ny.contains(i)) {
                    (true, false) => split.only_x.push(i),
                    (false, true) => split.only_y.push(i),
                    (true, true) => split.both.push(i),
                    (false, false) => split.neither.push(i),
                }
            }
            split.only_x_in_window = inside(split.only_x.len());
            split.only_y_in_window = inside(split.only_y.len());
            split
        })
        .collect();
    Ok(DeficiencyProfile { x, y, alpha, window, parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete_partite;

    #[test]
    fn floor_zero_clears_everything() {
        let g = complete_partite(&[3, 3, 3]).unwrap();
        assert_eq!(minimize_edges(&g, 0).unwrap().edge_count(), 0);
        assert_eq!(minimize_edges(&g, 3).unwrap(), g);
        assert_eq!(minimize_edges(&g, 4), Err(ExtremalError::BelowFloor { floor: 4, actual: 3 }));
    }

    #[test]
    fn complete_graph_profile() {
        let g = complete_partite(&[3, 3, 3]).unwrap();
        let p = deficiency_profile(&g, VertexId::new(0, 0), VertexId::new(0, 1), None).unwrap();
        for split in &p.parts {
            assert_eq!(split.both, vec![0, 1, 2]);
            assert!(split.only_x.is_empty() && split.only_y.is_empty() && split.neither.is_empty());
        }
        assert_eq!(
            deficiency_profile(&g, VertexId::new(0, 0), VertexId::new(1, 1), None),
            Err(ExtremalError::DifferentParts(VertexId::new(0, 0), VertexId::new(1, 1)))
        );
    }
}
