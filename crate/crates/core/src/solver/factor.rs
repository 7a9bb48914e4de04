//! Exact-cover branch and bound for clique factors.
//!
//! The search branches on the uncovered vertex contained in the fewest
//! still-available cliques (ties broken by `(part, index)`), trying its
//! cliques in lexicographic order.

use serde::{Deserialize, Serialize};

use crate::graph::{is_balanced_set, part_profile, PartiteGraph, VertexId, VertexSet};
use crate::params::{Budget, Limits};

use super::enumerate::walk;
use super::{verify_matching, CliqueMatching, CrossingClique, SolverError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", content = "factor", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FactorOutcome {
    Found(CliqueMatching),
    /// The search tree was fully explored without finding a factor.
    None,
    /// The budget ran out before the search could decide.
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub cliques: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorSearch {
    pub outcome: FactorOutcome,
    pub stats: SearchStats,
}

impl FactorSearch {
    pub fn factor(&self) -> Option<&CliqueMatching> {
        match &self.outcome {
            FactorOutcome::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.outcome, FactorOutcome::Found(_))
    }

    pub fn is_none(&self) -> bool {
        matches!(self.outcome, FactorOutcome::None)
    }

    pub fn decision_label(&self) -> &'static str {
        match self.outcome {
            FactorOutcome::Found(_) => "FACTOR",
            FactorOutcome::None => "NONE",
            FactorOutcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Crossing cliques of a graph indexed by vertex.
pub(crate) struct CliqueTable {
    pub k: usize,
    pub sizes: Vec<usize>,
    pub cliques: Vec<Vec<usize>>,
    /// `by_vertex[part][index]`: ids of cliques through that vertex, ascending.
    pub by_vertex: Vec<Vec<Vec<u32>>>,
}

impl CliqueTable {
    pub fn build(g: &PartiteGraph) -> Self {
        let mut cliques = Vec::new();
        walk(g, &mut |c| {
            cliques.push(c.to_vec());
            true
        });
        let mut by_vertex: Vec<Vec<Vec<u32>>> = g.part_sizes().iter().map(|&s| vec![Vec::new(); s]).collect();
        for (id, c) in cliques.iter().enumerate() {
            for (p, &i) in c.iter().enumerate() {
                by_vertex[p][i].push(id as u32);
            }
        }
        CliqueTable { k: g.k(), sizes: g.part_sizes().to_vec(), cliques, by_vertex }
    }

    #[inline]
    pub fn alive(&self, id: usize, used: &[Vec<bool>]) -> bool {
        self.cliques[id].iter().enumerate().all(|(p, &i)| !used[p][i])
    }

    pub fn mark(&self, id: usize, used: &mut [Vec<bool>], value: bool) {
        for (p, &i) in self.cliques[id].iter().enumerate() {
            used[p][i] = value;
        }
    }

    /// For each vertex, the number of alive cliques through it.
    pub fn alive_counts(&self, used: &[Vec<bool>]) -> Vec<Vec<u32>> {
        let mut counts: Vec<Vec<u32>> = self.sizes.iter().map(|&s| vec![0; s]).collect();
        for (id, c) in self.cliques.iter().enumerate() {
            if self.alive(id, used) {
                for (p, &i) in c.iter().enumerate() {
                    counts[p][i] += 1;
                }
            }
        }
        counts
    }
}

struct Exhausted;

fn cover_rec(
    table: &CliqueTable,
    used: &mut [Vec<bool>],
    remaining: usize,
    chosen: &mut Vec<usize>,
    budget: &mut Budget,
) -> Result<bool, Exhausted> {
    if !budget.tick() {
        return Err(Exhausted);
    }
    if remaining == 0 {
        return Ok(true);
    }
    let counts = table.alive_counts(used);
    let mut pick: Option<(u32, usize, usize)> = None;
    for (p, row) in counts.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            if !used[p][i] && pick.is_none_or(|(best, _, _)| c < best) {
                pick = Some((c, p, i));
            }
        }
    }
    let (count, p, i) = pick.expect("remaining > 0 leaves an uncovered vertex");
    if count == 0 {
        return Ok(false);
    }
    for &id in &table.by_vertex[p][i] {
        let id = id as usize;
        if !table.alive(id, used) {
            continue;
        }
        table.mark(id, used, true);
        chosen.push(id);
        let found = cover_rec(table, used, remaining - 1, chosen, budget)?;
        if found {
            return Ok(true);
        }
        chosen.pop();
        table.mark(id, used, false);
    }
    Ok(false)
}

/// Decides whether a balanced graph has a `K_k`-factor.
///
/// A returned factor has already passed [`verify_matching`] against the
/// full vertex set.
pub fn find_factor(g: &PartiteGraph, limits: &Limits) -> Result<FactorSearch, SolverError> {
    if !g.is_balanced() {
        return Err(SolverError::Unbalanced(g.part_sizes().to_vec()));
    }
    let mut budget = limits.start();
    let n = g.part_size(0);
    let table = CliqueTable::build(g);
    let mut used: Vec<Vec<bool>> = table.sizes.iter().map(|&s| vec![false; s]).collect();
    let mut chosen = Vec::with_capacity(n);
    let result = cover_rec(&table, &mut used, n, &mut chosen, &mut budget);
    let stats = SearchStats {
        nodes: budget.nodes(),
        cliques: table.cliques.len() as u64,
        elapsed_ms: budget.elapsed().as_secs_f64() * 1e3,
    };
    let outcome = match result {
        Err(Exhausted) => FactorOutcome::Inconclusive,
        Ok(false) => FactorOutcome::None,
        Ok(true) => {
            let mut m = CliqueMatching::new(
                chosen.iter().map(|&id| CrossingClique::unchecked(table.cliques[id].clone())).collect(),
            );
            m.canonicalize();
            let verdict = verify_matching(g, &m, Some(&g.vertex_set()));
            assert!(verdict.valid, "solver produced an invalid factor: {:?}", verdict.defects);
            FactorOutcome::Found(m)
        }
    };
    Ok(FactorSearch { outcome, stats })
}

/// A `K_k`-factor of `G[U]`, reported in the parent graph's vertex ids.
pub fn factor_on_subset(g: &PartiteGraph, subset: &VertexSet, limits: &Limits) -> Result<FactorSearch, SolverError> {
    for &v in subset {
        g.check_vertex(v)?;
    }
    if !is_balanced_set(g.k(), subset) {
        return Err(SolverError::Unbalanced(part_profile(g.k(), subset)));
    }
    let sub = g.induced(subset);
    let mut search = find_factor(&sub.graph, limits)?;
    if let FactorOutcome::Found(m) = &mut search.outcome {
        let lifted: Vec<CrossingClique> =
            m.cliques.iter().map(|c| c.map_vertices(|v: VertexId| sub.to_parent(v))).collect();
        *m = CliqueMatching::new(lifted);
        m.canonicalize();
    }
    Ok(search)
}
