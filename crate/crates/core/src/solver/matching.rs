use serde::{Deserialize, Serialize};

use crate::graph::PartiteGraph;
use crate::params::{Budget, Limits};

use super::factor::{CliqueTable, SearchStats};
use super::{verify_matching, CliqueMatching, CrossingClique};

/// Result of [`max_matching`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxMatching {
    pub matching: CliqueMatching,
    /// `true` when the search finished, so no larger matching exists.
    /// `false` means the matching is maximal but only heuristically large.
    pub proven_maximum: bool,
    pub stats: SearchStats,
}

struct Search<'a> {
    table: &'a CliqueTable,
    used: Vec<Vec<bool>>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    budget: Budget,
}

impl Search<'_> {
    fn run(&mut self) -> bool {
        if !self.budget.tick() {
            return false;
        }
        let counts = self.table.alive_counts(&self.used);
        // per part, vertices still able to join a clique
        let mut live = vec![0usize; self.table.k];
        let mut pick: Option<(u32, usize, usize)> = None;
        for (p, row) in counts.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                if c > 0 && !self.used[p][i] {
                    live[p] += 1;
                    if pick.is_none_or(|(b, _, _)| c < b) {
                        pick = Some((c, p, i));
                    }
                }
            }
        }
        let bound = self.chosen.len() + live.iter().copied().min().unwrap_or(0);
        if bound <= self.best.len() {
            return true;
        }
        let Some((_, p, i)) = pick else {
            self.best = self.chosen.clone();
            return true;
        };
        for &id in &self.table.by_vertex[p][i] {
            let id = id as usize;
            if !self.table.alive(id, &self.used) {
                continue;
            }
            self.table.mark(id, &mut self.used, true);
            self.chosen.push(id);
            let ok = self.run();
            self.chosen.pop();
            self.table.mark(id, &mut self.used, false);
            if !ok {
                return false;
            }
        }
        // leave (p, i) uncovered
        self.used[p][i] = true;
        let ok = self.run();
        self.used[p][i] = false;
        ok
    }
}

/// A maximum `K_k`-matching by branch and bound, seeded with a greedy
/// lexicographic matching. If the budget runs out, the best matching found
/// so far is returned with `proven_maximum = false`; it is always maximal.
pub fn max_matching(g: &PartiteGraph, limits: &Limits) -> MaxMatching {
    let table = CliqueTable::build(g);
    let mut used: Vec<Vec<bool>> = table.sizes.iter().map(|&s| vec![false; s]).collect();
    let mut greedy = Vec::new();
    for id in 0..table.cliques.len() {
        if table.alive(id, &used) {
            table.mark(id, &mut used, true);
            greedy.push(id);
        }
    }
    for row in &mut used {
        row.fill(false);
    }
    let mut search = Search { table: &table, used, chosen: Vec::new(), best: greedy.clone(), budget: limits.start() };
    let finished = search.run();
    let mut best = search.best;
    if !finished {
        // a partial incumbent may be non-maximal; top it up greedily
        let mut used: Vec<Vec<bool>> = table.sizes.iter().map(|&s| vec![false; s]).collect();
        for &id in &best {
            table.mark(id, &mut used, true);
        }
        for id in 0..table.cliques.len() {
            if table.alive(id, &used) {
                table.mark(id, &mut used, true);
                best.push(id);
            }
        }
    }
    let mut matching =
        CliqueMatching::new(best.iter().map(|&id| CrossingClique::unchecked(table.cliques[id].clone())).collect());
    matching.canonicalize();
    let verdict = verify_matching(g, &matching, None);
    assert!(verdict.valid, "max_matching produced an invalid matching: {:?}", verdict.defects);
    MaxMatching {
        matching,
        proven_maximum: finished,
        stats: SearchStats {
            nodes: search.budget.nodes(),
            cliques: table.cliques.len() as u64,
            elapsed_ms: search.budget.elapsed().as_secs_f64() * 1e3,
        },
    }
}
