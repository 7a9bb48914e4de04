//! Brute-force reference implementations. They use only `has_edge` and part
//! sizes, never the library's search code.
#![allow(dead_code)]

use kfactor::graph::{PartiteGraph, Rational, VertexId};

pub fn v(p: usize, i: usize) -> VertexId {
    VertexId::new(p, i)
}

pub fn naive_min_partite_degree(g: &PartiteGraph) -> usize {
    let mut best = usize::MAX;
    for p in 0..g.k() {
        for i in 0..g.part_size(p) {
            for q in 0..g.k() {
                if q == p {
                    continue;
                }
                let d = (0..g.part_size(q)).filter(|&j| g.has_edge(v(p, i), v(q, j))).count();
                best = best.min(d);
            }
        }
    }
    best
}

pub fn naive_edges(g: &PartiteGraph, a: &[VertexId], b: &[VertexId]) -> usize {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).filter(|&(x, y)| g.has_edge(x, y)).count()
}

pub fn naive_density(g: &PartiteGraph, a: &[VertexId], b: &[VertexId]) -> Rational {
    Rational::new(naive_edges(g, a, b) as i64, (a.len() * b.len()) as i64)
}

fn is_clique(g: &PartiteGraph, vs: &[VertexId]) -> bool {
    (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| g.has_edge(vs[i], vs[j])))
}

/// All crossing cliques, by trying every tuple.
pub fn naive_cliques(g: &PartiteGraph) -> Vec<Vec<usize>> {
    let k = g.k();
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    if g.part_sizes().contains(&0) {
        return out;
    }
    loop {
        let vs: Vec<VertexId> = idx.iter().enumerate().map(|(p, &i)| v(p, i)).collect();
        if is_clique(g, &vs) {
            out.push(idx.clone());
        }
        let mut p = k;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < g.part_size(p) {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Whether `set` can be partitioned into crossing cliques: the first
/// uncovered vertex must lie in some clique made of uncovered vertices.
pub fn naive_factor_on(g: &PartiteGraph, set: &[VertexId]) -> bool {
    let k = g.k();
    let mut per_part = vec![Vec::new(); k];
    for &x in set {
        per_part[x.part].push(x);
    }
    if per_part.iter().any(|p| p.len() != per_part[0].len()) {
        return false;
    }
    fn rec(g: &PartiteGraph, per_part: &mut Vec<Vec<VertexId>>) -> bool {
        if per_part[0].is_empty() {
            return true;
        }
        let first = per_part[0].remove(0);
        let ok = pick(g, per_part, 1, &mut vec![first]);
        per_part[0].insert(0, first);
        ok
    }
    fn pick(g: &PartiteGraph, per_part: &mut Vec<Vec<VertexId>>, part: usize, chosen: &mut Vec<VertexId>) -> bool {
        if part == per_part.len() {
            return rec(g, per_part);
        }
        for pos in 0..per_part[part].len() {
            let x = per_part[part][pos];
            if chosen.iter().all(|&c| g.has_edge(c, x)) {
                per_part[part].remove(pos);
                chosen.push(x);
                let ok = pick(g, per_part, part + 1, chosen);
                chosen.pop();
                per_part[part].insert(pos, x);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(g, &mut per_part)
}

pub fn naive_has_factor(g: &PartiteGraph) -> bool {
    let all: Vec<VertexId> = g.vertices().collect();
    naive_factor_on(g, &all)
}

/// Maximum number of disjoint crossing cliques, by trying every subset of
/// the clique list.
pub fn naive_max_matching(g: &PartiteGraph) -> usize {
    let cliques = naive_cliques(g);
    fn rec(cliques: &[Vec<usize>], start: usize, used: &mut Vec<Vec<bool>>, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        for c in start..cliques.len() {
            if cliques[c].iter().enumerate().all(|(p, &i)| !used[p][i]) {
                for (p, &i) in cliques[c].iter().enumerate() {
                    used[p][i] = true;
                }
                rec(cliques, c + 1, used, size + 1, best);
                for (p, &i) in cliques[c].iter().enumerate() {
                    used[p][i] = false;
                }
            }
        }
    }
    let mut used: Vec<Vec<bool>> = g.part_sizes().iter().map(|&s| vec![false; s]).collect();
    let mut best = 0;
    rec(&cliques, 0, &mut used, 0, &mut best);
    best
}

/// All `r`-subsets of `items`.
pub fn subsets<T: Clone>(items: &[T], r: usize) -> Vec<Vec<T>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if items.len() < r {
        return Vec::new();
    }
    let mut with: Vec<Vec<T>> = subsets(&items[1..], r - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0].clone());
            s
        })
        .collect();
    with.extend(subsets(&items[1..], r));
    with
}

/// Smallest achievable max same-row density over all splits of every part
/// into `rows` groups with sizes in `[lo, hi]`, or `None` if no split fits.
/// Only rows flagged in `scored` count.
pub fn naive_best_grid(g: &PartiteGraph, rows: usize, lo: &[usize], hi: &[usize], scored: &[bool]) -> Option<Rational> {
    let k = g.k();
    let per_part: Vec<Vec<Vec<usize>>> = (0..k)
        .map(|p| {
            let n = g.part_size(p);
            let mut all = Vec::new();
            let total = rows.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let assign: Vec<usize> = (0..n)
                    .map(|_| {
                        let r = c % rows;
                        c /= rows;
                        r
                    })
                    .collect();
                let ok = (0..rows).all(|j| {
                    let s = assign.iter().filter(|&&a| a == j).count();
                    lo[j] <= s && s <= hi[j]
                });
                if ok {
                    all.push(assign);
                }
            }
            all
        })
        .collect();
    let mut best: Option<Rational> = None;
    let mut choice = vec![0usize; k];
    if per_part.iter().any(Vec::is_empty) {
        return None;
    }
    loop {
        let groups: Vec<Vec<Vec<VertexId>>> = (0..k)
            .map(|p| {
                (0..rows)
                    .map(|j| {
                        per_part[p][choice[p]].iter().enumerate().filter(|&(_, &a)| a == j).map(|(i, _)| v(p, i)).collect()
                    })
                    .collect()
            })
            .collect();
        let mut worst = Rational::from_integer(0);
        for p in 0..k {
            for q in (p + 1)..k {
                for j in 0..rows {
                    if scored[j] && !groups[p][j].is_empty() && !groups[q][j].is_empty() {
                        worst = worst.max(naive_density(g, &groups[p][j], &groups[q][j]));
                    }
                }
            }
        }
        best = Some(best.map_or(worst, |b: Rational| b.min(worst)));
        let mut p = k;
        loop {
            if p == 0 {
                return best;
            }
            p -= 1;
            choice[p] += 1;
            if choice[p] < per_part[p].len() {
                break;
            }
            choice[p] = 0;
        }
    }
}
