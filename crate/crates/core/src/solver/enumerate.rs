use crate::graph::{Bitset, PartiteGraph, VertexId};

use super::CrossingClique;

/// All crossing `K_k` copies in lexicographic order (part 0's index first),
/// or the first `cap` of them.
pub fn enumerate_crossing_cliques(g: &PartiteGraph, cap: Option<usize>) -> Vec<CrossingClique> {
    let mut out = Vec::new();
    let cap = cap.unwrap_or(usize::MAX);
    if cap == 0 {
        return out;
    }
    walk(g, &mut |indices| {
        out.push(CrossingClique::unchecked(indices.to_vec()));
        out.len() < cap
    });
    out
}

/// Number of crossing `K_k` copies, without materializing them.
pub fn count_crossing_cliques(g: &PartiteGraph) -> u64 {
    let k = g.k();
    let cands: Vec<Bitset> = g.part_sizes().iter().map(|&s| Bitset::full(s)).collect();
    count_rec(g, 0, &cands, k)
}

fn count_rec(g: &PartiteGraph, part: usize, cands: &[Bitset], k: usize) -> u64 {
    if part == k - 1 {
        return cands[part].count() as u64;
    }
    let mut total = 0;
    for i in cands[part].iter() {
        let v = VertexId::new(part, i);
        let next: Vec<Bitset> = (0..k)
            .map(|q| if q > part { cands[q].intersection(g.neighbors_in(v, q)) } else { Bitset::new(0) })
            .collect();
        if next[part + 1..].iter().all(|b| !b.is_empty()) {
            total += count_rec(g, part + 1, &next, k);
        }
    }
    total
}

/// Depth-first walk over crossing cliques; `visit` returns `false` to stop.
pub(crate) fn walk(g: &PartiteGraph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let k = g.k();
    let cands: Vec<Bitset> = g.part_sizes().iter().map(|&s| Bitset::full(s)).collect();
    let mut chosen = Vec::with_capacity(k);
    walk_rec(g, 0, &cands, &mut chosen, visit);
}

fn walk_rec(
    g: &PartiteGraph,
    part: usize,
    cands: &[Bitset],
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = g.k();
    for i in cands[part].iter() {
        chosen.push(i);
        let keep_going = if part == k - 1 {
            visit(chosen)
        } else {
            let v = VertexId::new(part, i);
            let next: Vec<Bitset> = (0..k)
                .map(|q| if q > part { cands[q].intersection(g.neighbors_in(v, q)) } else { Bitset::new(0) })
                .collect();
            if next[part + 1..].iter().all(|b| !b.is_empty()) {
                walk_rec(g, part + 1, &next, chosen, visit)
            } else {
                true
            }
        };
        chosen.pop();
        if !keep_going {
            return false;
        }
    }
    true
}
