use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph::{is_balanced_set, part_profile, PartiteGraph, VertexSet};
use crate::solver::{verify_matching, CliqueMatching, CrossingTuple};

use super::{small_factor, AbsorberError, AbsorberState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorbFailure {
    /// The tuple that could not be given a member, when one is to blame.
    pub tuple: Option<CrossingTuple>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AbsorbOutcome {
    Absorbed {
        matching: CliqueMatching,
        /// `(tuple, member index)` pairs.
        assignment: Vec<(CrossingTuple, usize)>,
    },
    Failure(AbsorbFailure),
}

/// Splits `w` into crossing tuples by sorting each part and zipping.
fn zip_tuples(k: usize, w: &VertexSet) -> Vec<CrossingTuple> {
    let mut per_part: Vec<Vec<usize>> = vec![Vec::new(); k];
    for v in w {
        per_part[v.part].push(v.index);
    }
    let count = per_part[0].len();
    (0..count).map(|t| CrossingTuple::new(per_part.iter().map(|p| p[t]).collect())).collect()
}

struct Assigner<'a> {
    g: &'a PartiteGraph,
    state: &'a AbsorberState,
    tuples: &'a [CrossingTuple],
    /// `(tuple, member)` → factor of `member ∪ tuple`, if any.
    memo: HashMap<(usize, usize), Option<CliqueMatching>>,
    owner: Vec<Option<usize>>,
}

impl Assigner<'_> {
    fn absorbs(&mut self, t: usize, m: usize) -> Result<bool, AbsorberError> {
        if let Some(f) = self.memo.get(&(t, m)) {
            return Ok(f.is_some());
        }
        let mut set: VertexSet = self.state.members[m].set.iter().copied().collect();
        set.extend(self.tuples[t].vertices());
        let f = small_factor(self.g, &set)?;
        let ok = f.is_some();
        self.memo.insert((t, m), f);
        Ok(ok)
    }

    /// Kuhn's augmenting path from tuple `t`.
    fn augment(&mut self, t: usize, seen: &mut [bool]) -> Result<bool, AbsorberError> {
        for m in 0..self.state.members.len() {
            if seen[m] || !self.absorbs(t, m)? {
                continue;
            }
            seen[m] = true;
            let free = match self.owner[m] {
                None => true,
                Some(other) => self.augment(other, seen)?,
            };
            if free {
                self.owner[m] = Some(t);
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Absorbs the balanced leftover `w` into the absorbing matching: each
/// tuple of `w` gets a distinct member whose carrier factor is replaced by
/// a factor of carrier ∪ tuple.
pub fn absorb(g: &PartiteGraph, state: &AbsorberState, w: &VertexSet) -> Result<AbsorbOutcome, AbsorberError> {
    for &v in w {
        g.check_vertex(v)?;
    }
    if !is_balanced_set(g.k(), w) {
        return Err(AbsorberError::NotBalanced(format!("W with part profile {:?}", part_profile(g.k(), w))));
    }
    let covered = state.covered();
    if let Some(&v) = w.iter().find(|v| covered.contains(v)) {
        return Err(AbsorberError::OverlapsAbsorber(v));
    }
    let tuples = zip_tuples(g.k(), w);
    if tuples.len() > state.members.len() {
        return Ok(AbsorbOutcome::Failure(AbsorbFailure {
            tuple: None,
            reason: format!("{} tuples but only {} family members", tuples.len(), state.members.len()),
        }));
    }
    let mut assigner =
        Assigner { g, state, tuples: &tuples, memo: HashMap::new(), owner: vec![None; state.members.len()] };
    for t in 0..tuples.len() {
        let mut seen = vec![false; state.members.len()];
        if !assigner.augment(t, &mut seen)? {
            let candidates = (0..state.members.len()).filter(|&m| assigner.memo.get(&(t, m)).is_some_and(Option::is_some)).count();
            let reason = if candidates == 0 {
                "no family member absorbs this tuple".to_string()
            } else {
                format!("its {candidates} absorbing members are all needed by other tuples")
            };
            return Ok(AbsorbOutcome::Failure(AbsorbFailure { tuple: Some(tuples[t].clone()), reason }));
        }
    }
    let mut matching = CliqueMatching::default();
    let mut assignment = Vec::new();
    for (m, member) in state.members.iter().enumerate() {
        match assigner.owner[m] {
            Some(t) => {
                let f = assigner.memo[&(t, m)].clone().expect("assigned pairs absorb");
                matching.extend(f);
                assignment.push((tuples[t].clone(), m));
            }
            None => matching.extend(member.factor.clone()),
        }
    }
    matching.canonicalize();
    assignment.sort();
    let mut required = covered;
    required.extend(w.iter().copied());
    let verdict = verify_matching(g, &matching, Some(&required));
    assert!(verdict.valid, "absorption produced an invalid cover: {}", verdict.diagnostic());
    Ok(AbsorbOutcome::Absorbed { matching, assignment })
}
