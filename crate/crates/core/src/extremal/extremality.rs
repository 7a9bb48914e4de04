use serde::{Deserialize, Serialize};

use crate::graph::{PartiteGraph, Rational, VertexId, VertexSubsetPair};
use crate::params::Limits;

use super::local::{exhaustive, local_search, Frac, GridProblem, LocalConfig};
use super::{Detection, ExtremalError, SearchRegime, EXHAUSTIVE_PART_LIMIT};

/// Sets `A_i ⊆ V_i` of size `⌊n/k⌋` with pairwise densities at most `delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityCertificate {
    pub sets: Vec<Vec<VertexId>>,
    pub max_density: Rational,
    pub delta: Rational,
    pub regime: SearchRegime,
}

impl ExtremalityCertificate {
    fn max_pair_density(&self, g: &PartiteGraph) -> Result<Rational, String> {
        let mut best = Rational::from_integer(0);
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                let pair = VertexSubsetPair::from_vertices(a, b).map_err(|e| e.to_string())?;
                best = best.max(g.density(&pair).map_err(|e| e.to_string())?);
            }
        }
        Ok(best)
    }

    /// Recounts every pairwise density from the graph.
    pub fn verify(&self, g: &PartiteGraph) -> Result<(), String> {
        let n = g.balanced_size().map_err(|e| e.to_string())?;
        let m = n / g.k();
        if self.sets.len() != g.k() {
            return Err(format!("{} sets for {} parts", self.sets.len(), g.k()));
        }
        for (i, set) in self.sets.iter().enumerate() {
            if set.len() != m {
                return Err(format!("A_{i} has {} vertices, expected {m}", set.len()));
            }
            for w in set.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("A_{i} is not strictly sorted"));
                }
            }
            for &v in set {
                g.check_vertex(v).map_err(|e| e.to_string())?;
                if v.part != i {
                    return Err(format!("{v} listed in A_{i}"));
                }
            }
        }
        let d = self.max_pair_density(g)?;
        if d != self.max_density {
            return Err(format!("recorded max density {} but recount gives {d}", self.max_density));
        }
        if d > self.delta {
            return Err(format!("max density {d} exceeds delta {}", self.delta));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }
}

/// [`is_delta_extremal_with`] with seed 0 and the default restart count.
pub fn is_delta_extremal(
    g: &PartiteGraph,
    delta: Rational,
    limits: &Limits,
) -> Result<Detection<ExtremalityCertificate>, ExtremalError> {
    is_delta_extremal_with(g, delta, limits, 0)
}

pub fn is_delta_extremal_with(
    g: &PartiteGraph,
    delta: Rational,
    limits: &Limits,
    seed: u64,
) -> Result<Detection<ExtremalityCertificate>, ExtremalError> {
    if !g.is_balanced() {
        return Err(ExtremalError::Unbalanced(g.part_sizes().to_vec()));
    }
    let (k, n) = (g.k(), g.part_size(0));
    let m = n / k;
    if m == 0 {
        return Err(ExtremalError::Degenerate { n, k });
    }
    let regime = if n <= EXHAUSTIVE_PART_LIMIT { SearchRegime::Exhaustive } else { SearchRegime::Heuristic };
    // row 0 holds A_i, row 1 the rest
    let prob = GridProblem { rows: 2, lo: vec![m, n - m], hi: vec![m, n - m], scored: vec![true, false], symmetric: false };
    let mut budget = limits.start();
    let outcome = match regime {
        SearchRegime::Exhaustive => exhaustive(g, &prob, Frac::from_rational(delta), &mut budget),
        SearchRegime::Heuristic => {
            local_search(g, &prob, &LocalConfig { seed, restarts: 24, kicks: 8 }, &mut budget)
        }
    };
    if let Some((value, rows_of)) = outcome.best {
        if value.to_rational() <= delta {
            let sets: Vec<Vec<VertexId>> = rows_of
                .iter()
                .enumerate()
                .map(|(p, a)| (0..n).filter(|&i| a[i] == 0).map(|i| VertexId::new(p, i)).collect())
                .collect();
            let cert = ExtremalityCertificate { sets, max_density: value.to_rational(), delta, regime };
            cert.verify(g).unwrap_or_else(|e| panic!("extremality search produced a bad certificate: {e}"));
            return Ok(Detection::Found(cert));
        }
    }
    Ok(Detection::NotFound { refuted: outcome.complete, regime, nodes: budget.nodes() })
}
