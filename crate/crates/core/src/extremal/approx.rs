use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::graph::{PartiteGraph, Rational};
use crate::params::Limits;

use super::local::{exhaustive, local_search, Frac, GridProblem, LocalConfig};
use super::{Detection, ExtremalError, GridPartition, SearchRegime, EXHAUSTIVE_PART_LIMIT};

/// Parameters of an approximation search beyond the graph itself.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaQuery {
    pub r: usize,
    pub t: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
    pub seed: u64,
    pub restarts: usize,
}

impl ThetaQuery {
    pub fn new(r: usize, t: Rational, epsilon: Rational, delta: Rational) -> Self {
        ThetaQuery { r, t, epsilon, delta, seed: 0, restarts: 24 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Integer group sizes `s` with `|s − t| ≤ εt`, as an inclusive range.
/// Returns `None` when no integer fits.
pub fn size_window(t: Rational, epsilon: Rational) -> Option<(usize, usize)> {
    let slack = epsilon * t;
    let lo = (t - slack).ceil().to_integer().max(0);
    let hi = (t + slack).floor().to_integer();
    (hi >= lo).then_some((lo as usize, hi as usize))
}

/// Self-verifying witness that a graph is `(ε, Δ)`-approximate to
/// `Θ_{k×r}(t)`. Serialized with the grid fields at the top level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationCertificate {
    #[serde(flatten)]
    pub partition: GridPartition,
    pub t: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
    pub size_slack: Rational,
    pub max_same_row_density: Rational,
    /// Informational: min over `i ≠ i'`, `j ≠ j'` of `d(V_ij, V_i'j')`.
    pub min_cross_row_density: Option<Rational>,
    pub regime: SearchRegime,
}

impl ApproximationCertificate {
    /// Builds the certificate for `partition`, recomputing every quantity.
    pub fn measure(
        g: &PartiteGraph,
        partition: GridPartition,
        t: Rational,
        epsilon: Rational,
        delta: Rational,
        regime: SearchRegime,
    ) -> Result<Self, ExtremalError> {
        let size_slack = partition.size_slack(t);
        let max_same_row_density = partition.max_same_row_density(g)?;
        let min_cross_row_density = partition.min_cross_row_density(g)?;
        Ok(ApproximationCertificate {
            partition,
            t,
            epsilon,
            delta,
            size_slack,
            max_same_row_density,
            min_cross_row_density,
            regime,
        })
    }

    /// Recounts slack and densities from the graph and checks both bounds.
    pub fn verify(&self, g: &PartiteGraph) -> Result<(), String> {
        self.partition.validate(g)?;
        let slack = self.partition.size_slack(self.t);
        if slack != self.size_slack {
            return Err(format!("recorded size slack {} but recount gives {slack}", self.size_slack));
        }
        if slack > self.epsilon {
            return Err(format!("size slack {slack} exceeds epsilon {}", self.epsilon));
        }
        let d = self.partition.max_same_row_density(g).map_err(|e| e.to_string())?;
        if d != self.max_same_row_density {
            return Err(format!("recorded max density {} but recount gives {d}", self.max_same_row_density));
        }
        if d > self.delta {
            return Err(format!("same-row density {d} exceeds delta {}", self.delta));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization is infallible")
    }
}

/// [`approximate_to_theta_with`] with the default seed and restart count.
pub fn approximate_to_theta(
    g: &PartiteGraph,
    r: usize,
    t: Rational,
    epsilon: Rational,
    delta: Rational,
    limits: &Limits,
) -> Result<Detection<ApproximationCertificate>, ExtremalError> {
    approximate_to_theta_with(g, &ThetaQuery::new(r, t, epsilon, delta), limits)
}

/// Searches for a split of every part into `r` groups of size within `εt`
/// of `t` whose same-row densities are all at most `Δ`.
pub fn approximate_to_theta_with(
    g: &PartiteGraph,
    query: &ThetaQuery,
    limits: &Limits,
) -> Result<Detection<ApproximationCertificate>, ExtremalError> {
    if query.r == 0 || query.t <= Ratio::from_integer(0) {
        return Err(ExtremalError::Shape);
    }
    let regime = if g.part_sizes().iter().all(|&s| s <= EXHAUSTIVE_PART_LIMIT) {
        SearchRegime::Exhaustive
    } else {
        SearchRegime::Heuristic
    };
    let refuted = Detection::NotFound { refuted: true, regime, nodes: 0 };
    let epsilon = query.epsilon.max(Rational::from_integer(0));
    let Some((lo, hi)) = size_window(query.t, epsilon) else {
        return Ok(refuted);
    };
    let prob = GridProblem {
        rows: query.r,
        lo: vec![lo; query.r],
        hi: vec![hi; query.r],
        scored: vec![true; query.r],
        symmetric: true,
    };
    if !g.part_sizes().iter().all(|&n| prob.feasible_for(n)) {
        return Ok(refuted);
    }
    let mut budget = limits.start();
    let outcome = match regime {
        SearchRegime::Exhaustive => exhaustive(g, &prob, Frac::from_rational(query.delta), &mut budget),
        SearchRegime::Heuristic => {
            let cfg = LocalConfig { seed: query.seed, restarts: query.restarts, kicks: 8 };
            local_search(g, &prob, &cfg, &mut budget)
        }
    };
    if let Some((value, rows_of)) = outcome.best {
        if value.to_rational() <= query.delta {
            let partition = GridPartition::from_assignment(query.r, &rows_of);
            let cert = ApproximationCertificate::measure(g, partition, query.t, query.epsilon, query.delta, regime)?;
            cert.verify(g).unwrap_or_else(|e| panic!("approximation search produced a bad certificate: {e}"));
            return Ok(Detection::Found(cert));
        }
    }
    Ok(Detection::NotFound { refuted: outcome.complete, regime, nodes: budget.nodes() })
}
