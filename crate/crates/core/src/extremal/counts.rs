use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::bounds::{dense_count_alpha_max, lemma3_parameter};
use crate::graph::{PartiteGraph, Rational, VertexId, VertexSubsetPair};
use crate::params::Limits;
use crate::solver::count_crossing_cliques;

use super::{approximate_to_theta_with, ApproximationCertificate, Detection, ExtremalError, ThetaQuery};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KkCountReport {
    pub k: usize,
    pub part_sizes: Vec<usize>,
    pub alpha: Rational,
    pub min_pair_density: Rational,
    pub count: u64,
    pub part_size_product: u128,
    /// `count ≥ ½ ∏ |V_i|`
    pub pass: bool,
}

/// Exact crossing-clique count of a dense graph against `½ ∏ |V_i|`.
///
/// Requires `alpha ≤ (k+1)^-4` and every pairwise density `≥ 1 − alpha`.
pub fn kk_count_check(g: &PartiteGraph, alpha: Rational) -> Result<KkCountReport, ExtremalError> {
    let k = g.k();
    let max = dense_count_alpha_max(k);
    if alpha > max {
        return Err(ExtremalError::AlphaTooLarge { alpha: alpha.to_string(), max: max.to_string() });
    }
    let floor = Rational::from_integer(1) - alpha;
    let mut min_pair_density = Rational::from_integer(1);
    for i in 0..k {
        for j in (i + 1)..k {
            let d = g.density(&VertexSubsetPair::whole_parts(g, i, j)?)?;
            if d < floor {
                return Err(ExtremalError::SparsePair { i, j, density: d.to_string() });
            }
            min_pair_density = min_pair_density.min(d);
        }
    }
    let count = count_crossing_cliques(g);
    let product: u128 = g.part_sizes().iter().map(|&s| s as u128).product();
    Ok(KkCountReport {
        k,
        part_sizes: g.part_sizes().to_vec(),
        alpha,
        min_pair_density,
        count,
        part_size_product: product,
        pass: 2 * count as u128 >= product,
    })
}

/// Replacement parameters for the approximation branch; unset fields use
/// the lemma's formula value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Overrides {
    pub epsilon: Option<Rational>,
    pub delta: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub k: usize,
    pub t: Rational,
    pub epsilon: Rational,
    pub clique_count: u64,
    /// `ε² t^k`
    pub count_threshold: Rational,
    pub count_branch: bool,
    /// `16 k⁴ ε^{1/2^{k−2}}`, often above 1 at small sizes.
    pub formula_parameter: f64,
    pub approx_epsilon: Rational,
    pub approx_delta: Rational,
    pub approximation: Detection<ApproximationCertificate>,
    pub approximation_branch: bool,
}

impl Lemma3Report {
    /// At least one of the two alternatives is witnessed.
    pub fn holds(&self) -> bool {
        self.count_branch || self.approximation_branch
    }
}

fn to_rational(x: f64) -> Rational {
    // clamp so the continued-fraction approximation stays inside i64
    Ratio::approximate_float(x.min(1e9)).unwrap_or_else(|| Rational::from_integer(1_000_000_000))
}

/// Checks the sparse-clique dichotomy on `h`: either at least `ε² t^k`
/// crossing cliques, or an approximation to `Θ_{k×(k−1)}(t)`. Both
/// alternatives are evaluated and reported.
pub fn lemma3_dichotomy(
    h: &PartiteGraph,
    t: Rational,
    epsilon: Rational,
    overrides: Lemma3Overrides,
    limits: &Limits,
) -> Result<Lemma3Report, ExtremalError> {
    let k = h.k();
    if t <= Rational::from_integer(0) {
        return Err(ExtremalError::Shape);
    }
    let one = Rational::from_integer(1);
    let required = Rational::from_integer(k as i64 - 1) * (one - epsilon) * t;
    let allowed = (one + epsilon) * t;
    for (part, &size) in h.part_sizes().iter().enumerate() {
        if Rational::from_integer(size as i64) < required {
            return Err(ExtremalError::PartTooSmall { part, size, required: required.to_string() });
        }
    }
    for v in h.vertices() {
        for part in (0..k).filter(|&q| q != v.part) {
            let missing = h.part_size(part) - h.degree_into(v, part);
            if Rational::from_integer(missing as i64) > allowed {
                return Err(ExtremalError::TooManyNonNeighbors {
                    vertex: VertexId::new(v.part, v.index),
                    part,
                    missing,
                    allowed: allowed.to_string(),
                });
            }
        }
    }
    let clique_count = count_crossing_cliques(h);
    let count_threshold = epsilon * epsilon * t.pow(k as i32);
    let formula_parameter = lemma3_parameter(k, epsilon);
    let approx_epsilon = overrides.epsilon.unwrap_or_else(|| to_rational(formula_parameter));
    let approx_delta = overrides.delta.unwrap_or_else(|| to_rational(formula_parameter));
    let query = ThetaQuery::new(k - 1, t, approx_epsilon, approx_delta);
    let approximation = approximate_to_theta_with(h, &query, limits)?;
    let approximation_branch = approximation.found().is_some();
    Ok(Lemma3Report {
        k,
        t,
        epsilon,
        clique_count,
        count_threshold,
        count_branch: Rational::from_integer(clique_count as i64) >= count_threshold,
        formula_parameter,
        approx_epsilon,
        approx_delta,
        approximation,
        approximation_branch,
    })
}
