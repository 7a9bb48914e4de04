//! Closed-form thresholds of the absorbing argument, and a small record type
//! that sets each of them next to the value realized at desk scale.
//!
//! Most of these constants are astronomically small or large for the `n`
//! the lab can handle; they are reported, never used to gate behaviour.

use serde::{Deserialize, Serialize};

use crate::graph::Rational;
use crate::params::rational_to_f64;

/// `(k − 1)/k · n`, the minimum partite degree condition.
pub fn degree_condition(k: usize, n: usize) -> Rational {
    Rational::new(((k - 1) * n) as i64, k as i64)
}

/// Smallest integer floor satisfying the degree hypothesis of the factor
/// theorems: `⌈2n/3⌉ + 1` for `k = 3`, `⌈(k − 1)n/k⌉` otherwise.
pub fn theorem_floor(k: usize, n: usize) -> usize {
    let base = ((k - 1) * n).div_ceil(k);
    if k == 3 {
        base + 1
    } else {
        base
    }
}

/// `α³ n^{k−1}`: connectors of size `k − 1` needed for reachability.
pub fn small_connector_threshold(alpha: Rational, k: usize, n: usize) -> f64 {
    let a = rational_to_f64(alpha);
    a.powi(3) * (n as f64).powi(k as i32 - 1)
}

/// `α³ n^{2k−1}`: connectors of size `2k − 1` needed for reachability.
pub fn large_connector_threshold(alpha: Rational, k: usize, n: usize) -> f64 {
    let a = rational_to_f64(alpha);
    a.powi(3) * (n as f64).powi(2 * k as i32 - 1)
}

/// `α^{4k−3} n^{2k(k−1)}`: lower bound on `|ℒ(T)|`.
pub fn absorbing_family_bound(alpha: Rational, k: usize, n: usize) -> f64 {
    let a = rational_to_f64(alpha);
    a.powi(4 * k as i32 - 3) * (n as f64).powi((2 * k * (k - 1)) as i32)
}

/// `p = α^{4k−3} n^{1−2k(k−1)}`, the selection probability of the random family.
pub fn paper_selection_probability(alpha: Rational, k: usize, n: usize) -> f64 {
    let a = rational_to_f64(alpha);
    a.powi(4 * k as i32 - 3) * (n as f64).powi(1 - (2 * k * (k - 1)) as i32)
}

/// `α^{4k−2} n`: upper bound on the size of the sampled family.
pub fn family_size_bound(alpha: Rational, k: usize, n: usize) -> f64 {
    rational_to_f64(alpha).powi(4 * k as i32 - 2) * n as f64
}

/// `2(k − 1) α^{4k−2} n`: upper bound on the absorbing matching.
pub fn matching_size_bound(alpha: Rational, k: usize, n: usize) -> f64 {
    2.0 * (k - 1) as f64 * family_size_bound(alpha, k, n)
}

/// `α^{8k−6} n / 4`: members of `ℒ(T) ∩ 𝓕′` guaranteed per tuple, and the
/// per-part size of leftovers the absorber must handle.
pub fn absorbing_capacity(alpha: Rational, k: usize, n: usize) -> f64 {
    rational_to_f64(alpha).powi(8 * k as i32 - 6) * n as f64 / 4.0
}

/// `α(k, Δ) = (1/2k) · (Δ / (24k(k − 1)√(2k)))^{2^{k−1}}`.
pub fn alpha_for_delta(k: usize, delta: Rational) -> f64 {
    let kf = k as f64;
    let base = rational_to_f64(delta) / (24.0 * kf * (kf - 1.0) * (2.0 * kf).sqrt());
    base.powf(2f64.powi(k as i32 - 1)) / (2.0 * kf)
}

/// `16 k⁴ ε^{1/2^{k−2}}`, the approximation parameter of the sparse-clique
/// dichotomy.
pub fn lemma3_parameter(k: usize, epsilon: Rational) -> f64 {
    let e = rational_to_f64(epsilon);
    16.0 * (k as f64).powi(4) * e.powf(1.0 / 2f64.powi(k as i32 - 2))
}

/// `(k + 1)^{−4}`, the density slack allowed by the dense clique count.
pub fn dense_count_alpha_max(k: usize) -> Rational {
    Rational::new(1, ((k + 1) as i64).pow(4))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// realized ≥ formula
    Lower,
    /// realized ≤ formula
    Upper,
}

/// One inequality of the argument, evaluated at a concrete instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub formula: String,
    pub kind: BoundKind,
    pub formula_value: f64,
    pub realized: f64,
    pub holds: bool,
    /// The formula value is below 1, so the inequality says nothing useful
    /// about integer counts at this `n`.
    pub vacuous: bool,
}

impl BoundCheck {
    pub fn new(name: &str, formula: &str, kind: BoundKind, formula_value: f64, realized: f64) -> Self {
        let holds = match kind {
            BoundKind::Lower => realized >= formula_value,
            BoundKind::Upper => realized <= formula_value,
        };
        BoundCheck {
            name: name.to_string(),
            formula: formula.to_string(),
            kind,
            formula_value,
            realized,
            holds,
            vacuous: formula_value < 1.0,
        }
    }

    pub fn lower(name: &str, formula: &str, formula_value: f64, realized: f64) -> Self {
        Self::new(name, formula, BoundKind::Lower, formula_value, realized)
    }

    pub fn upper(name: &str, formula: &str, formula_value: f64, realized: f64) -> Self {
        Self::new(name, formula, BoundKind::Upper, formula_value, realized)
    }

    /// One-line human-readable rendering.
    pub fn describe(&self) -> String {
        let op = match self.kind {
            BoundKind::Lower => ">=",
            BoundKind::Upper => "<=",
        };
        format!(
            "{:<28} realized {:>12} {op} {:<14.6e} [{}]{}",
            self.name,
            self.realized,
            self.formula_value,
            if self.holds { "holds" } else { "fails" },
            if self.vacuous { " (vacuous at this n)" } else { "" },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_floors() {
        assert_eq!(theorem_floor(3, 6), 5);
        assert_eq!(theorem_floor(3, 9), 7);
        assert_eq!(theorem_floor(4, 8), 6);
        assert_eq!(theorem_floor(4, 5), 4);
        assert_eq!(degree_condition(3, 6), Rational::from_integer(4));
    }

    #[test]
    fn closed_forms() {
        let a = Rational::new(1, 10);
        // α³ n^{k−1} with α = 0.1, k = 3, n = 3
        assert!((small_connector_threshold(a, 3, 3) - 0.009).abs() < 1e-15);
        assert!((large_connector_threshold(a, 3, 3) - 0.243).abs() < 1e-12);
        // α^9 · 6^{12}
        assert!((absorbing_family_bound(a, 3, 6) - 1e-9 * 6f64.powi(12)).abs() < 1e-3);
        assert!((paper_selection_probability(a, 3, 2) - 1e-9 / 2048.0).abs() < 1e-20);
        assert!((matching_size_bound(a, 3, 10) - 4.0 * 1e-10 * 10.0).abs() < 1e-20);
        assert!((absorbing_capacity(a, 3, 4) - 1e-18).abs() < 1e-30);
        assert_eq!(dense_count_alpha_max(3), Rational::new(1, 256));
        // k = 2 gives 256 ε
        assert!((lemma3_parameter(2, Rational::new(1, 100)) - 2.56).abs() < 1e-12);
        // k = 3: 16·81·√ε
        assert!((lemma3_parameter(3, Rational::new(1, 100)) - 129.6).abs() < 1e-9);
    }

    #[test]
    fn alpha_formula() {
        // k = 3, Δ = 1: (1/6) · (1 / (144 √6))^4
        let expected = (1.0 / (144.0 * 6f64.sqrt())).powi(4) / 6.0;
        let got = alpha_for_delta(3, Rational::from_integer(1));
        assert!((got - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn bound_check_flags() {
        let c = BoundCheck::lower("x", "α³n^{k−1}", 0.5, 3.0);
        assert!(c.holds && c.vacuous);
        let c = BoundCheck::upper("m", "2(k−1)α^{4k−2}n", 1e-9, 4.0);
        assert!(!c.holds);
        assert!(c.describe().contains("fails"));
    }
}
