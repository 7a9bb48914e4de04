//! Lab-wide parameters and search budgets.
//!
//! All real-valued constants (α, Δ, ε, t) are stored as exact `i64`
//! rationals. Decimal input like `0.15` is converted exactly (`3/20`).

use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("cannot parse '{0}' as a rational number")]
    Parse(String),
    #[error("k must be at least 2, got {0}")]
    K(usize),
    #[error("n must be at least 1")]
    N,
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    Alpha(Rational),
    #[error("delta must lie in (0, 1], got {0}")]
    Delta(Rational),
    #[error("epsilon must be nonnegative, got {0}")]
    Epsilon(Rational),
    #[error("t must be at least 1, got {0}")]
    T(Rational),
    #[error("search limits must be strictly positive")]
    Limits,
}

/// Parses `3`, `-2`, `0.125` or `1/8` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParamError> {
    let err = || ParamError::Parse(text.to_string());
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| err())?;
        let den: i64 = den.trim().parse().map_err(|_| err())?;
        if den == 0 {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 15 {
        return Err(err());
    }
    let den = 10i64.pow(frac_part.len() as u32);
    let int_val: i64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| err())? };
    let frac_val: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err())? };
    let num = int_val.checked_mul(den).and_then(|x| x.checked_add(frac_val)).ok_or_else(err)?;
    Ok(Rational::new(if neg { -num } else { num }, den))
}

pub fn rational_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Node and wall-clock budget for a search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_nodes: u64,
    pub max_secs: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 50_000_000, max_secs: 600.0 }
    }
}

impl Limits {
    pub fn new(max_nodes: u64, max_secs: f64) -> Self {
        Limits { max_nodes, max_secs }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.max_nodes == 0 || !(self.max_secs > 0.0) {
            return Err(ParamError::Limits);
        }
        Ok(())
    }

    pub fn start(&self) -> Budget {
        Budget {
            nodes: 0,
            max_nodes: self.max_nodes,
            started: Instant::now(),
            max_wall: Duration::from_secs_f64(self.max_secs.min(1e9)),
            exhausted: false,
        }
    }
}

/// A running budget. Once exhausted it stays exhausted.
#[derive(Debug)]
pub struct Budget {
    nodes: u64,
    max_nodes: u64,
    started: Instant,
    max_wall: Duration,
    exhausted: bool,
}

impl Budget {
    /// Charges one search node; returns `false` once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes
            || (self.nodes % 4096 == 0 && self.started.elapsed() > self.max_wall)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }
}

/// Every constant the lab's lemmas quantify over.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabParams {
    pub k: usize,
    pub n: usize,
    pub alpha: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub t: Rational,
    pub seed: u64,
    pub limits: Limits,
}

impl LabParams {
    pub fn new(k: usize, n: usize) -> Self {
        LabParams {
            k,
            n,
            alpha: Rational::new(1, 10),
            delta: Rational::new(1, 2),
            epsilon: Rational::from_integer(0),
            t: Rational::from_integer(1),
            seed: 0,
            limits: Limits::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: Rational) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_delta(mut self, delta: Rational) -> Self {
        self.delta = delta;
        self
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if self.k < 2 {
            return Err(ParamError::K(self.k));
        }
        if self.n < 1 {
            return Err(ParamError::N);
        }
        if self.alpha <= zero || self.alpha >= one {
            return Err(ParamError::Alpha(self.alpha));
        }
        if self.delta <= zero || self.delta > one {
            return Err(ParamError::Delta(self.delta));
        }
        if self.epsilon < zero {
            return Err(ParamError::Epsilon(self.epsilon));
        }
        if self.t < one {
            return Err(ParamError::T(self.t));
        }
        self.limits.validate()
    }
}

impl FromStr for LabParams {
    type Err = serde_json::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_str(s)
    }
}
