use log::debug;
use serde::{Deserialize, Serialize};

use crate::extremal::{approximate_to_theta_with, minimize_edges, ApproximationCertificate, Detection, ThetaQuery};
use crate::graph::{PartiteGraph, Rational, VertexSet};
use crate::params::Limits;
use crate::solver::{count_crossing_cliques, max_matching, verify_matching, CliqueMatching};

use super::{absorb, build_absorber, AbsorbOutcome, AbsorberConfig, AbsorberError, AbsorberOutcome};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Minimum partite degree the input must satisfy.
    pub floor: usize,
    pub absorber: AbsorberConfig,
    /// Absorber attempts, seeded `seed, seed + 1, …`.
    pub attempts: usize,
    /// Largest leftover (in tuples) handed to the absorber.
    pub leftover_cap: Option<usize>,
    /// Δ of the extremal fallback, which looks for a `(Δ/6, Δ/2)`-approximation
    /// to `Θ_{k×k}(n/k)`.
    pub delta: Rational,
    pub limits: Limits,
}

impl PipelineConfig {
    pub fn new(floor: usize) -> Self {
        PipelineConfig {
            floor,
            absorber: AbsorberConfig::default(),
            attempts: 5,
            leftover_cap: None,
            delta: Rational::new(1, 2),
            limits: Limits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PipelineOutcome {
    Factor(CliqueMatching),
    Extremal(ApproximationCertificate),
    Inconclusive,
}

impl PipelineOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            PipelineOutcome::Factor(_) => "FACTOR",
            PipelineOutcome::Extremal(_) => "EXTREMAL",
            PipelineOutcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub outcome: PipelineOutcome,
    pub trace: Vec<TraceEntry>,
}

struct Trace(Vec<TraceEntry>);

impl Trace {
    fn push(&mut self, stage: &str, detail: String) {
        debug!("{stage}: {detail}");
        self.0.push(TraceEntry { stage: stage.to_string(), detail });
    }
}

/// One absorber attempt: absorbing matching, maximum matching on the rest,
/// then absorption of what is left. `None` when the attempt fails.
fn attempt(
    g: &PartiteGraph,
    cfg: &PipelineConfig,
    seed: u64,
    trace: &mut Trace,
) -> Result<Option<CliqueMatching>, AbsorberError> {
    let acfg = AbsorberConfig { seed, ..cfg.absorber.clone() };
    let state = match build_absorber(g, &acfg)? {
        AbsorberOutcome::Built(s) => s,
        AbsorberOutcome::Failure(f) => {
            trace.push("absorber", format!("seed {seed}: failure ({}: {})", f.guarantee, f.detail));
            return Ok(None);
        }
    };
    trace.push(
        "absorber",
        format!("seed {seed}: {} members kept of {} sampled, |M| = {}", state.members.len(), state.stats.sampled, state.matching.len()),
    );
    let covered = state.covered();
    let rest: Vec<_> = g.vertices().filter(|v| !covered.contains(v)).collect();
    let sub = g.induced(rest.iter());
    let mm = max_matching(&sub.graph, &cfg.limits);
    let lifted = CliqueMatching::new(mm.matching.cliques.iter().map(|c| c.map_vertices(|v| sub.to_parent(v))).collect());
    let used = lifted.vertex_set();
    let leftover: VertexSet = rest.into_iter().filter(|v| !used.contains(v)).collect();
    let tuples = leftover.len() / g.k();
    trace.push(
        "cover",
        format!("matching of {} on the remaining graph (proven maximum: {}), {tuples} leftover tuples", lifted.len(), mm.proven_maximum),
    );
    if cfg.leftover_cap.is_some_and(|cap| tuples > cap) {
        trace.push("cover", format!("leftover exceeds the cap of {}", cfg.leftover_cap.unwrap_or(0)));
        return Ok(None);
    }
    match absorb(g, &state, &leftover)? {
        AbsorbOutcome::Absorbed { matching, .. } => {
            let mut full = matching;
            full.extend(lifted);
            full.canonicalize();
            trace.push("absorb", format!("all {tuples} leftover tuples absorbed"));
            Ok(Some(full))
        }
        AbsorbOutcome::Failure(f) => {
            let who = f.tuple.map(|t| t.to_string()).unwrap_or_else(|| "leftover".into());
            trace.push("absorb", format!("failure at {who}: {}", f.reason));
            Ok(None)
        }
    }
}

/// Absorb, cover, absorb the leftover; if every attempt fails, look for the
/// extremal structure on an edge-minimal subgraph instead.
pub fn full_pipeline(g: &PartiteGraph, cfg: &PipelineConfig) -> Result<PipelineReport, AbsorberError> {
    let n = g.balanced_size().map_err(|_| AbsorberError::Unbalanced(g.part_sizes().to_vec()))?;
    let actual = g.min_partite_degree()?;
    if actual < cfg.floor {
        return Err(AbsorberError::BelowFloor { floor: cfg.floor, actual });
    }
    let mut trace = Trace(Vec::new());
    trace.push("input", format!("k = {}, n = {n}, min partite degree {actual}, {} crossing cliques", g.k(), count_crossing_cliques(g)));
    for a in 0..cfg.attempts.max(1) {
        let seed = cfg.absorber.seed.wrapping_add(a as u64);
        if let Some(factor) = attempt(g, cfg, seed, &mut trace)? {
            let verdict = verify_matching(g, &factor, Some(&g.vertex_set()));
            assert!(verdict.valid, "pipeline assembled an invalid factor: {}", verdict.diagnostic());
            return Ok(PipelineReport { outcome: PipelineOutcome::Factor(factor), trace: trace.0 });
        }
    }
    let minimal = minimize_edges(g, cfg.floor)?;
    trace.push("extremal", format!("edge-minimal subgraph keeps {} of {} edges", minimal.edge_count(), g.edge_count()));
    let k = g.k();
    let query = ThetaQuery::new(k, Rational::new(n as i64, k as i64), cfg.delta / 6, cfg.delta / 2).with_seed(cfg.absorber.seed);
    let outcome = match approximate_to_theta_with(&minimal, &query, &cfg.limits)? {
        Detection::Found(cert) => {
            trace.push("extremal", format!("approximation found, max same-row density {}", cert.max_same_row_density));
            PipelineOutcome::Extremal(cert)
        }
        Detection::NotFound { refuted, .. } => {
            trace.push("extremal", format!("no approximation (refuted: {refuted})"));
            PipelineOutcome::Inconclusive
        }
    };
    Ok(PipelineReport { outcome, trace: trace.0 })
}
