use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use kfactor::absorber::{
    build_absorber, full_pipeline, reachability_report, AbsorberConfig, AbsorberOutcome, AbsorberState,
    PipelineConfig, PipelineOutcome, ReachabilityOptions, SamplingMode,
};
use kfactor::bounds::{degree_condition, dense_count_alpha_max, theorem_floor, BoundCheck};
use kfactor::constructions::{
    complete_partite, perturb_with_log, random_min_degree, random_partite, theta_blowup, BlowupSpec,
};
use kfactor::extremal::{
    approximate_to_theta_with, is_delta_extremal_with, kk_count_check, lemma3_dichotomy, minimize_edges,
    ApproximationCertificate, Detection, ExtremalityCertificate, GridPartition, Lemma3Overrides, ThetaQuery,
};
use kfactor::graph::{PartiteGraph, Rational};
use kfactor::params::{rational_to_f64, LabParams};
use kfactor::solver::{find_factor, max_matching, verify_matching, CliqueMatching};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::*;
use crate::error::{LabError, StageExt};
use crate::record::{self, RunRecord};
use crate::{report, RunOutput};

pub(crate) fn dispatch(cmd: &Command) -> Result<RunOutput, LabError> {
    let spec = serde_json::to_string(cmd).expect("arguments serialize");
    match cmd {
        Command::Gen(a) => gen(a, spec),
        Command::Solve(a) => solve(a, spec),
        Command::Absorb(a) => absorb(a, spec),
        Command::Analyze(a) => analyze(a, spec),
        Command::Pipeline(a) => pipeline(a, spec),
        Command::Fuzz(a) => fuzz(a),
        Command::Verify(a) => verify(a, spec),
        Command::Report(a) => report::run(a),
    }
}

fn load_graph(path: &Path) -> Result<PartiteGraph, LabError> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    PartiteGraph::from_json(&text).map_err(|e| LabError::input(path, e))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// `g.json` → `g.<tag>.json`
fn sidecar(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{tag}.json"))
}

fn path_str(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

/// `δ*(G) ≥ (k−1)n/k`, when the graph is balanced.
fn degree_check(g: &PartiteGraph) -> Vec<BoundCheck> {
    match (g.balanced_size(), g.min_partite_degree()) {
        (Ok(n), Ok(d)) => {
            let need = rational_to_f64(degree_condition(g.k(), n));
            vec![BoundCheck::lower("min partite degree", "(k-1)n/k", need, d as f64)]
        }
        _ => Vec::new(),
    }
}

fn invariant(what: &str) -> impl FnOnce(String) -> LabError + '_ {
    move |e| LabError::Invariant(format!("{what}: {e}"))
}

fn gen(a: &GenArgs, spec: String) -> Result<RunOutput, LabError> {
    let sizes = vec![a.n; a.k];
    let mut extra: Option<(&str, String)> = None;
    let g = match a.family {
        Family::Theta => {
            let (g, grid) = theta_blowup(&BlowupSpec::uniform(a.k, a.r, a.t)).stage("gen")?;
            extra = Some(("grid", with_newline(grid.to_json())));
            g
        }
        Family::Complete => complete_partite(&sizes).stage("gen")?,
        Family::Random => random_partite(&sizes, a.p, a.seed).stage("gen")?,
        Family::MinDegree => {
            let floor = a.floor.unwrap_or_else(|| theorem_floor(a.k, a.n));
            let (g, trace) = random_min_degree(a.k, a.n, floor, a.seed).stage("gen")?;
            extra = Some(("repair", pretty(&trace)));
            g
        }
        Family::Perturb => {
            let input = a.input.as_ref().ok_or_else(|| LabError::Usage("perturb needs --input".into()))?;
            let (g, flips) = perturb_with_log(&load_graph(input)?, a.flips, a.seed).stage("gen")?;
            extra = Some(("flips", pretty(&flips)));
            g
        }
        Family::Gamma3 => {
            return Err(LabError::Usage(
                "gamma3 has no construction available here; it is only referenced, never defined, \
                 so it is left unimplemented rather than guessed"
                    .into(),
            ))
        }
    };
    let mut out = RunOutput::default();
    let mut rec = RunRecord::new("gen", spec, "GENERATED");
    rec.input = path_str(&a.input);
    rec.seed = Some(a.seed);
    match &a.output {
        Some(path) => {
            out.line(format!(
                "wrote {} (k = {}, part sizes {:?}, {} edges)",
                path.display(),
                g.k(),
                g.part_sizes(),
                g.edge_count()
            ));
            if let Some((tag, text)) = extra {
                let side = sidecar(path, tag);
                out.line(format!("wrote {}", side.display()));
                out.file(side, text);
            }
            out.file(path.clone(), g.to_json());
            rec.certificate = path.display().to_string();
        }
        None => out.text = g.to_json(),
    }
    out.records.push(rec);
    Ok(out)
}

fn solve(a: &SolveArgs, spec: String) -> Result<RunOutput, LabError> {
    let g = load_graph(&a.graph)?;
    let limits = a.budget.limits();
    limits.validate().map_err(|e| LabError::Usage(e.to_string()))?;
    let mut out = RunOutput::default();
    let (label, found, stats) = if a.matching {
        let mm = max_matching(&g, &limits);
        let verdict = verify_matching(&g, &mm.matching, None);
        if !verdict.valid {
            return Err(invariant("max_matching returned an invalid matching")(verdict.diagnostic()));
        }
        let label = if mm.proven_maximum { "MAXIMUM" } else { "MAXIMAL" };
        out.line(format!("matching: {} cliques ({label})", mm.matching.len()));
        (label, Some(mm.matching), mm.stats)
    } else {
        let r = find_factor(&g, &limits).stage("solve")?;
        if let Some(f) = r.factor() {
            let verdict = verify_matching(&g, f, Some(&g.vertex_set()));
            if !verdict.valid {
                return Err(invariant("find_factor returned an invalid factor")(verdict.diagnostic()));
            }
        }
        out.line(format!("decision: {}", r.decision_label()));
        (r.decision_label(), r.factor().cloned(), r.stats)
    };
    out.line(format!("cliques: {}, search nodes: {}", stats.cliques, stats.nodes));
    let mut rec = RunRecord::new("solve", spec, label).with_checks(&degree_check(&g));
    rec.input = a.graph.display().to_string();
    rec.cliques = Some(stats.cliques);
    rec.nodes = Some(stats.nodes);
    if let (Some(path), Some(m)) = (&a.output, found) {
        out.file(path.clone(), with_newline(m.to_json()));
        rec.certificate = path.display().to_string();
    }
    out.records.push(rec);
    Ok(out)
}

fn absorb(a: &AbsorbArgs, spec: String) -> Result<RunOutput, LabError> {
    let g = load_graph(&a.graph)?;
    let mode = match a.mode {
        ModeArg::Desk => SamplingMode::Desk { target: a.target_family },
        ModeArg::Paper => SamplingMode::Paper,
    };
    let cfg = AbsorberConfig { alpha: a.alpha, mode, seed: a.seed, probes: a.probes };
    let mut out = RunOutput::default();
    let (label, checks, json) = match build_absorber(&g, &cfg).stage("absorb")? {
        AbsorberOutcome::Built(state) => {
            state.verify(&g).map_err(invariant("absorber state"))?;
            let s = &state.stats;
            out.line(format!("absorber: BUILT, {} members kept of {} sampled", s.kept, s.sampled));
            out.line(format!(
                "p = {:e} over {} candidate sets (expected {}), {} intersecting pairs, dropped {} non-factoring and {} overlapping",
                s.p, s.candidates, s.expected, s.intersecting_pairs, s.dropped_nonfactor, s.dropped_overlap
            ));
            out.line(format!("absorbing matching: {} cliques", state.matching.len()));
            for p in &state.probes {
                out.line(format!("probe {}: {} absorbing members", p.tuple, p.absorbing_members));
            }
            ("BUILT", state.checks.clone(), state.to_json())
        }
        AbsorberOutcome::Failure(f) => {
            out.line(format!("absorber: FAILURE ({}): {}", f.guarantee, f.detail));
            ("FAILURE", Vec::new(), serde_json::to_string_pretty(&f).expect("failure serializes"))
        }
    };
    if !checks.is_empty() {
        out.line("bound checks:");
        for c in &checks {
            out.line(format!("  {}", c.describe()));
        }
    }
    if a.reachability {
        let opts = ReachabilityOptions { alpha: a.alpha, max_pairs: a.max_pairs, seed: a.seed };
        let rep = reachability_report(&g, &opts).stage("reachability")?;
        out.line(format!(
            "reachability: {} of {} pairs examined, {} flagged (thresholds {:e} small, {:e} large)",
            rep.pairs.len(),
            rep.total_pairs,
            rep.flagged,
            rep.small_threshold,
            rep.large_threshold
        ));
        if let Some(path) = &a.output {
            out.file(sidecar(path, "reach"), pretty(&rep));
        }
    }
    let mut rec = RunRecord::new("absorb", spec, label).with_checks(&checks);
    rec.input = a.graph.display().to_string();
    rec.seed = Some(a.seed);
    if let Some(path) = &a.output {
        out.file(path.clone(), with_newline(json));
        rec.certificate = path.display().to_string();
    }
    out.records.push(rec);
    Ok(out)
}

fn detection_label<C>(d: &Detection<C>) -> &'static str {
    match d {
        Detection::Found(_) => "FOUND",
        Detection::NotFound { refuted: true, .. } => "REFUTED",
        Detection::NotFound { .. } => "NOT_FOUND",
    }
}

fn describe_miss<C>(d: &Detection<C>) -> Option<String> {
    match d {
        Detection::NotFound { refuted, regime, nodes } => Some(format!(
            "no certificate ({regime:?} regime, {nodes} nodes): {}",
            if *refuted { "exhaustively refuted" } else { "search exhausted, not a refutation" }
        )),
        Detection::Found(_) => None,
    }
}

fn analyze(a: &AnalyzeArgs, spec: String) -> Result<RunOutput, LabError> {
    let g = load_graph(&a.graph)?;
    let limits = a.budget.limits();
    limits.validate().map_err(|e| LabError::Usage(e.to_string()))?;
    let k = g.k();
    let n = g.part_size(0) as i64;
    let mut out = RunOutput::default();
    let mut checks = Vec::new();
    let (label, json): (String, Option<String>) = match a.mode {
        AnalyzeMode::Extremal => {
            let d = is_delta_extremal_with(&g, a.delta, &limits, a.seed).stage("analyze")?;
            let label = detection_label(&d).to_string();
            if let Some(m) = describe_miss(&d) {
                out.line(m);
            }
            let json = d.into_found().map(|c| -> Result<String, LabError> {
                c.verify(&g).map_err(invariant("extremality certificate"))?;
                out.line(format!("Δ-extremal: max pairwise density {} ≤ {}", c.max_density, c.delta));
                Ok(c.to_json())
            });
            (label, json.transpose()?)
        }
        AnalyzeMode::Theta => {
            let r = a.r.unwrap_or(k);
            let t = a.t.unwrap_or_else(|| Rational::new(n, r.max(1) as i64));
            let epsilon = a.epsilon.unwrap_or_else(|| Rational::from_integer(0));
            let query = ThetaQuery::new(r, t, epsilon, a.delta).with_seed(a.seed);
            let d = approximate_to_theta_with(&g, &query, &limits).stage("analyze")?;
            let label = detection_label(&d).to_string();
            if let Some(m) = describe_miss(&d) {
                out.line(m);
            }
            let json = d.into_found().map(|c| -> Result<String, LabError> {
                c.verify(&g).map_err(invariant("approximation certificate"))?;
                out.line(format!(
                    "approximation to Θ(k = {k}, r = {r}, t = {t}): size slack {} ≤ {}, max same-row density {} ≤ {}",
                    c.size_slack, c.epsilon, c.max_same_row_density, c.delta
                ));
                if let Some(m) = c.min_cross_row_density {
                    out.line(format!("min cross-row density {m} (informational)"));
                }
                Ok(c.to_json())
            });
            (label, json.transpose()?)
        }
        AnalyzeMode::Lemma3 => {
            let t = a.t.unwrap_or_else(|| Rational::new(n, (k as i64 - 1).max(1)));
            let epsilon = a.epsilon.unwrap_or_else(|| Rational::new(1, 10));
            let overrides = Lemma3Overrides { epsilon: a.approx_epsilon, delta: a.approx_delta };
            let rep = lemma3_dichotomy(&g, t, epsilon, overrides, &limits).stage("analyze")?;
            out.line(format!(
                "clique count {} vs ε²t^k = {}: {}",
                rep.clique_count,
                rep.count_threshold,
                if rep.count_branch { "holds" } else { "fails" }
            ));
            out.line(format!(
                "approximation at ε' = {}, Δ' = {} (formula value {:e}): {}",
                rep.approx_epsilon,
                rep.approx_delta,
                rep.formula_parameter,
                detection_label(&rep.approximation)
            ));
            let label = match (rep.count_branch, rep.approximation_branch) {
                (true, true) => "BOTH",
                (true, false) => "COUNT",
                (false, true) => "APPROXIMATION",
                (false, false) => "NEITHER",
            };
            (label.to_string(), Some(pretty(&rep)))
        }
        AnalyzeMode::Minimize => {
            let floor = match a.floor {
                Some(f) => f,
                None => g.min_partite_degree().stage("analyze")?,
            };
            let m = minimize_edges(&g, floor).stage("analyze")?;
            out.line(format!("edge-minimal at floor {floor}: kept {} of {} edges", m.edge_count(), g.edge_count()));
            ("MINIMIZED".to_string(), Some(m.to_json()))
        }
        AnalyzeMode::Count => {
            let alpha = a.alpha.unwrap_or_else(|| dense_count_alpha_max(k));
            let rep = kk_count_check(&g, alpha).stage("analyze")?;
            let half = rep.part_size_product as f64 / 2.0;
            checks.push(BoundCheck::lower("crossing cliques", "prod |V_i| / 2", half, rep.count as f64));
            out.line(format!("crossing cliques {} vs ½∏|V_i| = {half}: {}", rep.count, if rep.pass { "PASS" } else { "FAIL" }));
            ((if rep.pass { "PASS" } else { "FAIL" }).to_string(), Some(pretty(&rep)))
        }
    };
    out.line(format!("result: {label}"));
    let mut rec = RunRecord::new("analyze", spec, &label).with_checks(&checks);
    rec.input = a.graph.display().to_string();
    rec.seed = Some(a.seed);
    if let (Some(path), Some(json)) = (&a.output, json) {
        out.file(path.clone(), with_newline(json));
        rec.certificate = path.display().to_string();
    }
    out.records.push(rec);
    Ok(out)
}

fn pipeline(a: &PipelineArgs, spec: String) -> Result<RunOutput, LabError> {
    let g = load_graph(&a.graph)?;
    let limits = a.budget.limits();
    limits.validate().map_err(|e| LabError::Usage(e.to_string()))?;
    let floor = match a.floor {
        Some(f) => f,
        None => g.min_partite_degree().stage("pipeline")?,
    };
    let cfg = PipelineConfig {
        floor,
        absorber: AbsorberConfig {
            alpha: a.alpha,
            mode: SamplingMode::Desk { target: a.target_family },
            seed: a.seed,
            ..AbsorberConfig::default()
        },
        attempts: a.attempts,
        leftover_cap: a.leftover_cap,
        delta: a.delta,
        limits,
    };
    let report = full_pipeline(&g, &cfg).stage("pipeline")?;
    let mut out = RunOutput::default();
    for t in &report.trace {
        out.line(format!("[{}] {}", t.stage, t.detail));
    }
    let json = match &report.outcome {
        PipelineOutcome::Factor(f) => {
            let verdict = verify_matching(&g, f, Some(&g.vertex_set()));
            if !verdict.valid {
                return Err(invariant("pipeline factor")(verdict.diagnostic()));
            }
            Some(f.to_json())
        }
        PipelineOutcome::Extremal(c) => {
            c.verify(&g).map_err(invariant("pipeline certificate"))?;
            Some(c.to_json())
        }
        PipelineOutcome::Inconclusive => None,
    };
    let label = report.outcome.label();
    out.line(format!("result: {label}"));
    let mut rec = RunRecord::new("pipeline", spec, label).with_checks(&degree_check(&g));
    rec.input = a.graph.display().to_string();
    rec.seed = Some(a.seed);
    if let (Some(path), Some(json)) = (&a.output, json) {
        out.file(path.clone(), with_newline(json));
        rec.certificate = path.display().to_string();
    }
    out.records.push(rec);
    Ok(out)
}

struct Trial {
    record: RunRecord,
    archived: Option<(PathBuf, String)>,
}

fn fuzz(a: &FuzzArgs) -> Result<RunOutput, LabError> {
    let floor = a.floor.unwrap_or_else(|| theorem_floor(a.k, a.n));
    let mut params = LabParams::new(a.k, a.n).with_seed(a.seed);
    params.limits = a.budget.limits();
    params.validate().map_err(|e| LabError::Usage(e.to_string()))?;
    if a.trials == 0 {
        return Err(LabError::Usage("trial count must be at least 1".into()));
    }
    if floor > a.n {
        return Err(LabError::Usage(format!("floor {floor} exceeds part size {}", a.n)));
    }
    let archive = a.archive.clone().unwrap_or_else(|| {
        let mut s = a.output.clone().into_os_string();
        s.push(".exceptions");
        PathBuf::from(s)
    });
    info!("fuzz: k = {}, n = {}, floor {floor}, {} trials", a.k, a.n, a.trials);
    let trials: Vec<Trial> =
        (0..a.trials).into_par_iter().map(|i| fuzz_trial(a, floor, &archive, i)).collect::<Result<_, _>>()?;
    let mut out = RunOutput::default();
    let count = |label: &str| trials.iter().filter(|t| t.record.outcome == label).count();
    out.line(format!(
        "{} trials at k = {}, n = {}, floor {floor}: FACTOR {}, NONE {}, INCONCLUSIVE {}",
        a.trials,
        a.k,
        a.n,
        count("FACTOR"),
        count("NONE"),
        count("INCONCLUSIVE")
    ));
    let mut records = Vec::with_capacity(trials.len());
    for t in trials {
        if let Some((path, text)) = t.archived {
            let msg = format!(
                "!!! trial {} (seed {}) has NO factor: potential finite-n exception, instance archived at {}",
                t.record.trial.unwrap_or(0),
                t.record.seed.unwrap_or(0),
                path.display()
            );
            warn!("{msg}");
            eprintln!("{msg}");
            out.line(msg);
            out.file(path, text);
        }
        records.push(t.record);
    }
    out.file(a.output.clone(), record::render(&records));
    out.line(format!("wrote {}", a.output.display()));
    out.records = records;
    Ok(out)
}

fn fuzz_trial(a: &FuzzArgs, floor: usize, archive: &Path, i: usize) -> Result<Trial, LabError> {
    let started = Instant::now();
    let seed = a.seed ^ i as u64;
    let (g, _) = random_min_degree(a.k, a.n, floor, seed).stage("fuzz")?;
    let r = find_factor(&g, &a.budget.limits()).stage("fuzz")?;
    if let Some(f) = r.factor() {
        let verdict = verify_matching(&g, f, Some(&g.vertex_set()));
        if !verdict.valid {
            return Err(invariant("fuzz factor")(verdict.diagnostic()));
        }
    }
    // the per-trial spec reruns exactly this trial as trial 0
    let single = Command::Fuzz(FuzzArgs { seed, trials: 1, floor: Some(floor), ..a.clone() });
    let mut rec = RunRecord::new("fuzz", serde_json::to_string(&single).expect("arguments serialize"), r.decision_label())
        .with_checks(&degree_check(&g));
    rec.seed = Some(seed);
    rec.trial = Some(i);
    rec.cliques = Some(r.stats.cliques);
    rec.nodes = Some(r.stats.nodes);
    let archived = r.is_none().then(|| {
        let path = archive.join(format!("trial-{i}.json"));
        rec.input = path.display().to_string();
        (path, g.to_json())
    });
    rec.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(Trial { record: rec, archived })
}

fn verify(a: &VerifyArgs, spec: String) -> Result<RunOutput, LabError> {
    let g = load_graph(&a.graph)?;
    let path = &a.certificate;
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| LabError::input(path, e))?;
    let parse_err = |e: serde_json::Error| LabError::input(path, e);
    let has = |key: &str| value.get(key).is_some();
    let (kind, result) = if value.is_array() {
        let m = CliqueMatching::from_json(&text).map_err(parse_err)?;
        let cover = (!a.partial).then(|| g.vertex_set());
        let verdict = verify_matching(&g, &m, cover.as_ref());
        let kind = if a.partial { "clique matching" } else { "clique factor" };
        (kind, if verdict.valid { Ok(()) } else { Err(verdict.diagnostic()) })
    } else if has("members") {
        let s: AbsorberState = serde_json::from_str(&text).map_err(parse_err)?;
        ("absorber state", s.verify(&g))
    } else if has("sets") {
        let c: ExtremalityCertificate = serde_json::from_str(&text).map_err(parse_err)?;
        ("extremality certificate", c.verify(&g))
    } else if has("groups") && has("epsilon") {
        let c: ApproximationCertificate = serde_json::from_str(&text).map_err(parse_err)?;
        ("approximation certificate", c.verify(&g))
    } else if has("groups") {
        let p: GridPartition = serde_json::from_str(&text).map_err(parse_err)?;
        ("grid partition", p.validate(&g))
    } else {
        return Err(LabError::input(path, "not a recognized certificate"));
    };
    result.map_err(|e| LabError::input(path, format!("INVALID {kind}: {e}")))?;
    let mut out = RunOutput::default();
    out.line(format!("VALID {kind}"));
    let mut rec = RunRecord::new("verify", spec, "VALID");
    rec.input = a.graph.display().to_string();
    rec.certificate = path.display().to_string();
    out.records.push(rec);
    Ok(out)
}
