//! Command-line surface. Every argument struct is serializable so a run
//! record can echo exactly what was asked for.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kfactor::graph::Rational;
use kfactor::params::{parse_rational, Limits};
use serde::{Deserialize, Serialize};

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "lab", version, about = "Experiments on clique factors in k-partite graphs")]
pub struct Cli {
    /// Append a run record for this invocation to the given CSV.
    #[arg(long, global = true)]
    pub record: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    /// Generate a graph.
    Gen(GenArgs),
    /// Decide whether a graph has a clique factor.
    Solve(SolveArgs),
    /// Build an absorbing structure and report every bound check.
    Absorb(AbsorbArgs),
    /// Look for extremal structure.
    Analyze(AnalyzeArgs),
    /// Run the absorb, cover, absorb pipeline with its extremal fallback.
    Pipeline(PipelineArgs),
    /// Solve many random instances at the degree threshold.
    Fuzz(FuzzArgs),
    /// Re-check a certificate against a graph.
    Verify(VerifyArgs),
    /// Summarize run-record CSVs.
    Report(ReportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Solve(_) => "solve",
            Command::Absorb(_) => "absorb",
            Command::Analyze(_) => "analyze",
            Command::Pipeline(_) => "pipeline",
            Command::Fuzz(_) => "fuzz",
            Command::Verify(_) => "verify",
            Command::Report(_) => "report",
        }
    }
}

#[derive(Clone, Copy, Debug, Args, Serialize, Deserialize)]
pub struct BudgetArgs {
    /// Search-node budget per search.
    #[arg(long, default_value_t = 50_000_000)]
    pub budget_nodes: u64,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, default_value_t = 600.0)]
    pub budget_secs: f64,
}

impl BudgetArgs {
    pub fn limits(&self) -> Limits {
        Limits::new(self.budget_nodes, self.budget_secs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Blow-up of the k×r grid graph, `t` vertices per group.
    Theta,
    /// Complete k-partite graph.
    Complete,
    /// Independent edges with probability `p`.
    Random,
    /// Random graph repaired up to a partite degree floor.
    MinDegree,
    /// An input graph with `flips` cross pairs toggled.
    Perturb,
    /// Named in the literature but never constructed here; always refused.
    #[value(hide = true, alias = "gamma")]
    Gamma3,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(short = 'k', default_value_t = 3)]
    pub k: usize,
    /// Part size.
    #[arg(short = 'n', default_value_t = 3)]
    pub n: usize,
    /// Columns of the grid (theta).
    #[arg(short = 'r', default_value_t = 3)]
    pub r: usize,
    /// Group size (theta).
    #[arg(short = 't', default_value_t = 1)]
    pub t: usize,
    /// Edge probability (random).
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Partite degree floor (min-degree); defaults to the theorem threshold.
    #[arg(long)]
    pub floor: Option<usize>,
    /// Graph to perturb.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub flips: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; the graph goes to stdout when omitted.
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SolveArgs {
    pub graph: PathBuf,
    /// Find a maximum clique matching instead of deciding factor existence.
    #[arg(long)]
    pub matching: bool,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Where to write the factor or matching.
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    /// Target family size, selection probability derived from it.
    Desk,
    /// The closed-form selection probability.
    Paper,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct AbsorbArgs {
    pub graph: PathBuf,
    #[arg(long, value_parser = rational, default_value = "1/10")]
    pub alpha: Rational,
    #[arg(long, value_enum, default_value_t = ModeArg::Desk)]
    pub mode: ModeArg,
    /// Expected family size in desk mode.
    #[arg(long, default_value_t = 10.0)]
    pub target_family: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random tuples probed for absorbing members.
    #[arg(long, default_value_t = 4)]
    pub probes: usize,
    /// Also count connectors for same-part pairs.
    #[arg(long)]
    pub reachability: bool,
    /// Sample at most this many pairs for the reachability report.
    #[arg(long)]
    pub max_pairs: Option<usize>,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyzeMode {
    /// Sets of size n/k with small pairwise densities.
    Extremal,
    /// Approximation to the grid blow-up.
    Theta,
    /// Clique count versus approximation dichotomy.
    Lemma3,
    /// Edge-minimal subgraph above a degree floor.
    Minimize,
    /// Dense clique count.
    Count,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub mode: AnalyzeMode,
    #[arg(long, value_parser = rational, default_value = "1/2")]
    pub delta: Rational,
    /// Size slack (theta) or the dichotomy's epsilon (lemma3).
    #[arg(long, value_parser = rational)]
    pub epsilon: Option<Rational>,
    /// Rows of the grid (theta); defaults to k.
    #[arg(short = 'r')]
    pub r: Option<usize>,
    /// Target group size; defaults to n/r (theta) or n/(k-1) (lemma3).
    #[arg(short = 't', value_parser = rational)]
    pub t: Option<Rational>,
    /// Approximation parameters replacing the formula values (lemma3).
    #[arg(long, value_parser = rational)]
    pub approx_epsilon: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub approx_delta: Option<Rational>,
    /// Degree floor (minimize); defaults to the graph's own minimum.
    #[arg(long)]
    pub floor: Option<usize>,
    /// Density slack (count); defaults to (k+1)^-4.
    #[arg(long, value_parser = rational)]
    pub alpha: Option<Rational>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct PipelineArgs {
    pub graph: PathBuf,
    /// Degree floor the input must meet; defaults to the theorem threshold.
    #[arg(long)]
    pub floor: Option<usize>,
    #[arg(long, value_parser = rational, default_value = "1/10")]
    pub alpha: Rational,
    #[arg(long, default_value_t = 10.0)]
    pub target_family: f64,
    #[arg(long, default_value_t = 5)]
    pub attempts: usize,
    #[arg(long)]
    pub leftover_cap: Option<usize>,
    #[arg(long, value_parser = rational, default_value = "1/2")]
    pub delta: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct FuzzArgs {
    #[arg(short = 'k', default_value_t = 3)]
    pub k: usize,
    #[arg(short = 'n', default_value_t = 6)]
    pub n: usize,
    /// Degree floor; defaults to the theorem threshold.
    #[arg(long)]
    pub floor: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Trial `i` uses seed `seed ^ i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Directory for instances without a factor; defaults to `<output>.exceptions`.
    #[arg(long)]
    pub archive: Option<PathBuf>,
    /// CSV of run records, one per trial.
    #[arg(short = 'o')]
    pub output: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub certificate: PathBuf,
    /// Accept clique matchings that do not cover every vertex.
    #[arg(long)]
    pub partial: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    pub inputs: Vec<PathBuf>,
    /// Summary CSV.
    #[arg(short = 'o')]
    pub output: Option<PathBuf>,
}
