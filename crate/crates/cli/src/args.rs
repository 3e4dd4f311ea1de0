use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchlab::{MatchingProfile, MultipartiteShape};
use serde::Serialize;

/// Exact and randomized perfect-matching statistics of complete multipartite
/// graphs with a deleted matching.
#[derive(Parser, Serialize, Debug, Clone)]
#[command(name = "matchlab", version)]
pub struct Cli {
    #[command(subcommand)]
    #[serde(flatten)]
    pub command: Command,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to the machine's parallelism. Results do
    /// not depend on it.
    #[arg(long, global = true, env = "MATCHLAB_WORKERS")]
    pub workers: Option<usize>,

    /// Output formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "text")]
    pub format: Vec<Format>,

    /// Output path. With several formats, each gets its extension appended.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Pass/fail threshold override (ratio deviation, concentration
    /// constant).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Recompute closed-form results through the generic engine and fail
    /// unless they agree.
    #[arg(long, global = true)]
    pub force_generic: bool,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Args, Serialize, Debug, Clone, Default)]
pub struct HostArgs {
    /// Complete multipartite host by part sizes, e.g. `2,2,2`.
    #[arg(long, value_parser = parse_shape, conflicts_with_all = ["graph", "random_graph"])]
    pub shape: Option<MultipartiteShape>,

    /// Host graph as JSON `{"n": .., "edges": [[u, v], ..]}`.
    #[arg(long, conflicts_with = "random_graph")]
    pub graph: Option<PathBuf>,

    /// Seeded host on 2·N_HALF vertices, each missing at most T neighbours.
    #[arg(long, value_name = "N_HALF:T", value_parser = parse_colon_pair)]
    pub random_graph: Option<(usize, usize)>,

    /// Raise the brute-force vertex cap of 16.
    #[arg(long)]
    pub vertex_cap: Option<usize>,
}

#[derive(Args, Serialize, Debug, Clone, Default)]
pub struct MatchingArgs {
    /// Use the canonical perfect matching as M (the default).
    #[arg(long, conflicts_with = "profile")]
    pub perfect_m: bool,

    /// Profile of M as `i:j:m,...` with 0-based parts.
    #[arg(long, value_parser = parse_profile)]
    pub profile: Option<MatchingProfile>,
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct ShapeArg {
    #[arg(long, value_parser = parse_shape)]
    pub shape: MultipartiteShape,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMethod {
    /// Two-stage exact uniform sampler.
    Exact,
    /// Uniform conditional on `Q ∩ M = M*`.
    Conditional,
    /// Switch-move Markov chain started at M.
    Chain,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    MinDegree,
    Multipartite,
}

#[derive(ValueEnum, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Census {
    Block,
    Partner,
}

#[derive(Subcommand, Serialize, Debug, Clone)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Number of perfect matchings.
    Count {
        #[command(flatten)]
        host: HostArgs,
    },
    /// Exact stratum sizes |N_ℓ|.
    Strata {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        m: MatchingArgs,
    },
    /// |N_k| / |N_{k−1}| against r / ((2r − 2) k).
    Ratios {
        #[command(flatten)]
        shape: ShapeArg,
        #[command(flatten)]
        m: MatchingArgs,
        /// Largest k reported.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact total variation distance to a Poisson law.
    Tv {
        #[command(flatten)]
        shape: ShapeArg,
        #[command(flatten)]
        m: MatchingArgs,
        /// Poisson mean as `p/q`; defaults to r / (2r − 2).
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Pr(X = 0) and TV distance over a list of shapes.
    Converge {
        /// Repeat once per shape.
        #[arg(long = "shape", value_parser = parse_shape, required = true)]
        shapes: Vec<MultipartiteShape>,
        /// Record wall time per row (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Draw perfect matchings and log per-sample statistics.
    Sample {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        m: MatchingArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = SampleMethod::Exact)]
        method: SampleMethod,
        /// Size of M* (its first pairs) for conditional sampling.
        #[arg(long, default_value_t = 0)]
        m_star: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: u64,
        #[arg(long, default_value_t = 10)]
        step_count: u64,
    },
    /// Degree audit of the switching graph between N_k and N_{k−1}.
    AuditSwitch {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        m: MatchingArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Defaults to multipartite for shapes and min-degree for graphs.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Single-edge switch audit and Pr(e ∈ R).
    AuditEdge {
        #[command(flatten)]
        host: HostArgs,
        /// Edge as `u,v`.
        #[arg(long, value_parser = parse_comma_pair)]
        edge: (usize, usize),
    },
    /// Monte Carlo concentration of block or partner censuses.
    AuditConcentration {
        #[command(flatten)]
        shape: ShapeArg,
        #[arg(long, value_enum, default_value_t = Census::Block)]
        census: Census,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Multiplier of sqrt(n ln n); `--tolerance` overrides it.
        #[arg(long, default_value_t = 4.0)]
        constant: f64,
        /// Size of M* for the partner census.
        #[arg(long, default_value_t = 0)]
        m_star: usize,
    },
    /// Cube-partition census of the edge-count lattice.
    CensusCells {
        #[command(flatten)]
        shape: ShapeArg,
        /// Defaults to the size of the first part.
        #[arg(long)]
        n_scale: Option<u64>,
        #[arg(long, default_value_t = 4)]
        far_threshold: u64,
        /// Run even when c < 3d; the report flags it.
        #[arg(long)]
        allow_regime_violation: bool,
    },
    /// Factorial-ratio bound on explicit or random instances.
    CheckBound {
        #[arg(long, value_delimiter = ',', requires = "y", conflicts_with = "random")]
        x: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',', requires = "x")]
        y: Option<Vec<u64>>,
        /// Number of seeded random instances.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_t: usize,
        #[arg(long, default_value_t = 400)]
        max_s: u64,
    },
    /// Brute-force enumeration report.
    Oracle {
        #[command(flatten)]
        host: HostArgs,
        #[command(flatten)]
        m: MatchingArgs,
        /// Per-edge containment counts.
        #[arg(long)]
        per_edge: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Strata { .. } => "strata",
            Command::Ratios { .. } => "ratios",
            Command::Tv { .. } => "tv",
            Command::Converge { .. } => "converge",
            Command::Sample { .. } => "sample",
            Command::AuditSwitch { .. } => "audit-switch",
            Command::AuditEdge { .. } => "audit-edge",
            Command::AuditConcentration { .. } => "audit-concentration",
            Command::CensusCells { .. } => "census-cells",
            Command::CheckBound { .. } => "check-bound",
            Command::Oracle { .. } => "oracle",
        }
    }
}

fn parse_shape(s: &str) -> Result<MultipartiteShape, String> {
    MultipartiteShape::parse(s).map_err(|e| e.to_string())
}

fn parse_profile(s: &str) -> Result<MatchingProfile, String> {
    MatchingProfile::parse(s).map_err(|e| e.to_string())
}

fn parse_pair(s: &str, sep: char) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(sep).ok_or_else(|| format!("expected two integers separated by '{sep}'"))?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_colon_pair(s: &str) -> Result<(usize, usize), String> {
    parse_pair(s, ':')
}

fn parse_comma_pair(s: &str) -> Result<(usize, usize), String> {
    parse_pair(s, ',')
}
