use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("odd vertex count ({0}): no perfect matching exists")]
    OddVertexCount(usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("vertex {0} appears in two pairs")]
    RepeatedVertex(usize),
    #[error("pair ({0}, {1}) lies inside a single part")]
    SamePartEdge(usize, usize),
    #[error("vertex {0} is not matched")]
    NotMatched(usize),
    #[error("matchings live on different vertex sets ({0} vs {1} vertices)")]
    MismatchedVertexSets(usize, usize),
    #[error("row constraint violated for part {part}: expected {expected}, got {actual}")]
    RowConstraint { part: usize, expected: u64, actual: u64 },
    #[error("profile is not realizable: part {part} needs {needed} endpoints but has {available}")]
    UnrealizableProfile { part: usize, needed: u64, available: u64 },
    #[error("profile refers to pair ({0}, {1}) outside the shape")]
    ProfileOutOfRange(usize, usize),
    #[error("degenerate triple: the six vertices x, y, z, P(x), P(y), P(z) are not distinct")]
    DegenerateTriple,
    #[error("matching is not perfect")]
    NotPerfect,
    #[error("graph has {vertices} vertices, above the enumeration cap of {cap}")]
    VertexBudget { vertices: usize, cap: usize },
    #[error("({0}, {1}) is not an edge of the host")]
    NotAnEdge(usize, usize),
    #[error("host has no perfect matching")]
    NoPerfectMatching,
    #[error("matching lies in stratum {actual}, expected {expected}")]
    StratumMismatch { expected: usize, actual: usize },
    #[error("host is not multipartite")]
    NotMultipartite,
    #[error("census regime violated: c = {c} < 3d = {three_d}; use a larger n_scale")]
    Regime { c: i64, three_d: i64 },
    #[error("invalid bound instance: {0}")]
    InvalidBoundInstance(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("rejection budget of {attempts} attempts exhausted{}", exact_note(.exact_count))]
    RejectionBudget { attempts: u64, exact_count: Option<String> },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("intractable: {0}")]
    Intractable(String),
}

fn exact_note(count: &Option<String>) -> String {
    match count {
        Some(c) => format!(" (exact size of the conditioned event: {c})"),
        None => String::new(),
    }
}
