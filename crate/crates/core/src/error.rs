use thiserror::Error;

/// Errors produced by graph construction, spectral computations and the
/// sampling/reconstruction pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signal length {got} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertex index {index} out of range for graph with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("cluster is empty")]
    EmptyCluster,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("graph is disconnected: {zero_count} eigenvalues below the kernel tolerance")]
    Disconnected { zero_count: usize },

    #[error("graph has a single vertex; no nonzero eigenvalue exists")]
    NoNonzeroEigenvalue,

    #[error("negative exponent {0} for Laplacian power")]
    NegativePower(f64),

    #[error("vertex {vertex} belongs to clusters {first} and {second}")]
    ClusterOverlap {
        vertex: usize,
        first: usize,
        second: usize,
    },

    #[error("vertex {0} is not covered by any cluster")]
    UncoveredVertex(usize),

    #[error("cluster {0} does not induce a connected subgraph")]
    DisconnectedCluster(usize),

    #[error("Paley-Wiener space for bandwidth {omega} is empty")]
    EmptyBand { omega: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("averages do not form a frame for this bandwidth and partition (lower bound a = 0)")]
    NotAFrame,

    #[error("relaxation parameter {mu} outside (0, {upper})")]
    InvalidRelaxation { mu: f64, upper: f64 },

    #[error("expected {expected} samples, got {got}")]
    SampleCountMismatch { expected: usize, got: usize },

    #[error("constraint matrix is rank deficient (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },

    #[error("saddle-point system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("contraction parameter gamma = {gamma} >= 1; error bound not available")]
    GammaTooLarge { gamma: f64 },

    #[error("generated graph is disconnected after {attempts} attempts")]
    GeneratorDisconnected { attempts: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
