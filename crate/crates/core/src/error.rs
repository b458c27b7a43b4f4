use thiserror::Error;

use crate::graph::EdgeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("loop edge at vertex {vertex} (line {line})")]
    LoopEdge { vertex: usize, line: usize },
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("odd extra path length {0}; odd subdivisions need an even number of new vertices")]
    OddSubdivision(usize),
    #[error("brute-force oracle limited to {limit} edges, graph has {edges}")]
    OracleDomain { edges: usize, limit: usize },
    #[error("graph has {vertices} vertices, canonical labeling supports at most {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("not a perfect matching: {0}")]
    NotPerfectMatching(String),
    #[error("not a cycle of the graph: {0}")]
    InvalidCycle(String),
    #[error("cycle is not alternating with respect to the matching")]
    NotAlternating,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("resource guard exceeded after {generated} generated graphs (limit {limit})")]
    ResourceGuard { generated: u64, limit: u64 },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Short stable tag used in machine-readable error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::LoopEdge { .. } => "loop_edge",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::UnknownEdge(_) => "unknown_edge",
            Error::DuplicateEdge(_) => "duplicate_edge",
            Error::OddSubdivision(_) => "odd_subdivision",
            Error::OracleDomain { .. } => "oracle_domain",
            Error::TooLarge { .. } => "too_large",
            Error::NotPerfectMatching(_) => "not_perfect_matching",
            Error::InvalidCycle(_) => "invalid_cycle",
            Error::NotAlternating => "not_alternating",
            Error::Precondition(_) => "precondition",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Io(_) => "io",
            Error::ResourceGuard { .. } => "resource_guard",
        }
    }
}
