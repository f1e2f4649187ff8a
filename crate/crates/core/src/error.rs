use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Where in an input document a parse failure happened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub context: String,
    pub message: String,
}

impl ParseError {
    pub fn new(context: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError {
            context: context.into(),
            message: message.into(),
        }
    }

    pub(crate) fn from_json(what: &str, err: &serde_json::Error) -> Self {
        ParseError::new(
            format!("{what}, line {} column {}", err.line(), err.column()),
            err.to_string(),
        )
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.context, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("no edges")]
    NoEdges,

    #[error("uncoverable edge {0}: it contains no vertices")]
    UncoverableEdge(usize),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("parse error at {0}")]
    Parse(#[from] ParseError),

    #[error("invalid lambda {input:?}: {reason}")]
    Lambda { input: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("trace mismatch at pick {index}: {reason}")]
    TraceMismatch { index: usize, reason: String },

    #[error("float LP gave no feasible optimum ({iterations} pivots); retry with --mode exact")]
    LpNonConvergence { iterations: usize },

    #[error(
        "node budget of {budget} exhausted: best incumbent {incumbent}, lower bound {lower_bound}"
    )]
    BudgetExceeded {
        budget: u64,
        incumbent: u64,
        lower_bound: u64,
    },

    #[error("not an f-fold transversal: edge {edge} is covered {covered} times, needs {f}")]
    NotTransversal { edge: usize, covered: u64, f: u32 },

    #[error("certificate hypothesis violated: vertex {vertex} has value above z")]
    CertificateHypothesis { vertex: usize },

    #[error("sandwich violated: {0}")]
    Sandwich(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("cover verification failed at ({x}, {y}): covered {count} times, needs {f}")]
    CoverageFailed { x: f64, y: f64, count: u32, f: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
