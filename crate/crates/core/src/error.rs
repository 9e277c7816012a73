use thiserror::Error;

use crate::design::FeasibilityCertificate;
use crate::spectral::OperatorKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty graph: no edges")]
    EmptyGraph,

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {{{0},{1}}}")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} has degree {degree} \u{2260} degree {expected} of vertex {reference}")]
    Irregular {
        vertex: usize,
        degree: usize,
        expected: usize,
        reference: usize,
    },

    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex 0")]
    Disconnected { unreached: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("random regular generation failed for seed {seed} after {budget} attempts")]
    GenerationFailed { seed: u64, budget: usize },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("not a probability vector: {0}")]
    NotAProbability(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenConvergence { sweeps: usize, off_norm: f64 },

    #[error("operator {found:?} not admissible here, expected {expected:?}")]
    OperatorMismatch {
        expected: OperatorKind,
        found: OperatorKind,
    },

    #[error("ell = {ell} out of range 1..={max}")]
    EllOutOfRange { ell: usize, max: usize },

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("null-space extraction failed: support {support} > ell {ell} but restricted matrix has full column rank")]
    NullSpace { support: usize, ell: usize },

    #[error("internal error: weight {value:e} at vertex {index} went negative during reduction")]
    NegativeWeight { index: usize, value: f64 },

    #[error("numerical breakdown: simplex reported the moment system infeasible (Farkas vector y1 = {:e})", .0.y_first())]
    Infeasible(Box<FeasibilityCertificate>),

    #[error("linear program is unbounded for the given objective")]
    Unbounded,

    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short stable identifier used in CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyGraph => "empty_graph",
            Error::SelfLoop(_) => "self_loop",
            Error::DuplicateEdge(..) => "duplicate_edge",
            Error::Irregular { .. } => "irregular",
            Error::Disconnected { .. } => "disconnected",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::GenerationFailed { .. } => "generation_failed",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotAProbability(_) => "not_a_probability",
            Error::EigenConvergence { .. } => "eigen_convergence",
            Error::OperatorMismatch { .. } => "operator_mismatch",
            Error::EllOutOfRange { .. } => "ell_out_of_range",
            Error::InvalidOrdering(_) => "invalid_ordering",
            Error::NullSpace { .. } => "null_space",
            Error::NegativeWeight { .. } => "negative_weight",
            Error::Infeasible(_) => "infeasible",
            Error::Unbounded => "unbounded",
            Error::PivotLimit(_) => "pivot_limit",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
