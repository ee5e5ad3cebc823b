use thiserror::Error;

use crate::complexes::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    /// A refinement vertex belongs to no set of the family it was assigned to.
    #[error("cover violation: vertex {vertex} (point {point:?}) lies in no set of family {family}")]
    CoverViolation {
        vertex: VertexId,
        point: Vec<f64>,
        family: usize,
    },

    #[error("degenerate realization: convex combination vanishes on face {0:?}")]
    DegenerateRealization(Vec<VertexId>),

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid anchor: hyperplane with normal {direction:?} through the anchor meets every support")]
    InvalidAnchor { direction: Vec<f64> },

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("invalid report: {0}")]
    InvalidReport(String),

    /// A search that is guaranteed to succeed by the underlying lemma did not.
    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn labeling(msg: impl Into<String>) -> Self {
        Error::InvalidLabeling(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
