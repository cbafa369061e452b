//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph spec {spec:?}: {reason}")]
    BadGraphSpec { spec: String, reason: String },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("invalid word {word:?}: {reason}")]
    BadWord { word: String, reason: String },

    #[error("enumeration exceeded the element cap of {cap} (use a smaller max length)")]
    ElementCapExceeded { cap: usize },

    #[error("elements belong to different Coxeter groups")]
    GraphMismatch,

    #[error("{x} is not less than or equal to {w} in Bruhat order")]
    NotComparable { x: String, w: String },

    #[error("{op} requires a fully commutative element, got {word}")]
    NotFullyCommutative { op: &'static str, word: String },

    #[error(
        "{op} is a closed-formula route, only valid on non-branching finite or affine graphs \
         other than affine F4; graph {graph} does not qualify"
    )]
    GateClosed { op: &'static str, graph: String },

    #[error("hypotheses of {op} violated: {reason}")]
    BadHypotheses { op: &'static str, reason: String },

    #[error("internal solver error in {op}: {reason} (this indicates a bug)")]
    SolverInconsistent { op: &'static str, reason: String },

    #[error("{0}")]
    BadPoly(#[from] crate::laurent::ParsePolyError),

    #[error("cache file {path}: {reason}")]
    BadCache { path: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
