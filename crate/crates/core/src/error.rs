use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced anywhere in the pipeline.
///
/// Variant names are stable; external bindings surface them verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh has no vertices")]
    EmptyInput,
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
    #[error("every face was removed during sanitization")]
    EmptyAfterSanitize,
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("face starting at token {position} is truncated ({found} coordinate tokens)")]
    TruncatedFace { position: usize, found: usize },
    #[error("unknown token id {token} at position {position}")]
    UnknownToken { position: usize, token: u16 },
    #[error("coordinate token at position {position} where a control token was expected")]
    MissingSeparator { position: usize },
    #[error("invalid vocabulary: {0}")]
    InvalidVocab(String),

    #[error("face {position} does not attach to root {root:?} (attachment edge {edge:?})")]
    ConstraintViolation {
        position: usize,
        root: Option<usize>,
        edge: [[u16; 3]; 2],
    },
    #[error("sequence already closed by EOS")]
    SequenceClosed,
    #[error("root offset {delta} out of range for frontier of length {queue_len}")]
    RootOutOfRange { delta: usize, queue_len: usize },

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("malformed binary data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Variant name without payload, e.g. `"TruncatedFace"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::DegenerateGeometry(_) => "DegenerateGeometry",
            Error::EmptyAfterSanitize => "EmptyAfterSanitize",
            Error::InvalidMesh(_) => "InvalidMesh",
            Error::TruncatedFace { .. } => "TruncatedFace",
            Error::UnknownToken { .. } => "UnknownToken",
            Error::MissingSeparator { .. } => "MissingSeparator",
            Error::InvalidVocab(_) => "InvalidVocab",
            Error::ConstraintViolation { .. } => "ConstraintViolation",
            Error::SequenceClosed => "SequenceClosed",
            Error::RootOutOfRange { .. } => "RootOutOfRange",
            Error::ShapeError(_) => "ShapeError",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Parse { .. } => "Parse",
            Error::Format(_) => "Format",
            Error::Io(_) => "IoError",
            Error::Json(_) => "Json",
        }
    }
}
