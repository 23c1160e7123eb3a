use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the zero vector has no primitivity")]
    ZeroVector,

    #[error("vector {0} is not primitive")]
    NotPrimitive(String),

    #[error("empty input")]
    EmptyInput,

    #[error("unsupported dimension {0} (only 1 to 3 are handled)")]
    UnsupportedDimension(usize),

    #[error("polytope is not full dimensional (affine dimension {affine} in ambient {ambient})")]
    NotFullDimensional { affine: usize, ambient: usize },

    #[error("polytope is not Fano: {0}")]
    NotFano(String),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("invalid mutation data: {0}")]
    InvalidMutationData(String),

    /// Some negative-height component is not divisible by the matching power of `h`.
    #[error("polynomial is not mutable: component at height {height} is not divisible")]
    NotMutable { height: BigInt },

    /// The Minkowski-factor condition fails at the given height.
    #[error("mutation undefined at height {height}")]
    Undefined { height: BigInt },

    /// A combinatorial mutation produced a non-Fano polytope. Never expected.
    #[error("mutation produced a non-Fano polytope: {0}")]
    FanoViolated(String),

    #[error("step {index} of the path failed: {source}")]
    PathStep {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("not a triangle: {0} vertices")]
    NotATriangle(usize),

    #[error("not a polygon: ambient dimension {0}")]
    NotAPolygon(usize),

    #[error("weights are not pairwise coprime: {0:?}")]
    NotWellFormed(Vec<String>),

    #[error("parse error at byte offset {offset} (line {line}, column {column}): {message}")]
    Parse {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error("unsupported graph format version {found} (expected {expected})")]
    VersionMismatch { expected: u64, found: u64 },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Domain failures are legitimate negative answers (not mutable, undefined),
    /// as opposed to bad input.
    pub fn is_domain_failure(&self) -> bool {
        match self {
            Error::NotMutable { .. } | Error::Undefined { .. } => true,
            Error::PathStep { source, .. } => source.is_domain_failure(),
            _ => false,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension mismatch",
            Error::ZeroVector => "zero vector",
            Error::NotPrimitive(_) => "not primitive",
            Error::EmptyInput => "empty input",
            Error::UnsupportedDimension(_) => "unsupported dimension",
            Error::NotFullDimensional { .. } => "not full dimensional",
            Error::NotFano(_) => "not fano",
            Error::ZeroPolynomial => "zero polynomial",
            Error::InvalidMutationData(_) => "invalid mutation data",
            Error::NotMutable { .. } => "not mutable",
            Error::Undefined { .. } => "mutation undefined",
            Error::FanoViolated(_) => "fano violated",
            Error::PathStep { .. } => "path step failed",
            Error::NotATriangle(_) => "not a triangle",
            Error::NotAPolygon(_) => "not a polygon",
            Error::NotWellFormed(_) => "not well formed",
            Error::Parse { .. } => "parse error",
            Error::InvalidDocument(_) => "invalid document",
            Error::VersionMismatch { .. } => "version mismatch",
            Error::Io(_) => "io error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub fn from_json(err: &serde_json::Error, text: &str) -> Self {
        let (line, column) = (err.line(), err.column());
        Error::Parse {
            offset: byte_offset(text, line, column),
            line,
            column,
            message: err.to_string(),
        }
    }
}

/// Converts serde_json's 1-based line / column into a byte offset.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(text.len());
        }
        offset += l.len();
    }
    text.len()
}

/// Deserializes a JSON document, reporting syntax errors with their byte offset.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => Error::InvalidDocument(e.to_string()),
        _ => Error::from_json(&e, text),
    })
}
