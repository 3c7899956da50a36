use thiserror::Error;

/// Every failure the workbench can report.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkbenchError {
    #[error("element not found: {0}")]
    ElementNotFound(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("map is not monotone: {0}")]
    NotMonotone(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { message: String, offset: usize },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("degenerate localization: inverting {0} yields the zero ring")]
    DegenerateLocalization(String),
    #[error("zero ring refused as a stalk: {0}")]
    ZeroRing(String),
    #[error("invalid ring map: {0}")]
    InvalidRingMap(String),
    #[error("certificate required: {0}")]
    CertificateRequired(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid prime: {0}")]
    InvalidPrime(String),

    #[error("schematicity violation: {0}")]
    SchematicityViolation(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("morphisms do not share a target")]
    MismatchedTargets,
    #[error("affineness unverifiable: {0}")]
    AffinenessUnverifiable(String),

    #[error("invalid diagram: {0}")]
    DiagramInvalid(String),
    #[error("corrupt complex: {0}")]
    CorruptComplex(String),
    #[error("divergent twist decomposition: {0}")]
    Divergence(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<std::io::Error> for WorkbenchError {
    fn from(e: std::io::Error) -> Self {
        WorkbenchError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WorkbenchError>;
