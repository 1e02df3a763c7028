use thiserror::Error;

/// Errors raised by the laboratory's builders, solvers and verifiers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("mesh generation failed: {0}")]
    Triangulation(String),

    #[error("invalid densities: {0}")]
    InvalidDensity(String),

    #[error("no Steklov boundary left: {0}")]
    NoSteklovBoundary(String),

    #[error("interior block is not positive definite: {0}")]
    SingularInterior(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("requested {requested} eigenpairs but only {available} boundary degrees of freedom exist")]
    TooManyEigenpairs { requested: usize, available: usize },

    #[error("input values are not sorted ascending at position {0}")]
    Unsorted(usize),

    #[error("eigenvector is identically zero")]
    ZeroVector,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid tubular geometry: {0}")]
    Geometry(String),

    #[error("invalid rotation system: {0}")]
    InvalidRotation(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
