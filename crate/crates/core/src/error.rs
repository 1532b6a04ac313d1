use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("finite-difference stencil leaves the domain at {point:?}")]
    OutsideDomain { point: Vec<f64> },

    #[error("sample set is empty")]
    EmptySample,

    #[error("sphere sampler needs at least 12 nodes, got {0}")]
    SamplerTooSmall(usize),

    #[error("point is not in the monogenic hull (inf = {inf:e})")]
    NotInHull { inf: f64 },

    #[error("could not resolve a boundary point: {0}")]
    BoundaryUnresolved(String),

    #[error("twistor point lies outside both affine charts")]
    OutsideCharts,

    #[error("homogeneous coordinates are all zero")]
    ZeroHomogeneous,

    #[error("quadrature did not converge: last change {change:e} exceeds tolerance {tol:e}")]
    QuadratureDiverged { change: f64, tol: f64 },

    #[error("first cohomology of Q_{k} is trivial; coefficients need k <= -2")]
    TrivialCohomology { k: i32 },

    #[error("exponents (l = {l}, m = {m}) are outside the admissible range for degree {k}")]
    InvalidExponent { k: i32, l: i32, m: i32 },

    #[error("closedness certificate failed: residual {residual:e} exceeds {tol:e}")]
    NotClosed { residual: f64, tol: f64 },

    #[error("unknown field '{0}'")]
    UnknownField(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
