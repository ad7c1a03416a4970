use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("column index {index} out of range for a matrix with {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },

    #[error("non-finite entry in matrix data")]
    NonFinite,

    #[error("matrix is not in su(2): anti-Hermitian defect {defect:.3e}, |trace| {trace:.3e}")]
    NotSu2 { defect: f64, trace: f64 },

    #[error("spectral parameter must be nonzero")]
    ZeroSpectralParameter,

    #[error("spectral parameter must be a positive real, got {0}")]
    NonPositiveLambda(f64),

    #[error("invalid soliton parameters: {0}")]
    InvalidParams(String),

    #[error("Date system is singular at (s, t) = ({s}, {t}): |d0| = {d0:.3e}")]
    Singular { s: f64, t: f64, d0: f64 },

    #[error("degenerate point at (s, t) = ({s}, {t}): |d1|^2 + |d_(N+1)|^2 vanishes")]
    Degenerate { s: f64, t: f64 },

    #[error("arccos argument {0} lies outside [-1, 1] beyond rounding")]
    ArccosDomain(f64),

    #[error("potential q vanishes at this point, M is undefined")]
    VanishingPotential,

    #[error("curvature must be positive, got {0}")]
    NonPositiveCurvature(f64),

    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("permutation search refused for N = {0} (limit is 8)")]
    PermutationLimit(usize),

    #[error("integration is path dependent: corner gap {gap:.3e} exceeds {limit:.3e}")]
    PathDependence { gap: f64, limit: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
