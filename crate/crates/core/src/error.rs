use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {z} is not an interior point of domain `{domain}`")]
    OutsideDomain { domain: String, z: Complex64 },

    #[error("membership of {z} in `{domain}` is indeterminate: {reason}")]
    Indeterminate {
        domain: String,
        z: Complex64,
        reason: String,
    },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("degenerate parametrization: |gamma'| = {speed:e} at t = {t}")]
    DegenerateParametrization { t: f64, speed: f64 },

    #[error("{z} lies on the branch cut of the principal power")]
    BranchCut { z: Complex64 },

    #[error("Newton inversion did not converge: last iterate {last}, residual {residual:e}")]
    NoConvergence { last: Complex64, residual: f64 },

    #[error("quantity `{quantity}` is not available on `{domain}`")]
    UnsupportedQuantity { quantity: String, domain: String },

    #[error("Gram matrix is numerically singular at degree {requested}; largest stable degree is {stable}")]
    DegreeReduction { requested: usize, stable: usize },

    #[error("grid resolution {resolution} cannot connect the endpoints")]
    Resolution { resolution: usize },

    #[error("sequence diverges: {0}")]
    Divergence(String),

    #[error("schedule error: {0}")]
    Schedule(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
