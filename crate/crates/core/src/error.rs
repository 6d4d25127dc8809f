use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("{what}: point {z} is outside the domain ({reason})")]
    Domain {
        what: &'static str,
        z: num_complex::Complex<f64>,
        reason: String,
    },

    #[error("weight is singular at the node {0}")]
    SingularPoint(num_complex::Complex<f64>),

    #[error("invalid quadrature order: {0}")]
    InvalidOrder(String),

    #[error("discrete Gram matrix is numerically singular at degree {degree} (quadrature too coarse?)")]
    SingularGram { degree: usize },

    #[error("degree {n} exceeds the available degree {max}")]
    DegreeOutOfRange { n: usize, max: usize },

    #[error("kernel evaluation supports at most two singularities, got {0}")]
    UnsupportedSingularityCount(usize),

    #[error("{what}: evaluation point {z} hits a pole")]
    Pole {
        what: &'static str,
        z: num_complex::Complex<f64>,
    },

    #[error("radius {r} must lie in ({lo}, {hi})")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },

    #[error("{0} did not converge")]
    NotConverged(String),

    #[error("alpha cross-check failed at (n={n}, k={k}): convolution {conv:e} vs contour {contour:e}")]
    AlphaMismatch {
        n: usize,
        k: usize,
        conv: f64,
        contour: f64,
    },

    #[error("zero tracking failed near {a}: {reason}")]
    ZeroTracking {
        a: num_complex::Complex<f64>,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed weight config: {0}")]
    Config(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
