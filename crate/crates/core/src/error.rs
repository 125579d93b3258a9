use thiserror::Error;

pub type Result<T> = std::result::Result<T, QhjError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QhjError {
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid polynomial family: {0}")]
    InvalidFamily(String),

    #[error("polynomial degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("the zero polynomial has no root set")]
    ZeroPolynomial,

    #[error("symmetric tridiagonal eigenvalue iteration did not converge")]
    EigenNoConvergence,

    #[error("coefficient R vanishes at q = {q}")]
    VanishingR { q: f64 },

    #[error("grid point {point} lies outside the domain ({lo}, {hi})")]
    OutsideDomain { point: f64, lo: f64, hi: f64 },

    #[error("grid point {point} is within {distance:e} of the pole at {pole}")]
    GridPointNearPole { point: f64, pole: f64, distance: f64 },

    #[error("wave function vanishes at q = {q} (|u| = {magnitude:e})")]
    EvaluationAtNode { q: f64, magnitude: f64 },

    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("contour passes within {distance:e} of the pole at {pole_re}{pole_im:+}i")]
    ContourTooClose {
        pole_re: f64,
        pole_im: f64,
        distance: f64,
    },

    #[error("residue circle of radius {radius} overlaps another pole at distance {distance}")]
    RadiusOverlapsPole { radius: f64, distance: f64 },

    #[error("argument-principle value {re}{im:+}i is not within 0.2 of an integer")]
    IllConditionedContour { re: f64, im: f64 },

    #[error("contour quadrature did not converge after {samples} samples")]
    NonConvergence { samples: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
