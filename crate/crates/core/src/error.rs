use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received parameters outside its contract.
    #[error("parameter violation: {0}")]
    ParameterViolation(String),

    /// Evaluation point outside the profile domain.
    #[error("s = {s} outside profile domain [{lo}, {hi}]")]
    DomainViolation { s: f64, lo: f64, hi: f64 },

    /// The quadrature radicand became non-positive at an interior point.
    #[error("non-finite integrand: radicand <= 0 at t = {t}")]
    NonFiniteIntegrand { t: f64 },

    /// The profile derivative vanishes where a curvature quantity needs it.
    #[error("singular point: |w'(s)| = 0 at s = {s}")]
    SingularPoint { s: f64 },

    /// A point handed to the sphere formula does not lie on the scaled sphere.
    #[error("point not on scaled sphere (residual {residual})")]
    NotOnSphere { residual: f64 },

    /// A projection basis failed the orthonormality precondition.
    #[error("basis not orthonormal (max deviation {deviation})")]
    NonOrthonormalBasis { deviation: f64 },

    /// Gram-Schmidt hit a pivot below the rank threshold.
    #[error("rank-deficient frame (Gram-Schmidt pivot {pivot})")]
    RankDeficient { pivot: f64 },

    /// The step controller drove dt below 1e-14 away from the extinction guard.
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    /// Too few small-f samples to fit a decay rate.
    #[error("insufficient tail: {qualifying} samples with f < 0.1 (need >= 10)")]
    InsufficientTail { qualifying: usize },

    /// Mismatched vector/sphere dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A user-supplied profile table failed validation.
    #[error("invalid profile table: {0}")]
    InvalidTable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
