//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the library.
///
/// Numerical singularities (resonant denominators, kernel evaluation at the
/// source point) are kept distinct from material degeneracies and from plain
/// argument errors so that sweep drivers can tell them apart.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument (out-of-range index, non-finite input, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation of a kernel at its singular point.
    #[error("singular kernel evaluation: {0}")]
    Singularity(String),

    /// Material parameters for which the closed forms degenerate
    /// (mu = 0 or lambda + 2 mu = 0).
    #[error("degenerate material: {0}")]
    DegenerateMaterial(String),

    /// Pole of a critical-value formula (not a material degeneracy).
    #[error("critical-value pole: {0}")]
    Pole(String),

    /// Degree bound of a critical branch violated.
    #[error("degree out of range: {0}")]
    Degree(String),

    /// Quadrature grid too coarse for the requested operation.
    #[error("grid under-resolved: {0}")]
    Resolution(String),

    /// Requested accuracy cannot be certified; carries the measured residual.
    #[error("accuracy not certified ({message}); measured residual {residual:.3e}")]
    Accuracy { message: String, residual: f64 },

    /// Extrapolation towards the surface did not stabilise.
    #[error("extrapolation instability: {0}")]
    Instability(String),

    /// Point outside the domain of validity of an evaluation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Modal linear system is singular (exactly critical, zero loss).
    #[error("singular modal system: {0}")]
    SingularSystem(String),
}
