use thiserror::Error;

/// Convenience alias used by every fallible operation in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by the numerical operators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on
    /// (negative order, evaluation point left of the base point, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated hypothesis was not met, e.g. the declared smoothness of a
    /// function is too low for the requested derivative order.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A one-sided limit did not settle: successive extrapolants keep
    /// disagreeing beyond the internal tolerance.
    #[error("limit did not converge: {0}")]
    Convergence(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the
    /// requested tolerance. Carries the error estimate it did achieve.
    #[error("accuracy target not met: requested {requested:.3e}, achieved {achieved:.3e}")]
    Accuracy { requested: f64, achieved: f64 },

    /// An operation hit a point where its defining formula is singular,
    /// e.g. the chain rule at g(t) = 0.
    #[error("singularity: {0}")]
    Singularity(String),

    /// An improper integral diverges for the requested parameters.
    #[error("divergent integral: {0}")]
    Divergence(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}
