use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The operation exists but is not available for this process family or scheme.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Numerical quadrature stopped before reaching the requested tolerance.
    #[error("{what} did not converge: estimate {estimate:e}, achieved error {abs_error:e}")]
    NotConverged {
        what: String,
        estimate: f64,
        abs_error: f64,
    },

    /// A quantity is known analytically to be infinite.
    #[error("divergent: {0}")]
    Divergent(String),

    /// The (process, p, convention) combination is outside every rate statement we know.
    #[error("not covered: {0}")]
    NotCovered(String),

    #[error("singular design: {0}")]
    Singular(String),
}
