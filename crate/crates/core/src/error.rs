use alloc::string::String;

/// Errors reported by the collocation kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An evaluation point lies outside the native interval.
    #[error("argument {value} lies outside [{lo}, {hi}]")]
    OutOfDomain {
        /// Offending argument.
        value: f64,
        /// Lower end of the admissible interval.
        lo: f64,
        /// Upper end of the admissible interval.
        hi: f64,
    },
    /// A size or count argument is invalid.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Matrix or vector dimensions do not fit together.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Nodes are repeated or not strictly increasing.
    #[error("nodes must be distinct and strictly increasing")]
    DuplicateNodes,
    /// Newton iteration for a node family did not converge.
    #[error("Newton iteration for {kind} nodes (M = {m}) did not converge")]
    NoConvergence {
        /// Node family.
        kind: &'static str,
        /// Requested node count.
        m: usize,
    },
    /// A square matrix is singular to working precision.
    #[error("matrix is singular to working precision")]
    Singular,
    /// A quadrature weight is not positive where positivity is required.
    #[error("quadrature weight {weight} at node {index} is not positive")]
    NonPositiveWeight {
        /// Node index (0-based).
        index: usize,
        /// Offending weight.
        weight: f64,
    },
    /// The requested operation does not support this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// The problem carries no exact solution.
    #[error("the problem has no exact solution attached")]
    MissingExact,
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
