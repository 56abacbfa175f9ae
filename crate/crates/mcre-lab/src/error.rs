use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs have mismatched or invalid dimensions.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A model component violates its invariants.
    #[error("invalid model: {0}")]
    Model(String),

    /// Enumerating the lifted state space would exceed the configured cap.
    #[error("state cap exceeded: {states} lifted states > cap {cap}")]
    StateCap { states: usize, cap: usize },

    /// An operation's mathematical precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The matrix is not irreducible where irreducibility is required.
    #[error("matrix is reducible")]
    Reducible,

    /// The chain is not ergodic where ergodicity is required.
    #[error("chain is not ergodic: {0}")]
    NotErgodic(String),

    /// Iterative solver failed to converge.
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),

    /// Invalid argument value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
