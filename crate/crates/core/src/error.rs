use alloc::string::String;

/// Everything that can go wrong in this crate.
///
/// The variants are deliberately coarse; the CLI maps each one to its own exit
/// code.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Parameters fall outside the range where an operation is defined,
    /// e.g. asking for more complement pairs than exist.
    #[error("regime error: {0}")]
    Regime(String),
    /// Structurally invalid input: bad element, bad index, overlapping class.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Input exceeds a configured size cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A puzzle whose rules contradict each other.
    #[error("inconsistent puzzle: {0}")]
    Inconsistent(String),
    /// Numeric argument outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = core::result::Result<T, Error>;
