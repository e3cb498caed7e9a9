//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by instance validation, gate construction, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// A modular inverse was requested for a non-invertible element.
    #[error("not invertible: gcd({value}, {modulus}) != 1")]
    NotInvertible { value: u64, modulus: u64 },

    /// The multiplicative order is undefined because gcd(a, N) != 1.
    #[error("no order: gcd({a}, {modulus}) != 1")]
    NoOrder { a: u64, modulus: u64 },

    /// The promise b = a^t (mod N) does not hold for any t.
    #[error("unsolvable instance: no exponent t with {a}^t = {b} (mod {modulus})")]
    UnsolvableInstance { a: u64, b: u64, modulus: u64 },

    /// Instance parameters violate a structural requirement.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A basis map sent two basis states to the same target.
    #[error("not a permutation")]
    NotAPermutation,

    /// Measurement was attempted on a state with no remaining probability mass.
    #[error("invalid state")]
    InvalidState,

    /// The iteration count violates the success-bound constraint.
    #[error("p too large for r: require p + log2(p) <= log2(r)")]
    IterationCountTooLarge,

    /// Register layout violates a size constraint.
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    /// Candidate-set parameters violate a size constraint.
    #[error("invalid set: {0}")]
    InvalidSet(String),

    /// The requested simulation would exceed the dense-state size cap.
    #[error("state too large: {0} qubits exceeds the dense-simulation cap")]
    StateTooLarge(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
