//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // group construction and queries
    #[error("closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generators mix element kinds or ambient parameters")]
    MixedVariants,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid group specification: {0}")]
    InvalidGroupSpec(String),

    // walks
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    // characters and representations
    #[error("group has {classes} conjugacy classes, more than the supported {limit}")]
    TooManyClasses { classes: usize, limit: usize },
    #[error("no prime congruent to 1 mod {exponent} found below the search bound")]
    NoSuitablePrime { exponent: u64 },
    #[error("character table construction failed: {0}")]
    CharacterTable(String),
    #[error("regular representation splitting failed after {attempts} attempts: {reason}")]
    SplitFailure { attempts: usize, reason: String },
    #[error("group of order {order} exceeds the size cap {cap}")]
    SizeCap { order: usize, cap: usize },
    #[error("irreducible representations are incomplete: sum of squared dimensions {sum} != |G| = {order}")]
    IncompleteIrreps { sum: usize, order: usize },
    #[error("imaginary part {imag:e} of a probability exceeds tolerance")]
    ImagTooLarge { imag: f64 },
    #[error("eigenvalue multiplicity {value} is not within tolerance of an integer")]
    NonIntegralMultiplicity { value: f64 },

    // linear algebra
    #[error("iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("matrix dimensions do not agree: {0}")]
    DimensionMismatch(String),

    // embeddings
    #[error("matrix {index} is not invertible")]
    NotInvertible { index: usize },
    #[error("matrix {index} is the identity; inputs must be non-trivial")]
    NotNonTrivial { index: usize },
    #[error("no admissible prime found below {bound}")]
    PrimeSearchExhausted { bound: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::SizeCap { .. } | Error::TooManyClasses { .. }
        )
    }
}
