//! Anti-concentration of random signed products in finite groups.
//!
//! For elements `A_1, .., A_n` of a group, `rho_V` is the largest point
//! probability of `Â_1 ... Â_n`, where each `Â_i` is `A_i` or its inverse
//! with probability 1/2. This crate computes it exactly ([`walk`]), through
//! characters and unitary representations ([`charrep`]), and by sampling,
//! and checks the supporting inequalities ([`spectral`], [`embed`]).
//!
//! ```
//! use anticonc::group::catalog;
//! use anticonc::walk::{rho_exact, SignedSequence};
//!
//! let g = catalog::named("S3")?;
//! let seq = SignedSequence::from_indices(&g, &[1, 2, 1])?;
//! let r = rho_exact(&g, &seq)?;
//! assert!(r.rho.to_f64() > 0.0);
//! # Ok::<(), anticonc::Error>(())
//! ```

pub mod charrep;
pub mod embed;
pub mod error;
pub mod group;
pub mod linalg;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/walks.md")]
    pub mod walks {}
    #[doc = include_str!("../../../book/src/characters.md")]
    pub mod characters {}
    #[doc = include_str!("../../../book/src/multiplicities.md")]
    pub mod multiplicities {}
    #[doc = include_str!("../../../book/src/singular-values.md")]
    pub mod singular_values {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    pub mod embeddings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
