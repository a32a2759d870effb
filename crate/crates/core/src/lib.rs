//! Computable sequence spaces.
//!
//! Lazy `X`-valued sequences with declared support, their zerofree versions,
//! a fixed partition of ℕ into infinitely many infinite blocks, quasi-norms of
//! invariant sequence spaces evaluated on truncations, and finite-scale
//! certificates for spaceability constructions and norm-attaining operator
//! families.
//!
//! ```
//! use seqspace::{norms::lp_partial, ComputableSequence, Exponent, Support};
//!
//! let x = ComputableSequence::scalar("1/n", Support::AllNonzero, |n| 1.0 / n as f64);
//! let h = lp_partial(&x, Exponent::Finite(1.0), 1_000).unwrap().value;
//! assert!(h > 7.48 && h < 7.49);
//! ```

pub mod attain;
pub mod combination;
pub mod error;
pub mod formula;
pub mod norms;
pub mod partition;
pub mod sequence;
pub mod space;
pub mod spaceability;
pub mod sum;

pub use combination::{combine, interleave, Combination};
pub use error::{Error, Result};
pub use formula::Formula;
pub use norms::SpaceDescriptor;
pub use partition::{block_index, block_of, count_in_block, BlockPartition, MAX_BLOCK};
pub use sequence::{ComputableSequence, Generator, NonzeroIndices, Support};
pub use space::{vector_norm, CoordinateSpace, Exponent};
pub use sum::{compensated_sum, NeumaierSum};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/norms.md")]
    mod norms {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/spaceability.md")]
    mod spaceability {}
    #[doc = include_str!("../../../book/src/attaining.md")]
    mod attaining {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
