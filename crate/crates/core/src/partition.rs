//! The block partition of `ℕ` into countably many infinite disjoint sets.
//!
//! Block `i` is `ℕ_i = { 2^{i-1}·(2j-1) : j ≥ 1 }`: block 1 holds the odd
//! numbers, block 2 the numbers that are twice an odd number, and so on.
//! Every positive integer factors uniquely as a power of two times an odd
//! number, so the blocks are disjoint and cover `ℕ`. Within a block the
//! enumeration `j ↦ block_index(i, j)` is strictly increasing.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest block whose first element fits in a `u64`.
pub const MAX_BLOCK: u64 = 64;

/// The fixed bijection `ℕ × ℕ → ℕ`, `(i, j) ↦ 2^{i-1}·(2j − 1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BlockPartition;

impl BlockPartition {
    pub fn index(&self, block: u64, position: u64) -> Result<u64> {
        block_index(block, position)
    }

    pub fn locate(&self, n: u64) -> (u64, u64) {
        block_of(n)
    }

    /// Number of elements of block `i` that are `≤ n`.
    pub fn count_at_most(&self, block: u64, n: u64) -> u64 {
        count_in_block(block, n)
    }
}

/// `2^{i-1}·(2j − 1)`, checked.
pub fn block_index(block: u64, position: u64) -> Result<u64> {
    if block == 0 || position == 0 {
        return Err(Error::InvalidParameter(format!(
            "block and position are 1-based, got ({block}, {position})"
        )));
    }
    let overflow = || Error::Overflow(format!("block_index({block}, {position})"));
    let odd = position
        .checked_mul(2)
        .and_then(|t| t.checked_sub(1))
        .ok_or_else(overflow)?;
    if block > MAX_BLOCK {
        return Err(overflow());
    }
    let shift = (block - 1) as u32;
    // `odd << shift` overflows iff odd has fewer than `shift` leading zeros
    if shift > 0 && odd.leading_zeros() < shift {
        return Err(overflow());
    }
    Ok(odd << shift)
}

/// The unique `(i, j)` with `block_index(i, j) = n`.
///
/// # Panics
///
/// If `n == 0`.
pub fn block_of(n: u64) -> (u64, u64) {
    assert!(n >= 1, "indices are 1-based");
    let tz = n.trailing_zeros();
    let odd = n >> tz;
    (tz as u64 + 1, odd / 2 + 1)
}

/// `#{ j ≥ 1 : block_index(i, j) ≤ n }`.
pub fn count_in_block(block: u64, n: u64) -> u64 {
    if block == 0 || block > MAX_BLOCK {
        return 0;
    }
    let scaled = n >> (block - 1);
    // odd numbers in 1..=scaled
    scaled.div_ceil(2)
}
