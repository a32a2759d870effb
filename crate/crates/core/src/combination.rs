//! Interleaved copies of a zerofree sequence and their finite combinations.
//!
//! `interleave(x⁰, i)` places `x_j` at index `block_index(i, j)`; copies for
//! different `i` have disjoint supports. A [`Combination`] `z = Σ a_i y_i` is
//! therefore evaluated without any floating-point addition: its coordinate at
//! `block_index(i, j)` is the single product `a_i·x_j`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::partition::{block_index, block_of, count_in_block, BlockPartition, MAX_BLOCK};
use crate::sequence::{ComputableSequence, NonzeroIndices, Support};

/// The `i`-th interleaved copy `y_i` of a zerofree sequence.
pub fn interleave(x0: &ComputableSequence, block: u64) -> Result<ComputableSequence> {
    if !x0.is_zerofree() {
        return Err(Error::NotZerofree(x0.label().to_string()));
    }
    if block == 0 {
        return Err(Error::InvalidParameter("blocks are 1-based".into()));
    }
    // also rejects blocks whose first index is out of range
    block_index(block, 1)?;
    let src = x0.clone();
    Ok(ComputableSequence::from_fn(
        format!("y_{block}[{}]", x0.label()),
        x0.space(),
        Support::Enumerated(NonzeroIndices::new(move |j| {
            block_index(block, j).unwrap_or(u64::MAX)
        })),
        move |n, out| {
            let (i, j) = block_of(n);
            if i == block {
                src.eval_into(j, out)
            } else {
                out.fill(0.0)
            }
        },
    ))
}

/// A finite combination `z = Σ_{i≤m} a_i y_i` of interleaved copies of `x⁰`.
#[derive(Debug, Clone)]
pub struct Combination {
    coefficients: Arc<[f64]>,
    x0: ComputableSequence,
    partition: BlockPartition,
}

/// Build `Σ a_i y_i` from the coefficient list and the zerofree witness.
pub fn combine(coefficients: &[f64], x0: &ComputableSequence) -> Result<Combination> {
    if !x0.is_zerofree() {
        return Err(Error::NotZerofree(x0.label().to_string()));
    }
    if coefficients.len() as u64 > MAX_BLOCK {
        return Err(Error::Overflow(format!(
            "{} coefficients exceed the {MAX_BLOCK} addressable blocks",
            coefficients.len()
        )));
    }
    if let Some(bad) = coefficients.iter().find(|a| !a.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite coefficient {bad}"
        )));
    }
    Ok(Combination {
        coefficients: coefficients.into(),
        x0: x0.clone(),
        partition: BlockPartition,
    })
}

impl Combination {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn witness(&self) -> &ComputableSequence {
        &self.x0
    }

    pub fn partition(&self) -> BlockPartition {
        self.partition
    }

    /// `z_n`.
    pub fn eval_into(&self, n: u64, out: &mut [f64]) {
        let (i, j) = block_of(n);
        match self.coefficients.get((i - 1) as usize) {
            Some(&a) if a != 0.0 => {
                self.x0.eval_into(j, out);
                out.iter_mut().for_each(|t| *t *= a);
            }
            _ => out.fill(0.0),
        }
    }

    /// `z` as a lazily evaluated sequence, with its support enumerated over
    /// the blocks that carry a nonzero coefficient.
    pub fn to_sequence(&self) -> ComputableSequence {
        let blocks: Vec<u64> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(i, _)| i as u64 + 1)
            .collect();
        let label = format!("Σa_i·y_i[{}; m={}]", self.x0.label(), self.len());
        let support = if blocks.is_empty() {
            Support::Finite(0)
        } else {
            Support::Enumerated(union_enumeration(blocks))
        };
        let this = self.clone();
        ComputableSequence::from_fn(label, self.x0.space(), support, move |n, out| {
            this.eval_into(n, out)
        })
    }

    /// `j ↦ z_{block_index(m, j)}`, read through `z` itself.
    pub fn block_restriction(&self, block: u64) -> Result<ComputableSequence> {
        block_index(block, 1)?;
        let this = self.clone();
        let a = self
            .coefficients
            .get((block - 1) as usize)
            .copied()
            .unwrap_or(0.0);
        let support = if a != 0.0 {
            Support::AllNonzero
        } else {
            Support::Finite(0)
        };
        Ok(ComputableSequence::from_fn(
            format!("z|block {block}"),
            self.x0.space(),
            support,
            move |j, out| {
                let n = block_index(block, j).expect("block position beyond the u64 index range");
                this.eval_into(n, out)
            },
        ))
    }
}

/// Enumeration of `⋃_{i ∈ blocks} ℕ_i` in increasing order.
fn union_enumeration(blocks: Vec<u64>) -> NonzeroIndices {
    let first = *blocks.iter().min().expect("nonempty");
    NonzeroIndices::new(move |j| {
        let count = |n: u64| -> u64 { blocks.iter().map(|&b| count_in_block(b, n)).sum() };
        // count(n) ≥ ⌈(n >> (first-1)) / 2⌉, so n = 2^first · j suffices
        let mut lo = j;
        let mut hi = j.saturating_mul(1u64 << first.min(63));
        if count(hi) < j {
            return u64::MAX;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if count(mid) >= j {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{CoordinateSpace, Exponent};

    fn harmonic() -> ComputableSequence {
        ComputableSequence::scalar("1/n", Support::AllNonzero, |n| 1.0 / n as f64)
    }

    #[test]
    fn interleave_places_the_witness_on_odd_indices() {
        let y1 = interleave(&harmonic(), 1).unwrap();
        for j in 1..=50u64 {
            assert_eq!(y1.scalar_at(2 * j - 1), 1.0 / j as f64);
            assert_eq!(y1.scalar_at(2 * j), 0.0);
        }
    }

    #[test]
    fn interleave_zerofree_identity() {
        let x0 = harmonic();
        for i in 1..=10 {
            let yi0 = interleave(&x0, i).unwrap().zerofree(None).unwrap();
            for j in 1..=500 {
                assert_eq!(yi0.scalar_at(j).to_bits(), x0.scalar_at(j).to_bits());
            }
        }
    }

    #[test]
    fn interleaved_copies_are_disjoint() {
        let y2 = interleave(&harmonic(), 2).unwrap();
        let y3 = interleave(&harmonic(), 3).unwrap();
        for n in 1..=10_000 {
            assert!(y2.scalar_at(n) == 0.0 || y3.scalar_at(n) == 0.0);
        }
    }

    #[test]
    fn interleave_rejects_non_zerofree_input() {
        let gappy = harmonic().with_override(3, vec![0.0]).unwrap();
        assert!(matches!(interleave(&gappy, 1), Err(Error::NotZerofree(_))));
        assert!(matches!(
            interleave(&harmonic(), 65),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn combine_examples() {
        let z = combine(&[1.0, -2.0], &harmonic()).unwrap();
        let n = block_index(2, 3).unwrap();
        let mut out = [0.0];
        z.eval_into(n, &mut out);
        assert_eq!(out[0], -2.0 * (1.0 / 3.0));

        let z = combine(&[0.0, 0.0, 5.0], &harmonic())
            .unwrap()
            .to_sequence();
        for n in 1..=2000 {
            let (i, j) = block_of(n);
            let expect = if i == 3 { 5.0 * (1.0 / j as f64) } else { 0.0 };
            assert_eq!(z.scalar_at(n), expect);
        }

        let empty = combine(&[], &harmonic()).unwrap().to_sequence();
        assert!(empty.has_finite_support());
        assert!((1..=100).all(|n| empty.scalar_at(n) == 0.0));
    }

    #[test]
    fn combination_is_zero_outside_its_blocks() {
        let a = [0.5, -1.25, 3.0];
        let z = combine(&a, &harmonic()).unwrap().to_sequence();
        for n in 1..=5000u64 {
            let (i, j) = block_of(n);
            let v = z.scalar_at(n);
            if i > 3 {
                assert_eq!(v.to_bits(), 0.0f64.to_bits());
            } else {
                assert_eq!(
                    v.to_bits(),
                    (a[(i - 1) as usize] * (1.0 / j as f64)).to_bits()
                );
            }
        }
    }

    #[test]
    fn union_enumeration_matches_brute_force() {
        let a = [1.0, 0.0, 2.0, 0.0, -1.0];
        let z = combine(&a, &harmonic()).unwrap().to_sequence();
        let Support::Enumerated(sigma) = z.support().clone() else {
            panic!("expected enumerated support");
        };
        let brute: Vec<u64> = (1..=3000)
            .filter(|&n| matches!(block_of(n).0, 1 | 3 | 5))
            .collect();
        for (k, &n) in brute.iter().enumerate() {
            assert_eq!(sigma.get(k as u64 + 1), n);
        }
        // and the zerofree version walks the nonzero coordinates in order
        let z0 = z.zerofree(None).unwrap();
        for (k, &n) in brute.iter().enumerate().take(500) {
            assert_eq!(z0.scalar_at(k as u64 + 1), z.scalar_at(n));
        }
    }

    #[test]
    fn vector_valued_combination() {
        let space = CoordinateSpace::new(2, Exponent::Finite(1.0)).unwrap();
        let x0 = ComputableSequence::from_fn("v", space, Support::AllNonzero, |n, out| {
            out[0] = 1.0 / n as f64;
            out[1] = -2.0;
        });
        let comb = combine(&[2.0, 3.0], &x0).unwrap();
        let mut out = [0.0; 2];
        comb.eval_into(block_index(2, 4).unwrap(), &mut out);
        assert_eq!(out, [3.0 * 0.25, -6.0]);
    }

    #[test]
    fn block_restriction_reads_through_z() {
        let comb = combine(&[0.0, 2.0], &harmonic()).unwrap();
        let r = comb.block_restriction(2).unwrap();
        for j in 1..100 {
            assert_eq!(r.scalar_at(j), 2.0 * (1.0 / j as f64));
        }
        let r1 = comb.block_restriction(1).unwrap();
        assert!(r1.has_finite_support());
    }
}
