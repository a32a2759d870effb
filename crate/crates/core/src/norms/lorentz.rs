use crate::error::{Error, Result};
use crate::sequence::ComputableSequence;
use crate::sum::NeumaierSum;

use super::lp::power_term;
use super::{check_finite, Direction, PartialNormReport};

/// `‖x‖_{p,q} = (Σ_{n≤N} n^{q/p−1}·(x*_n)^q)^{1/q}` where `x*` is the
/// non-increasing rearrangement of `(‖x_n‖)_{n≤N}`.
pub fn lorentz_partial(
    x: &ComputableSequence,
    p: f64,
    q: f64,
    depth: u64,
) -> Result<PartialNormReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let value = lorentz_profile(&x.norm_profile(depth), p, q)?;
    Ok(PartialNormReport {
        family: "lorentz".into(),
        p: Some(crate::space::Exponent::Finite(p)),
        q: Some(crate::space::Exponent::Finite(q)),
        depth,
        value,
        direction: Direction::Partial,
    })
}

/// The Lorentz value of a coordinate-norm profile.
pub fn lorentz_profile(norms: &[f64], p: f64, q: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0 && q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Lorentz exponents must lie in (0, inf), got p={p}, q={q}"
        )));
    }
    check_finite(norms)?;
    let rearranged = rearrangement(norms);
    let Some(&largest) = rearranged.first() else {
        return Ok(0.0);
    };
    let weight_exponent = q / p - 1.0;
    let mut sum = NeumaierSum::new();
    for (k, &v) in rearranged.iter().enumerate() {
        let weight = if weight_exponent == 0.0 {
            1.0
        } else {
            ((k + 1) as f64).powf(weight_exponent)
        };
        sum.add(weight * power_term(v, q));
    }
    Ok(sum.value().powf(q.recip()).max(largest))
}

/// Nonzero entries sorted by descending value, ties by ascending position.
fn rearrangement(norms: &[f64]) -> Vec<f64> {
    let mut indexed: Vec<(usize, f64)> = norms
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, v)| v != 0.0)
        .collect();
    indexed.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    indexed.into_iter().map(|(_, v)| v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp_profile;
    use crate::space::Exponent;
    use proptest::prelude::*;

    #[test]
    fn reduces_to_l1() {
        assert_eq!(
            lorentz_profile(&[3.0, 1.0, 2.0, 0.0, 0.0], 1.0, 1.0).unwrap(),
            6.0
        );
    }

    #[test]
    fn single_unit_coordinate() {
        for (p, q) in [(0.5, 2.0), (2.0, 0.5), (1.0, 3.0), (3.0, 3.0)] {
            assert_eq!(lorentz_profile(&[1.0, 0.0, 0.0], p, q).unwrap(), 1.0);
        }
    }

    #[test]
    fn weights_follow_the_rearrangement() {
        // p = 1, q = 2: weights n^{1}, x* = (3, 2, 1)
        let got = lorentz_profile(&[1.0, 3.0, 2.0], 1.0, 2.0).unwrap();
        let expect = (9.0f64 + 2.0 * 4.0 + 3.0 * 1.0).sqrt();
        assert!((got - expect).abs() < 1e-15);
    }

    #[test]
    fn empty_and_zero_profiles() {
        assert_eq!(lorentz_profile(&[], 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(lorentz_profile(&[0.0, 0.0], 1.0, 2.0).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn permutation_invariance(
            v in prop::collection::vec(0.0..10.0f64, 1..60),
            seed in any::<u64>(),
            p in 0.3..3.0f64,
            q in 0.3..3.0f64,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut w = v.clone();
            w.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = lorentz_profile(&v, p, q).unwrap();
            let b = lorentz_profile(&w, p, q).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }

        #[test]
        fn diagonal_matches_lp(v in prop::collection::vec(0.0..10.0f64, 1..200), p in 0.3..4.0f64) {
            let a = lorentz_profile(&v, p, p).unwrap();
            let b = lp_profile(&v, Exponent::Finite(p)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.max(f64::MIN_POSITIVE));
        }
    }
}
