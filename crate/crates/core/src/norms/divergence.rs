//! Finite evidence that a sequence leaves `ℓ_q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{ComputableSequence, CoordinateProbe};
use crate::space::Exponent;
use crate::sum::NeumaierSum;

use super::lp::power_term;

/// Result of the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DivergenceOutcome {
    /// The statistic first exceeds the threshold at `depth`.
    Crossed { depth: u64 },
    /// The statistic stayed at or below the threshold up to the cap. This is
    /// not a membership proof.
    NotReached,
}

/// Evidence for `‖x‖_q = ∞`: the depth at which the partial `q`-power sum
/// `Σ_{n≤N} ‖x_n‖^q` (the running sup for `q = ∞`) first exceeds `T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceCertificate {
    pub q: Exponent,
    pub threshold: f64,
    pub n_max: u64,
    #[serde(flatten)]
    pub outcome: DivergenceOutcome,
    /// The statistic at the crossing, or at `n_max` when not reached.
    pub statistic: f64,
    /// The doubling bracket `(N/2, N]` containing the crossing: the first
    /// power of two at which the statistic exceeded `T`, and its predecessor.
    pub bracket: Option<(u64, u64)>,
}

impl DivergenceCertificate {
    pub fn depth(&self) -> Option<u64> {
        match self.outcome {
            DivergenceOutcome::Crossed { depth } => Some(depth),
            DivergenceOutcome::NotReached => None,
        }
    }

    pub fn crossed(&self) -> bool {
        self.depth().is_some()
    }
}

/// Searches for the first `N ≤ N_max` with `Σ_{n≤N} ‖x_n‖^q > T`.
///
/// The partial sums are accumulated once in index order, so every `N` is
/// tested; the doubling checkpoints are reported as a bracket. For
/// `q = 1` this coincides with comparing the partial `ℓ_1` norm to `T`.
pub fn divergence_certificate(
    x: &ComputableSequence,
    q: Exponent,
    threshold: f64,
    n_max: u64,
) -> Result<DivergenceCertificate> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let mut probe = CoordinateProbe::new(x);
    let mut sum = NeumaierSum::new();
    let mut sup = 0.0f64;
    let mut statistic = 0.0;
    for n in 1..=n_max {
        let v = probe.norm(n);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        statistic = match q {
            Exponent::Infinity => {
                sup = sup.max(v);
                sup
            }
            Exponent::Finite(q) => {
                if v != 0.0 {
                    sum.add(power_term(v, q));
                }
                sum.value()
            }
        };
        if statistic > threshold {
            let hi = n.next_power_of_two();
            let lo = if hi == 1 { 0 } else { hi / 2 };
            return Ok(DivergenceCertificate {
                q,
                threshold,
                n_max,
                outcome: DivergenceOutcome::Crossed { depth: n },
                statistic,
                bracket: Some((lo, hi.min(n_max))),
            });
        }
    }
    Ok(DivergenceCertificate {
        q,
        threshold,
        n_max,
        outcome: DivergenceOutcome::NotReached,
        statistic,
        bracket: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Support;

    fn ones() -> ComputableSequence {
        ComputableSequence::scalar("1", Support::AllNonzero, |_| 1.0)
    }

    #[test]
    fn constant_sequence_crosses_after_threshold() {
        let c = divergence_certificate(&ones(), Exponent::Finite(1.0), 100.0, 1000).unwrap();
        assert_eq!(c.depth(), Some(101));
        assert_eq!(c.bracket, Some((64, 128)));
    }

    #[test]
    fn harmonic_crosses_ten() {
        let x = ComputableSequence::scalar("1/n", Support::AllNonzero, |n| 1.0 / n as f64);
        let c = divergence_certificate(&x, Exponent::Finite(1.0), 10.0, 1 << 20).unwrap();
        assert_eq!(c.depth(), Some(12367));
    }

    #[test]
    fn sup_reaches_one_immediately() {
        let c = divergence_certificate(&ones(), Exponent::Infinity, 0.5, 10).unwrap();
        assert_eq!(c.depth(), Some(1));
        assert_eq!(c.bracket, Some((0, 1)));
    }

    #[test]
    fn cap_reached_is_a_value() {
        let c = divergence_certificate(&ones(), Exponent::Finite(1.0), 100.0, 50).unwrap();
        assert_eq!(c.outcome, DivergenceOutcome::NotReached);
        assert_eq!(c.statistic, 50.0);
        assert!(divergence_certificate(&ones(), Exponent::Finite(1.0), 0.0, 50).is_err());
    }
}
