//! Integral-test tail bounds for membership in `ℓ_q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::sequence::{ComputableSequence, CoordinateProbe};
use crate::space::Exponent;

use super::lp::{lp_power_sum, power_term};
use super::{Direction, PartialNormReport};

/// How many indices past the truncation the declared domination is spot-checked.
pub const ENVELOPE_SPOT_CHECK: u64 = 1024;

/// Relative slack absorbing rounding in closed-form tail expressions.
const TAIL_SLACK: f64 = 1e-9;

/// A closed-form `g` with the declared guarantee `‖x_n‖ ≤ g(n)` beyond the
/// truncation. Only `|f(n)|` is used, so the alternating power is read as a
/// plain power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Envelope(Formula);

impl From<Formula> for Envelope {
    fn from(f: Formula) -> Self {
        Envelope(f)
    }
}

impl Envelope {
    pub fn formula(&self) -> Formula {
        self.0
    }

    #[inline]
    pub fn value(&self, n: u64) -> f64 {
        self.0.value(n).abs()
    }

    /// An upper bound on `Σ_{n>N} g(n)^q`.
    ///
    /// * `c·n^{-α}` with `a = αq > 1`: `|c|^q·N^{1−a}/(a−1)`.
    /// * `c·n^{-α}·ln(n+1)^{-β}` with `a > 1`: the same times `ln(N+1)^{-b}`, `b = βq`.
    /// * the same with `a = 1`, `b > 1`: `(1+1/N)·|c|^q·ln(N+1)^{1−b}/(b−1)`, using
    ///   `1/t ≤ (1+1/N)/(t+1)` on `[N, ∞)`.
    /// * `c·rⁿ`: `|c|^q·r^{q(N+1)}/(1−r^q)`.
    pub fn tail_sum(&self, q: f64, depth: u64) -> Result<f64> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tail exponent must be finite, got {q}"
            )));
        }
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let diverges = Err(Error::EnvelopeDiverges { exponent: q });
        let n = depth as f64;
        let bound = match self.0 {
            Formula::Constant { c: 0.0 } => 0.0,
            Formula::Constant { .. } => return diverges,
            Formula::Power { c, alpha } | Formula::AlternatingPower { c, alpha } => {
                let a = snap(alpha * q);
                if a <= 1.0 {
                    return diverges;
                }
                power_term(c.abs(), q) * n.powf(1.0 - a) / (a - 1.0)
            }
            Formula::PowerLog { c, alpha, beta } => {
                let a = snap(alpha * q);
                let b = beta * q;
                let log = (n + 1.0).ln();
                if a > 1.0 {
                    power_term(c.abs(), q) * log.powf(-b) * n.powf(1.0 - a) / (a - 1.0)
                } else if a == 1.0 && b > 1.0 {
                    (1.0 + n.recip()) * power_term(c.abs(), q) * log.powf(1.0 - b) / (b - 1.0)
                } else {
                    return diverges;
                }
            }
            Formula::Geometric { c, ratio } => {
                let rq = ratio.powf(q);
                power_term(c.abs(), q) * rq.powf(n + 1.0) / (1.0 - rq)
            }
        };
        Ok(bound * (1.0 + TAIL_SLACK))
    }
}

/// Exponent products within `1e-12` of `1` are the borderline case.
fn snap(a: f64) -> f64 {
    if (a - 1.0).abs() <= 1e-12 {
        1.0
    } else {
        a
    }
}

/// An upper bound on `Σ_{n>N} ‖x_n‖^q` from the envelope.
///
/// The declared domination is spot-checked on the next
/// [`ENVELOPE_SPOT_CHECK`] indices; a failed check is an error.
pub fn lp_tail_upper_bound(
    x: &ComputableSequence,
    q: f64,
    depth: u64,
    envelope: &Envelope,
) -> Result<f64> {
    let tail = envelope.tail_sum(q, depth)?;
    let mut probe = CoordinateProbe::new(x);
    for n in depth + 1..=depth.saturating_add(ENVELOPE_SPOT_CHECK) {
        let v = probe.norm(n);
        let g = envelope.value(n);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        if v > g * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "envelope {} does not dominate `{}` at n = {n}: {v} > {g}",
                envelope.0.describe(),
                x.label()
            )));
        }
    }
    Ok(tail)
}

/// `(Σ_{n≤N} ‖x_n‖^q + tail)^{1/q}`: an upper bound for the full `ℓ_q` norm.
pub fn lp_certified_upper(
    x: &ComputableSequence,
    q: f64,
    depth: u64,
    envelope: &Envelope,
) -> Result<PartialNormReport> {
    let tail = lp_tail_upper_bound(x, q, depth, envelope)?;
    let head = lp_power_sum(x, q, depth)?;
    Ok(PartialNormReport {
        family: "lp".into(),
        p: Some(Exponent::Finite(q)),
        q: None,
        depth,
        value: (head + tail).powf(q.recip()),
        direction: Direction::CertifiedUpper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::lp_partial;

    #[test]
    fn geometric_tail() {
        let f = Formula::Geometric { c: 1.0, ratio: 0.5 };
        let x = f.sequence().unwrap();
        let t = lp_tail_upper_bound(&x, 1.0, 10, &f.into()).unwrap();
        let exact = 2f64.powi(-10);
        assert!(t >= exact && t <= exact * (1.0 + 1e-8));
    }

    #[test]
    fn inverse_square_tail() {
        let f = Formula::Power { c: 1.0, alpha: 2.0 };
        let t = lp_tail_upper_bound(&f.sequence().unwrap(), 1.0, 100, &f.into()).unwrap();
        assert!((t - 0.01).abs() < 1e-10);
        // Σ_{n>100} n^{-2} = ψ'(101) ≈ 0.00995033
        assert!(t > 0.009_950_33);
    }

    #[test]
    fn borderline_power_log_tail_bounds_the_numeric_tail() {
        // 1/(n·ln²(n+1)) past 10³, against a long reverse sum plus the bound past 10⁷
        let f = Formula::PowerLog {
            c: 1.0,
            alpha: 1.0,
            beta: 2.0,
        };
        let env: Envelope = f.into();
        let bound = env.tail_sum(1.0, 1000).unwrap();
        let far = env.tail_sum(1.0, 10_000_000).unwrap();
        let middle: f64 = (1001..=10_000_000u64).rev().map(|n| f.value(n)).sum();
        assert!(middle + far <= bound, "{} > {bound}", middle + far);
        assert!(bound < 0.146);
    }

    #[test]
    fn divergent_envelopes() {
        for f in [
            Formula::Power { c: 1.0, alpha: 1.0 },
            Formula::Constant { c: 2.0 },
            Formula::PowerLog {
                c: 1.0,
                alpha: 1.0,
                beta: 1.0,
            },
            Formula::PowerLog {
                c: 1.0,
                alpha: 0.5,
                beta: 4.0,
            },
        ] {
            assert_eq!(
                Envelope::from(f).tail_sum(1.0, 10),
                Err(Error::EnvelopeDiverges { exponent: 1.0 })
            );
        }
    }

    #[test]
    fn certified_upper_dominates_partial() {
        let f = Formula::Power { c: 1.0, alpha: 1.0 };
        let x = f.sequence().unwrap();
        let up = lp_certified_upper(&x, 2.0, 1000, &f.into()).unwrap();
        let part = lp_partial(&x, Exponent::Finite(2.0), 1000).unwrap();
        assert_eq!(up.direction, Direction::CertifiedUpper);
        assert!(up.value >= part.value);
        let exact = std::f64::consts::PI / 6f64.sqrt();
        assert!(up.value >= exact && up.value - exact < 1e-3);
    }

    #[test]
    fn non_dominating_envelope_is_rejected() {
        let x = Formula::Power { c: 2.0, alpha: 2.0 }.sequence().unwrap();
        let env = Formula::Power { c: 1.0, alpha: 2.0 }.into();
        assert!(matches!(
            lp_tail_upper_bound(&x, 1.0, 10, &env),
            Err(Error::InvalidParameter(_))
        ));
    }
}
