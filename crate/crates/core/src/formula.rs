//! Closed-form scalar sequences, identified by name and parameters.
//!
//! Sequences are serialized as a [`Formula`] record rather than by capturing
//! closures, so reports can say exactly which sequence was checked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{ComputableSequence, Support};
use crate::space::CoordinateSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "formula", rename_all = "kebab-case")]
pub enum Formula {
    /// `c`
    Constant { c: f64 },
    /// `c·n^{-α}`
    Power { c: f64, alpha: f64 },
    /// `c·n^{-α}·(ln(n+1))^{-β}`
    PowerLog { c: f64, alpha: f64, beta: f64 },
    /// `c·rⁿ`, `0 < r < 1`
    Geometric { c: f64, ratio: f64 },
    /// `(−1)^{n+1}·c·n^{-α}`
    AlternatingPower { c: f64, alpha: f64 },
}

impl Formula {
    pub fn id(&self) -> &'static str {
        match self {
            Formula::Constant { .. } => "constant",
            Formula::Power { .. } => "power",
            Formula::PowerLog { .. } => "power-log",
            Formula::Geometric { .. } => "geometric",
            Formula::AlternatingPower { .. } => "alternating-power",
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Formula::Constant { c } => format!("{c}"),
            Formula::Power { c, alpha } => format!("{c}·n^-{alpha}"),
            Formula::PowerLog { c, alpha, beta } => format!("{c}·n^-{alpha}·ln(n+1)^-{beta}"),
            Formula::Geometric { c, ratio } => format!("{c}·{ratio}^n"),
            Formula::AlternatingPower { c, alpha } => format!("(-1)^(n+1)·{c}·n^-{alpha}"),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Formula::Constant { c } => c.is_finite(),
            Formula::Power { c, alpha } | Formula::AlternatingPower { c, alpha } => {
                c.is_finite() && alpha.is_finite() && alpha >= 0.0
            }
            Formula::PowerLog { c, alpha, beta } => {
                c.is_finite()
                    && alpha.is_finite()
                    && alpha >= 0.0
                    && beta.is_finite()
                    && beta >= 0.0
            }
            Formula::Geometric { c, ratio } => c.is_finite() && ratio > 0.0 && ratio < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "bad formula parameters: {self:?}"
            )))
        }
    }

    /// `f(n)`.
    #[inline]
    pub fn value(&self, n: u64) -> f64 {
        let t = n as f64;
        match *self {
            Formula::Constant { c } => c,
            Formula::Power { c, alpha } => c * t.powf(-alpha),
            Formula::PowerLog { c, alpha, beta } => c * t.powf(-alpha) * (t + 1.0).ln().powf(-beta),
            Formula::Geometric { c, ratio } => c * ratio.powf(t),
            Formula::AlternatingPower { c, alpha } => {
                let v = c * t.powf(-alpha);
                if n % 2 == 1 {
                    v
                } else {
                    -v
                }
            }
        }
    }

    fn support(&self) -> Support {
        match *self {
            Formula::Constant { c }
            | Formula::Power { c, .. }
            | Formula::PowerLog { c, .. }
            | Formula::AlternatingPower { c, .. }
                if c != 0.0 =>
            {
                Support::AllNonzero
            }
            // rⁿ underflows to an exact zero eventually
            Formula::Geometric { c, .. } if c != 0.0 => Support::Unknown,
            _ => Support::Finite(0),
        }
    }

    /// The scalar sequence `n ↦ f(n)`.
    pub fn sequence(&self) -> Result<ComputableSequence> {
        self.validate()?;
        let f = *self;
        Ok(ComputableSequence::scalar(
            self.describe(),
            self.support(),
            move |n| f.value(n),
        ))
    }

    /// The `X`-valued sequence `n ↦ f(n)·u` for a fixed direction `u`.
    pub fn sequence_in(
        &self,
        space: CoordinateSpace,
        direction: &[f64],
    ) -> Result<ComputableSequence> {
        self.validate()?;
        if direction.len() != space.dim() {
            return Err(Error::InvalidParameter(format!(
                "direction has dimension {}, expected {}",
                direction.len(),
                space.dim()
            )));
        }
        if direction.iter().all(|&t| t == 0.0) {
            return Err(Error::DegenerateDirection);
        }
        let f = *self;
        let u = direction.to_vec();
        Ok(ComputableSequence::from_fn(
            format!("({})·u", self.describe()),
            space,
            self.support(),
            move |n, out| {
                let v = f.value(n);
                out.iter_mut().zip(&u).for_each(|(o, &d)| *o = v * d);
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Exponent;

    #[test]
    fn values() {
        assert_eq!(Formula::Power { c: 1.0, alpha: 1.0 }.value(4), 0.25);
        assert_eq!(Formula::Constant { c: 1.0 }.value(1_000_000), 1.0);
        assert_eq!(
            Formula::AlternatingPower { c: 2.0, alpha: 0.0 }.value(2),
            -2.0
        );
        let w = Formula::PowerLog {
            c: 1.0,
            alpha: 1.0,
            beta: 2.0,
        }
        .value(3);
        assert!((w - 1.0 / (3.0 * 4f64.ln().powi(2))).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Formula::Geometric { c: 1.0, ratio: 1.0 }
            .sequence()
            .is_err());
        assert!(Formula::Power {
            c: 1.0,
            alpha: -1.0
        }
        .sequence()
        .is_err());
        assert!(Formula::Power {
            c: f64::NAN,
            alpha: 1.0
        }
        .sequence()
        .is_err());
    }

    #[test]
    fn vector_sequences_follow_the_direction() {
        let space = CoordinateSpace::new(3, Exponent::Finite(2.0)).unwrap();
        let x = Formula::Power { c: 1.0, alpha: 1.0 }
            .sequence_in(space, &[0.0, 3.0, 4.0])
            .unwrap();
        assert_eq!(x.eval(2), vec![0.0, 1.5, 2.0]);
        assert_eq!(x.norm_at(2), 2.5);
        assert!(Formula::Power { c: 1.0, alpha: 1.0 }
            .sequence_in(space, &[0.0; 3])
            .is_err());
    }
}
