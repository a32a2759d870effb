//! Exponents and the finite-dimensional coordinate space `X`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An exponent in `(0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p > 0.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else {
            Err(Error::InvalidParameter(format!(
                "exponent must lie in (0, inf], got {p}"
            )))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// The exponent as an `f64`, with `∞` mapped to `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinity);
        }
        let v = if let Some((num, den)) = t.split_once('/') {
            let n: f64 = num.trim().parse().map_err(|_| bad(s))?;
            let d: f64 = den.trim().parse().map_err(|_| bad(s))?;
            n / d
        } else {
            t.parse().map_err(|_| bad(s))?
        };
        Exponent::finite(v)
    }
}

fn bad(s: &str) -> Error {
    Error::InvalidParameter(format!("cannot parse exponent `{s}`"))
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

/// The realized coordinate space: `𝕂^d` with an `s`-norm, `s ∈ (0, ∞]`.
///
/// `d = 1` is the scalar case. For `s < 1` the "norm" is the usual
/// `s`-quasi-norm, which satisfies `‖a+b‖^s ≤ ‖a‖^s + ‖b‖^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoordinateSpace {
    dim: usize,
    exponent: Exponent,
}

impl CoordinateSpace {
    pub fn new(dim: usize, exponent: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "coordinate dimension must be at least 1".into(),
            ));
        }
        Ok(Self { dim, exponent })
    }

    /// The scalar field.
    pub const fn scalar() -> Self {
        Self {
            dim: 1,
            exponent: Exponent::Infinity,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    /// Norm of a `d`-vector.
    pub fn norm(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        if let [x] = v {
            return x.abs();
        }
        vector_norm(v, self.exponent)
    }
}

/// The `s`-(quasi-)norm of a finite vector.
pub fn vector_norm(v: &[f64], exponent: Exponent) -> f64 {
    match exponent {
        Exponent::Infinity => v.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
        Exponent::Finite(1.0) => crate::sum::compensated_sum(v.iter().map(|x| x.abs())),
        Exponent::Finite(2.0) => crate::sum::compensated_sum(v.iter().map(|x| x * x)).sqrt(),
        Exponent::Finite(s) => {
            crate::sum::compensated_sum(v.iter().map(|x| x.abs().powf(s))).powf(s.recip())
        }
    }
}

#[inline]
pub(crate) fn is_zero_vector(v: &[f64]) -> bool {
    v.iter().all(|&x| x == 0.0)
}
