//! Quasi-norms of invariant sequence spaces, evaluated on truncations.
//!
//! Every evaluator skips zero coordinates, so a sequence and its zerofree
//! version produce bit-identical values at matched truncation depths. Every
//! evaluator also returns at least the largest coordinate norm it saw; that
//! is the domination `‖x_j‖_X ≤ ‖x‖_E`, which the exact value satisfies and
//! which rounding in the final root must not break.

mod axioms;
mod divergence;
mod lorentz;
mod lp;
mod orlicz;
mod tail;

pub use axioms::{axiom_samples, check_axioms, AxiomReport, AxiomSample, B1_TOLERANCE};
pub use divergence::{divergence_certificate, DivergenceCertificate, DivergenceOutcome};
pub use lorentz::{lorentz_partial, lorentz_profile};
pub use lp::{lp_partial, lp_power_sum, lp_profile, power_term};
pub use orlicz::{orlicz_luxemburg, orlicz_profile, OrliczFunction, DEFAULT_TOLERANCE};
pub use tail::{lp_certified_upper, lp_tail_upper_bound, Envelope, ENVELOPE_SPOT_CHECK};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::ComputableSequence;
use crate::space::Exponent;

/// Whether a reported value is a plain truncation or includes a tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// The norm of the first `N` coordinates: a lower bound for sum-type norms.
    Partial,
    /// Partial value plus a certified tail bound.
    CertifiedUpper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Partial => "partial",
            Direction::CertifiedUpper => "certified-upper",
        })
    }
}

/// A norm value computed on a truncation.
///
/// Serializes flat, in the CSV column order `family, p, q, N, value, direction`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialNormReport {
    pub family: String,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    #[serde(rename = "N")]
    pub depth: u64,
    pub value: f64,
    pub direction: Direction,
}

/// The sequence-space families with implemented evaluators.
#[derive(Debug, Clone)]
pub enum Family {
    Lp(Exponent),
    Lorentz {
        p: f64,
        q: f64,
    },
    Orlicz(OrliczFunction),
    /// `c₀` as an avoidance target, normed by the sup norm.
    C0,
}

/// An invariant sequence space: its family, the zerofree constant `K`, and
/// the exponent `s̃` used by the embedding bound.
#[derive(Debug, Clone)]
pub struct SpaceDescriptor {
    family: Family,
    k: f64,
    stilde: f64,
    tolerance: f64,
}

impl SpaceDescriptor {
    pub fn lp(p: Exponent) -> Self {
        let stilde = match p {
            Exponent::Finite(p) if p < 1.0 => p,
            _ => 1.0,
        };
        Self::with(Family::Lp(p), stilde)
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Lorentz {name} must lie in (0, inf), got {v}"
                )));
            }
        }
        Ok(Self::with(Family::Lorentz { p, q }, 1.0f64.min(p).min(q)))
    }

    pub fn orlicz(m: OrliczFunction) -> Self {
        Self::with(Family::Orlicz(m), 1.0)
    }

    pub fn c0() -> Self {
        Self::with(Family::C0, 1.0)
    }

    fn with(family: Family, stilde: f64) -> Self {
        Self {
            family,
            k: 1.0,
            stilde,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Relative tolerance of the Luxemburg bisection.
    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        self.tolerance = tol;
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn stilde(&self) -> f64 {
        self.stilde
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Short name such as `l_0.5`, `l_{1,2}`, `l_M[t^2]`, `c0`.
    pub fn name(&self) -> String {
        match &self.family {
            Family::Lp(p) => format!("l_{p}"),
            Family::Lorentz { p, q } => format!("l_{{{p},{q}}}"),
            Family::Orlicz(m) => format!("l_M[{}]", m.id()),
            Family::C0 => "c0".to_string(),
        }
    }

    fn family_label(&self) -> String {
        match &self.family {
            Family::Lp(_) => "lp".into(),
            Family::Lorentz { .. } => "lorentz".into(),
            Family::Orlicz(m) => format!("orlicz:{}", m.id()),
            Family::C0 => "c0".into(),
        }
    }

    fn params(&self) -> (Option<Exponent>, Option<Exponent>) {
        match &self.family {
            Family::Lp(p) => (Some(*p), None),
            Family::Lorentz { p, q } => (Some(Exponent::Finite(*p)), Some(Exponent::Finite(*q))),
            Family::Orlicz(_) => (None, None),
            Family::C0 => (Some(Exponent::Infinity), None),
        }
    }

    /// The norm of a coordinate-norm profile `(‖x_1‖, …, ‖x_N‖)`.
    pub fn evaluate_profile(&self, norms: &[f64]) -> Result<f64> {
        match &self.family {
            Family::Lp(p) => lp_profile(norms, *p),
            Family::Lorentz { p, q } => lorentz_profile(norms, *p, *q),
            Family::Orlicz(m) => match orlicz_profile(norms, m, self.tolerance) {
                Err(Error::ZeroSequence { .. }) => Ok(0.0),
                other => other,
            },
            Family::C0 => lp_profile(norms, Exponent::Infinity),
        }
    }

    /// The norm of the first `depth` coordinates of `x`.
    pub fn norm(&self, x: &ComputableSequence, depth: u64) -> Result<PartialNormReport> {
        if depth == 0 {
            return Err(Error::InvalidParameter("depth must be >= 1".into()));
        }
        let value = match &self.family {
            Family::Lp(p) => lp_partial(x, *p, depth)?.value,
            _ => self.evaluate_profile(&x.norm_profile(depth))?,
        };
        Ok(self.report(depth, value, Direction::Partial))
    }

    pub(crate) fn report(&self, depth: u64, value: f64, direction: Direction) -> PartialNormReport {
        let (p, q) = self.params();
        PartialNormReport {
            family: self.family_label(),
            p,
            q,
            depth,
            value,
            direction,
        }
    }
}

pub(crate) fn check_finite(norms: &[f64]) -> Result<()> {
    match norms.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            index: i as u64 + 1,
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stilde_assignment() {
        assert_eq!(SpaceDescriptor::lp(Exponent::Finite(0.5)).stilde(), 0.5);
        assert_eq!(SpaceDescriptor::lp(Exponent::Finite(2.0)).stilde(), 1.0);
        assert_eq!(SpaceDescriptor::lp(Exponent::Infinity).stilde(), 1.0);
        assert_eq!(SpaceDescriptor::lorentz(2.0, 0.5).unwrap().stilde(), 0.5);
        assert_eq!(SpaceDescriptor::lorentz(0.25, 2.0).unwrap().stilde(), 0.25);
        assert_eq!(SpaceDescriptor::lorentz(2.0, 3.0).unwrap().stilde(), 1.0);
        assert_eq!(
            SpaceDescriptor::orlicz(OrliczFunction::power(2.0).unwrap()).stilde(),
            1.0
        );
        assert_eq!(SpaceDescriptor::c0().k(), 1.0);
    }

    #[test]
    fn lorentz_parameters_are_validated() {
        assert!(SpaceDescriptor::lorentz(0.0, 1.0).is_err());
        assert!(SpaceDescriptor::lorentz(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(SpaceDescriptor::lp(Exponent::Finite(0.5)).name(), "l_0.5");
        assert_eq!(
            SpaceDescriptor::lorentz(1.0, 2.0).unwrap().name(),
            "l_{1,2}"
        );
        assert_eq!(SpaceDescriptor::c0().name(), "c0");
    }

    #[test]
    fn zero_profile_has_zero_orlicz_norm() {
        let s = SpaceDescriptor::orlicz(OrliczFunction::linear());
        assert_eq!(s.evaluate_profile(&[0.0, 0.0]).unwrap(), 0.0);
    }
}
