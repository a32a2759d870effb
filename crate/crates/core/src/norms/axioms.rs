//! Empirical checks of the invariant-sequence-space axioms.
//!
//! (b1) `‖x‖ ≤ K·‖x⁰‖` whenever `x⁰ ≠ 0`, and (b2) `‖x_j‖ ≤ ‖x‖` for every `j`.
//! Both are evaluated on truncations: `x` at depth `N` against `x⁰` at depth
//! `k`, the number of nonzero coordinates among the first `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::formula::Formula;
use crate::sequence::{ComputableSequence, Support};
use crate::space::{CoordinateSpace, Exponent};

use super::SpaceDescriptor;

/// Relative tolerance for the (b1) equality.
pub const B1_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomSample {
    pub label: String,
    /// Nonzero coordinates among the first `N`.
    pub nonzero: u64,
    pub norm_x: Option<f64>,
    pub norm_x0: Option<f64>,
    /// `|‖x‖ − ‖x⁰‖| / ‖x⁰‖`; absent when `x⁰` vanishes on the truncation.
    pub b1_deviation: Option<f64>,
    /// `max_j (‖x_j‖ − ‖x‖)`, clamped below at zero.
    pub b2_excess: f64,
    /// Set when a norm could not be evaluated.
    pub error: Option<String>,
}

impl AxiomSample {
    pub fn b1_holds(&self, k: f64) -> bool {
        match (self.norm_x, self.norm_x0, self.b1_deviation) {
            (Some(a), Some(b), Some(dev)) => {
                a <= k * b * (1.0 + B1_TOLERANCE) && dev <= B1_TOLERANCE
            }
            _ => self.error.is_none(),
        }
    }

    pub fn b2_holds(&self) -> bool {
        self.error.is_none() && self.b2_excess == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub space: String,
    pub k: f64,
    pub depth: u64,
    pub samples: Vec<AxiomSample>,
    pub max_b1_deviation: f64,
    pub max_b2_excess: f64,
    pub pass: bool,
}

/// Checks (b1) and (b2) on each sample; violations are reported, not raised.
pub fn check_axioms(
    space: &SpaceDescriptor,
    samples: &[ComputableSequence],
    depth: u64,
) -> AxiomReport {
    let depth = depth.max(1);
    let samples: Vec<AxiomSample> = samples.iter().map(|x| check_one(space, x, depth)).collect();
    let max_b1_deviation = samples
        .iter()
        .filter_map(|s| s.b1_deviation)
        .fold(0.0, f64::max);
    let max_b2_excess = samples.iter().map(|s| s.b2_excess).fold(0.0, f64::max);
    let pass = samples
        .iter()
        .all(|s| s.b1_holds(space.k()) && s.b2_holds());
    AxiomReport {
        space: space.name(),
        k: space.k(),
        depth,
        samples,
        max_b1_deviation,
        max_b2_excess,
        pass,
    }
}

fn check_one(space: &SpaceDescriptor, x: &ComputableSequence, depth: u64) -> AxiomSample {
    let profile = x.norm_profile(depth);
    let nonzero = profile.iter().filter(|&&v| v != 0.0).count() as u64;
    let mut sample = AxiomSample {
        label: x.label().to_string(),
        nonzero,
        norm_x: None,
        norm_x0: None,
        b1_deviation: None,
        b2_excess: 0.0,
        error: None,
    };
    let norm_x = match space.evaluate_profile(&profile) {
        Ok(v) => v,
        Err(e) => {
            sample.error = Some(e.to_string());
            return sample;
        }
    };
    sample.norm_x = Some(norm_x);
    sample.b2_excess = profile.iter().map(|&v| v - norm_x).fold(0.0, f64::max);

    if nonzero == 0 || x.has_finite_support() {
        return sample;
    }
    let scan = matches!(x.support(), Support::Unknown).then_some(depth);
    let x0 = match x.zerofree(scan) {
        Ok(x0) => x0,
        Err(e) => {
            sample.error = Some(e.to_string());
            return sample;
        }
    };
    match space.evaluate_profile(&x0.norm_profile(nonzero)) {
        Ok(norm_x0) => {
            sample.norm_x0 = Some(norm_x0);
            sample.b1_deviation = Some((norm_x - norm_x0).abs() / norm_x0);
        }
        Err(e) => sample.error = Some(e.to_string()),
    }
    sample
}

/// Seeded test sequences cycling through five shapes: scalar powers, powers
/// with zeros interspersed, vector-valued powers in `ℓ_2³`, finitely
/// supported sequences, and powers with a few coordinates overridden to zero.
pub fn axiom_samples(count: usize, seed: u64) -> Result<Vec<ComputableSequence>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let c = rng.random_range(0.5..4.0);
        let alpha = rng.random_range(0.0..2.5);
        let f = Formula::Power { c, alpha };
        let x = match k % 5 {
            0 => f.sequence()?,
            1 => f.sequence()?.spread(rng.random_range(1..5))?,
            2 => {
                let space = CoordinateSpace::new(3, Exponent::Finite(2.0))?;
                let dir: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
                f.sequence_in(space, &dir)?
            }
            3 => {
                let len = rng.random_range(1..50u64);
                let values: Vec<f64> = (0..len).map(|_| rng.random_range(-3.0..3.0)).collect();
                ComputableSequence::scalar(
                    format!("finite[{len}]"),
                    Support::Finite(len),
                    move |n| values.get((n - 1) as usize).copied().unwrap_or(0.0),
                )
            }
            _ => {
                let mut x = Formula::AlternatingPower { c, alpha }.sequence()?;
                for _ in 0..rng.random_range(1..20) {
                    x = x.with_override(rng.random_range(1..2000), vec![0.0])?;
                }
                x
            }
        };
        out.push(x);
    }
    Ok(out)
}
