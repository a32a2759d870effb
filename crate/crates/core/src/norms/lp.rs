use crate::error::{Error, Result};
use crate::sequence::{ComputableSequence, CoordinateProbe};
use crate::space::Exponent;
use crate::sum::NeumaierSum;

use super::{check_finite, Direction, PartialNormReport};

/// `v^q` for `v ≥ 0`; `q = 1, 2` are computed without `powf`.
#[inline]
pub fn power_term(v: f64, q: f64) -> f64 {
    if q == 1.0 {
        v
    } else if q == 2.0 {
        v * v
    } else {
        v.powf(q)
    }
}

struct Accumulator {
    q: Exponent,
    sum: NeumaierSum,
    sup: f64,
}

impl Accumulator {
    fn new(q: Exponent) -> Self {
        Self {
            q,
            sum: NeumaierSum::new(),
            sup: 0.0,
        }
    }

    #[inline]
    fn push(&mut self, v: f64) {
        if v == 0.0 {
            return;
        }
        self.sup = self.sup.max(v);
        if let Exponent::Finite(q) = self.q {
            self.sum.add(power_term(v, q));
        }
    }

    fn value(&self) -> f64 {
        match self.q {
            Exponent::Infinity => self.sup,
            Exponent::Finite(1.0) => self.sum.value().max(self.sup),
            Exponent::Finite(q) => self.sum.value().powf(q.recip()).max(self.sup),
        }
    }
}

/// `(Σ_{n≤N} ‖x_n‖^q)^{1/q}`, or `max_{n≤N} ‖x_n‖` for `q = ∞`.
pub fn lp_partial(x: &ComputableSequence, q: Exponent, depth: u64) -> Result<PartialNormReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let mut probe = CoordinateProbe::new(x);
    let mut acc = Accumulator::new(q);
    for n in 1..=depth {
        let v = probe.norm(n);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        acc.push(v);
    }
    Ok(PartialNormReport {
        family: "lp".into(),
        p: Some(q),
        q: None,
        depth,
        value: acc.value(),
        direction: Direction::Partial,
    })
}

/// `Σ_{n≤N} ‖x_n‖^q` for finite `q`, summed in index order.
pub fn lp_power_sum(x: &ComputableSequence, q: f64, depth: u64) -> Result<f64> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "power sums need a finite exponent, got {q}"
        )));
    }
    let mut probe = CoordinateProbe::new(x);
    let mut sum = NeumaierSum::new();
    for n in 1..=depth {
        let v = probe.norm(n);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: n });
        }
        if v != 0.0 {
            sum.add(power_term(v, q));
        }
    }
    Ok(sum.value())
}

/// The `ℓ_q` value of a coordinate-norm profile.
pub fn lp_profile(norms: &[f64], q: Exponent) -> Result<f64> {
    check_finite(norms)?;
    let mut acc = Accumulator::new(q);
    norms.iter().for_each(|&v| acc.push(v));
    Ok(acc.value())
}
