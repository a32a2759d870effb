//! Orlicz functions and the Luxemburg gauge.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sequence::ComputableSequence;
use crate::sum::NeumaierSum;

use super::{check_finite, Direction, PartialNormReport};

/// Default relative tolerance of the Luxemburg bisection.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const MAX_BRACKET_STEPS: usize = 2200;
const MAX_BISECTIONS: usize = 400;

/// A nondecreasing `M: [0, ∞) → [0, ∞)` with `M(0) = 0`.
///
/// The regularity flags cannot be checked by sampling,
/// so they are declared by the caller and carried along.
#[derive(Clone)]
pub struct OrliczFunction {
    id: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub convex: bool,
    pub continuous: bool,
    pub nondegenerate: bool,
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrliczFunction")
            .field("id", &self.id)
            .field("convex", &self.convex)
            .finish()
    }
}

impl OrliczFunction {
    /// Wraps `m`, checking `M(0) = 0` and monotonicity on a test grid.
    pub fn new(
        id: impl Into<String>,
        m: impl Fn(f64) -> f64 + Send + Sync + 'static,
        convex: bool,
        continuous: bool,
        nondegenerate: bool,
    ) -> Result<Self> {
        let id = id.into();
        if m(0.0) != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "Orlicz function `{id}` has M(0) != 0"
            )));
        }
        let grid = test_grid();
        for w in grid.windows(2) {
            let (a, b) = (m(w[0]), m(w[1]));
            if !(a >= 0.0 && b >= a) {
                return Err(Error::InvalidParameter(format!(
                    "Orlicz function `{id}` is not nonnegative and nondecreasing on [{}, {}]",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self {
            id,
            eval: Arc::new(m),
            convex,
            continuous,
            nondegenerate,
        })
    }

    /// `M(t) = t`.
    pub fn linear() -> Self {
        Self::power(1.0).expect("valid")
    }

    /// `M(t) = t^p`; convex for `p ≥ 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power must be positive, got {p}"
            )));
        }
        let id = format!("t^{p}");
        if p == 1.0 {
            return Self::new(id, |t| t, true, true, true);
        }
        if p == 2.0 {
            return Self::new(id, |t| t * t, true, true, true);
        }
        Self::new(id, move |t| t.powf(p), p >= 1.0, true, true)
    }

    /// `M(t) = t·ln(1+c·t) / ln(1+c)`, normalized so that `M(1) = 1`.
    pub fn t_log(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "t_log scale must be positive, got {c}"
            )));
        }
        let norm = c.ln_1p();
        Self::new(
            format!("tlog:{c}"),
            move |t| t * (c * t).ln_1p() / norm,
            true,
            true,
            true,
        )
    }

    /// Parses `t^P`, `power:P`, `tlog:C`, `linear` or `square`.
    pub fn from_id(id: &str) -> Result<Self> {
        let id = id.trim();
        match id {
            "linear" | "t" => return Ok(Self::linear()),
            "square" | "t^2" => return Self::power(2.0),
            _ => {}
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse Orlicz id `{id}`")))
        };
        if let Some(p) = id.strip_prefix("t^").or_else(|| id.strip_prefix("power:")) {
            return Self::power(parse(p)?);
        }
        if let Some(c) = id.strip_prefix("tlog:") {
            return Self::t_log(parse(c)?);
        }
        Err(Error::InvalidParameter(format!("unknown Orlicz id `{id}`")))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

fn test_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
    g.extend((-60..=60).map(|k| 10f64.powf(k as f64 / 10.0)));
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

/// Luxemburg gauge `inf{ρ > 0 : Σ_{n≤N} M(‖x_n‖/ρ) ≤ 1}` by bisection.
///
/// The returned value is the upper end of the final bracket, so the defining
/// sum is `≤ 1` there.
pub fn orlicz_luxemburg(
    x: &ComputableSequence,
    m: &OrliczFunction,
    depth: u64,
    tol: f64,
) -> Result<PartialNormReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let value = orlicz_profile(&x.norm_profile(depth), m, tol)?;
    Ok(PartialNormReport {
        family: format!("orlicz:{}", m.id()),
        p: None,
        q: None,
        depth,
        value,
        direction: Direction::Partial,
    })
}

/// The Luxemburg value of a coordinate-norm profile.
pub fn orlicz_profile(norms: &[f64], m: &OrliczFunction, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_finite(norms)?;
    let values: Vec<f64> = norms.iter().copied().filter(|&v| v != 0.0).collect();
    let Some(largest) = values.iter().copied().reduce(f64::max) else {
        return Err(Error::ZeroSequence {
            depth: norms.len() as u64,
        });
    };
    let modular = |rho: f64| -> f64 {
        values
            .iter()
            .map(|&v| m.eval(v / rho))
            .sum::<NeumaierSum>()
            .value()
    };

    let mut lo = largest;
    let mut hi = values.len() as f64 * largest;
    let mut steps = 0;
    // negated so that a NaN modular keeps expanding until the step cap
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    while !(modular(lo) > 1.0) {
        lo *= 0.5;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || lo == 0.0 {
            return Err(Error::NoBracket(format!(
                "Σ M(|x_n|/ρ) never exceeds 1 for `{}`",
                m.id()
            )));
        }
    }
    steps = 0;
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    while !(modular(hi) <= 1.0) {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
            return Err(Error::NoBracket(format!(
                "Σ M(|x_n|/ρ) never drops to 1 for `{}`",
                m.id()
            )));
        }
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) / mid < tol || mid <= lo || mid >= hi {
            break;
        }
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
