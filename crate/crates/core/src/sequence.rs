//! Lazily evaluated `X`-valued sequences.
//!
//! A [`ComputableSequence`] is a pure map `n ↦ x_n` (indices start at 1)
//! together with metadata about where its nonzero coordinates live. The
//! metadata is what makes the zerofree version computable: "only finitely
//! many nonzero coordinates" cannot be decided by evaluating a black box.
//!
//! Nothing is materialized until [`ComputableSequence::truncate`] (or a norm
//! evaluator) asks for coordinates. Zero coordinates must be returned as the
//! exact zero vector; no thresholding happens anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{is_zero_vector, CoordinateSpace};

/// A deterministic coordinate generator. `out` has length `dim`.
pub trait Generator: Send + Sync {
    fn eval_into(&self, n: u64, out: &mut [f64]);
}

impl<F> Generator for F
where
    F: Fn(u64, &mut [f64]) + Send + Sync,
{
    fn eval_into(&self, n: u64, out: &mut [f64]) {
        self(n, out)
    }
}

/// Strictly increasing enumeration `j ↦ σ(j)` of the indices of the nonzero
/// coordinates.
#[derive(Clone)]
pub struct NonzeroIndices(Arc<dyn Fn(u64) -> u64 + Send + Sync>);

impl NonzeroIndices {
    pub fn new(f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn get(&self, j: u64) -> u64 {
        (self.0)(j)
    }
}

/// Declared support of a generator.
#[derive(Clone)]
pub enum Support {
    /// `x_n` is the zero vector for every `n > N₀`.
    Finite(u64),
    /// `x_n` is never the zero vector.
    AllNonzero,
    /// Infinitely many nonzero coordinates, located exactly at `σ(1) < σ(2) < …`.
    Enumerated(NonzeroIndices),
    /// Nothing is known.
    Unknown,
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Support::Finite(n) => write!(f, "Finite({n})"),
            Support::AllNonzero => f.write_str("AllNonzero"),
            Support::Enumerated(_) => f.write_str("Enumerated(..)"),
            Support::Unknown => f.write_str("Unknown"),
        }
    }
}

/// An infinite sequence of vectors in a [`CoordinateSpace`].
#[derive(Clone)]
pub struct ComputableSequence {
    label: Arc<str>,
    space: CoordinateSpace,
    generator: Arc<dyn Generator>,
    support: Support,
    overrides: Arc<BTreeMap<u64, Vec<f64>>>,
}

impl fmt::Debug for ComputableSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComputableSequence")
            .field("label", &self.label)
            .field("space", &self.space)
            .field("support", &self.support)
            .field("overrides", &self.overrides.len())
            .finish()
    }
}

impl ComputableSequence {
    pub fn from_fn<G>(
        label: impl Into<String>,
        space: CoordinateSpace,
        support: Support,
        generator: G,
    ) -> Self
    where
        G: Fn(u64, &mut [f64]) + Send + Sync + 'static,
    {
        Self::from_generator(label, space, support, Arc::new(generator))
    }

    pub fn from_generator(
        label: impl Into<String>,
        space: CoordinateSpace,
        support: Support,
        generator: Arc<dyn Generator>,
    ) -> Self {
        Self {
            label: Arc::from(label.into()),
            space,
            generator,
            support,
            overrides: Arc::default(),
        }
    }

    /// A scalar sequence `n ↦ f(n)`.
    pub fn scalar<F>(label: impl Into<String>, support: Support, f: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self::from_fn(label, CoordinateSpace::scalar(), support, move |n, out| {
            out[0] = f(n)
        })
    }

    pub fn zero(space: CoordinateSpace) -> Self {
        Self::from_fn("0", space, Support::Finite(0), |_, out| out.fill(0.0))
    }

    /// Set `x_n = value`, taking precedence over the generator.
    pub fn with_override(mut self, n: u64, value: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("indices are 1-based".into()));
        }
        if value.len() != self.space.dim() {
            return Err(Error::InvalidParameter(format!(
                "override has dimension {}, expected {}",
                value.len(),
                self.space.dim()
            )));
        }
        Arc::make_mut(&mut self.overrides).insert(n, value);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Arc::from(label.into());
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> CoordinateSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn overrides(&self) -> impl Iterator<Item = (u64, &[f64])> {
        self.overrides.iter().map(|(&n, v)| (n, v.as_slice()))
    }

    /// `x_n`, written into `out`.
    ///
    /// # Panics
    ///
    /// If `n == 0` or `out.len() != dim`.
    #[inline]
    pub fn eval_into(&self, n: u64, out: &mut [f64]) {
        assert!(n >= 1, "indices are 1-based");
        assert_eq!(out.len(), self.space.dim());
        if !self.overrides.is_empty() {
            if let Some(v) = self.overrides.get(&n) {
                out.copy_from_slice(v);
                return;
            }
        }
        self.generator.eval_into(n, out);
    }

    pub fn eval(&self, n: u64) -> Vec<f64> {
        let mut out = vec![0.0; self.space.dim()];
        self.eval_into(n, &mut out);
        out
    }

    /// `x_n` of a scalar sequence.
    pub fn scalar_at(&self, n: u64) -> f64 {
        assert_eq!(self.dim(), 1, "scalar_at on a vector-valued sequence");
        let mut out = [0.0];
        self.eval_into(n, &mut out);
        out[0]
    }

    /// `‖x_n‖_X`.
    pub fn norm_at(&self, n: u64) -> f64 {
        let mut probe = CoordinateProbe::new(self);
        probe.norm(n)
    }

    /// The first `depth` coordinates, each evaluated once.
    pub fn truncate(&self, depth: u64) -> Result<Vec<Vec<f64>>> {
        if depth == 0 {
            return Err(Error::InvalidParameter(
                "truncation depth must be >= 1".into(),
            ));
        }
        Ok((1..=depth).map(|n| self.eval(n)).collect())
    }

    /// `(‖x_1‖, …, ‖x_N‖)`.
    pub fn norm_profile(&self, depth: u64) -> Vec<f64> {
        let mut probe = CoordinateProbe::new(self);
        (1..=depth).map(|n| probe.norm(n)).collect()
    }

    /// True if the generator is declared all-nonzero and no override is zero.
    pub fn is_zerofree(&self) -> bool {
        matches!(self.support, Support::AllNonzero)
            && self.overrides.values().all(|v| !is_zero_vector(v))
    }

    /// True if the sequence is known to have finite support.
    pub fn has_finite_support(&self) -> bool {
        matches!(self.support, Support::Finite(_))
    }

    /// The zerofree version `x⁰`: the nonzero coordinates in order, or the zero
    /// sequence when there are only finitely many of them.
    ///
    /// `scan_bound = Some(B)` asserts that every coordinate beyond `B` is
    /// nonzero; it is only needed when the support is [`Support::Unknown`].
    pub fn zerofree(&self, scan_bound: Option<u64>) -> Result<ComputableSequence> {
        let max_override = self.overrides.keys().next_back().copied().unwrap_or(0);
        let label = format!("({})⁰", self.label);

        let tail: Option<NonzeroIndices> = match &self.support {
            Support::Finite(_) => {
                return Ok(ComputableSequence::zero(self.space).with_label(label));
            }
            Support::AllNonzero if self.overrides.is_empty() => return Ok(self.clone()),
            Support::AllNonzero => None,
            Support::Enumerated(sigma) if self.overrides.is_empty() && scan_bound.is_none() => {
                let src = self.clone();
                let sigma = sigma.clone();
                return Ok(ComputableSequence::from_fn(
                    label,
                    self.space,
                    Support::AllNonzero,
                    move |j, out| src.eval_into(sigma.get(j), out),
                ));
            }
            Support::Enumerated(sigma) => Some(sigma.clone()),
            Support::Unknown => {
                if scan_bound.is_none() {
                    return Err(Error::UndecidableSupport(self.label.to_string()));
                }
                None
            }
        };

        // Explicit head up to the bound, then the declared tail enumeration.
        let bound = scan_bound.unwrap_or(0).max(max_override);
        let mut probe = vec![0.0; self.dim()];
        let head: Vec<u64> = (1..=bound)
            .filter(|&n| {
                self.eval_into(n, &mut probe);
                !is_zero_vector(&probe)
            })
            .collect();
        let skipped = match &tail {
            None => bound,
            Some(sigma) => {
                let mut j = 0;
                while sigma.get(j + 1) <= bound {
                    j += 1;
                }
                j
            }
        };
        let src = self.clone();
        let head = Arc::new(head);
        Ok(ComputableSequence::from_fn(
            label,
            self.space,
            Support::AllNonzero,
            move |j, out| {
                let h = head.len() as u64;
                let n = if j <= h {
                    head[(j - 1) as usize]
                } else {
                    let k = skipped + (j - h);
                    match &tail {
                        None => k,
                        Some(sigma) => sigma.get(k),
                    }
                };
                src.eval_into(n, out)
            },
        ))
    }

    /// `c·x`.
    pub fn scaled(&self, c: f64) -> ComputableSequence {
        if c == 0.0 {
            return ComputableSequence::zero(self.space);
        }
        let src = self.clone();
        let mut out = ComputableSequence::from_fn(
            format!("{c}·{}", self.label),
            self.space,
            self.support.clone(),
            move |n, out| {
                src.generator.eval_into(n, out);
                out.iter_mut().for_each(|t| *t *= c);
            },
        );
        out.overrides = Arc::new(
            self.overrides
                .iter()
                .map(|(&n, v)| (n, v.iter().map(|t| c * t).collect()))
                .collect(),
        );
        out
    }

    /// Raises every coordinate norm to the power `r`, keeping directions:
    /// `x_n ↦ x_n·‖x_n‖^{r−1}`. Zero coordinates stay zero.
    pub fn norm_power(&self, r: f64) -> Result<ComputableSequence> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "norm power must be positive, got {r}"
            )));
        }
        let src = self.clone();
        let space = self.space;
        Ok(ComputableSequence::from_fn(
            format!("|{}|^{r}", self.label),
            self.space,
            if self.overrides.is_empty() {
                self.support.clone()
            } else {
                Support::Unknown
            },
            move |n, out| {
                src.eval_into(n, out);
                let norm = space.norm(out);
                if norm != 0.0 {
                    let factor = norm.powf(r - 1.0);
                    out.iter_mut().for_each(|t| *t *= factor);
                }
            },
        ))
    }

    /// Places `x_j` at index `(gap+1)·j` and zeros in between.
    pub fn spread(&self, gap: u64) -> Result<ComputableSequence> {
        if !self.is_zerofree() {
            return Err(Error::NotZerofree(self.label.to_string()));
        }
        let stride = gap
            .checked_add(1)
            .ok_or_else(|| Error::Overflow(format!("spread gap {gap}")))?;
        let src = self.clone();
        Ok(ComputableSequence::from_fn(
            format!("spread({}, {gap})", self.label),
            self.space,
            Support::Enumerated(NonzeroIndices::new(move |j| j.saturating_mul(stride))),
            move |n, out| {
                if n % stride == 0 {
                    src.eval_into(n / stride, out)
                } else {
                    out.fill(0.0)
                }
            },
        ))
    }

    /// `c·(x_{σ(1)}, x_{σ(2)}, …)` for a strictly increasing `σ`.
    pub fn subsequence(
        &self,
        label: impl Into<String>,
        c: f64,
        sigma: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> ComputableSequence {
        let src = self.clone();
        let support = if self.is_zerofree() && c != 0.0 {
            Support::AllNonzero
        } else {
            Support::Unknown
        };
        ComputableSequence::from_fn(label, self.space, support, move |k, out| {
            src.eval_into(sigma(k), out);
            out.iter_mut().for_each(|t| *t *= c);
        })
    }
}

/// Reusable scratch buffer for evaluating coordinate norms in a loop.
pub(crate) struct CoordinateProbe<'a> {
    seq: &'a ComputableSequence,
    buf: Vec<f64>,
}

impl<'a> CoordinateProbe<'a> {
    pub(crate) fn new(seq: &'a ComputableSequence) -> Self {
        Self {
            seq,
            buf: vec![0.0; seq.dim()],
        }
    }

    #[inline]
    pub(crate) fn norm(&mut self, n: u64) -> f64 {
        self.seq.eval_into(n, &mut self.buf);
        self.seq.space.norm(&self.buf)
    }
}
