//! Avoidance sets `A` and the contract a custom `A` has to satisfy.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::sequence::{ComputableSequence, Support};
use crate::space::{CoordinateSpace, Exponent};
use crate::sum::NeumaierSum;

/// Membership predicate on a truncated coordinate-norm profile
/// `(‖x_1‖, …, ‖x_N‖)`, zeros included.
pub type Predicate = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// A user-supplied avoidance set, with its declared conformance to the
/// three conditions the construction relies on:
///
/// 1. `x ∈ A` iff `x⁰ ∈ A`;
/// 2. `A` is closed under multiples of subsequences of coordinate norms;
/// 3. some witness with `x⁰ ≠ 0` lies outside `A`.
#[derive(Clone)]
pub struct CustomAvoidance {
    pub name: String,
    predicate: Predicate,
    pub declares_zerofree_invariance: bool,
    pub declares_subsequence_closure: bool,
    pub declares_witness: bool,
}

impl fmt::Debug for CustomAvoidance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomAvoidance")
            .field("name", &self.name)
            .finish()
    }
}

impl CustomAvoidance {
    pub fn new(
        name: impl Into<String>,
        predicate: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            predicate: Arc::new(predicate),
            declares_zerofree_invariance: true,
            declares_subsequence_closure: true,
            declares_witness: true,
        }
    }

    pub fn contains(&self, profile: &[f64]) -> bool {
        (self.predicate)(profile)
    }

    /// Finite-scale `ℓ_q` membership: the last dyadic stretch of the nonzero
    /// `q`-power sums adds at most 5% to what came before.
    pub fn lq(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "l_q predicate needs finite q > 0, got {q}"
            )));
        }
        Ok(Self::new(format!("l_{q}"), move |profile| {
            let nz: Vec<f64> = nonzero(profile);
            if nz.len() < 2 {
                return true;
            }
            let half = nz.len() / 2;
            let mut head = NeumaierSum::new();
            nz[..half].iter().for_each(|&v| head.add(v.powf(q)));
            let mut tail = NeumaierSum::new();
            nz[half..].iter().for_each(|&v| tail.add(v.powf(q)));
            tail.value() <= LQ_TAIL_RATIO * head.value()
        }))
    }

    /// Finite-scale `c₀` membership: the nonzero coordinates in the second
    /// half stay below 5% of the overall maximum.
    pub fn c0() -> Self {
        Self::new("c0", |profile| {
            let nz = nonzero(profile);
            if nz.len() < 2 {
                return true;
            }
            let max = nz.iter().copied().fold(0.0, f64::max);
            let late = nz[nz.len() / 2..].iter().copied().fold(0.0, f64::max);
            late <= C0_LATE_RATIO * max
        })
    }
}

const LQ_TAIL_RATIO: f64 = 0.05;
const C0_LATE_RATIO: f64 = 0.05;

fn nonzero(profile: &[f64]) -> Vec<f64> {
    profile.iter().copied().filter(|&v| v != 0.0).collect()
}

/// The set `A` that combinations must avoid.
#[derive(Debug, Clone)]
pub enum AvoidanceSet {
    /// `⋃_{q∈Γ} ℓ_q(X)` for a finite nonempty `Γ ⊂ (0, ∞]`.
    UnionLq(Vec<Exponent>),
    /// `c₀(X)`.
    C0,
    Custom(CustomAvoidance),
}

impl AvoidanceSet {
    /// Sorted, deduplicated `Γ`; rejects an empty list.
    pub fn union_lq(mut gamma: Vec<Exponent>) -> Result<Self> {
        if gamma.is_empty() {
            return Err(Error::InvalidParameter(
                "the exponent list must be nonempty".into(),
            ));
        }
        gamma.sort_by(|a, b| a.value().total_cmp(&b.value()));
        gamma.dedup();
        Ok(AvoidanceSet::UnionLq(gamma))
    }

    pub fn name(&self) -> String {
        match self {
            AvoidanceSet::UnionLq(g) => {
                let parts: Vec<String> = g.iter().map(|q| q.to_string()).collect();
                format!("union-lq[{}]", parts.join(","))
            }
            AvoidanceSet::C0 => "c0".into(),
            AvoidanceSet::Custom(c) => format!("custom[{}]", c.name),
        }
    }
}

/// One sample's outcome under the three conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionSample {
    pub label: String,
    pub member: bool,
    /// Condition (i): membership of `x` and of `x⁰` agree at matched depth.
    pub zerofree_agrees: bool,
    /// Condition (ii), only for members: every sampled multiple of a
    /// subsequence is a member.
    pub subsequences_tested: usize,
    pub subsequence_failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub avoid: String,
    pub depth: u64,
    pub samples: Vec<PropositionSample>,
    pub condition_i: bool,
    pub condition_ii: bool,
    /// Condition (iii): the witness has nonzero coordinates and is not a member.
    pub condition_iii: bool,
    pub witness_nonzero: u64,
    pub declarations: bool,
    pub pass: bool,
    pub note: &'static str,
}

const SAMPLING_NOTE: &str =
    "condition (ii) quantifies over all subsequences; only the sampled ones (arithmetic, every other, dyadic) are tested";

/// Tests the three conditions on samples and a witness, at depth `N`.
///
/// Condition (i) compares `x` truncated at `N` with `x⁰` truncated at the
/// number of nonzero coordinates seen, so both profiles carry the same
/// nonzero values.
pub fn check_proposition_conditions(
    avoid: &CustomAvoidance,
    samples: &[ComputableSequence],
    witness: &ComputableSequence,
    depth: u64,
) -> Result<PropositionReport> {
    if depth < 2 {
        return Err(Error::InvalidParameter("depth must be >= 2".into()));
    }
    let mut out = Vec::with_capacity(samples.len());
    for x in samples {
        let profile = x.norm_profile(depth);
        let member = avoid.contains(&profile);
        let k = profile.iter().filter(|&&v| v != 0.0).count() as u64;
        let zerofree_agrees = if k == 0 {
            true
        } else {
            let scan = matches!(x.support(), Support::Unknown).then_some(depth);
            let x0 = x.zerofree(scan)?;
            avoid.contains(&x0.norm_profile(k)) == member
        };
        let mut tested = 0;
        let mut failures = Vec::new();
        if member {
            let nz: Vec<f64> = nonzero(&profile);
            for (name, idx) in subsequence_patterns(nz.len()) {
                for c in SUBSEQUENCE_MULTIPLES {
                    tested += 1;
                    let y: Vec<f64> = idx.iter().map(|&i| c * nz[i]).collect();
                    if !avoid.contains(&y) {
                        failures.push(format!("{c}·{name}"));
                    }
                }
            }
        }
        out.push(PropositionSample {
            label: x.label().to_string(),
            member,
            zerofree_agrees,
            subsequences_tested: tested,
            subsequence_failures: failures,
        });
    }
    let witness_profile = witness.norm_profile(depth);
    let witness_nonzero = witness_profile.iter().filter(|&&v| v != 0.0).count() as u64;
    let condition_i = out.iter().all(|s| s.zerofree_agrees);
    let condition_ii = out.iter().all(|s| s.subsequence_failures.is_empty());
    let condition_iii = witness_nonzero > 0 && !avoid.contains(&witness_profile);
    let declarations = avoid.declares_zerofree_invariance
        && avoid.declares_subsequence_closure
        && avoid.declares_witness;
    Ok(PropositionReport {
        avoid: avoid.name.clone(),
        depth,
        samples: out,
        condition_i,
        condition_ii,
        condition_iii,
        witness_nonzero,
        declarations,
        pass: condition_i && condition_ii && condition_iii && declarations,
        note: SAMPLING_NOTE,
    })
}

const SUBSEQUENCE_MULTIPLES: [f64; 2] = [3.0, 0.25];

/// Positions (0-based) of sampled subsequences of a length-`len` profile.
fn subsequence_patterns(len: usize) -> Vec<(&'static str, Vec<usize>)> {
    let arithmetic: Vec<usize> = (1..len).step_by(3).collect();
    let every_other: Vec<usize> = (1..len).step_by(2).collect();
    let dyadic: Vec<usize> = (0..usize::BITS)
        .map(|k| (1usize << k) - 1)
        .take_while(|&i| i < len)
        .collect();
    vec![
        ("arithmetic", arithmetic),
        ("every-other", every_other),
        ("dyadic", dyadic),
    ]
}

/// Seeded samples for the `ℓ_q` predicate: clear-cut members (`αq ≥ 2`) and
/// non-members (`αq ≤ 1/2`), a third of them with zeros interspersed and some
/// vector-valued.
pub fn lq_samples(q: f64, count: usize, seed: u64) -> Result<Vec<ComputableSequence>> {
    let exponents = [2.0 / q, 3.0 / q, 0.0, 0.25 / q, 0.5 / q];
    samples(&exponents, count, seed)
}

/// Seeded samples for the `c₀` predicate: null sequences with `α ∈ {1, 2}`
/// and constant-norm sequences, with the same mix of gaps and dimensions.
pub fn c0_samples(count: usize, seed: u64) -> Result<Vec<ComputableSequence>> {
    samples(&[1.0, 2.0, 0.0], count, seed)
}

fn samples(exponents: &[f64], count: usize, seed: u64) -> Result<Vec<ComputableSequence>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let alpha = exponents[k % exponents.len()];
        let c: f64 = rng.random_range(0.5..5.0);
        let formula = Formula::Power { c, alpha };
        let base = if k % 4 == 3 {
            let space = CoordinateSpace::new(3, Exponent::Finite(2.0))?;
            let dir: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            formula.sequence_in(space, &dir)?
        } else {
            formula.sequence()?
        };
        let x = if k % 3 == 1 {
            let gap = rng.random_range(1..4u64);
            base.spread(gap)?
        } else {
            base
        };
        out.push(x);
    }
    Ok(out)
}
