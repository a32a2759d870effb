//! Witnesses `x ∈ E − A` with explicit certificates, and the catalog.

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::norms::{
    divergence_certificate, lorentz_profile, lp_certified_upper, power_term, Direction,
    DivergenceCertificate, Envelope, Family, PartialNormReport, SpaceDescriptor,
    ENVELOPE_SPOT_CHECK,
};
use crate::sequence::ComputableSequence;
use crate::space::Exponent;
use crate::sum::NeumaierSum;

use super::avoidance::AvoidanceSet;

/// Why the witness lies in its home space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MembershipCertificate {
    /// `Σ_{n>N} ‖x_n‖^p ≤` the envelope tail.
    LpTail { p: f64, envelope: Envelope },
    /// For a nonincreasing scalar profile, `x* = x`, and the weighted terms
    /// `n^{q/p−1}·x_n^q` are dominated by `envelope` (summed with exponent 1).
    LorentzTail { p: f64, q: f64, envelope: Envelope },
    /// `‖x_n‖ ≤ sup` for all `n`.
    Bounded { sup: f64 },
}

/// A lower bound `L(N)` on a divergence statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerBound {
    /// For terms `c·n^{-a}·ln(n+1)^{-b}` with `0 ≤ a < 1`, `b ≥ 0`:
    /// `Σ_{n≤N} ≥ c·ln(N+1)^{-b}·((N+1)^{1−a} − 1)/(1 − a)`.
    PowerLogSum { c: f64, a: f64, b: f64 },
    /// `max_{n≤N} ‖x_n‖ ≥ c·N^a`, for avoiding `ℓ_∞`.
    SupPower { c: f64, a: f64 },
}

impl LowerBound {
    pub fn value(&self, depth: u64) -> f64 {
        let n = depth as f64;
        match *self {
            LowerBound::PowerLogSum { c, a, b } => {
                let log = if b == 0.0 {
                    1.0
                } else {
                    (n + 1.0).ln().powf(-b)
                };
                c * log * ((n + 1.0).powf(1.0 - a) - 1.0) / (1.0 - a)
            }
            LowerBound::SupPower { c, a } => c * n.powf(a),
        }
    }
}

/// `L_q` for one exponent of `Γ`: the guarantee
/// `Σ_{n≤N} ‖x_n‖^q ≥ L_q(N)` with `L_q(N) → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceProfile {
    pub q: Exponent,
    pub bound: LowerBound,
}

/// `‖x_n‖ ≥ δ` for every `n`: evidence against `c₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separation {
    pub delta: f64,
}

/// A sequence in `E − A`, bundled with the certificates that say so.
#[derive(Debug, Clone)]
pub struct Witness {
    sequence: ComputableSequence,
    formula: Formula,
    home: SpaceDescriptor,
    membership: MembershipCertificate,
    avoid: AvoidanceSet,
    divergence: Vec<DivergenceProfile>,
    separation: Option<Separation>,
    provisional: bool,
}

/// The catalog has no witness for the requested pair.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("no witness available: {reason}")]
pub struct NotAvailable {
    pub reason: String,
}

fn unavailable<T>(reason: impl Into<String>) -> Result<T, NotAvailable> {
    Err(NotAvailable {
        reason: reason.into(),
    })
}

impl Witness {
    /// Assembles a witness from a closed-form scalar sequence, checking that
    /// every exponent of `Γ` has a divergence profile and that `c₀`
    /// avoidance comes with a separation.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        formula: Formula,
        home: SpaceDescriptor,
        membership: MembershipCertificate,
        avoid: AvoidanceSet,
        divergence: Vec<DivergenceProfile>,
        separation: Option<Separation>,
        provisional: bool,
    ) -> Result<Self> {
        let sequence = formula.sequence()?;
        if !sequence.is_zerofree() {
            return Err(Error::NotZerofree(sequence.label().to_string()));
        }
        match &avoid {
            AvoidanceSet::UnionLq(gamma) => {
                for q in gamma {
                    if !divergence.iter().any(|d| d.q == *q) {
                        return Err(Error::InvalidParameter(format!(
                            "no divergence profile for q = {q}"
                        )));
                    }
                }
            }
            AvoidanceSet::C0 if separation.is_none() => {
                return Err(Error::InvalidParameter(
                    "c0 avoidance needs a separation certificate".into(),
                ));
            }
            _ => {}
        }
        Ok(Self {
            sequence,
            formula,
            home,
            membership,
            avoid,
            divergence,
            separation,
            provisional,
        })
    }

    pub fn sequence(&self) -> &ComputableSequence {
        &self.sequence
    }

    pub fn formula(&self) -> Formula {
        self.formula
    }

    pub fn home(&self) -> &SpaceDescriptor {
        &self.home
    }

    pub fn membership(&self) -> &MembershipCertificate {
        &self.membership
    }

    pub fn avoid(&self) -> &AvoidanceSet {
        &self.avoid
    }

    pub fn divergence_profiles(&self) -> &[DivergenceProfile] {
        &self.divergence
    }

    pub fn profile(&self, q: Exponent) -> Option<&DivergenceProfile> {
        self.divergence.iter().find(|d| d.q == q)
    }

    pub fn separation(&self) -> Option<Separation> {
        self.separation
    }

    /// Set for witnesses whose formula is validated only by the oracle.
    pub fn provisional(&self) -> bool {
        self.provisional
    }

    /// A certified upper bound for the full home-space norm: partial value
    /// at `depth` plus the membership tail.
    pub fn certified_upper_norm(&self, depth: u64) -> Result<PartialNormReport> {
        let missing = || Error::MissingMembershipCertificate(self.sequence.label().to_string());
        match (&self.membership, self.home.family()) {
            (MembershipCertificate::LpTail { p, envelope }, Family::Lp(Exponent::Finite(hp)))
                if p == hp =>
            {
                lp_certified_upper(&self.sequence, *p, depth, envelope)
            }
            (
                MembershipCertificate::Bounded { sup },
                Family::Lp(Exponent::Infinity) | Family::C0,
            ) => {
                let seen = self
                    .sequence
                    .norm_profile(depth)
                    .into_iter()
                    .fold(0.0, f64::max);
                if seen > *sup {
                    return Err(Error::InvalidParameter(format!(
                        "declared bound {sup} is exceeded: {seen}"
                    )));
                }
                Ok(self.home.report(depth, *sup, Direction::CertifiedUpper))
            }
            (
                MembershipCertificate::LorentzTail { p, q, envelope },
                Family::Lorentz { p: hp, q: hq },
            ) if p == hp && q == hq => {
                let value = lorentz_certified_upper(&self.sequence, *p, *q, depth, envelope)?;
                Ok(self.home.report(depth, value, Direction::CertifiedUpper))
            }
            _ => Err(missing()),
        }
    }

    /// Membership certificate plus divergence or separation evidence for
    /// the witness alone.
    pub fn certify(&self, depth: u64, threshold: f64, n_max: u64) -> Result<WitnessCertificate> {
        let upper = self.certified_upper_norm(depth)?;
        let mut divergence = Vec::new();
        let mut separation = None;
        match &self.avoid {
            AvoidanceSet::UnionLq(gamma) => {
                for &q in gamma {
                    let cert = divergence_certificate(&self.sequence, q, threshold, n_max)?;
                    divergence.push(profile_check(cert, self.profile(q), 1.0));
                }
            }
            AvoidanceSet::C0 => {
                let delta = self.separation.map(|s| s.delta).unwrap_or(0.0);
                separation = Some(separation_check(&self.sequence, delta, SEPARATION_COUNT));
            }
            AvoidanceSet::Custom(_) => {}
        }
        let pass = upper.value.is_finite()
            && divergence.iter().all(|d| d.pass)
            && separation.as_ref().is_none_or(|s| s.pass);
        Ok(WitnessCertificate {
            space: self.home.name(),
            avoid: self.avoid.name(),
            formula: self.formula,
            membership: upper,
            divergence,
            separation,
            provisional: self.provisional,
            pass,
        })
    }

    /// The serializable catalog record.
    pub fn catalog_entry(&self) -> CatalogEntry {
        let (p, q) = match self.home.family() {
            Family::Lp(p) => (Some(*p), None),
            Family::Lorentz { p, q } => (Some(Exponent::Finite(*p)), Some(Exponent::Finite(*q))),
            _ => (None, None),
        };
        CatalogEntry {
            space: self.home.name(),
            params: SpaceParams { p, q },
            avoid: self.avoid.name(),
            formula_id: self.formula.id(),
            formula: self.formula,
            certificate_params: CertificateParams {
                membership: self.membership.clone(),
                divergence: self.divergence.clone(),
                separation: self.separation,
            },
            provisional: self.provisional,
        }
    }
}

/// Indices checked by a separation certificate.
pub const SEPARATION_COUNT: u64 = 1000;

fn lorentz_certified_upper(
    x: &ComputableSequence,
    p: f64,
    q: f64,
    depth: u64,
    envelope: &Envelope,
) -> Result<f64> {
    // x must be nonincreasing through the spot-check window for x* = x to hold
    let window = x.norm_profile(depth + ENVELOPE_SPOT_CHECK);
    if let Some(i) = window.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::InvalidParameter(format!(
            "Lorentz tail certificate needs a nonincreasing profile; fails at n = {}",
            i + 2
        )));
    }
    let weight = q / p - 1.0;
    for (i, &v) in window.iter().enumerate().skip(depth as usize) {
        let n = i as u64 + 1;
        let term = (n as f64).powf(weight) * power_term(v, q);
        if term > envelope.value(n) * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "Lorentz envelope fails at n = {n}"
            )));
        }
    }
    let head = lorentz_profile(&window[..depth as usize], p, q)?;
    let tail = envelope.tail_sum(1.0, depth)?;
    Ok((power_term(head, q) + tail).powf(q.recip()))
}

/// A divergence certificate checked against the witness's analytic profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfiledDivergence {
    #[serde(flatten)]
    pub certificate: DivergenceCertificate,
    /// `scale·L_q(N)` at the crossing depth.
    pub lower_bound: Option<f64>,
    pub profile_holds: bool,
    pub pass: bool,
}

pub(crate) fn profile_check(
    certificate: DivergenceCertificate,
    profile: Option<&DivergenceProfile>,
    scale: f64,
) -> ProfiledDivergence {
    let lower_bound = match (certificate.depth(), profile) {
        (Some(n), Some(d)) => Some(scale * d.bound.value(n)),
        _ => None,
    };
    // the profile is a guarantee for the exact sum; allow for its rounding
    let profile_holds = lower_bound.is_none_or(|l| certificate.statistic >= l * (1.0 - 1e-12));
    let pass = certificate.crossed() && profile_holds;
    ProfiledDivergence {
        certificate,
        lower_bound,
        profile_holds,
        pass,
    }
}

/// `count` leading indices with `‖x_n‖ ≥ δ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationCheck {
    pub delta: f64,
    pub requested: u64,
    pub found: u64,
    pub pass: bool,
}

pub(crate) fn separation_check(x: &ComputableSequence, delta: f64, count: u64) -> SeparationCheck {
    let found = x
        .norm_profile(count)
        .iter()
        .filter(|&&v| v >= delta)
        .count() as u64;
    SeparationCheck {
        delta,
        requested: count,
        found,
        pass: delta > 0.0 && found >= count,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessCertificate {
    pub space: String,
    pub avoid: String,
    pub formula: Formula,
    pub membership: PartialNormReport,
    pub divergence: Vec<ProfiledDivergence>,
    pub separation: Option<SeparationCheck>,
    pub provisional: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceParams {
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateParams {
    pub membership: MembershipCertificate,
    pub divergence: Vec<DivergenceProfile>,
    pub separation: Option<Separation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub space: String,
    pub params: SpaceParams,
    pub avoid: String,
    #[serde(rename = "formula-id")]
    pub formula_id: &'static str,
    pub formula: Formula,
    #[serde(rename = "certificate-params")]
    pub certificate_params: CertificateParams,
    pub provisional: bool,
}

/// Divergence profiles of `c·n^{-α}·ln(n+1)^{-β}` for each `q` in `Γ`.
fn power_log_profiles(c: f64, alpha: f64, beta: f64, gamma: &[Exponent]) -> Vec<DivergenceProfile> {
    gamma
        .iter()
        .map(|&q| {
            let qv = q.value();
            DivergenceProfile {
                q,
                bound: LowerBound::PowerLogSum {
                    c: power_term(c, qv),
                    a: alpha * qv,
                    b: beta * qv,
                },
            }
        })
        .collect()
}

fn finite_below(gamma: &[Exponent], bound: f64, what: &str) -> Result<(), NotAvailable> {
    for q in gamma {
        match q {
            Exponent::Finite(q) if *q < bound => {}
            _ => {
                return unavailable(format!(
                    "{what} contains every l_q with q >= {bound}; cannot avoid l_{q}"
                ))
            }
        }
    }
    Ok(())
}

/// A cataloged witness for `(E, A)`:
///
/// * `ℓ_p` against `⋃_{q∈Γ} ℓ_q`, all `q < p`: `x_n = n^{-1/p}·ln(n+1)^{-2/p}`
///   (the constant one for `p = ∞`);
/// * `ℓ_∞` against `c₀`: the constant one with `δ = 1`;
/// * Lorentz `ℓ_{p,q}` against `⋃ ℓ_s`, all `s < p`:
///   `x_n = n^{-1/p}·ln(n+1)^{-2/q}`, flagged provisional.
pub fn witness_catalog(
    space: &SpaceDescriptor,
    avoid: &AvoidanceSet,
) -> Result<Witness, NotAvailable> {
    let build = |r: Result<Witness>| {
        r.map_err(|e| NotAvailable {
            reason: e.to_string(),
        })
    };
    match (space.family(), avoid) {
        (Family::Lp(Exponent::Infinity), AvoidanceSet::C0) => build(Witness::new(
            Formula::Constant { c: 1.0 },
            space.clone(),
            MembershipCertificate::Bounded { sup: 1.0 },
            avoid.clone(),
            Vec::new(),
            Some(Separation { delta: 1.0 }),
            false,
        )),
        (Family::Lp(Exponent::Infinity), AvoidanceSet::UnionLq(gamma)) => {
            finite_below(gamma, f64::INFINITY, space.name().as_str())?;
            build(Witness::new(
                Formula::Constant { c: 1.0 },
                space.clone(),
                MembershipCertificate::Bounded { sup: 1.0 },
                avoid.clone(),
                power_log_profiles(1.0, 0.0, 0.0, gamma),
                None,
                false,
            ))
        }
        (Family::Lp(Exponent::Finite(p)), AvoidanceSet::UnionLq(gamma)) => {
            finite_below(gamma, *p, space.name().as_str())?;
            let (alpha, beta) = (1.0 / p, 2.0 / p);
            let formula = Formula::PowerLog {
                c: 1.0,
                alpha,
                beta,
            };
            build(Witness::new(
                formula,
                space.clone(),
                MembershipCertificate::LpTail {
                    p: *p,
                    envelope: formula.into(),
                },
                avoid.clone(),
                power_log_profiles(1.0, alpha, beta, gamma),
                None,
                false,
            ))
        }
        (Family::Lorentz { p, q }, AvoidanceSet::UnionLq(gamma)) => {
            finite_below(gamma, *p, space.name().as_str())?;
            let (alpha, beta) = (1.0 / p, 2.0 / q);
            // n^{q/p−1}·x_n^q = n^{-1}·ln(n+1)^{-2}
            let weighted = Formula::PowerLog {
                c: 1.0,
                alpha: 1.0,
                beta: 2.0,
            };
            build(Witness::new(
                Formula::PowerLog {
                    c: 1.0,
                    alpha,
                    beta,
                },
                space.clone(),
                MembershipCertificate::LorentzTail {
                    p: *p,
                    q: *q,
                    envelope: weighted.into(),
                },
                avoid.clone(),
                power_log_profiles(1.0, alpha, beta, gamma),
                None,
                true,
            ))
        }
        (Family::Lp(Exponent::Finite(_)) | Family::Lorentz { .. }, AvoidanceSet::C0) => {
            unavailable(format!("{} is contained in c0", space.name()))
        }
        (Family::Orlicz(_), _) => unavailable("no cataloged witnesses for Orlicz spaces"),
        (Family::C0, _) => unavailable("c0 is an avoidance target, not a home space"),
        (_, AvoidanceSet::Custom(_)) => {
            unavailable("custom avoidance sets need a user-supplied witness")
        }
    }
}

/// Catalog entries listed by the command-line `catalog` command.
pub fn catalog_listing() -> Vec<Witness> {
    let f = Exponent::Finite;
    let pairs = [
        (SpaceDescriptor::lp(f(1.0)), vec![f(0.5)]),
        (SpaceDescriptor::lp(f(0.5)), vec![f(0.25)]),
        (SpaceDescriptor::lp(f(2.0)), vec![f(1.0)]),
        (
            SpaceDescriptor::lp(Exponent::Infinity),
            vec![f(1.0), f(2.0)],
        ),
        (
            SpaceDescriptor::lorentz(2.0, 1.0).expect("valid"),
            vec![f(1.0)],
        ),
    ];
    let mut out: Vec<Witness> = pairs
        .into_iter()
        .filter_map(|(s, g)| witness_catalog(&s, &AvoidanceSet::union_lq(g).ok()?).ok())
        .collect();
    out.extend(witness_catalog(&SpaceDescriptor::lp(Exponent::Infinity), &AvoidanceSet::C0).ok());
    out
}

/// Moves a power-type witness from `ℓ_{p₀}` to `ℓ_p` by raising coordinate
/// norms to `p₀/p`. Membership is preserved, and `x` avoiding `ℓ_q` becomes
/// `x^{p₀/p}` avoiding `ℓ_{q·p/p₀}`.
pub fn rescale_witness(w: &Witness, p: f64) -> Result<Witness> {
    let Family::Lp(Exponent::Finite(p0)) = w.home().family() else {
        return Err(Error::InvalidParameter(format!(
            "cannot rescale a witness of {}",
            w.home().name()
        )));
    };
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target exponent must be finite, got {p}"
        )));
    }
    let AvoidanceSet::UnionLq(gamma) = w.avoid() else {
        return Err(Error::InvalidParameter(
            "only union-of-l_q witnesses rescale".into(),
        ));
    };
    let r = p0 / p;
    let (c, alpha, beta) = match w.formula() {
        Formula::PowerLog { c, alpha, beta } => (c.abs(), alpha, beta),
        Formula::Power { c, alpha } => (c.abs(), alpha, 0.0),
        other => {
            return Err(Error::InvalidParameter(format!(
                "cannot rescale formula {}",
                other.id()
            )));
        }
    };
    let (c, alpha, beta) = (c.powf(r), alpha * r, beta * r);
    let formula = Formula::PowerLog { c, alpha, beta };
    let gamma: Vec<Exponent> = gamma
        .iter()
        .map(|q| match q {
            Exponent::Finite(q) => Ok(Exponent::Finite(q / r)),
            Exponent::Infinity => Err(Error::InvalidParameter("cannot rescale q = inf".into())),
        })
        .collect::<Result<_>>()?;
    let profiles = power_log_profiles(c, alpha, beta, &gamma);
    Witness::new(
        formula,
        SpaceDescriptor::lp(Exponent::Finite(p)),
        MembershipCertificate::LpTail {
            p,
            envelope: formula.into(),
        },
        AvoidanceSet::union_lq(gamma)?,
        profiles,
        None,
        w.provisional(),
    )
}

/// Exact partial `q`-power sums of a witness, for oracle comparisons.
pub fn partial_power_sums(x: &ComputableSequence, q: f64, checkpoints: &[u64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut sum = NeumaierSum::new();
    let mut n = 0u64;
    for &cp in checkpoints {
        while n < cp {
            n += 1;
            let v = x.norm_at(n);
            if v != 0.0 {
                sum.add(power_term(v, q));
            }
        }
        out.push(sum.value());
    }
    out
}
