//! Basis construction from a witness and the checks on its combinations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combination::{combine, interleave, Combination};
use crate::error::{Error, Result};
use crate::norms::{divergence_certificate, lp_power_sum, power_term, Family, SpaceDescriptor};
use crate::partition::{block_index, block_of, MAX_BLOCK};
use crate::sequence::ComputableSequence;
use crate::space::Exponent;
use crate::sum::NeumaierSum;

use super::avoidance::AvoidanceSet;
use super::witness::{
    profile_check, separation_check, ProfiledDivergence, SeparationCheck, Witness, SEPARATION_COUNT,
};

/// Relative tolerance for the exact `ℓ_p` identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Coordinates on which `z_{block_index(m, j)} = a_m·x_j` is checked bitwise.
pub const COORDINATE_CHECK: u64 = 1000;

/// Block depth used when a custom avoidance predicate is evaluated.
pub const CUSTOM_PREDICATE_DEPTH: u64 = 10_000;

/// The first `m` interleaved copies `y_1, …, y_m` of `x⁰`.
#[derive(Debug, Clone)]
pub struct BasisFamily {
    witness: Witness,
    x0: ComputableSequence,
    vectors: Vec<ComputableSequence>,
}

impl BasisFamily {
    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn x0(&self) -> &ComputableSequence {
        &self.x0
    }

    pub fn vectors(&self) -> &[ComputableSequence] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `y_i = interleave(x⁰, i)` for `i = 1..=m`.
pub fn build_basis(w: &Witness, m: usize) -> Result<BasisFamily> {
    if m == 0 || m as u64 > MAX_BLOCK {
        return Err(Error::InvalidParameter(format!(
            "basis size must lie in 1..={MAX_BLOCK}, got {m}"
        )));
    }
    let x0 = w.sequence().zerofree(None)?;
    let vectors = (1..=m as u64)
        .map(|i| interleave(&x0, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(BasisFamily {
        witness: w.clone(),
        x0,
        vectors,
    })
}

/// Linear independence of the truncations to depth `N`, decided
/// structurally: the supports are disjoint, so it suffices that every block
/// has a nonzero coordinate at or below `N`. Its first one is `x_1 ≠ 0`.
pub fn independence_check(basis: &BasisFamily, depth: u64) -> Result<bool> {
    for (k, y) in basis.vectors.iter().enumerate() {
        let block = k as u64 + 1;
        let first_index = block_index(block, 1)?;
        if first_index > depth {
            return Err(Error::DepthTooShallow {
                depth,
                block,
                first_index,
            });
        }
        if y.norm_at(first_index) == 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The exact `ℓ_p` identity `‖z‖_p^p = Σ|a_i|^p·‖x⁰‖_p^p` on matched truncations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpIdentity {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub coefficients: Vec<f64>,
    /// Inner depth: blocks are covered for `j ≤ N`.
    #[serde(rename = "N")]
    pub depth: u64,
    /// Largest index of `z` inside the matched truncation.
    pub matched_depth: u64,
    pub norm_z: f64,
    pub norm_x0_upper: f64,
    pub stilde: f64,
    pub k: f64,
    /// `‖z‖^{s̃}`.
    pub lhs: f64,
    /// `K^{s̃}·‖x⁰‖^{s̃}·Σ|a_i|^{s̃}` with the certified-upper `‖x⁰‖`.
    pub rhs: f64,
    pub inequality_holds: bool,
    pub lp_identity: Option<LpIdentity>,
    pub pass: bool,
}

/// Coordinate norms of `z` at the indices `block_index(i, j)`, `i ≤ len(a)`,
/// `j ≤ N`, listed in index order with the other coordinates left out.
fn matched_profile(z: &Combination, depth: u64) -> Result<(Vec<f64>, u64)> {
    let m = z.len() as u64;
    let top = block_index(m, depth)?;
    let space = z.witness().space();
    let mut buf = vec![0.0; z.witness().dim()];
    let mut out = Vec::new();
    for n in 1..=top {
        let (i, j) = block_of(n);
        if i <= m && j <= depth {
            z.eval_into(n, &mut buf);
            out.push(space.norm(&buf));
        }
    }
    Ok((out, top))
}

/// Checks `‖z‖^{s̃} ≤ K^{s̃}·‖x⁰‖^{s̃}·Σ|a_i|^{s̃}` for `z = Σ a_i y_i`, and for
/// finite `ℓ_p` also the exact identity.
pub fn embedding_bound_check(a: &[f64], w: &Witness, depth: u64) -> Result<EmbeddingReport> {
    if a.is_empty() || a.iter().all(|&t| t == 0.0) {
        return Err(Error::InvalidParameter(
            "coefficient list must have a nonzero entry".into(),
        ));
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be >= 1".into()));
    }
    let home: &SpaceDescriptor = w.home();
    let x0 = w.sequence().zerofree(None)?;
    let upper = w.certified_upper_norm(depth)?.value;
    let z = combine(a, &x0)?;
    let (profile, matched_depth) = matched_profile(&z, depth)?;
    let norm_z = home.evaluate_profile(&profile)?;

    let s = home.stilde();
    let k = home.k();
    let lhs = norm_z.powf(s);
    let coeff_sum: f64 = a
        .iter()
        .map(|t| power_term(t.abs(), s))
        .sum::<NeumaierSum>()
        .value();
    let rhs = k.powf(s) * upper.powf(s) * coeff_sum;
    let inequality_holds = lhs <= rhs * (1.0 + IDENTITY_TOLERANCE);

    let lp_identity = match home.family() {
        Family::Lp(Exponent::Finite(p)) => {
            let p = *p;
            let lhs = profile
                .iter()
                .filter(|&&v| v != 0.0)
                .map(|&v| power_term(v, p))
                .sum::<NeumaierSum>()
                .value();
            let coeff: f64 = a
                .iter()
                .map(|t| power_term(t.abs(), p))
                .sum::<NeumaierSum>()
                .value();
            let rhs = coeff * lp_power_sum(&x0, p, depth)?;
            let relative_error = (lhs - rhs).abs() / rhs;
            Some(LpIdentity {
                p,
                lhs,
                rhs,
                relative_error,
                holds: relative_error <= IDENTITY_TOLERANCE,
            })
        }
        _ => None,
    };
    let pass = inequality_holds && lp_identity.as_ref().is_none_or(|l| l.holds);
    Ok(EmbeddingReport {
        coefficients: a.to_vec(),
        depth,
        matched_depth,
        norm_z,
        norm_x0_upper: upper,
        stilde: s,
        k,
        lhs,
        rhs,
        inequality_holds,
        lp_identity,
        pass,
    })
}

/// Evidence that `z = Σ a_i y_i` stays outside `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvoidanceReport {
    pub coefficients: Vec<f64>,
    /// The block `m` used: largest `|a_i|`, smallest `i` on ties.
    pub block: u64,
    pub a_m: f64,
    /// `z_{block_index(m, j)} = a_m·x_j` bitwise for `j ≤ 10³`.
    pub coordinate_identity: bool,
    pub divergence: Vec<ProfiledDivergence>,
    pub separation: Option<SeparationCheck>,
    /// For custom sets: the predicate rejects the block restriction.
    pub custom_outside: Option<bool>,
    pub pass: bool,
}

/// The index of the largest `|a_i|`, 1-based, smallest index on ties.
pub fn dominant_block(a: &[f64]) -> Option<u64> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &t) in a.iter().enumerate() {
        if t != 0.0 && best.is_none_or(|(_, b)| t.abs() > b) {
            best = Some((i, t.abs()));
        }
    }
    best.map(|(i, _)| i as u64 + 1)
}

/// Certifies that `z` leaves `A` through its block-`m` restriction: the
/// finite `q` in `Γ` by divergence of the `q`-power sums past `|a_m|^q·T`,
/// `q = ∞` by the sup passing `|a_m|·T`, and `c₀` by `10³` coordinates of
/// norm at least `|a_m|·δ`.
pub fn avoidance_check(
    a: &[f64],
    w: &Witness,
    threshold: f64,
    n_max: u64,
) -> Result<AvoidanceReport> {
    let block = dominant_block(a).ok_or_else(|| {
        Error::InvalidParameter("coefficient list must have a nonzero entry".into())
    })?;
    let a_m = a[(block - 1) as usize];
    let x0 = w.sequence().zerofree(None)?;
    let z = combine(a, &x0)?;
    let restricted = z.block_restriction(block)?;

    let dim = x0.dim();
    let (mut zb, mut xb) = (vec![0.0; dim], vec![0.0; dim]);
    let mut coordinate_identity = true;
    for j in 1..=COORDINATE_CHECK {
        z.eval_into(block_index(block, j)?, &mut zb);
        x0.eval_into(j, &mut xb);
        if zb
            .iter()
            .zip(&xb)
            .any(|(s, t)| s.to_bits() != (a_m * t).to_bits())
        {
            coordinate_identity = false;
            break;
        }
    }

    let scale = a_m.abs();
    let mut divergence = Vec::new();
    let mut separation = None;
    let mut custom_outside = None;
    match w.avoid() {
        AvoidanceSet::UnionLq(gamma) => {
            for &q in gamma {
                let factor = match q {
                    Exponent::Finite(q) => power_term(scale, q),
                    Exponent::Infinity => scale,
                };
                let cert = divergence_certificate(&restricted, q, threshold * factor, n_max)?;
                divergence.push(profile_check(cert, w.profile(q), factor));
            }
        }
        AvoidanceSet::C0 => {
            let delta = w.separation().map(|s| s.delta).unwrap_or(0.0);
            separation = Some(separation_check(
                &restricted,
                scale * delta,
                SEPARATION_COUNT,
            ));
        }
        AvoidanceSet::Custom(c) => {
            let profile = restricted.norm_profile(n_max.min(CUSTOM_PREDICATE_DEPTH));
            custom_outside = Some(!c.contains(&profile));
        }
    }
    let pass = coordinate_identity
        && divergence.iter().all(|d| d.pass)
        && separation.as_ref().is_none_or(|s| s.pass)
        && custom_outside.unwrap_or(true);
    Ok(AvoidanceReport {
        coefficients: a.to_vec(),
        block,
        a_m,
        coordinate_identity,
        divergence,
        separation,
        custom_outside,
        pass,
    })
}

/// `count` seeded coefficient vectors of length `m`, entries uniform in
/// `[-5, 5]` with roughly one in five set to zero; never all zero.
pub fn random_coefficients(m: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let a: Vec<f64> = (0..m)
                .map(|_| {
                    if rng.random_bool(0.2) {
                        0.0
                    } else {
                        rng.random_range(-5.0..5.0)
                    }
                })
                .collect();
            if a.iter().any(|&t| t != 0.0) {
                break a;
            }
        })
        .collect()
}

/// The deterministic battery: standard basis vectors, all ones,
/// alternating signs, then `random` seeded vectors.
pub fn coefficient_battery(m: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .collect();
    out.push(vec![1.0; m]);
    out.push(
        (0..m)
            .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    );
    out.extend(random_coefficients(m, random, seed));
    out
}
