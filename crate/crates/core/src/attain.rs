//! Norm-attaining operator families.
//!
//! An operator `u: X → ℓ_q` on a finite-dimensional `r`-normed `X` that
//! attains its norm at `x₀` is relocated into block `k` of the partition,
//! giving `u^{(k)}` with `‖u^{(k)}(x)‖ = ‖u(x)‖`. Distinct blocks are
//! disjoint, so `T(a) = Σ a_k u^{(k)}` satisfies
//! `‖T(a)(x)‖_q = ‖a‖_q·‖u(x)‖_q` and attains its norm at `x₀` as well.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::power_term;
use crate::partition::block_index;
use crate::space::{vector_norm, CoordinateSpace, Exponent};
use crate::sum::NeumaierSum;

/// Tolerance on `‖x₀‖ = 1`.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Default additive tolerance of the attainment check.
pub const ATTAINMENT_TOLERANCE: f64 = 1e-9;

/// Finitely supported element of `ℓ_q`: `(index, value)` pairs, indices
/// 1-based and strictly increasing.
pub type SparseVector = Vec<(u64, f64)>;

/// `‖v‖_q` of a sparse vector.
pub fn sparse_norm(v: &[(u64, f64)], q: f64) -> f64 {
    let s: NeumaierSum = v.iter().map(|&(_, t)| power_term(t.abs(), q)).sum();
    if q == 1.0 {
        s.value()
    } else {
        s.value().powf(q.recip())
    }
}

/// A norm-one vector of the domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainmentPoint {
    x0: Vec<f64>,
    #[serde(skip)]
    domain: CoordinateSpace,
}

impl AttainmentPoint {
    /// Accepts `x0` only if `|‖x0‖ − 1| ≤ 10⁻¹²`.
    pub fn new(domain: CoordinateSpace, x0: Vec<f64>) -> Result<Self> {
        if x0.len() != domain.dim() {
            return Err(Error::InvalidParameter(format!(
                "x0 has dimension {}, expected {}",
                x0.len(),
                domain.dim()
            )));
        }
        if x0.iter().all(|&t| t == 0.0) {
            return Err(Error::DegenerateDirection);
        }
        let norm = domain.norm(&x0);
        if (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "x0 must have norm 1, got {norm}"
            )));
        }
        Ok(Self { x0, domain })
    }

    /// `v/‖v‖`.
    pub fn normalized(domain: CoordinateSpace, v: &[f64]) -> Result<Self> {
        let norm = domain.norm(v);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateDirection);
        }
        Self::new(domain, v.iter().map(|t| t / norm).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x0
    }

    pub fn domain(&self) -> CoordinateSpace {
        self.domain
    }
}

/// `x ↦ φ(x)·w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOne {
    pub phi: Vec<f64>,
    pub w: SparseVector,
}

/// A linear map from an `r`-normed `d`-dimensional space into `ℓ_q`,
/// `q ∈ [1, ∞)`, with finitely many nonzero output coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOperator {
    domain: CoordinateSpace,
    q: f64,
    /// `(output index, covector)`, indices strictly increasing.
    rows: Vec<(u64, Vec<f64>)>,
    rank_one: Option<RankOne>,
}

impl FiniteOperator {
    /// Output coordinate `j` of `u(x)` is `rows[j−1]·x`.
    pub fn new(domain: CoordinateSpace, q: f64, rows: Vec<Vec<f64>>) -> Result<Self> {
        check_target(q)?;
        if let Some(r) = rows.iter().find(|r| r.len() != domain.dim()) {
            return Err(Error::InvalidParameter(format!(
                "row has dimension {}, expected {}",
                r.len(),
                domain.dim()
            )));
        }
        if rows.iter().flatten().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParameter(
                "operator rows must be finite".into(),
            ));
        }
        Ok(Self {
            domain,
            q,
            rows: rows
                .into_iter()
                .enumerate()
                .map(|(j, r)| (j as u64 + 1, r))
                .collect(),
            rank_one: None,
        })
    }

    pub fn domain(&self) -> CoordinateSpace {
        self.domain
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn rank_one(&self) -> Option<&RankOne> {
        self.rank_one.as_ref()
    }

    /// Output indices in increasing order.
    pub fn output_indices(&self) -> Vec<u64> {
        self.rows.iter().map(|(i, _)| *i).collect()
    }

    pub fn apply(&self, x: &[f64]) -> SparseVector {
        assert_eq!(x.len(), self.domain.dim(), "input dimension");
        self.rows.iter().map(|(i, row)| (*i, dot(row, x))).collect()
    }

    /// `‖u(x)‖_q`.
    pub fn norm_at(&self, x: &[f64]) -> f64 {
        sparse_norm(&self.apply(x), self.q)
    }

    /// The operator norm when it has a closed form: rank-one maps
    /// (`‖φ‖_{r'}·‖w‖_q`) and `r = 1` domains (largest column norm).
    pub fn operator_norm(&self) -> Option<f64> {
        if let Some(RankOne { phi, w }) = &self.rank_one {
            let dual = dual_exponent(self.domain.exponent());
            return Some(vector_norm(phi, dual) * sparse_norm(w, self.q));
        }
        if self.domain.exponent() == Exponent::Finite(1.0) {
            let best = (0..self.domain.dim())
                .map(|c| {
                    let col: SparseVector = self.rows.iter().map(|(i, r)| (*i, r[c])).collect();
                    sparse_norm(&col, self.q)
                })
                .fold(0.0, f64::max);
            return Some(best);
        }
        None
    }

    fn is_zero(&self) -> bool {
        self.rows.iter().all(|(_, r)| r.iter().all(|&t| t == 0.0))
    }
}

fn check_target(q: f64) -> Result<()> {
    if q.is_finite() && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "target exponent must lie in [1, inf), got {q}"
        )))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(s, t)| s * t)
        .sum::<NeumaierSum>()
        .value()
}

/// Hölder conjugate.
fn dual_exponent(r: Exponent) -> Exponent {
    match r {
        Exponent::Infinity => Exponent::Finite(1.0),
        Exponent::Finite(1.0) => Exponent::Infinity,
        Exponent::Finite(r) => Exponent::Finite(r / (r - 1.0)),
    }
}

/// The norming covector of a norm-one `x₀` for `r ∈ [1, ∞]`: `φ(x₀) = 1`
/// and `‖φ‖_{r'} = 1`.
pub fn norming_functional(x0: &AttainmentPoint) -> Result<Vec<f64>> {
    let x = x0.as_slice();
    match x0.domain().exponent() {
        Exponent::Finite(1.0) => Ok(x.iter().map(|&t| sign(t)).collect()),
        Exponent::Finite(r) if r > 1.0 => {
            Ok(x.iter().map(|&t| sign(t) * t.abs().powf(r - 1.0)).collect())
        }
        Exponent::Infinity => {
            let (i, _) = x.iter().enumerate().fold((0, -1.0), |(bi, bv), (i, &t)| {
                if t.abs() > bv {
                    (i, t.abs())
                } else {
                    (bi, bv)
                }
            });
            let mut phi = vec![0.0; x.len()];
            phi[i] = sign(x[i]);
            Ok(phi)
        }
        Exponent::Finite(r) => Err(Error::InvalidParameter(format!(
            "norming functionals need r >= 1, got {r}"
        ))),
    }
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `u = φ ⊗ w` with `φ` the norming covector of `x₀`; then
/// `‖u‖ = ‖w‖_q = ‖u(x₀)‖_q`. `w` lists output coordinates `1, 2, …`.
pub fn make_attaining(x0: &AttainmentPoint, w: &[f64], q: f64) -> Result<FiniteOperator> {
    check_target(q)?;
    if w.is_empty() || w.iter().all(|&t| t == 0.0) || w.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter(
            "w must be a finite nonzero vector".into(),
        ));
    }
    let phi = norming_functional(x0)?;
    let rows: Vec<Vec<f64>> = w
        .iter()
        .map(|&wj| phi.iter().map(|&p| wj * p).collect())
        .collect();
    let mut u = FiniteOperator::new(x0.domain(), q, rows)?;
    u.rank_one = Some(RankOne {
        phi,
        w: w.iter()
            .enumerate()
            .map(|(j, &t)| (j as u64 + 1, t))
            .collect(),
    });
    Ok(u)
}

/// `u^{(k)}`: output coordinate `j` moves to `block_index(k, j)`.
pub fn lift(u: &FiniteOperator, k: u64) -> Result<FiniteOperator> {
    let rows = u
        .rows
        .iter()
        .map(|(j, r)| Ok((block_index(k, *j)?, r.clone())))
        .collect::<Result<Vec<_>>>()?;
    let rank_one = match &u.rank_one {
        Some(RankOne { phi, w }) => Some(RankOne {
            phi: phi.clone(),
            w: w.iter()
                .map(|&(j, t)| Ok((block_index(k, j)?, t)))
                .collect::<Result<_>>()?,
        }),
        None => None,
    };
    Ok(FiniteOperator {
        domain: u.domain,
        q: u.q,
        rows,
        rank_one,
    })
}

/// `T(a) = Σ_k a_k·u^{(k)}`.
#[derive(Debug, Clone)]
pub struct LiftedFamily {
    base: FiniteOperator,
    coefficients: Vec<f64>,
    lifts: Vec<FiniteOperator>,
}

pub fn na_combine(a: &[f64], u: &FiniteOperator) -> Result<LiftedFamily> {
    if a.is_empty() || a.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter(
            "coefficients must be a finite nonempty list".into(),
        ));
    }
    let lifts = (1..=a.len() as u64)
        .map(|k| lift(u, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(LiftedFamily {
        base: u.clone(),
        coefficients: a.to_vec(),
        lifts,
    })
}

impl LiftedFamily {
    pub fn base(&self) -> &FiniteOperator {
        &self.base
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn lifts(&self) -> &[FiniteOperator] {
        &self.lifts
    }

    /// `a_k·u^{(k)}(x)`.
    pub fn term(&self, k: usize, x: &[f64]) -> SparseVector {
        let a = self.coefficients[k];
        self.lifts[k]
            .apply(x)
            .into_iter()
            .map(|(i, t)| (i, a * t))
            .collect()
    }

    /// `T(a)(x)`, sorted by output index.
    pub fn apply(&self, x: &[f64]) -> SparseVector {
        let mut out: SparseVector = (0..self.lifts.len())
            .flat_map(|k| self.term(k, x))
            .collect();
        out.sort_by_key(|&(i, _)| i);
        out
    }

    pub fn norm_at(&self, x: &[f64]) -> f64 {
        sparse_norm(&self.apply(x), self.base.q)
    }

    /// `‖a‖_q`.
    pub fn coefficient_norm(&self) -> f64 {
        let v: SparseVector = self.coefficients.iter().map(|&t| (0, t)).collect();
        sparse_norm(&v, self.base.q)
    }

    /// The closed-form operator norm of `T(a)`, when the base has one.
    pub fn operator_norm(&self) -> Option<f64> {
        let base = self.base.operator_norm()?;
        Some(self.coefficient_norm() * base)
    }
}

/// How the operator norm of `T(a)` is probed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Sampler {
    /// Basis directions for `r = 1`; the closed form for rank-one maps.
    Exact,
    /// Seeded random points on the unit sphere of the domain.
    Sampled { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttainmentReport {
    pub d: usize,
    pub r: Exponent,
    pub q: f64,
    pub m: usize,
    /// `max ‖T(a)(x)‖ / ‖T(a)(x₀)‖` over the probed unit vectors.
    pub max_ratio: f64,
    /// `‖a‖_q·‖u(x₀)‖_q`.
    pub analytic_norm: f64,
    pub samples: u64,
    pub seed: Option<u64>,
    /// `‖T(a)(x₀)‖_q`, evaluated.
    pub value_at_x0: f64,
    /// `|value_at_x0 − analytic_norm| / analytic_norm`.
    pub identity_error: f64,
    pub max_probed: f64,
    pub violations: u64,
    pub tolerance: f64,
    /// `Σ_k ‖a_k·u^{(k)}‖` against `‖u(x₀)‖·‖a‖_1`, for closed-form bases.
    pub l1_sum: Option<f64>,
    pub l1_expected: f64,
    pub l1_error: Option<f64>,
    pub pass: bool,
}

/// Verifies `‖T(a)(x)‖ ≤ ‖T(a)(x₀)‖ + tol` on the probed unit vectors, and
/// the identities `‖T(a)(x₀)‖ = ‖a‖_q·‖u(x₀)‖` and
/// `Σ_k ‖a_k·u^{(k)}‖ = ‖u(x₀)‖·‖a‖_1`.
pub fn attainment_check(
    fam: &LiftedFamily,
    x0: &AttainmentPoint,
    sampler: Sampler,
    tolerance: f64,
) -> Result<AttainmentReport> {
    let domain = fam.base.domain;
    if x0.domain() != domain {
        return Err(Error::InvalidParameter(
            "x0 lives in a different domain".into(),
        ));
    }
    let q = fam.base.q;
    let x = x0.as_slice();
    let value_at_x0 = fam.norm_at(x);
    let u_x0 = fam.base.norm_at(x);
    let analytic_norm = fam.coefficient_norm() * u_x0;
    let identity_error = relative(value_at_x0, analytic_norm);

    let (max_probed, samples, seed, violations) = match sampler {
        Sampler::Exact => {
            let norm = match domain.exponent() {
                Exponent::Finite(1.0) => (0..domain.dim())
                    .map(|i| {
                        let mut e = vec![0.0; domain.dim()];
                        e[i] = 1.0;
                        fam.norm_at(&e)
                    })
                    .fold(0.0, f64::max),
                _ => fam.operator_norm().ok_or_else(|| {
                    Error::InvalidParameter("exact mode needs r = 1 or a rank-one base".into())
                })?,
            };
            let probes = if domain.exponent() == Exponent::Finite(1.0) {
                domain.dim() as u64
            } else {
                1
            };
            (
                norm,
                probes,
                None,
                u64::from(norm > value_at_x0 + tolerance),
            )
        }
        Sampler::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0.0f64;
            let mut violations = 0;
            let mut v = vec![0.0; domain.dim()];
            for _ in 0..samples {
                let norm = loop {
                    v.iter_mut()
                        .for_each(|t| *t = StandardNormal.sample(&mut rng));
                    let n = domain.norm(&v);
                    if n > 0.0 {
                        break n;
                    }
                };
                v.iter_mut().for_each(|t| *t /= norm);
                let t = fam.norm_at(&v);
                if t > value_at_x0 + tolerance {
                    violations += 1;
                }
                best = best.max(t);
            }
            (best, samples, Some(seed), violations)
        }
    };

    let l1_sum = fam
        .lifts
        .iter()
        .zip(&fam.coefficients)
        .map(|(l, a)| l.operator_norm().map(|n| a.abs() * n))
        .collect::<Option<Vec<f64>>>()
        .map(crate::sum::compensated_sum);
    let a1: f64 = fam
        .coefficients
        .iter()
        .map(|t| t.abs())
        .sum::<NeumaierSum>()
        .value();
    let l1_expected = u_x0 * a1;
    let l1_error = l1_sum.map(|s| relative(s, l1_expected));

    let max_ratio = if value_at_x0 > 0.0 {
        max_probed / value_at_x0
    } else {
        f64::INFINITY
    };
    let pass = violations == 0 && identity_error <= 1e-12 && l1_error.is_none_or(|e| e <= 1e-12);
    Ok(AttainmentReport {
        d: domain.dim(),
        r: domain.exponent(),
        q,
        m: fam.coefficients.len(),
        max_ratio,
        analytic_norm,
        samples,
        seed,
        value_at_x0,
        identity_error,
        max_probed,
        violations,
        tolerance,
        l1_sum,
        l1_expected,
        l1_error,
        pass,
    })
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}

/// Linear independence of `T(a⁽¹⁾), …, T(a⁽ⁿ⁾)`, decided on the coefficient
/// vectors: the lifts occupy disjoint blocks, so `T` is injective when
/// `u ≠ 0`.
pub fn family_independence(u: &FiniteOperator, coefficients: &[Vec<f64>]) -> bool {
    if coefficients.is_empty() {
        return true;
    }
    if u.is_zero() {
        return false;
    }
    rank(coefficients) == coefficients.len()
}

/// Rank by Gaussian elimination with partial pivoting.
fn rank(vectors: &[Vec<f64>]) -> usize {
    let cols = vectors.iter().map(Vec::len).max().unwrap_or(0);
    let mut m: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let mut row = v.clone();
            row.resize(cols, 0.0);
            row
        })
        .collect();
    let scale = m.iter().flatten().fold(0.0f64, |s, t| s.max(t.abs()));
    let eps = scale * 1e-12 * cols.max(m.len()) as f64;
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
        else {
            break;
        };
        if m[pivot][c].abs() <= eps {
            continue;
        }
        m.swap(rank, pivot);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest {
            let f = row[c] / pivot_row[c];
            row[c..]
                .iter_mut()
                .zip(&pivot_row[c..])
                .for_each(|(t, p)| *t -= f * p);
        }
        rank += 1;
    }
    rank
}

/// A seeded point on the unit sphere of `domain`.
pub fn random_unit(domain: CoordinateSpace, seed: u64) -> Result<AttainmentPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..domain.dim())
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    AttainmentPoint::normalized(domain, &v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(d: usize, r: f64) -> CoordinateSpace {
        CoordinateSpace::new(d, Exponent::finite(r).unwrap()).unwrap()
    }

    #[test]
    fn first_coordinate_functional() {
        let x0 = AttainmentPoint::new(space(4, 1.0), vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let u = make_attaining(&x0, &[1.0], 2.0).unwrap();
        assert_eq!(u.operator_norm(), Some(1.0));
        assert_eq!(u.norm_at(x0.as_slice()), 1.0);
        assert_eq!(u.apply(&[0.0, 5.0, 0.0, 0.0]), vec![(1, 0.0)]);
    }

    #[test]
    fn self_dual_two_norm() {
        let h = 0.5f64.sqrt();
        let x0 = AttainmentPoint::new(space(3, 2.0), vec![h, h, 0.0]).unwrap();
        let phi = norming_functional(&x0).unwrap();
        assert_eq!(phi, vec![h, h, 0.0]);
        let u = make_attaining(&x0, &[3.0, 4.0], 2.0).unwrap();
        assert!((u.norm_at(x0.as_slice()) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn norming_functionals_norm_x0() {
        for r in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            let x0 = random_unit(space(5, r), 3).unwrap();
            let phi = norming_functional(&x0).unwrap();
            assert!((dot(&phi, x0.as_slice()) - 1.0).abs() < 1e-12, "r={r}");
            let dual = vector_norm(&phi, dual_exponent(Exponent::finite(r).unwrap()));
            assert!((dual - 1.0).abs() < 1e-12, "r={r}: {dual}");
        }
    }

    #[test]
    fn lift_positions() {
        let x0 = AttainmentPoint::new(space(2, 1.0), vec![1.0, 0.0]).unwrap();
        let u = make_attaining(&x0, &[1.0, 2.0, 3.0], 1.0).unwrap();
        assert_eq!(lift(&u, 2).unwrap().output_indices(), vec![2, 6, 10]);
        let a = lift(&u, 1).unwrap().output_indices();
        let b = lift(&u, 2).unwrap().output_indices();
        assert!(a.iter().all(|i| !b.contains(i)));
        assert!(lift(&u, 70).is_err());
    }

    #[test]
    fn combined_norms() {
        let x0 = random_unit(space(4, 2.0), 0).unwrap();
        let u = make_attaining(&x0, &[1.0, -2.0, 0.5], 2.0).unwrap();
        let fam = na_combine(&[3.0, 4.0], &u).unwrap();
        let t = fam.norm_at(x0.as_slice());
        assert!(relative(t, 5.0 * u.norm_at(x0.as_slice())) < 1e-12);
        let r = attainment_check(
            &fam,
            &x0,
            Sampler::Sampled {
                samples: 2000,
                seed: 0,
            },
            ATTAINMENT_TOLERANCE,
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        let r2 = attainment_check(&fam, &x0, Sampler::Exact, ATTAINMENT_TOLERANCE).unwrap();
        assert!(r2.pass && relative(r2.max_probed, r2.value_at_x0) < 1e-12);
    }

    #[test]
    fn exact_mode_needs_closed_form() {
        let u =
            FiniteOperator::new(space(2, 2.0), 2.0, vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let fam = na_combine(&[1.0], &u).unwrap();
        let x0 = random_unit(space(2, 2.0), 0).unwrap();
        assert!(attainment_check(&fam, &x0, Sampler::Exact, 1e-9).is_err());
        let u1 =
            FiniteOperator::new(space(2, 1.0), 1.0, vec![vec![1.0, 2.0], vec![3.0, -4.0]]).unwrap();
        assert_eq!(u1.operator_norm(), Some(6.0));
    }

    #[test]
    fn independence() {
        let x0 = AttainmentPoint::new(space(2, 1.0), vec![1.0, 0.0]).unwrap();
        let u = make_attaining(&x0, &[1.0], 1.0).unwrap();
        assert!(family_independence(&u, &[vec![1.0, 0.0], vec![0.0, 1.0]]));
        assert!(!family_independence(&u, &[vec![1.0, 2.0], vec![2.0, 4.0]]));
        let basis: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..7).map(|k| f64::from(u8::from(i == k))).collect())
            .collect();
        assert!(family_independence(&u, &basis));
    }

    #[test]
    fn bad_points() {
        assert_eq!(
            AttainmentPoint::new(space(2, 2.0), vec![0.0, 0.0]),
            Err(Error::DegenerateDirection)
        );
        assert!(AttainmentPoint::new(space(2, 2.0), vec![1.0, 1.0]).is_err());
    }
}
