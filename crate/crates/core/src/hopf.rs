//! Hopf generators `f(z, w) = (z·α + w^p·λ, w·β)`, their case taxonomy,
//! iterates, and numerical certificates for the group action of `⟨f⟩` on
//! `ℍ² ∖ {(0,0)}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::sampling;
use crate::series::{OrderedSeries, SeriesMap};
use crate::tol::Tolerance;

/// `(p, α, β, λ)`; JSON `{p, alpha: [4], beta: [4], lambda: [4]}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfParams {
    pub p: u32,
    pub alpha: Quaternion,
    pub beta: Quaternion,
    pub lambda: Quaternion,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HopfCase {
    A1,
    A21,
    A22,
    A3,
    B,
    Invalid(String),
}

impl HopfCase {
    pub fn is_valid(&self) -> bool {
        !matches!(self, HopfCase::Invalid(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            HopfCase::A1 => "A1",
            HopfCase::A21 => "A21",
            HopfCase::A22 => "A22",
            HopfCase::A3 => "A3",
            HopfCase::B => "B",
            HopfCase::Invalid(_) => "Invalid",
        }
    }
}

impl fmt::Display for HopfCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopfCase::Invalid(reason) => write!(f, "Invalid ({reason})"),
            other => f.write_str(other.label()),
        }
    }
}

impl HopfParams {
    pub fn new(p: u32, alpha: Quaternion, beta: Quaternion, lambda: Quaternion) -> Self {
        Self { p, alpha, beta, lambda }
    }

    /// `λ = 0`, `p = 1`.
    pub fn diagonal(alpha: Quaternion, beta: Quaternion) -> Self {
        Self::new(1, alpha, beta, Quaternion::ZERO)
    }

    /// Residual of the constraint `(α − β^p)·λ = 0`.
    pub fn constraint_residual(&self) -> f64 {
        ((self.alpha - self.beta.powu(self.p)) * self.lambda).norm()
    }

    pub fn classify(&self, tol: &Tolerance) -> HopfCase {
        let invalid = |s: &str| HopfCase::Invalid(s.to_owned());
        if self.p == 0 {
            return invalid("p must be a positive integer");
        }
        let (na, nb) = (self.alpha.norm(), self.beta.norm());
        if na.is_nan() || na <= 0.0 {
            return invalid("need |α| > 0");
        }
        if nb.is_nan() || nb >= 1.0 {
            return invalid("need |β| < 1");
        }
        if na > nb && !tol.close(na, nb) {
            return invalid("need |α| ≤ |β|");
        }
        if self.lambda.is_zero(tol) {
            if self.alpha.approx_eq(self.beta, tol) {
                HopfCase::A1
            } else if tol.close(na, nb) {
                HopfCase::A22
            } else {
                HopfCase::A21
            }
        } else if self.constraint_residual() > tol.atol {
            invalid("constraint (α − β^p)·λ = 0 violated")
        } else if self.p == 1 {
            HopfCase::A3
        } else if self.beta.is_real(tol) {
            HopfCase::B
        } else {
            invalid("non-real β with λ ≠ 0 and p > 1: the iterates do not form a group")
        }
    }
}

/// Norm of a point of `ℍ²`.
#[inline]
pub fn pair_norm(z: Quaternion, w: Quaternion) -> f64 {
    (z.norm_sqr() + w.norm_sqr()).sqrt()
}

#[inline]
pub fn pair_dist(a: (Quaternion, Quaternion), b: (Quaternion, Quaternion)) -> f64 {
    pair_norm(a.0 - b.0, a.1 - b.1)
}

/// A validated Hopf generator.
#[derive(Debug, Clone)]
pub struct Hopf {
    params: HopfParams,
    case: HopfCase,
    tol: Tolerance,
    alpha_inv: Quaternion,
    beta_inv: Quaternion,
    lambda_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixedPointCertificate {
    pub k: i32,
    /// `|1 − |α|^k|`
    pub gap_first: f64,
    /// `|1 − |β|^k|`
    pub gap_second: f64,
    pub samples: usize,
    /// Smallest relative displacement `‖f^k(p) − p‖ / ‖p‖` over the samples.
    pub min_displacement: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityCheck {
    /// Smallest `k ≥ 1` with `R₁·|β|^k < r₂`.
    pub k_star: i32,
    /// `lg(r₂/r₁) / lg|β|`, reported for comparison.
    pub log_threshold: f64,
    pub k_max: i32,
    pub samples: usize,
    /// Largest `|w'| / r₂` seen over the window; `< 1` when verified.
    pub worst_ratio: f64,
    pub verified: bool,
}

impl Hopf {
    pub fn new(params: HopfParams) -> Result<Self> {
        Self::with_tolerance(params, Tolerance::default())
    }

    pub fn with_tolerance(params: HopfParams, tol: Tolerance) -> Result<Self> {
        let case = params.classify(&tol);
        if let HopfCase::Invalid(reason) = case {
            return Err(Error::InvalidParams(reason));
        }
        Ok(Self {
            alpha_inv: params.alpha.inverse()?,
            beta_inv: params.beta.inverse()?,
            lambda_zero: params.lambda.is_zero(&tol),
            params,
            case,
            tol,
        })
    }

    pub fn params(&self) -> &HopfParams {
        &self.params
    }

    pub fn case(&self) -> &HopfCase {
        &self.case
    }

    pub fn tolerance(&self) -> &Tolerance {
        &self.tol
    }

    pub fn lambda_is_zero(&self) -> bool {
        self.lambda_zero
    }

    /// Degree bound used for series built from this generator.
    pub fn degree(&self) -> u32 {
        self.params.p.max(1)
    }

    /// `f` as a series map: first `{(1,0) ↦ α, (0,p) ↦ λ}`, second `{(0,1) ↦ β}`.
    pub fn generator(&self) -> SeriesMap {
        let d = self.degree();
        let p = self.params.p;
        let mut first = OrderedSeries::zero(d);
        first.set(1, 0, self.params.alpha).expect("within degree");
        first.add_to(0, p, self.params.lambda).expect("within degree");
        let second = OrderedSeries::from_terms(d, [((0, 1), self.params.beta)]).expect("within degree");
        SeriesMap::new(first, second).expect("shared degree")
    }

    pub fn apply(&self, z: Quaternion, w: Quaternion) -> (Quaternion, Quaternion) {
        let HopfParams { p, alpha, beta, lambda } = self.params;
        (z * alpha + w.powu(p) * lambda, w * beta)
    }

    /// Exact inverse `f⁻¹(z, w) = ((z − (w·β⁻¹)^p·λ)·α⁻¹, w·β⁻¹)`.
    pub fn apply_inverse(&self, z: Quaternion, w: Quaternion) -> (Quaternion, Quaternion) {
        let wb = w * self.beta_inv;
        ((z - wb.powu(self.params.p) * self.params.lambda) * self.alpha_inv, wb)
    }

    /// Coefficient-level closed form of `f^{∘k}`.
    ///
    /// `(z·α^k + w^p·c_k, w·β^k)` with `c_k = Σ_{ℓ+m=k−1} β^{ℓp}·λ·β^{mp}` over
    /// `ℓ, m ≥ 0` for `k > 0`, and `c_k = −Σ` over `ℓ, m < 0` for `k < 0`.
    pub fn iterate_closed(&self, k: i32) -> Result<SeriesMap> {
        let d = self.degree();
        let p = self.params.p as i32;
        let HopfParams { alpha, beta, lambda, .. } = self.params;
        let mut first = OrderedSeries::zero(d);
        first.set(1, 0, alpha.powi(k)?)?;
        if !self.lambda_zero && k != 0 {
            let pairs: Vec<(i32, i32)> = if k > 0 {
                (0..k).map(|l| (l, k - 1 - l)).collect()
            } else {
                (k..0).map(|l| (l, k - 1 - l)).collect()
            };
            let mut c = Quaternion::ZERO;
            for (l, m) in pairs {
                c += beta.powi(l * p)? * lambda * beta.powi(m * p)?;
            }
            if k < 0 {
                c = -c;
            }
            first.add_to(0, self.params.p, c)?;
        }
        let second = OrderedSeries::from_terms(d, [((0, 1), beta.powi(k)?)])?;
        SeriesMap::new(first, second)
    }

    /// `f^{∘k}(z, w)` by repeated application of `f` or `f⁻¹`.
    pub fn iterate_pointwise(&self, k: i32, z: Quaternion, w: Quaternion) -> Result<(Quaternion, Quaternion)> {
        if z == Quaternion::ZERO && w == Quaternion::ZERO {
            return Err(Error::OriginInput);
        }
        let mut pt = (z, w);
        for _ in 0..k.unsigned_abs() {
            pt = if k > 0 {
                self.apply(pt.0, pt.1)
            } else {
                self.apply_inverse(pt.0, pt.1)
            };
        }
        Ok(pt)
    }

    /// Certificate that `f^{∘k}`, `k ≠ 0`, has no fixed point off the origin.
    ///
    /// A fixed point forces `w = w·β^k`, so `|w| = 0` once `|β|^k ≠ 1`, and
    /// then `z = z·α^k` forces `z = 0`. Both gaps must be positive; random
    /// points are additionally checked to move.
    pub fn fixed_point_certificate(&self, k: i32, samples: usize, seed: u64) -> Result<FixedPointCertificate> {
        if k == 0 {
            return Err(Error::ZeroIterate);
        }
        let gap_first = (1.0 - self.params.alpha.norm().powi(k)).abs();
        let gap_second = (1.0 - self.params.beta.norm().powi(k)).abs();
        let mut rng = sampling::rng(seed);
        let mut min_displacement = f64::INFINITY;
        for _ in 0..samples {
            let (z, w) = sampling::point_in_shells(&mut rng, 0.5, 1.5);
            let img = self.iterate_pointwise(k, z, w)?;
            min_displacement = min_displacement.min(pair_dist(img, (z, w)) / pair_norm(z, w));
        }
        Ok(FixedPointCertificate {
            k,
            gap_first,
            gap_second,
            samples,
            min_displacement,
            passed: gap_first > 0.0 && gap_second > 0.0 && min_displacement > 1e-9,
        })
    }

    /// Proper discontinuity on compacts inside `{r₁ < |w| < R₁}` and
    /// `{r₂ < |w| < R₂}`: since `|w·β^k| < R₁·|β|^k`, every `k ≥ k*` with
    /// `R₁·|β|^{k*} < r₂` separates them. Verified on a window of six
    /// iterates starting at `k*`.
    pub fn discontinuity_check(
        &self,
        r1: f64,
        big_r1: f64,
        r2: f64,
        big_r2: f64,
        samples: usize,
        seed: u64,
    ) -> Result<DiscontinuityCheck> {
        if !(0.0 < r1 && r1 < big_r1 && 0.0 < r2 && r2 < big_r2) {
            return Err(Error::DegenerateAnnuli);
        }
        let nb = self.params.beta.norm();
        let mut k_star = 1;
        while big_r1 * nb.powi(k_star) >= r2 {
            k_star += 1;
        }
        let k_max = k_star + 5;
        let mut rng = sampling::rng(seed);
        let mut worst_ratio = 0.0f64;
        for _ in 0..samples {
            let w = sampling::unit_quaternion(&mut rng) * rand::Rng::random_range(&mut rng, r1..big_r1);
            let z = sampling::quaternion_in_shell(&mut rng, 0.0, big_r1);
            let mut pt = self.iterate_pointwise(k_star, z, w)?;
            for k in k_star..=k_max {
                if k > k_star {
                    pt = self.apply(pt.0, pt.1);
                }
                worst_ratio = worst_ratio.max(pt.1.norm() / r2);
            }
        }
        Ok(DiscontinuityCheck {
            k_star,
            log_threshold: (r2 / r1).ln() / nb.ln(),
            k_max,
            samples,
            worst_ratio,
            verified: samples > 0 && worst_ratio < 1.0,
        })
    }

    /// Smallest `|k| ≤ k_max` with `‖f^k(a) − b‖ < tol`.
    pub fn orbit_equivalent(
        &self,
        a: (Quaternion, Quaternion),
        b: (Quaternion, Quaternion),
        k_max: u32,
        tol: f64,
    ) -> Result<Option<i32>> {
        if pair_norm(a.0, a.1) == 0.0 || pair_norm(b.0, b.1) == 0.0 {
            return Err(Error::OriginInput);
        }
        if pair_dist(a, b) < tol {
            return Ok(Some(0));
        }
        let (mut fwd, mut bwd) = (a, a);
        for k in 1..=k_max as i32 {
            fwd = self.apply(fwd.0, fwd.1);
            if pair_dist(fwd, b) < tol {
                return Ok(Some(k));
            }
            bwd = self.apply_inverse(bwd.0, bwd.1);
            if pair_dist(bwd, b) < tol {
                return Ok(Some(-k));
            }
        }
        Ok(None)
    }
}
