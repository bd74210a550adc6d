//! Stem functions with values in `ℍ ⊗ ℝ₂`, the slice functions they induce,
//! finite-difference holomorphy residuals, and the regular extension of a
//! map from a product of slices to `ℍ²`.
//!
//! An element of `ℍ ⊗ ℝ₂` is `F₀ + e₁F₁ + e₂F₂ + e₁₂F₁₂` with quaternion
//! coefficients commuting with the Clifford units (`e₁² = e₂² = −1`,
//! `e₁₂ = e₁e₂`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::quat::{check_imaginary_unit, Quaternion, SliceDecomposition};
use crate::sampling;
use crate::series::OrderedSeries;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CliffordQuat {
    pub f0: Quaternion,
    pub f1: Quaternion,
    pub f2: Quaternion,
    pub f12: Quaternion,
}

impl CliffordQuat {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO, Quaternion::ZERO);

    pub const fn new(f0: Quaternion, f1: Quaternion, f2: Quaternion, f12: Quaternion) -> Self {
        Self { f0, f1, f2, f12 }
    }

    pub fn norm(&self) -> f64 {
        (self.f0.norm_sqr() + self.f1.norm_sqr() + self.f2.norm_sqr() + self.f12.norm_sqr()).sqrt()
    }

    /// `e₁·F`.
    pub fn e1_left_mul(&self) -> Self {
        Self::new(-self.f1, self.f0, -self.f12, self.f2)
    }

    /// `F·e₂`.
    pub fn e2_right_mul(&self) -> Self {
        Self::new(-self.f2, -self.f12, self.f0, self.f1)
    }
}

impl Add for CliffordQuat {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.f0 + r.f0, self.f1 + r.f1, self.f2 + r.f2, self.f12 + r.f12)
    }
}

impl Sub for CliffordQuat {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.f0 - r.f0, self.f1 - r.f1, self.f2 - r.f2, self.f12 - r.f12)
    }
}

impl Neg for CliffordQuat {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.f0, -self.f1, -self.f2, -self.f12)
    }
}

impl Mul<f64> for CliffordQuat {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.f0 * s, self.f1 * s, self.f2 * s, self.f12 * s)
    }
}

/// Open box in `(α₁, β₁, α₂, β₂)` coordinates, symmetric in `β₁` and `β₂`,
/// so conjugation invariance in each variable holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StemDomain {
    pub alpha1: (f64, f64),
    pub beta1_max: f64,
    pub alpha2: (f64, f64),
    pub beta2_max: f64,
}

impl StemDomain {
    /// `|α_h| < r`, `|β_h| < r`.
    pub fn cube(r: f64) -> Self {
        Self {
            alpha1: (-r, r),
            beta1_max: r,
            alpha2: (-r, r),
            beta2_max: r,
        }
    }

    pub fn contains(&self, z1: Complex64, z2: Complex64) -> bool {
        let inside = |a: f64, (lo, hi): (f64, f64)| lo < a && a < hi;
        inside(z1.re, self.alpha1)
            && z1.im.abs() < self.beta1_max
            && inside(z2.re, self.alpha2)
            && z2.im.abs() < self.beta2_max
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Complex64, Complex64) {
        // shrink by a hair so samples stay strictly inside
        let pick = |rng: &mut R, lo: f64, hi: f64| {
            let pad = 1e-9 * (hi - lo);
            rng.random_range(lo + pad..=hi - pad)
        };
        let a1 = pick(rng, self.alpha1.0, self.alpha1.1);
        let b1 = pick(rng, -self.beta1_max, self.beta1_max);
        let a2 = pick(rng, self.alpha2.0, self.alpha2.1);
        let b2 = pick(rng, -self.beta2_max, self.beta2_max);
        (Complex64::new(a1, b1), Complex64::new(a2, b2))
    }
}

type StemFn = dyn Fn(Complex64, Complex64) -> CliffordQuat + Send + Sync;

/// A stem function given as a pure evaluation oracle on a box domain, with
/// an optional exact polynomial form.
#[derive(Clone)]
pub struct StemOracle {
    domain: StemDomain,
    eval: Arc<StemFn>,
    polynomial: Option<OrderedSeries>,
}

impl fmt::Debug for StemOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StemOracle")
            .field("domain", &self.domain)
            .field("polynomial", &self.polynomial)
            .finish_non_exhaustive()
    }
}

impl StemOracle {
    pub fn new<F>(domain: StemDomain, eval: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> CliffordQuat + Send + Sync + 'static,
    {
        Self {
            domain,
            eval: Arc::new(eval),
            polynomial: None,
        }
    }

    /// Stem of an ordered polynomial `Σ x₁^h x₂^k a_{h,k}`.
    ///
    /// With `z₁^h = A₁ + iB₁` and `z₂^k = A₂ + iB₂` the monomial contributes
    /// `(A₁A₂, B₁A₂, A₁B₂, B₁B₂)·a` to `(F₀, F₁, F₂, F₁₂)`.
    pub fn from_series(series: &OrderedSeries, domain: StemDomain) -> Self {
        let terms: Vec<_> = series.terms().collect();
        let eval = move |z1: Complex64, z2: Complex64| {
            let mut out = CliffordQuat::ZERO;
            for t in &terms {
                let p1 = cpow(z1, t.h);
                let p2 = cpow(z2, t.k);
                out.f0 += t.coeff * (p1.re * p2.re);
                out.f1 += t.coeff * (p1.im * p2.re);
                out.f2 += t.coeff * (p1.re * p2.im);
                out.f12 += t.coeff * (p1.im * p2.im);
            }
            out
        };
        Self {
            domain,
            eval: Arc::new(eval),
            polynomial: Some(series.clone()),
        }
    }

    pub fn domain(&self) -> &StemDomain {
        &self.domain
    }

    pub fn polynomial(&self) -> Option<&OrderedSeries> {
        self.polynomial.as_ref()
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Result<CliffordQuat> {
        if !self.domain.contains(z1, z2) {
            return Err(Error::OutsideDomain(format!("{z1}, {z2}")));
        }
        Ok((self.eval)(z1, z2))
    }

    /// Maximal deviation from the Clifford-intrinsic parities: `F₀, F₁, F₂,
    /// F₁₂` even-even, odd-even, even-odd, odd-odd in `(β₁, β₂)`.
    pub fn parity_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        if samples == 0 {
            return Err(Error::InvalidArgument("parity check needs at least one sample".into()));
        }
        let mut rng = sampling::rng(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let (z1, z2) = self.domain.sample(&mut rng);
            let f = self.eval(z1, z2)?;
            let c1 = self.eval(z1.conj(), z2)?;
            let c2 = self.eval(z1, z2.conj())?;
            let devs = [
                (c1.f0 - f.f0).norm(),
                (c1.f1 + f.f1).norm(),
                (c1.f2 - f.f2).norm(),
                (c1.f12 + f.f12).norm(),
                (c2.f0 - f.f0).norm(),
                (c2.f1 - f.f1).norm(),
                (c2.f2 + f.f2).norm(),
                (c2.f12 + f.f12).norm(),
            ];
            worst = devs.into_iter().fold(worst, f64::max);
        }
        Ok(worst)
    }

    /// The induced left slice function `F₀ + J₁F₁ + J₂F₂ + J₁J₂F₁₂`.
    pub fn slice_eval(&self, x: &SlicePoint) -> Result<Quaternion> {
        let f = self.eval(x.s1.complex(), x.s2.complex())?;
        let (j1, j2) = (x.s1.unit, x.s2.unit);
        Ok(f.f0 + j1 * f.f1 + j2 * f.f2 + j1 * j2 * f.f12)
    }

    /// Central-difference norms of `∂̄₁F = ½(∂F/∂α₁ + e₁·∂F/∂β₁)` and
    /// `∂̄₂F = ½(∂F/∂α₂ + (∂F/∂β₂)·e₂)`; `O(h_step²)` accurate.
    pub fn dbar_residual(&self, z1: Complex64, z2: Complex64, h_step: f64) -> Result<(f64, f64)> {
        if h_step.is_nan() || h_step <= 0.0 {
            return Err(Error::InvalidArgument(format!("h_step must be positive, got {h_step}")));
        }
        let dre = Complex64::new(h_step, 0.0);
        let dim = Complex64::new(0.0, h_step);
        for (a, b) in [(z1 + dre, z2), (z1 - dre, z2), (z1 + dim, z2), (z1 - dim, z2)]
            .into_iter()
            .chain([(z1, z2 + dre), (z1, z2 - dre), (z1, z2 + dim), (z1, z2 - dim)])
        {
            if !self.domain.contains(a, b) {
                return Err(Error::StencilOutOfDomain { h_step });
            }
        }
        let f = &self.eval;
        let inv = 0.5 / h_step;
        let da1 = (f(z1 + dre, z2) - f(z1 - dre, z2)) * inv;
        let db1 = (f(z1 + dim, z2) - f(z1 - dim, z2)) * inv;
        let da2 = (f(z1, z2 + dre) - f(z1, z2 - dre)) * inv;
        let db2 = (f(z1, z2 + dim) - f(z1, z2 - dim)) * inv;
        let d1 = (da1 + db1.e1_left_mul()) * 0.5;
        let d2 = (da2 + db2.e2_right_mul()) * 0.5;
        Ok((d1.norm(), d2.norm()))
    }
}

fn cpow(z: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= z;
    }
    acc
}

/// Random ordered monomial `x₁^h x₂^k c` with exponents in `0..=3`, one of
/// them equal to 3, and coefficient components uniform in `[-0.5, 0.5]`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R) -> OrderedSeries {
    let other = rng.random_range(0..=3u32);
    let (h, k) = if rng.random_bool(0.5) { (3, other) } else { (other, 3) };
    let c = sampling::quaternion_in_cube(rng, 0.5);
    OrderedSeries::from_terms(6, [((h, k), c)]).expect("within degree")
}

/// `F₀ = α₁²`: parity-compatible but not holomorphic, `∂̄₁F = α₁`.
pub fn control_stem(domain: StemDomain) -> StemOracle {
    StemOracle::new(domain, |z1, _| CliffordQuat {
        f0: Quaternion::real(z1.re * z1.re),
        ..CliffordQuat::ZERO
    })
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct StemCheck {
    pub samples: usize,
    pub h_step: f64,
    pub parity: f64,
    /// Largest `∂̄` residual at `h_step` and at `h_step / 2`.
    pub dbar: f64,
    pub dbar_half: f64,
    /// `log₂(dbar / dbar_half)`.
    pub order: f64,
}

/// Parity and `∂̄` residuals at `samples` interior points, with the observed
/// convergence order of the difference scheme.
pub fn stem_check(stem: &StemOracle, samples: usize, h_step: f64, seed: u64) -> Result<StemCheck> {
    let parity = stem.parity_residual(samples, seed)?;
    let mut rng = sampling::rng(seed ^ 0x5eed);
    let (mut dbar, mut dbar_half) = (0.0f64, 0.0f64);
    let mut taken = 0;
    let mut tries = 0;
    while taken < samples {
        tries += 1;
        if tries > 100 * samples {
            return Err(Error::StencilOutOfDomain { h_step });
        }
        let (z1, z2) = stem.domain().sample(&mut rng);
        let (a, b) = match stem.dbar_residual(z1, z2, h_step) {
            Ok(r) => r,
            Err(Error::StencilOutOfDomain { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (c, d) = stem.dbar_residual(z1, z2, h_step / 2.0)?;
        dbar = dbar.max(a).max(b);
        dbar_half = dbar_half.max(c).max(d);
        taken += 1;
    }
    Ok(StemCheck {
        samples,
        h_step,
        parity,
        dbar,
        dbar_half,
        order: (dbar / dbar_half).log2(),
    })
}

/// A point `(x₁, x₂) ∈ ℍ²` with both slice decompositions `x_h = α_h + β_h·J_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint {
    pub x1: Quaternion,
    pub x2: Quaternion,
    pub s1: SliceDecomposition,
    pub s2: SliceDecomposition,
}

impl SlicePoint {
    pub fn new(x1: Quaternion, x2: Quaternion) -> Self {
        Self {
            x1,
            x2,
            s1: x1.split(),
            s2: x2.split(),
        }
    }
}

/// Regular extension of `f`, known on `L_{I₁} × L_{I₂}`, evaluated at `x`
/// through the sixteen-term representation formula. `ℍ²` is a left
/// `ℍ`-module via `a·(b, c) = (a·b, a·c)`.
///
/// A real coordinate `x_h` takes `J_h := I_h`.
pub fn represent_extend<F>(
    f: F,
    unit1: Quaternion,
    unit2: Quaternion,
    x: &SlicePoint,
    tol: f64,
) -> Result<(Quaternion, Quaternion)>
where
    F: Fn(Quaternion, Quaternion) -> (Quaternion, Quaternion),
{
    let i1 = check_imaginary_unit(unit1, tol)?;
    let i2 = check_imaginary_unit(unit2, tol)?;
    let j1 = if x.s1.is_real { i1 } else { x.s1.unit };
    let j2 = if x.s2.is_real { i2 } else { x.s2.unit };

    let y1 = Quaternion::real(x.s1.alpha) + i1 * x.s1.beta;
    let y2 = Quaternion::real(x.s2.alpha) + i2 * x.s2.beta;
    let y1c = Quaternion::real(x.s1.alpha) - i1 * x.s1.beta;
    let y2c = Quaternion::real(x.s2.alpha) - i2 * x.s2.beta;

    let f_pp = f(y1, y2);
    let f_cp = f(y1c, y2);
    let f_pc = f(y1, y2c);
    let f_cc = f(y1c, y2c);

    let m1 = j1 * i1;
    let m2 = j2 * i2;
    let m12 = j1 * j2 * i2 * i1;

    let combine = |a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion| -> Quaternion {
        let four = a + b + c + d
            - m1 * a + m1 * b - m1 * c + m1 * d
            - m2 * a - m2 * b + m2 * c + m2 * d
            + m12 * a - m12 * b - m12 * c + m12 * d;
        four * 0.25
    };
    Ok((
        combine(f_pp.0, f_cp.0, f_pc.0, f_cc.0),
        combine(f_pp.1, f_cp.1, f_pc.1, f_cc.1),
    ))
}
