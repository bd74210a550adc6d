//! Floating-point quaternion algebra.
//!
//! `q = w + x·i + y·j + z·k`, components stored and serialized in the order
//! `[w, x, y, z]`. Besides the Hamilton product this module provides the
//! slice decomposition `q = α + β·I` (`β ≥ 0`, `I² = −1`), the real 4×4
//! matrices of left/right multiplication and of conjugation `X ↦ q·X·q⁻¹`,
//! and the complex 2×2 model of right multiplication on `ℂ² ≅ ℍ`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use nalgebra::{Matrix2, Matrix4, RowVector2, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn to_vector(self) -> Vector4<f64> {
        Vector4::new(self.w, self.x, self.y, self.z)
    }

    #[inline]
    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a pure quaternion.
    #[inline]
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.conj() / n2)
    }

    pub fn is_real(self, tol: &Tolerance) -> bool {
        self.imag().norm() <= tol.bound(self.norm())
    }

    pub fn is_zero(self, tol: &Tolerance) -> bool {
        self.norm() <= tol.atol
    }

    /// Approximate equality under `tol`, measured in the quaternion norm.
    pub fn approx_eq(self, other: Self, tol: &Tolerance) -> bool {
        (self - other).norm() <= tol.bound(self.norm().max(other.norm()))
    }

    /// Integer power by repeated Hamilton product; `q⁰ = 1`.
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self };
        let mut acc = Self::ONE;
        for _ in 0..n.unsigned_abs() {
            acc *= base;
        }
        Ok(acc)
    }

    /// Power with a non-negative exponent (never fails).
    pub fn powu(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        for _ in 0..n {
            acc *= self;
        }
        acc
    }

    /// Slice decomposition `q = α + β·I` with `β ≥ 0`.
    ///
    /// Real quaternions get `is_real = true` and the conventional unit `i`.
    pub fn split(self) -> SliceDecomposition {
        let im = self.imag();
        let beta = im.norm();
        if beta == 0.0 {
            SliceDecomposition {
                alpha: self.w,
                beta: 0.0,
                unit: Self::I,
                is_real: true,
            }
        } else {
            SliceDecomposition {
                alpha: self.w,
                beta,
                unit: im / beta,
                is_real: false,
            }
        }
    }

    /// Whether `self` lies in the slice `L_unit = ℝ ⊕ ℝ·unit`.
    pub fn in_slice(self, unit: Self, tol: f64) -> Result<bool> {
        let u = check_imaginary_unit(unit, tol)?;
        let im = self.imag();
        let along = dot(im, u);
        let dist = (im - u * along).norm();
        Ok(dist < tol)
    }

    /// Matrix of `X ↦ self·X` acting on `[w, x, y, z]` column vectors.
    pub fn left_matrix(self) -> Matrix4<f64> {
        Matrix4::from_columns(&BASIS.map(|e| (self * e).to_vector()))
    }

    /// Matrix of `X ↦ X·self`.
    pub fn right_matrix(self) -> Matrix4<f64> {
        Matrix4::from_columns(&BASIS.map(|e| (e * self).to_vector()))
    }

    /// Matrix of the conjugation `X ↦ self·X·self⁻¹`.
    pub fn rotation_matrix(self) -> Result<Matrix4<f64>> {
        Ok(self.left_matrix() * self.inverse()?.right_matrix())
    }

    /// Matrix of `X ↦ q1·X·q2⁻¹`.
    pub fn two_sided_matrix(q1: Self, q2: Self) -> Result<Matrix4<f64>> {
        Ok(q1.left_matrix() * q2.inverse()?.right_matrix())
    }

    /// Writes `self = z + w·j` with `z, w ∈ ℂ = L_i`.
    pub fn complexify(self) -> RowVector2<Complex64> {
        RowVector2::new(Complex64::new(self.w, self.x), Complex64::new(self.y, self.z))
    }

    pub fn from_complex_pair(z: Complex64, w: Complex64) -> Self {
        Self::new(z.re, z.im, w.re, w.im)
    }

    /// Complex matrix `A` with `complexify(q·a) = complexify(q)·A`, where
    /// `a = α + β·j` and `A = ((α, β), (−β̄, ᾱ))`.
    pub fn right_mult_complex_matrix(self) -> Matrix2<Complex64> {
        let c = self.complexify();
        let (alpha, beta) = (c[0], c[1]);
        Matrix2::new(alpha, beta, -beta.conj(), alpha.conj())
    }
}

const BASIS: [Quaternion; 4] = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];

/// Euclidean inner product on `ℝ⁴`.
#[inline]
pub fn dot(a: Quaternion, b: Quaternion) -> f64 {
    a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z
}

/// Validates `unit² = −1` within `tol`, returning its normalized imaginary part.
pub fn check_imaginary_unit(unit: Quaternion, tol: f64) -> Result<Quaternion> {
    if (unit * unit + Quaternion::ONE).norm() > tol {
        return Err(Error::NotImaginaryUnit(unit.to_string()));
    }
    let im = unit.imag();
    Ok(im / im.norm())
}

/// `q = alpha + beta·unit`, `beta ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceDecomposition {
    pub alpha: f64,
    pub beta: f64,
    pub unit: Quaternion,
    pub is_real: bool,
}

impl SliceDecomposition {
    pub fn reconstruct(&self) -> Quaternion {
        Quaternion::real(self.alpha) + self.unit * self.beta
    }

    /// The complex number `alpha + i·beta` representing the point in `ℂ`.
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        let (a1, b1, c1, d1) = (self.w, self.x, self.y, self.z);
        let (a2, b2, c2, d2) = (r.w, r.x, r.y, r.z);
        Self::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, r: Self) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}
