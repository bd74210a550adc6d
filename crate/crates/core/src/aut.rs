//! Automorphisms of Hopf surfaces: the commutation equation `Φ∘f = f∘Φ` as a
//! real linear system on series coefficients, its numerical nullity, the
//! explicit automorphism families, and the fixed-point utilities used to
//! count them.

use nalgebra::{DMatrix, Matrix4, Vector4};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{pair_dist, Hopf, HopfCase, HopfParams};
use crate::quat::{dot, Quaternion};
use crate::sampling;
use crate::series::{compose_eval, OrderedSeries, SeriesMap};
use crate::tol::Tolerance;

/// Flat real coordinates of a series map with zero constant term.
///
/// Columns run over component (first, second) × monomial `(h,k)` with
/// `1 ≤ h+k ≤ N` × the four real coordinates of the coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientLayout {
    degree: u32,
    monomials: Vec<(u32, u32)>,
}

impl CoefficientLayout {
    pub fn new(degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let monomials = (1..=degree)
            .flat_map(|t| (0..=t).rev().map(move |h| (h, t - h)))
            .collect();
        Ok(Self { degree, monomials })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[(u32, u32)] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        8 * self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Column of coordinate `coord` of the `(h,k)` coefficient of `component`.
    pub fn index(&self, component: usize, h: u32, k: u32, coord: usize) -> Option<usize> {
        if component > 1 || coord > 3 {
            return None;
        }
        let m = self.monomials.iter().position(|&hk| hk == (h, k))?;
        Some((component * self.monomials.len() + m) * 4 + coord)
    }

    /// `(component, monomial, coordinate)` of a column.
    fn decode(&self, col: usize) -> (usize, usize, usize) {
        let n = self.monomials.len();
        (col / (4 * n), (col / 4) % n, col % 4)
    }

    pub fn to_series(&self, v: &[f64]) -> Result<SeriesMap> {
        if v.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector has length {}, layout needs {}",
                v.len(),
                self.len()
            )));
        }
        let n = self.monomials.len();
        let mut parts = [OrderedSeries::zero(self.degree), OrderedSeries::zero(self.degree)];
        for (comp, part) in parts.iter_mut().enumerate() {
            for (m, &(h, k)) in self.monomials.iter().enumerate() {
                let o = (comp * n + m) * 4;
                part.set(h, k, Quaternion::new(v[o], v[o + 1], v[o + 2], v[o + 3]))?;
            }
        }
        let [first, second] = parts;
        SeriesMap::new(first, second)
    }

    pub fn from_series(&self, map: &SeriesMap) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.len()];
        for (comp, part) in [&map.first, &map.second].into_iter().enumerate() {
            for t in part.terms() {
                if t.h + t.k == 0 {
                    return Err(Error::ConstraintViolation("constant term must vanish".into()));
                }
                let o = self.index(comp, t.h, t.k, 0).ok_or(Error::DegreeExceeded {
                    h: t.h,
                    k: t.k,
                    degree: self.degree,
                })?;
                v[o..o + 4].copy_from_slice(&t.coeff.to_array());
            }
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutMethod {
    Direct,
    Linearized,
}

impl AutMethod {
    /// Direct for `p = 1`, linearized otherwise.
    pub fn auto(params: &HopfParams) -> Self {
        if params.p == 1 {
            AutMethod::Direct
        } else {
            AutMethod::Linearized
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            AutMethod::Direct => "direct",
            AutMethod::Linearized => "linearized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AutConfig {
    /// Truncation degree; `max(2, p) + 1` when unset.
    pub degree: Option<u32>,
    /// Sample points; four times the coefficient count when unset.
    pub samples: Option<usize>,
    pub seed: u64,
    /// Relative singular-value cutoff.
    pub sv_tol: f64,
    pub tol: Tolerance,
}

impl Default for AutConfig {
    fn default() -> Self {
        Self {
            degree: None,
            samples: None,
            seed: 42,
            sv_tol: 1e-8,
            tol: Tolerance::default(),
        }
    }
}

impl AutConfig {
    pub fn degree_for(&self, params: &HopfParams) -> u32 {
        self.degree.unwrap_or(params.p.max(2) + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutReport {
    pub params: HopfParams,
    pub case: String,
    pub method: AutMethod,
    pub degree: u32,
    pub samples: usize,
    pub seed: u64,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub nullity: usize,
    pub expected: Vec<usize>,
    pub pass: bool,
    /// Smallest kept over largest discarded singular value.
    pub sv_gap: Option<f64>,
}

/// `Df(z,w)[(v₁,v₂)] = (v₁·α + Σ_{i+j=p−1} w^i·v₂·w^j·λ, v₂·β)`.
pub fn df_apply(
    params: &HopfParams,
    _z: Quaternion,
    w: Quaternion,
    v1: Quaternion,
    v2: Quaternion,
) -> (Quaternion, Quaternion) {
    let p = params.p as usize;
    let mut wp = vec![Quaternion::ONE; p.max(1)];
    for i in 1..p {
        wp[i] = wp[i - 1] * w;
    }
    let mut s = Quaternion::ZERO;
    for i in 0..p {
        s += wp[i] * v2 * wp[p - 1 - i];
    }
    (v1 * params.alpha + s * params.lambda, v2 * params.beta)
}

pub fn direct_system_nullity(params: &HopfParams, cfg: &AutConfig) -> Result<AutReport> {
    system_nullity(params, AutMethod::Direct, cfg)
}

pub fn linearized_system_nullity(params: &HopfParams, cfg: &AutConfig) -> Result<AutReport> {
    system_nullity(params, AutMethod::Linearized, cfg)
}

/// Assembles and decomposes the commutation system with the given method.
pub fn system_nullity(params: &HopfParams, method: AutMethod, cfg: &AutConfig) -> Result<AutReport> {
    let hopf = Hopf::with_tolerance(*params, cfg.tol)?;
    if method == AutMethod::Direct && params.p != 1 {
        return Err(Error::NonlinearSystem(params.p));
    }
    let degree = cfg.degree_for(params);
    if degree < params.p {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} is below p = {}",
            params.p
        )));
    }
    let layout = CoefficientLayout::new(degree)?;
    let cols = layout.len();
    let samples = cfg.samples.unwrap_or(4 * cols);
    if 8 * samples < 2 * cols {
        return Err(Error::Underdetermined { rows: 8 * samples, cols });
    }
    let mut rng = sampling::rng(cfg.seed);
    let points: Vec<_> = (0..samples)
        .map(|_| sampling::point_in_shells(&mut rng, 0.5, 1.5))
        .collect();
    let mut a = assemble(&hopf, &layout, &points, method);
    normalize_rows(&mut a);
    let mut sv: Vec<f64> = a.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    let cutoff = cfg.sv_tol * sv.first().copied().unwrap_or(0.0);
    let nullity = sv.iter().filter(|&&s| s < cutoff).count();
    let kept = cols - nullity;
    let sv_gap = (nullity > 0 && kept > 0).then(|| sv[kept - 1] / sv[kept].max(f64::MIN_POSITIVE));
    let expected = expected_dimension(params, &cfg.tol)?;
    Ok(AutReport {
        params: *params,
        case: hopf.case().label().to_owned(),
        method,
        degree,
        samples,
        seed: cfg.seed,
        pass: expected.contains(&nullity),
        singular_values: sv,
        nullity,
        expected,
        sv_gap,
    })
}

/// Reports at degrees `N` and `N + 1` for each seed.
pub fn nullity_sweep(
    params: &HopfParams,
    method: AutMethod,
    cfg: &AutConfig,
    seeds: &[u64],
) -> Result<Vec<AutReport>> {
    let n = cfg.degree_for(params);
    let runs: Vec<AutConfig> = [n, n + 1]
        .iter()
        .flat_map(|&d| {
            seeds.iter().map(move |&seed| AutConfig {
                degree: Some(d),
                seed,
                samples: None,
                ..*cfg
            })
        })
        .collect();
    runs.par_iter().map(|c| system_nullity(params, method, c)).collect()
}

/// Rows `8·s .. 8·s+8` hold the residual of basis column `c` at point `s`.
fn assemble(
    hopf: &Hopf,
    layout: &CoefficientLayout,
    points: &[(Quaternion, Quaternion)],
    method: AutMethod,
) -> DMatrix<f64> {
    let cols = layout.len();
    let mono = layout.monomials();
    let blocks: Vec<Vec<[f64; 8]>> = points
        .par_iter()
        .map(|&(z, w)| {
            let (fz, fw) = hopf.apply(z, w);
            let at = |z: Quaternion, w: Quaternion| -> Vec<Quaternion> {
                let d = layout.degree() as usize;
                let zp = crate::series::powers(z, d as u32);
                let wp = crate::series::powers(w, d as u32);
                mono.iter().map(|&(h, k)| zp[h as usize] * wp[k as usize]).collect()
            };
            let (mx, mf) = (at(z, w), at(fz, fw));
            (0..cols)
                .map(|c| {
                    let (comp, m, coord) = layout.decode(c);
                    let mut u = [0.0; 4];
                    u[coord] = 1.0;
                    let u = Quaternion::from(u);
                    let (vx, vf) = (mx[m] * u, mf[m] * u);
                    let (phi_x, phi_f) = if comp == 0 {
                        ((vx, Quaternion::ZERO), (vf, Quaternion::ZERO))
                    } else {
                        ((Quaternion::ZERO, vx), (Quaternion::ZERO, vf))
                    };
                    let rhs = match method {
                        AutMethod::Direct => hopf.apply(phi_x.0, phi_x.1),
                        AutMethod::Linearized => df_apply(hopf.params(), z, w, phi_x.0, phi_x.1),
                    };
                    let (r1, r2) = (phi_f.0 - rhs.0, phi_f.1 - rhs.1);
                    let (a, b) = (r1.to_array(), r2.to_array());
                    [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
                })
                .collect()
        })
        .collect();
    let mut a = DMatrix::zeros(8 * points.len(), cols);
    for (s, block) in blocks.iter().enumerate() {
        for (c, vals) in block.iter().enumerate() {
            for (r, &v) in vals.iter().enumerate() {
                a[(8 * s + r, c)] = v;
            }
        }
    }
    a
}

fn normalize_rows(a: &mut DMatrix<f64>) {
    for mut row in a.row_iter_mut() {
        let n = row.norm();
        if n > 0.0 {
            row /= n;
        }
    }
}

/// Dimension predicted for `params` by the case analysis.
pub fn expected_dimension(params: &HopfParams, tol: &Tolerance) -> Result<Vec<usize>> {
    let HopfParams { alpha, beta, lambda, .. } = *params;
    let real = |q: Quaternion| q.is_real(tol);
    let dims = match params.classify(tol) {
        HopfCase::Invalid(reason) => return Err(Error::InvalidParams(reason)),
        HopfCase::A1 => vec![if real(alpha) { 16 } else { 8 }],
        HopfCase::A21 => vec![4 + 2 * (real(alpha) as usize + real(beta) as usize)],
        HopfCase::A22 => match (real(alpha), real(beta)) {
            (false, false) if alpha.approx_eq(beta.conj(), tol) => vec![8],
            (false, false) => vec![4],
            (true, true) => vec![8],
            _ => vec![6, 8],
        },
        HopfCase::A3 if real(alpha) => vec![8],
        HopfCase::A3 => {
            let unit = alpha.split().unit;
            let par = Quaternion::real(lambda.re()) + unit * dot(lambda, unit);
            let perp = lambda - par;
            match (par.is_zero(tol), perp.is_zero(tol)) {
                (_, true) => vec![4],
                (true, false) => vec![8],
                (false, false) => vec![4, 8],
            }
        }
        HopfCase::B => vec![5],
    };
    Ok(dims)
}

/// Free parameters of an explicit automorphism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FreeParams {
    /// `(z·a₁₀ + w·a₀₁, z·b₁₀ + w·b₀₁)`, for the `p = 1` cases.
    Linear {
        a10: Quaternion,
        a01: Quaternion,
        b10: Quaternion,
        b01: Quaternion,
    },
    /// `(z·b₀₁^p + w^p·a₀ₚ, w·b₀₁)` with real `b₀₁`.
    CaseB { b01: f64, a0p: Quaternion },
}

/// Residuals of the degree-one commutation equations
/// `α·a₁₀ = a₁₀·α + b₁₀·λ`, `λ·a₁₀ + β·a₀₁ = a₀₁·α + b₀₁·λ`,
/// `α·b₁₀ = b₁₀·β`, `λ·b₁₀ + β·b₀₁ = b₀₁·β` (valid for `p = 1`).
pub fn linear_commutation_residuals(params: &HopfParams, c: [Quaternion; 4]) -> [Quaternion; 4] {
    let HopfParams { alpha, beta, lambda, .. } = *params;
    let [a10, a01, b10, b01] = c;
    [
        alpha * a10 - a10 * alpha - b10 * lambda,
        lambda * a10 + beta * a01 - a01 * alpha - b01 * lambda,
        alpha * b10 - b10 * beta,
        lambda * b10 + beta * b01 - b01 * beta,
    ]
}

/// Basis of the real solution space of the degree-one commutation equations.
pub fn linear_commutant_basis(params: &HopfParams) -> Result<Vec<[Quaternion; 4]>> {
    if params.p != 1 {
        return Err(Error::NonlinearSystem(params.p));
    }
    let mut a = DMatrix::zeros(16, 16);
    for c in 0..16 {
        let mut unknowns = [Quaternion::ZERO; 4];
        let mut u = [0.0; 4];
        u[c % 4] = 1.0;
        unknowns[c / 4] = Quaternion::from(u);
        let res = linear_commutation_residuals(params, unknowns);
        for (e, q) in res.iter().enumerate() {
            for (k, v) in q.to_array().into_iter().enumerate() {
                a[(4 * e + k, c)] = v;
            }
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.max();
    Ok((0..16)
        .filter(|&i| svd.singular_values[i] <= 1e-10 * smax.max(1.0))
        .map(|i| {
            let r = v_t.row(i);
            std::array::from_fn(|q| Quaternion::new(r[4 * q], r[4 * q + 1], r[4 * q + 2], r[4 * q + 3]))
        })
        .collect())
}

/// Random element of the degree-one commutant, coefficients uniform in `[-1, 1]`.
pub fn random_linear_commutant<R: Rng + ?Sized>(params: &HopfParams, rng: &mut R) -> Result<FreeParams> {
    let basis = linear_commutant_basis(params)?;
    let mut c = [Quaternion::ZERO; 4];
    for b in &basis {
        let t: f64 = rng.random_range(-1.0..=1.0);
        for (ci, bi) in c.iter_mut().zip(b) {
            *ci += *bi * t;
        }
    }
    let [a10, a01, b10, b01] = c;
    Ok(FreeParams::Linear { a10, a01, b10, b01 })
}

/// The automorphism with the given free parameters, after checking the
/// case's constraints and invertibility.
pub fn make_automorphism(params: &HopfParams, free: &FreeParams, tol: &Tolerance) -> Result<SeriesMap> {
    let hopf = Hopf::with_tolerance(*params, *tol)?;
    match (hopf.case(), *free) {
        (&HopfCase::B, FreeParams::CaseB { b01, a0p }) => {
            if b01 == 0.0 || !b01.is_finite() {
                return Err(Error::NotInvertible);
            }
            let p = params.p;
            let first = OrderedSeries::from_terms(p, [((1, 0), Quaternion::real(b01.powi(p as i32))), ((0, p), a0p)])?;
            let second = OrderedSeries::from_terms(p, [((0, 1), Quaternion::real(b01))])?;
            SeriesMap::new(first, second)
        }
        (&HopfCase::B, FreeParams::Linear { .. }) => Err(Error::InvalidArgument(
            "case B automorphisms take the case_b family".into(),
        )),
        (_, FreeParams::CaseB { .. }) => Err(Error::InvalidArgument(
            "the case_b family only applies to case B".into(),
        )),
        (_, FreeParams::Linear { a10, a01, b10, b01 }) => {
            let c = [a10, a01, b10, b01];
            let scale = c.iter().map(|q| q.norm()).fold(0.0, f64::max)
                * [params.alpha, params.beta, params.lambda]
                    .iter()
                    .map(|q| q.norm())
                    .fold(0.0, f64::max);
            for (e, r) in linear_commutation_residuals(params, c).iter().enumerate() {
                if r.norm() > tol.bound(scale) {
                    return Err(Error::ConstraintViolation(format!(
                        "commutation equation {} fails by {:.3e}",
                        e + 1,
                        r.norm()
                    )));
                }
            }
            if !is_invertible_linear(a10, a01, b10, b01, tol) {
                return Err(Error::NotInvertible);
            }
            let first = OrderedSeries::from_terms(1, [((1, 0), a10), ((0, 1), a01)])?;
            let second = OrderedSeries::from_terms(1, [((1, 0), b10), ((0, 1), b01)])?;
            SeriesMap::new(first, second)
        }
    }
}

/// `max ‖Φ(f(x)) − f(Φ(x))‖` over `samples` points with `0.5 ≤ |z|,|w| ≤ 1.5`.
pub fn commutator_residual(params: &HopfParams, phi: &SeriesMap, samples: usize, seed: u64) -> Result<f64> {
    let hopf = Hopf::new(*params)?;
    let g = hopf.generator();
    let mut rng = sampling::rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (z, w) = sampling::point_in_shells(&mut rng, 0.5, 1.5);
        worst = worst.max(pair_dist(compose_eval(phi, &g, z, w), compose_eval(&g, phi, z, w)));
    }
    Ok(worst)
}

/// Invertibility of `(z·a₁₀ + w·a₀₁, z·b₁₀ + w·b₀₁)`:
/// `b₀₁·(a₁₀ − b₁₀·b₀₁⁻¹·a₀₁) ≠ 0` or `a₀₁·(b₁₀ − a₁₀·a₀₁⁻¹·b₀₁) ≠ 0`,
/// a branch being skipped when its pivot vanishes.
pub fn is_invertible_linear(
    a10: Quaternion,
    a01: Quaternion,
    b10: Quaternion,
    b01: Quaternion,
    tol: &Tolerance,
) -> bool {
    let scale = [a10, a01, b10, b01].iter().map(|q| q.norm()).fold(0.0, f64::max);
    let nonzero = |q: Quaternion| q.norm() > tol.bound(scale * scale);
    let branch = |pivot: Quaternion, x: Quaternion, y: Quaternion, other: Quaternion| match pivot.inverse() {
        Ok(inv) if !pivot.is_zero(tol) => nonzero(pivot * (x - y * inv * other)),
        _ => false,
    };
    branch(b01, a10, b10, a01) || branch(a01, b10, a10, b01)
}

/// Fixed set of an affine map of `ℍ ≅ ℝ⁴`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedSet {
    Empty,
    UniquePoint { point: Quaternion },
    AffinePlane { point: Quaternion, basis: [Quaternion; 2] },
    All,
}

impl FixedSet {
    /// Dimension of the fixed set; `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            FixedSet::Empty => None,
            FixedSet::UniquePoint { .. } => Some(0),
            FixedSet::AffinePlane { .. } => Some(2),
            FixedSet::All => Some(4),
        }
    }
}

/// Fixed set of `X ↦ q·X·q⁻¹ + c`.
pub fn rotation_translation_fixed_set(q: Quaternion, c: Quaternion) -> Result<FixedSet> {
    classify_affine(&q.rotation_matrix()?, c)
}

/// Fixed set of `X ↦ q₁·X·q₂⁻¹ + c`.
pub fn two_sided_fixed_set(q1: Quaternion, q2: Quaternion, c: Quaternion) -> Result<FixedSet> {
    classify_affine(&Quaternion::two_sided_matrix(q1, q2)?, c)
}

/// Rank of `Id − M` for `M: X ↦ q₁·X·q₂⁻¹`.
pub fn two_sided_fixed_rank(q1: Quaternion, q2: Quaternion) -> Result<usize> {
    let a = Matrix4::identity() - Quaternion::two_sided_matrix(q1, q2)?;
    let sv = a.singular_values();
    Ok(sv.iter().filter(|&&s| s > 1e-9 * sv.max().max(1.0)).count())
}

fn classify_affine(m: &Matrix4<f64>, c: Quaternion) -> Result<FixedSet> {
    let a = Matrix4::identity() - m;
    let svd = a.svd(true, true);
    let (u, v_t) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let sv = svd.singular_values;
    let thresh = 1e-9 * sv.max().max(1.0);
    let b = c.to_vector();
    let mut x = Vector4::zeros();
    let mut null = Vec::new();
    for i in 0..4 {
        if sv[i] > thresh {
            x += v_t.row(i).transpose() * (u.column(i).dot(&b) / sv[i]);
        } else {
            null.push(Quaternion::from_vector(&v_t.row(i).transpose()));
        }
    }
    if (a * x - b).norm() > 1e-10 * (1.0 + b.norm()) {
        return Ok(FixedSet::Empty);
    }
    let point = Quaternion::from_vector(&x);
    match null.len() {
        0 => Ok(FixedSet::UniquePoint { point }),
        2 => Ok(FixedSet::AffinePlane { point, basis: [null[0], null[1]] }),
        4 => Ok(FixedSet::All),
        d => Err(Error::UnexpectedFixedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn r(x: f64) -> Quaternion {
        Quaternion::real(x)
    }

    #[test]
    fn layout_round_trip() {
        let l = CoefficientLayout::new(3).unwrap();
        assert_eq!(l.len(), 8 * 9);
        let v: Vec<f64> = (0..l.len()).map(|i| i as f64 * 0.25 - 3.0).collect();
        let m = l.to_series(&v).unwrap();
        assert_eq!(l.from_series(&m).unwrap(), v);
        let c = l.index(1, 0, 2, 3).unwrap();
        assert_eq!(m.second.coeff(0, 2).to_array()[3], v[c]);
    }

    #[test]
    fn df_examples() {
        let p1 = HopfParams::new(1, r(0.5), r(0.5), J);
        assert_eq!(df_apply(&p1, I, K, r(1.0), Quaternion::ZERO), (r(0.5), Quaternion::ZERO));
        let p2 = HopfParams::new(2, r(0.25), r(0.5), J);
        let v2 = Quaternion::new(0.1, 0.2, -0.3, 0.4);
        let (a, _) = df_apply(&p2, I, r(3.0), Quaternion::ZERO, v2);
        assert!((a - r(2.0 * 3.0) * v2 * J).norm() < 1e-14);
    }

    #[test]
    fn df_matches_finite_difference() {
        let params = HopfParams::new(3, r(0.125), r(0.5), I + K);
        let h = Hopf::new(params).unwrap();
        let mut rng = sampling::rng(5);
        for _ in 0..20 {
            let (z, w) = sampling::point_in_shells(&mut rng, 0.5, 1.5);
            let (v1, v2) = sampling::point_in_shells(&mut rng, 0.5, 1.5);
            let err = |eps: f64| {
                let (a, b) = h.apply(z + v1 * eps, w + v2 * eps);
                let (a0, b0) = h.apply(z, w);
                let (d1, d2) = df_apply(&params, z, w, v1, v2);
                pair_dist((a - a0, b - b0), (d1 * eps, d2 * eps))
            };
            let (e1, e2) = (err(1e-3), err(1e-4));
            assert!(e2 < 1e-6);
            assert!(e1 / e2 > 50.0);
        }
    }

    #[test]
    fn direct_nullities() {
        let cfg = AutConfig::default();
        for (a, b, dim) in [(r(0.5), r(0.5), 16), (I * 0.5, I * 0.5, 8), (I * 0.25, J * 0.5, 4)] {
            let rep = direct_system_nullity(&HopfParams::diagonal(a, b), &cfg).unwrap();
            assert_eq!(rep.nullity, dim, "{a} {b}");
            assert!(rep.pass);
            assert!(rep.sv_gap.unwrap() > 1e6);
        }
    }

    #[test]
    fn direct_and_linearized_agree_for_linear_generators() {
        let cfg = AutConfig::default();
        for params in [
            HopfParams::diagonal(I * 0.5, -I * 0.5),
            HopfParams::new(1, I * 0.5, I * 0.5, r(1.0)),
            HopfParams::new(1, r(0.5), r(0.5), J),
        ] {
            let d = direct_system_nullity(&params, &cfg).unwrap();
            let l = linearized_system_nullity(&params, &cfg).unwrap();
            assert_eq!(d.nullity, l.nullity);
        }
    }

    #[test]
    fn misuse_errors() {
        let b = HopfParams::new(2, r(0.25), r(0.5), J);
        assert!(matches!(
            direct_system_nullity(&b, &AutConfig::default()),
            Err(Error::NonlinearSystem(2))
        ));
        let cfg = AutConfig { samples: Some(2), ..Default::default() };
        assert!(matches!(
            linearized_system_nullity(&b, &cfg),
            Err(Error::Underdetermined { .. })
        ));
        let cfg = AutConfig { degree: Some(1), ..Default::default() };
        assert!(linearized_system_nullity(&b, &cfg).is_err());
    }

    #[test]
    fn expected_dimensions() {
        let tol = Tolerance::default();
        let e = |p: HopfParams| expected_dimension(&p, &tol).unwrap();
        assert_eq!(e(HopfParams::diagonal(r(0.5), r(0.5))), vec![16]);
        assert_eq!(e(HopfParams::diagonal(I * 0.5, -I * 0.5)), vec![8]);
        assert_eq!(e(HopfParams::diagonal(I * 0.5, J * 0.5)), vec![4]);
        assert_eq!(e(HopfParams::diagonal(r(0.5), J * 0.5)), vec![6, 8]);
        assert_eq!(e(HopfParams::diagonal(r(0.25), J * 0.5)), vec![6]);
        assert_eq!(e(HopfParams::new(1, I * 0.5, I * 0.5, r(1.0) + J)), vec![4, 8]);
        assert_eq!(e(HopfParams::new(3, r(0.125), r(0.5), I + K)), vec![5]);
        assert!(expected_dimension(&HopfParams::diagonal(r(0.5), r(0.25)), &tol).is_err());
    }

    #[test]
    fn case_b_family() {
        let params = HopfParams::new(2, r(0.25), r(0.5), J);
        let tol = Tolerance::default();
        let phi = make_automorphism(&params, &FreeParams::CaseB { b01: 2.0, a0p: K }, &tol).unwrap();
        assert_eq!(phi.first.coeff(1, 0), r(4.0));
        assert_eq!(phi.first.coeff(0, 2), K);
        assert_eq!(phi.second.coeff(0, 1), r(2.0));
        assert!(commutator_residual(&params, &phi, 50, 1).unwrap() < 1e-10);
        assert!(matches!(
            make_automorphism(&params, &FreeParams::CaseB { b01: 0.0, a0p: K }, &tol),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn linear_families() {
        let tol = Tolerance::default();
        let id = FreeParams::Linear { a10: r(1.0), a01: Quaternion::ZERO, b10: Quaternion::ZERO, b01: r(1.0) };
        let params = HopfParams::diagonal(I * 0.5, I * 0.5);
        assert_eq!(make_automorphism(&params, &id, &tol).unwrap(), SeriesMap::identity(1));
        // off-slice coefficient violates the commutation equations
        let bad = FreeParams::Linear { a10: J, a01: Quaternion::ZERO, b10: Quaternion::ZERO, b01: r(1.0) };
        assert!(matches!(make_automorphism(&params, &bad, &tol), Err(Error::ConstraintViolation(_))));

        let a22 = HopfParams::diagonal(I * 0.5, -I * 0.5);
        let res = linear_commutation_residuals(&a22, [Quaternion::ZERO, J, Quaternion::ZERO, Quaternion::ZERO]);
        assert!(res.iter().all(|q| q.norm() == 0.0));
        let f = FreeParams::Linear { a10: r(1.0), a01: J, b10: Quaternion::ZERO, b01: r(1.0) };
        let phi = make_automorphism(&a22, &f, &tol).unwrap();
        assert!(commutator_residual(&a22, &phi, 50, 2).unwrap() < 1e-12);

        let mut rng = sampling::rng(9);
        for params in [
            HopfParams::diagonal(r(0.5), r(0.5)),
            HopfParams::diagonal(I * 0.25, J * 0.5),
            HopfParams::new(1, I * 0.5, I * 0.5, J),
            HopfParams::new(1, r(0.5), r(0.5), J),
        ] {
            let free = random_linear_commutant(&params, &mut rng).unwrap();
            let phi = make_automorphism(&params, &free, &tol).unwrap();
            assert!(commutator_residual(&params, &phi, 50, 3).unwrap() < 1e-10);
        }
    }

    #[test]
    fn commutant_dimension_degree_one() {
        assert_eq!(linear_commutant_basis(&HopfParams::diagonal(r(0.5), r(0.5))).unwrap().len(), 16);
        assert_eq!(linear_commutant_basis(&HopfParams::new(1, I * 0.5, I * 0.5, r(1.0))).unwrap().len(), 4);
    }

    #[test]
    fn residual_of_identity_and_generator() {
        let params = HopfParams::new(2, r(0.25), r(0.5), J);
        let g = Hopf::new(params).unwrap().generator();
        assert_eq!(commutator_residual(&params, &SeriesMap::identity(2), 20, 1).unwrap(), 0.0);
        assert!(commutator_residual(&params, &g, 20, 1).unwrap() < 1e-15);
    }

    #[test]
    fn invertibility() {
        let tol = Tolerance::default();
        let z = Quaternion::ZERO;
        assert!(is_invertible_linear(r(1.0), z, z, r(1.0), &tol));
        assert!(!is_invertible_linear(r(1.0), r(1.0), r(1.0), r(1.0), &tol));
        assert!(is_invertible_linear(I, J, z, r(1.0), &tol));
        assert!(!is_invertible_linear(I, z, z, z, &tol));
        // one-slice form b₀₁·a₁₀ − b₁₀·a₀₁ ≠ 0
        let mut rng = sampling::rng(2);
        for _ in 0..50 {
            let c: [Quaternion; 4] = std::array::from_fn(|_| {
                let t: f64 = rng.random_range(-1.0..1.0);
                let s: f64 = rng.random_range(-1.0..1.0);
                r(t) + I * s
            });
            let slice = c[3] * c[0] - c[2] * c[1];
            assert_eq!(is_invertible_linear(c[0], c[1], c[2], c[3], &tol), slice.norm() > 1e-9);
        }
        assert!(!is_invertible_linear(r(1.0), r(2.0), I, I * 2.0, &tol));
    }

    #[test]
    fn fixed_sets() {
        assert_eq!(rotation_translation_fixed_set(r(0.7), Quaternion::ZERO).unwrap(), FixedSet::All);
        assert_eq!(rotation_translation_fixed_set(r(0.7), J).unwrap(), FixedSet::Empty);
        match rotation_translation_fixed_set(I, Quaternion::ZERO).unwrap() {
            FixedSet::AffinePlane { point, basis } => {
                assert!(point.norm() < 1e-12);
                for b in basis {
                    assert!(b.to_array()[2].abs() < 1e-12 && b.to_array()[3].abs() < 1e-12);
                }
            }
            other => panic!("{other:?}"),
        }
        match rotation_translation_fixed_set(I, J * 2.0).unwrap() {
            FixedSet::AffinePlane { point, basis } => {
                assert!((point - J).norm() < 1e-12);
                for b in basis {
                    let x = point + b * 0.3;
                    assert!((I * x * I.inverse().unwrap() + J * 2.0 - x).norm() < 1e-10);
                }
            }
            other => panic!("{other:?}"),
        }
        assert!(rotation_translation_fixed_set(Quaternion::ZERO, J).is_err());
        match two_sided_fixed_set(r(2.0), r(1.0), J).unwrap() {
            FixedSet::UniquePoint { point } => assert!((point * -1.0 - J).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_sided_fixed_rank_follows_real_parts() {
        // X ↦ β·X·α⁻¹ with |α| = |β| fixes a plane exactly when Re α = Re β
        assert_eq!(two_sided_fixed_rank(-I * 0.5, I * 0.5).unwrap(), 2);
        assert_eq!(two_sided_fixed_rank(J * 0.5, I * 0.5).unwrap(), 2);
        let a = Quaternion::new(0.3, 0.4, 0.0, 0.0);
        let b = Quaternion::new(-0.3, 0.0, 0.4, 0.0);
        assert_eq!(two_sided_fixed_rank(b, a).unwrap(), 4);
        let b = Quaternion::new(0.3, 0.0, 0.0, -0.4);
        assert_eq!(two_sided_fixed_rank(b, a).unwrap(), 2);
    }
}
