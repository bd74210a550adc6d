//! Truncated ordered power series in two quaternionic variables.
//!
//! A series is `Σ_{h+k≤N} z^h · w^k · a_{h,k}`: variables on the left,
//! coefficients on the right, products in exactly that order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// One monomial `z^h w^k · coeff`, also the JSON term form `{h, k, coeff}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub h: u32,
    pub k: u32,
    pub coeff: Quaternion,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrderedSeries {
    degree: u32,
    coeffs: BTreeMap<(u32, u32), Quaternion>,
}

impl OrderedSeries {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), Quaternion)>,
    {
        let mut s = Self::zero(degree);
        for ((h, k), c) in terms {
            s.add_to(h, k, c)?;
        }
        Ok(s)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, h: u32, k: u32) -> Quaternion {
        self.coeffs.get(&(h, k)).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Sets `a_{h,k}`; a zero coefficient removes the monomial.
    pub fn set(&mut self, h: u32, k: u32, c: Quaternion) -> Result<()> {
        if h + k > self.degree {
            return Err(Error::DegreeExceeded {
                h,
                k,
                degree: self.degree,
            });
        }
        if c == Quaternion::ZERO {
            self.coeffs.remove(&(h, k));
        } else {
            self.coeffs.insert((h, k), c);
        }
        Ok(())
    }

    pub fn add_to(&mut self, h: u32, k: u32, c: Quaternion) -> Result<()> {
        let cur = self.coeff(h, k);
        self.set(h, k, cur + c)
    }

    /// Nonzero monomials in `(h, k)` order.
    pub fn terms(&self) -> impl Iterator<Item = Term> + '_ {
        self.coeffs.iter().map(|(&(h, k), &coeff)| Term { h, k, coeff })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Copy with a (not smaller) degree bound.
    pub fn with_degree(&self, degree: u32) -> Result<Self> {
        Self::from_terms(degree, self.coeffs.iter().map(|(&hk, &c)| (hk, c)))
    }

    pub fn eval(&self, z: Quaternion, w: Quaternion) -> Quaternion {
        let (max_h, max_k) = self
            .coeffs
            .keys()
            .fold((0, 0), |(mh, mk), &(h, k)| (mh.max(h), mk.max(k)));
        let zp = powers(z, max_h);
        let wp = powers(w, max_k);
        self.coeffs
            .iter()
            .map(|(&(h, k), &a)| zp[h as usize] * wp[k as usize] * a)
            .sum()
    }

    /// Coefficientwise real-weighted sum; all inputs must share a degree bound.
    pub fn linear_combine(parts: &[(f64, &OrderedSeries)]) -> Result<OrderedSeries> {
        let Some(&(_, first)) = parts.first() else {
            return Err(Error::EmptyInput("linear combination"));
        };
        let degree = first.degree;
        let mut out = Self::zero(degree);
        for &(s, series) in parts {
            if series.degree != degree {
                return Err(Error::DegreeMismatch(degree, series.degree));
            }
            for t in series.terms() {
                out.add_to(t.h, t.k, t.coeff * s)?;
            }
        }
        Ok(out)
    }
}

/// `[1, q, q², …, q^n]`.
pub(crate) fn powers(q: Quaternion, n: u32) -> Vec<Quaternion> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Quaternion::ONE;
    out.push(acc);
    for _ in 0..n {
        acc *= q;
        out.push(acc);
    }
    out
}

/// A map `ℍ² → ℍ²` given by two ordered series with a shared degree bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesMapJson", into = "SeriesMapJson")]
pub struct SeriesMap {
    pub first: OrderedSeries,
    pub second: OrderedSeries,
}

impl SeriesMap {
    pub fn new(first: OrderedSeries, second: OrderedSeries) -> Result<Self> {
        if first.degree != second.degree {
            return Err(Error::DegreeMismatch(first.degree, second.degree));
        }
        Ok(Self { first, second })
    }

    /// `(z, w) ↦ (z, w)`.
    pub fn identity(degree: u32) -> Self {
        let degree = degree.max(1);
        let mut first = OrderedSeries::zero(degree);
        let mut second = OrderedSeries::zero(degree);
        first.set(1, 0, Quaternion::ONE).expect("degree ≥ 1");
        second.set(0, 1, Quaternion::ONE).expect("degree ≥ 1");
        Self { first, second }
    }

    pub fn degree(&self) -> u32 {
        self.first.degree
    }

    pub fn eval(&self, z: Quaternion, w: Quaternion) -> (Quaternion, Quaternion) {
        (self.first.eval(z, w), self.second.eval(z, w))
    }

    pub fn with_degree(&self, degree: u32) -> Result<Self> {
        Self::new(self.first.with_degree(degree)?, self.second.with_degree(degree)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `outer(inner(z, w))`, evaluated pointwise.
///
/// Composition of slice-regular maps is not slice-regular in general, so the
/// composite is never formed symbolically.
pub fn compose_eval(
    outer: &SeriesMap,
    inner: &SeriesMap,
    z: Quaternion,
    w: Quaternion,
) -> (Quaternion, Quaternion) {
    let (u, v) = inner.eval(z, w);
    outer.eval(u, v)
}

#[derive(Serialize, Deserialize)]
struct SeriesMapJson {
    degree: u32,
    first: Vec<Term>,
    second: Vec<Term>,
}

impl TryFrom<SeriesMapJson> for SeriesMap {
    type Error = Error;

    fn try_from(j: SeriesMapJson) -> Result<Self> {
        let build = |terms: Vec<Term>| {
            OrderedSeries::from_terms(j.degree, terms.into_iter().map(|t| ((t.h, t.k), t.coeff)))
        };
        SeriesMap::new(build(j.first)?, build(j.second)?)
    }
}

impl From<SeriesMap> for SeriesMapJson {
    fn from(m: SeriesMap) -> Self {
        SeriesMapJson {
            degree: m.degree(),
            first: m.first.terms().collect(),
            second: m.second.terms().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    #[test]
    fn eval_examples() {
        let q = Quaternion::new(0.1, 0.2, -0.3, 0.4);
        let r = Quaternion::new(-1.0, 0.5, 0.0, 2.0);
        let s = OrderedSeries::from_terms(2, [((1, 0), Quaternion::ONE)]).unwrap();
        assert_eq!(s.eval(q, r), q);

        // i·k·j = i·(k·j) = i·(−i) = 1
        let s = OrderedSeries::from_terms(2, [((1, 1), J)]).unwrap();
        assert_eq!(s.eval(I, K), Quaternion::ONE);

        // (1+i)²·λ = 2i·λ
        let lambda = Quaternion::new(0.5, -1.0, 2.0, 0.25);
        let s = OrderedSeries::from_terms(2, [((0, 2), lambda)]).unwrap();
        assert_eq!(s.eval(q, Quaternion::new(1.0, 1.0, 0.0, 0.0)), I * 2.0 * lambda);
    }

    #[test]
    fn ordered_convention_differs_from_other_orders() {
        let mut rng = sampling::rng(11);
        for _ in 0..20 {
            let z = sampling::quaternion_in_shell(&mut rng, 0.5, 1.5);
            let w = sampling::quaternion_in_shell(&mut rng, 0.5, 1.5);
            let c = sampling::quaternion_in_shell(&mut rng, 0.5, 1.5);
            let s = OrderedSeries::from_terms(2, [((1, 1), c)]).unwrap();
            let v = s.eval(z, w);
            assert!((v - z * w * c).norm() < 1e-14);
            assert!((v - z * c * w).norm() > 1e-6);
            assert!((v - c * z * w).norm() > 1e-6);
        }
    }

    #[test]
    fn linear_combinations() {
        let s = OrderedSeries::from_terms(3, [((1, 0), I), ((0, 2), J + K)]).unwrap();
        assert!(OrderedSeries::linear_combine(&[(1.0, &s), (-1.0, &s)]).unwrap().is_zero());

        let single = OrderedSeries::from_terms(3, [((1, 0), I)]).unwrap();
        let doubled = OrderedSeries::linear_combine(&[(2.0, &single)]).unwrap();
        assert_eq!(doubled, OrderedSeries::from_terms(3, [((1, 0), I * 2.0)]).unwrap());

        let t = OrderedSeries::from_terms(3, [((2, 1), K), ((0, 1), Quaternion::ONE)]).unwrap();
        let mid = OrderedSeries::linear_combine(&[(0.5, &s), (0.5, &t)]).unwrap();
        let (z, w) = (Quaternion::new(0.3, 0.1, -0.7, 0.2), Quaternion::new(-0.4, 0.9, 0.0, 0.5));
        let expect = (s.eval(z, w) + t.eval(z, w)) * 0.5;
        assert!((mid.eval(z, w) - expect).norm() < 1e-14);

        let other = OrderedSeries::zero(4);
        assert!(matches!(
            OrderedSeries::linear_combine(&[(1.0, &s), (1.0, &other)]),
            Err(Error::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn degree_bound_is_enforced() {
        let mut s = OrderedSeries::zero(2);
        assert!(matches!(s.set(2, 1, I), Err(Error::DegreeExceeded { h: 2, k: 1, degree: 2 })));
        s.set(1, 1, I).unwrap();
        s.set(0, 2, J).unwrap();
        assert_eq!(s.terms().count(), 2);
        assert!(SeriesMap::new(OrderedSeries::zero(2), OrderedSeries::zero(3)).is_err());
    }

    #[test]
    fn coefficient_perturbation_is_exact_shift() {
        let mut rng = sampling::rng(5);
        let z = sampling::quaternion_in_shell(&mut rng, 0.5, 1.5);
        let w = sampling::quaternion_in_shell(&mut rng, 0.5, 1.5);
        let delta = Quaternion::new(1e-3, -2e-3, 5e-4, 0.0);
        let base = OrderedSeries::from_terms(4, [((2, 1), I), ((1, 2), J)]).unwrap();
        let mut bumped = base.clone();
        bumped.add_to(2, 1, delta).unwrap();
        let diff = bumped.eval(z, w) - base.eval(z, w);
        assert!((diff - z * z * w * delta).norm() < 1e-12);
    }

    #[test]
    fn compose_with_identity() {
        let m = SeriesMap::new(
            OrderedSeries::from_terms(2, [((1, 0), I), ((0, 2), J)]).unwrap(),
            OrderedSeries::from_terms(2, [((1, 1), K)]).unwrap(),
        )
        .unwrap();
        let id = SeriesMap::identity(2);
        let (z, w) = (Quaternion::new(0.3, 0.1, -0.7, 0.2), Quaternion::new(-0.4, 0.9, 0.0, 0.5));
        assert_eq!(compose_eval(&id, &m, z, w), m.eval(z, w));
        assert_eq!(compose_eval(&m, &id, z, w), m.eval(z, w));
    }

    #[test]
    fn json_form() {
        let m = SeriesMap::new(
            OrderedSeries::from_terms(2, [((1, 0), Quaternion::real(0.5))]).unwrap(),
            OrderedSeries::from_terms(2, [((0, 1), J)]).unwrap(),
        )
        .unwrap();
        let s = m.to_json().unwrap();
        assert_eq!(
            s,
            r#"{"degree":2,"first":[{"h":1,"k":0,"coeff":[0.5,0.0,0.0,0.0]}],"second":[{"h":0,"k":1,"coeff":[0.0,0.0,1.0,0.0]}]}"#
        );
        assert_eq!(SeriesMap::from_json(&s).unwrap(), m);
        let bad = r#"{"degree":1,"first":[{"h":2,"k":0,"coeff":[1,0,0,0]}],"second":[]}"#;
        assert!(SeriesMap::from_json(bad).is_err());
    }
}
