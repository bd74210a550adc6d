//! Seeded random sampling of quaternions and points of `ℍ²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quat::Quaternion;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the cube `[-s, s]⁴`.
pub fn quaternion_in_cube<R: Rng + ?Sized>(rng: &mut R, s: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
    )
}

/// Uniformly random direction on `S³`.
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let q = quaternion_in_cube(rng, 1.0);
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q / n;
        }
    }
}

/// Random quaternion with norm uniform in `[rmin, rmax]`.
pub fn quaternion_in_shell<R: Rng + ?Sized>(rng: &mut R, rmin: f64, rmax: f64) -> Quaternion {
    unit_quaternion(rng) * rng.random_range(rmin..=rmax)
}

/// Uniformly random imaginary unit (element of `S²`).
pub fn imaginary_unit<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let v = Quaternion::new(
            0.0,
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Point `(z, w)` with both norms in `[rmin, rmax]`.
pub fn point_in_shells<R: Rng + ?Sized>(rng: &mut R, rmin: f64, rmax: f64) -> (Quaternion, Quaternion) {
    (quaternion_in_shell(rng, rmin, rmax), quaternion_in_shell(rng, rmin, rmax))
}
