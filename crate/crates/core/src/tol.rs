use serde::{Deserialize, Serialize};

/// Absolute-plus-relative comparison tolerance.
///
/// Two values `a`, `b` are close when `|a − b| ≤ atol + rtol · max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
        }
    }
}

impl Tolerance {
    pub const fn new(atol: f64, rtol: f64) -> Self {
        Self { atol, rtol }
    }

    /// Bound for a difference between quantities of size `scale`.
    #[inline]
    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    #[inline]
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.bound(a.abs().max(b.abs()))
    }

    #[inline]
    pub fn is_zero(&self, a: f64) -> bool {
        a.abs() <= self.atol
    }
}
