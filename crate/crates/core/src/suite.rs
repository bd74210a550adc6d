//! Verification grid: for each Hopf parameter set, classification,
//! fixed-point certificates, iterate consistency, and the automorphism
//! dimension against an expected value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::{nullity_sweep, AutConfig, AutMethod};
use crate::error::Result;
use crate::hopf::{pair_dist, pair_norm, Hopf, HopfParams};
use crate::quat::Quaternion;
use crate::sampling;

/// Required ratio between the smallest kept and largest discarded singular value.
pub const MIN_SV_GAP: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub name: String,
    pub params: HopfParams,
    pub expected: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<AutMethod>,
}

impl GridRow {
    pub fn new(name: &str, params: HopfParams, expected: usize) -> Self {
        Self {
            name: name.to_owned(),
            params,
            expected: vec![expected],
            method: None,
        }
    }
}

/// The dimension table of the automorphism theorem.
pub fn default_grid() -> Vec<GridRow> {
    let r = Quaternion::real;
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    let z = Quaternion::ZERO;
    vec![
        GridRow::new("A1 real", HopfParams::new(1, r(0.5), r(0.5), z), 16),
        GridRow::new("A1 non-real", HopfParams::new(1, i * 0.5, i * 0.5, z), 8),
        GridRow::new("A21 both non-real", HopfParams::new(1, i * 0.25, j * 0.5, z), 4),
        GridRow::new("A21 one real", HopfParams::new(1, r(0.25), j * 0.5, z), 6),
        GridRow::new("A21 both real", HopfParams::new(1, r(0.25), r(0.5), z), 8),
        GridRow::new("A22 conjugate", HopfParams::new(1, i * 0.5, -i * 0.5, z), 8),
        GridRow::new("A22 non-conjugate", HopfParams::new(1, i * 0.5, j * 0.5, z), 4),
        GridRow::new("A3 real alpha", HopfParams::new(1, r(0.5), r(0.5), j), 8),
        GridRow::new("A3 lambda in slice", HopfParams::new(1, i * 0.5, i * 0.5, r(1.0)), 4),
        GridRow::new("A3 lambda orthogonal", HopfParams::new(1, i * 0.5, i * 0.5, j), 8),
        GridRow::new("B p=2", HopfParams::new(2, r(0.25), r(0.5), j), 5),
        GridRow::new("B p=3", HopfParams::new(3, r(0.125), r(0.5), i + k), 5),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowResult {
    pub name: String,
    pub params: HopfParams,
    pub case: String,
    pub method: Option<AutMethod>,
    pub expected: Vec<usize>,
    /// Degrees `N, N` then `N+1, N+1`, one per seed.
    pub nullities: Vec<usize>,
    pub min_sv_gap: Option<f64>,
    pub certificates: bool,
    pub iterate_error: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seeds: Vec<u64>,
    pub rows: Vec<RowResult>,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
}

/// Largest relative gap between closed-form and pointwise iterates, `|k| ≤ k_max`.
pub fn iterate_discrepancy(hopf: &Hopf, k_max: i32, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = sampling::rng(seed);
    let pts: Vec<_> = (0..samples).map(|_| sampling::point_in_shells(&mut rng, 0.5, 1.5)).collect();
    let mut worst = 0.0f64;
    for k in -k_max..=k_max {
        let closed = hopf.iterate_closed(k)?;
        for &(z, w) in &pts {
            let a = closed.eval(z, w);
            let b = hopf.iterate_pointwise(k, z, w)?;
            worst = worst.max(pair_dist(a, b) / pair_norm(b.0, b.1));
        }
    }
    Ok(worst)
}

fn run_row(row: &GridRow, cfg: &AutConfig, seeds: &[u64]) -> RowResult {
    let mut out = RowResult {
        name: row.name.clone(),
        params: row.params,
        case: row.params.classify(&cfg.tol).label().to_owned(),
        method: None,
        expected: row.expected.clone(),
        nullities: Vec::new(),
        min_sv_gap: None,
        certificates: false,
        iterate_error: None,
        pass: false,
        error: None,
    };
    let res = (|| -> Result<bool> {
        let hopf = Hopf::with_tolerance(row.params, cfg.tol)?;
        let mut certs = true;
        for k in (1..=5).flat_map(|k| [k, -k]) {
            certs &= hopf.fixed_point_certificate(k, 100, cfg.seed)?.passed;
        }
        out.certificates = certs;
        let it = iterate_discrepancy(&hopf, 5, 20, cfg.seed)?;
        out.iterate_error = Some(it);
        let method = row.method.unwrap_or_else(|| AutMethod::auto(&row.params));
        out.method = Some(method);
        let reports = nullity_sweep(&row.params, method, cfg, seeds)?;
        out.nullities = reports.iter().map(|r| r.nullity).collect();
        out.min_sv_gap = reports
            .iter()
            .map(|r| r.sv_gap)
            .try_fold(f64::INFINITY, |m, g| g.map(|g| m.min(g)));
        let dims_ok = out.nullities.iter().all(|n| row.expected.contains(n))
            && out.nullities.windows(2).all(|w| w[0] == w[1]);
        let gap_ok = out.min_sv_gap.is_some_and(|g| g >= MIN_SV_GAP);
        Ok(certs && it < 1e-10 && dims_ok && gap_ok)
    })();
    match res {
        Ok(p) => out.pass = p,
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

pub fn run_suite(grid: &[GridRow], cfg: &AutConfig, seeds: &[u64]) -> SuiteReport {
    let rows: Vec<RowResult> = grid.par_iter().map(|row| run_row(row, cfg, seeds)).collect();
    let passed = rows.iter().filter(|r| r.pass).count();
    SuiteReport {
        seeds: seeds.to_vec(),
        failed: rows.len() - passed,
        pass: passed == rows.len(),
        passed,
        rows,
    }
}

/// Columns: name, case, alpha, beta, lambda, p, nullity, expected, pass.
pub fn suite_csv(report: &SuiteReport) -> Result<String> {
    use crate::report::{dims_field, quat_field};
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "case", "alpha", "beta", "lambda", "p", "nullity", "expected", "pass"])?;
    for r in &report.rows {
        let nullity = r.nullities.first().map(usize::to_string).unwrap_or_default();
        w.write_record([
            r.name.clone(),
            r.case.clone(),
            quat_field(r.params.alpha),
            quat_field(r.params.beta),
            quat_field(r.params.lambda),
            r.params.p.to_string(),
            nullity,
            dims_field(&r.expected),
            r.pass.to_string(),
        ])?;
    }
    crate::report::finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrong_expectation_fails_row() {
        let mut row = default_grid().remove(10);
        let cfg = AutConfig::default();
        let ok = run_suite(std::slice::from_ref(&row), &cfg, &[42]);
        assert!(ok.pass, "{:?}", ok.rows[0]);
        row.expected = vec![6];
        let bad = run_suite(&[row], &cfg, &[42]);
        assert!(!bad.pass);
        assert_eq!(bad.failed, 1);
        let csv = suite_csv(&bad).unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().ends_with(",5,6,false"));
    }

    #[test]
    fn invalid_row_reports_error() {
        let row = GridRow::new(
            "bad",
            HopfParams::new(2, Quaternion::real(0.25), Quaternion::I * 0.5, Quaternion::J),
            5,
        );
        let rep = run_suite(&[row], &AutConfig::default(), &[1]);
        assert!(!rep.pass);
        assert!(rep.rows[0].error.is_some());
        assert_eq!(rep.rows[0].case, "Invalid");
    }
}
