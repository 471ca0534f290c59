//! Power-law fits of logical error rate against physical error rate.

use serde::{Deserialize, Serialize};

use crate::circuit::Variant;
use crate::error::{Error, Result};
use crate::harness::stats::Z95;
use crate::harness::sweep::ResultRow;

/// Points below this many failures are too noisy to fit.
pub const MIN_FAILURES: u64 = 100;
/// Points at or above this logical error rate are past the power-law regime.
pub const MAX_P_LOGICAL: f64 = 0.3;
pub const MIN_POINTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub variant: Variant,
    pub d: usize,
    /// Slope of `ln P_L` against `ln p`.
    pub exponent: f64,
    pub exponent_se: f64,
    /// `ln c` in `P_L = c p^exponent`.
    pub intercept: f64,
    pub points_used: usize,
    pub window: (f64, f64),
}

impl FitResult {
    pub fn predict(&self, p: f64) -> f64 {
        (self.intercept + self.exponent * p.ln()).exp()
    }
}

/// Weighted least squares of `ln P_L` on `ln p` over the rows of distance
/// `d` whose `p` lies in `window` (inclusive). Each point is weighted by the
/// inverse variance of `ln P_L` implied by its Wilson interval.
pub fn fit_exponent(rows: &[ResultRow], d: usize, window: Option<(f64, f64)>) -> Result<FitResult> {
    let (lo, hi) = window.unwrap_or((0.0, f64::INFINITY));
    let pts: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| r.d == d && r.p >= lo && r.p <= hi && r.p > 0.0)
        .filter(|r| r.failures >= MIN_FAILURES && r.p_logical < MAX_P_LOGICAL)
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} qualifying points for d={d} (need {MIN_POINTS} with at least {MIN_FAILURES} failures and P_L < {MAX_P_LOGICAL})",
            pts.len()
        )));
    }
    let variant = pts[0].variant;
    let xs: Vec<f64> = pts.iter().map(|r| r.p.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|r| r.p_logical.ln()).collect();
    let ws: Vec<f64> = pts
        .iter()
        .map(|r| {
            let sigma = (r.ci_high.ln() - r.ci_low.ln()) / (2.0 * Z95);
            if sigma > 0.0 && sigma.is_finite() {
                1.0 / (sigma * sigma)
            } else {
                1.0
            }
        })
        .collect();
    let sw: f64 = ws.iter().sum();
    let mx = ws.iter().zip(&xs).map(|(w, x)| w * x).sum::<f64>() / sw;
    let my = ws.iter().zip(&ys).map(|(w, y)| w * y).sum::<f64>() / sw;
    let sxx: f64 = ws.iter().zip(&xs).map(|(w, x)| w * (x - mx).powi(2)).sum();
    let sxy: f64 = ws
        .iter()
        .zip(xs.iter().zip(&ys))
        .map(|(w, (x, y))| w * (x - mx) * (y - my))
        .sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData(format!(
            "all qualifying points for d={d} share one p"
        )));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let n = pts.len() as f64;
    let chi2: f64 = ws
        .iter()
        .zip(xs.iter().zip(&ys))
        .map(|(w, (x, y))| w * (y - intercept - slope * x).powi(2))
        .sum();
    let se = (chi2 / (n - 2.0) / sxx).sqrt();
    let ps: Vec<f64> = pts.iter().map(|r| r.p).collect();
    Ok(FitResult {
        variant,
        d,
        exponent: slope,
        exponent_se: se,
        intercept,
        points_used: pts.len(),
        window: (
            ps.iter().copied().fold(f64::INFINITY, f64::min),
            ps.iter().copied().fold(0.0, f64::max),
        ),
    })
}
