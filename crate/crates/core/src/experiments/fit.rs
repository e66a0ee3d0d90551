use serde::Serialize;
use thiserror::Error;

use crate::Scalar;

/// Relative change over the final decade below which a curve counts as
/// having reached its floor.
pub const FLOOR_TOLERANCE: f64 = 0.02;

/// Points at or below this value are left out of slope fits. The outage
/// kernels keep relative accuracy down to the underflow range, so only
/// zeros and subnormals are discarded.
const SLOPE_CUTOFF: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityReport<T> {
    /// Least-squares slope of `-log10 P` against `log10 rho`.
    pub slope: T,
    pub intercept: T,
    pub points: usize,
    pub window_db: (T, T),
    pub expected_order: Option<usize>,
}

impl<T> DiversityReport<T> {
    pub fn with_expected(mut self, order: usize) -> Self {
        self.expected_order = Some(order);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least 3 usable points in the window, found {0}")]
    TooFewPoints(usize),
    #[error("window holds a single SNR value")]
    Degenerate,
}

/// Fits the high-SNR slope over `window_db` (inclusive, in dB).
pub fn fit_diversity_order<T: Scalar>(curve: &[(T, T)], window_db: (T, T)) -> Result<DiversityReport<T>, FitError> {
    let ten = T::lit(10.0);
    let slack = T::lit(1e-9);
    let pts: Vec<(T, T)> = curve
        .iter()
        .filter(|(rho, p)| {
            let db = ten * rho.log10();
            db >= window_db.0 - slack && db <= window_db.1 + slack && *p > T::lit(SLOPE_CUTOFF)
        })
        .map(|&(rho, p)| (rho.log10(), -p.log10()))
        .collect();
    if pts.len() < 3 {
        return Err(FitError::TooFewPoints(pts.len()));
    }
    let n = T::count(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxx: T = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: T = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > T::zero()) {
        return Err(FitError::Degenerate);
    }
    let slope = sxy / sxx;
    Ok(DiversityReport {
        slope,
        intercept: my - slope * mx,
        points: pts.len(),
        window_db,
        expected_order: None,
    })
}

/// Terminal value of a curve sorted by `rho` if it changed by less than
/// [`FLOOR_TOLERANCE`] (relative) over its final decade of SNR.
pub fn detect_error_floor<T: Scalar>(curve: &[(T, T)]) -> Option<T> {
    let &(rho_end, p_end) = curve.last()?;
    if !(p_end > T::zero()) {
        return None;
    }
    let start = rho_end / T::lit(10.0) * (T::one() + T::lit(1e-9));
    if curve[0].0 > start {
        return None;
    }
    let tol = T::lit(FLOOR_TOLERANCE);
    curve
        .iter()
        .filter(|(rho, _)| *rho >= start / (T::one() + T::lit(2e-9)))
        .all(|&(_, p)| ((p - p_end) / p_end).abs() < tol)
        .then_some(p_end)
}
