use serde::Serialize;
use thiserror::Error;

use super::sweep::SweepError;
use crate::analytic::Analyzer;
use crate::config::{db_to_linear, EvalMode, SystemConfig};
use crate::montecarlo::{SampleScalar, Simulator};

pub const MIN_TRIALS: u64 = 10_000;

/// Points whose analytic COP falls below this are reported but do not decide
/// the aggregate verdict.
pub const REPORT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationPoint<T> {
    pub snr_db: T,
    pub mode: EvalMode,
    pub analytic: T,
    pub mc: T,
    pub stderr: T,
    /// `max(3 stderr, rel_tol * analytic)`.
    pub tolerance: T,
    pub pass: bool,
    pub considered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport<T> {
    pub points: Vec<ValidationPoint<T>>,
    pub pass: bool,
    pub considered: usize,
    pub failed: usize,
    pub rel_tol: T,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("validation needs at least {MIN_TRIALS} trials, got {0}")]
    TooFewTrials(u64),
    #[error(transparent)]
    Grid(#[from] SweepError),
}

/// Compares analytic COPs with simulation at every (SNR, mode) pair.
pub fn validate<T: SampleScalar>(
    cfg: &SystemConfig<T>,
    modes: &[EvalMode],
    grid_db: &[T],
    trials: u64,
    seed: u64,
    rel_tol: T,
) -> Result<ValidationReport<T>, ValidationError> {
    validate_against(cfg, cfg, modes, grid_db, trials, seed, rel_tol)
}

/// Like [`validate`], but simulates `mc_cfg` while evaluating `analytic_cfg`.
pub fn validate_against<T: SampleScalar>(
    analytic_cfg: &SystemConfig<T>,
    mc_cfg: &SystemConfig<T>,
    modes: &[EvalMode],
    grid_db: &[T],
    trials: u64,
    seed: u64,
    rel_tol: T,
) -> Result<ValidationReport<T>, ValidationError> {
    if trials < MIN_TRIALS {
        return Err(ValidationError::TooFewTrials(trials));
    }
    if grid_db.is_empty() {
        return Err(SweepError::EmptyGrid.into());
    }
    if modes.is_empty() {
        return Err(SweepError::NoModes.into());
    }
    if grid_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SweepError::GridOrder.into());
    }
    let analyzer = Analyzer::new(analytic_cfg);
    let sim = Simulator::new(mc_cfg);
    let three = T::lit(3.0);
    let floor = T::lit(REPORT_FLOOR);
    let mut points = Vec::with_capacity(grid_db.len() * modes.len());
    for &snr_db in grid_db {
        let rho = db_to_linear(snr_db);
        let est = sim.estimate(rho, modes, trials, seed);
        for (&mode, e) in modes.iter().zip(&est) {
            let analytic = analyzer.cop(rho, mode).exact;
            let tolerance = (three * e.stderr).max(rel_tol * analytic);
            points.push(ValidationPoint {
                snr_db,
                mode,
                analytic,
                mc: e.p_hat,
                stderr: e.stderr,
                tolerance,
                pass: (analytic - e.p_hat).abs() <= tolerance,
                considered: analytic >= floor,
            });
        }
    }
    let considered = points.iter().filter(|p| p.considered).count();
    let failed = points.iter().filter(|p| p.considered && !p.pass).count();
    Ok(ValidationReport {
        points,
        pass: failed == 0,
        considered,
        failed,
        rel_tol,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RawConfig;

    #[test]
    fn too_few_trials_rejected() {
        let cfg = SystemConfig::<f64>::baseline();
        let err = validate(&cfg, &[EvalMode::user_m()], &[0.0], 9_999, 1, 0.05).unwrap_err();
        assert_eq!(err, ValidationError::TooFewTrials(9_999));
    }

    #[test]
    fn perturbed_simulation_fails() {
        let cfg = SystemConfig::<f64>::baseline();
        let mut raw = RawConfig::baseline();
        raw.a_m = 0.7;
        raw.a_n = 0.3;
        let mc_cfg = raw.validate().unwrap();
        let modes = EvalMode::all();
        let grid = [0.0, 5.0];
        let good = validate(&cfg, &modes, &grid, 200_000, 9, 0.05).unwrap();
        assert!(good.pass, "{good:?}");
        assert!(good.considered > 0);
        let bad = validate_against(&cfg, &mc_cfg, &modes, &grid, 200_000, 9, 0.05).unwrap();
        assert!(!bad.pass);
    }
}
