use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{delay_limited_throughput, Analyzer, CopValue};
use crate::config::{db_to_linear, EvalMode, RawConfig, SystemConfig, Target};
use crate::montecarlo::{OutageEstimate, SampleScalar, Simulator, DEFAULT_CHUNK_SIZE};

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// Transmit SNR in dB.
    SnrDb,
    /// Dynamic power factor: `a_n = theta`, `a_m = 1 - theta`.
    Theta,
    /// Common target rate `R_m = R_n` in BPCU.
    Rate,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::SnrDb => "snr_db",
            Axis::Theta => "theta",
            Axis::Rate => "rate",
        }
    }
}

/// What each row reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    #[default]
    Cop,
    /// Delay-limited throughput in BPCU; the mode's target is ignored.
    Throughput,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec<T> {
    pub axis: Axis,
    pub grid: Vec<T>,
    pub modes: Vec<EvalMode>,
    /// Monte Carlo trials per grid point; `0` skips simulation.
    pub trials: u64,
    pub seed: u64,
    /// Fixed SNR used when the axis is not the SNR.
    pub snr_db: T,
    pub quantity: Quantity,
    /// Appended to row labels to tell series of one figure apart.
    pub tag: String,
}

impl<T: SampleScalar> SweepSpec<T> {
    pub fn snr(grid: Vec<T>, modes: Vec<EvalMode>) -> Self {
        SweepSpec {
            axis: Axis::SnrDb,
            grid,
            modes,
            trials: 0,
            seed: 0,
            snr_db: T::zero(),
            quantity: Quantity::Cop,
            tag: String::new(),
        }
    }

    pub fn with_trials(mut self, trials: u64, seed: u64) -> Self {
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }

    pub fn check(&self) -> Result<(), SweepError> {
        if self.grid.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        if self.modes.is_empty() {
            return Err(SweepError::NoModes);
        }
        if self.grid.iter().any(|x| !x.is_finite()) || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SweepError::GridOrder);
        }
        let (lo, hi) = (self.grid[0], self.grid[self.grid.len() - 1]);
        match self.axis {
            Axis::Theta if lo < T::zero() || hi > T::one() => Err(SweepError::GridRange("theta must lie in [0, 1]")),
            Axis::Rate if lo <= T::zero() => Err(SweepError::GridRange("rates must be positive")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("grid is empty")]
    EmptyGrid,
    #[error("no evaluation modes given")]
    NoModes,
    #[error("grid must be finite and strictly increasing")]
    GridOrder,
    #[error("grid out of range: {0}")]
    GridRange(&'static str),
    #[error("grid step must be positive and stop >= start")]
    BadStep,
}

/// Inclusive arithmetic grid `start, start + step, ..., <= stop`.
pub fn linear_grid<T: SampleScalar>(start: T, stop: T, step: T) -> Result<Vec<T>, SweepError> {
    if !(step > T::zero()) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(SweepError::BadStep);
    }
    let n = ((stop - start) / step + T::lit(1e-9)).floor().to_usize().ok_or(SweepError::BadStep)?;
    Ok((0..=n).map(|i| start + T::count(i) * step).collect())
}

/// One evaluated (grid point, mode) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CopPoint<T> {
    pub axis_value: T,
    pub label: String,
    pub mode: EvalMode,
    pub exact: T,
    pub asymptotic: Option<T>,
    pub mc_estimate: Option<T>,
    pub mc_stderr: Option<T>,
    pub trials: u64,
    /// False when a threshold is infeasible (outage certain) or the point's
    /// configuration is invalid.
    pub feasible: bool,
    /// False when `a_n <= eps_n a_m`, i.e. the direct-decoding branch of ALF
    /// is unavailable and `zeta = tau`.
    pub upsilon_feasible: bool,
    /// False when the point's configuration failed validation; `exact = 1`.
    pub config_valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub trials: u64,
    pub chunk_size: u64,
    pub started_unix_s: u64,
    pub finished_unix_s: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult<T> {
    pub axis: Axis,
    pub quantity: Quantity,
    pub snr_db: T,
    pub tag: String,
    /// Grid-major, then in the spec's mode order.
    pub rows: Vec<CopPoint<T>>,
    pub config: RawConfig<T>,
    pub provenance: Provenance,
}

impl<T> SweepResult<T> {
    pub fn rows_for(&self, mode: EvalMode) -> impl Iterator<Item = &CopPoint<T>> {
        self.rows.iter().filter(move |r| r.mode == mode)
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn row_label(quantity: Quantity, mode: EvalMode, tag: &str) -> String {
    let base = match quantity {
        Quantity::Cop => mode.to_string(),
        Quantity::Throughput => {
            let n = EvalMode::user_n(mode.sic, mode.formulation).to_string();
            format!("throughput{}", &n[1..])
        }
    };
    if tag.is_empty() {
        base
    } else {
        format!("{base}@{tag}")
    }
}

/// Evaluates every mode at every grid point.
pub fn run_sweep<T: SampleScalar>(cfg: &SystemConfig<T>, spec: &SweepSpec<T>) -> Result<SweepResult<T>, SweepError> {
    spec.check()?;
    let started = unix_now();
    let rows: Vec<Vec<CopPoint<T>>> = spec
        .grid
        .par_iter()
        .map(|&x| evaluate_point(cfg, spec, x))
        .collect();
    Ok(SweepResult {
        axis: spec.axis,
        quantity: spec.quantity,
        snr_db: spec.snr_db,
        tag: spec.tag.clone(),
        rows: rows.into_iter().flatten().collect(),
        config: cfg.to_raw(),
        provenance: Provenance {
            seed: spec.seed,
            trials: spec.trials,
            chunk_size: DEFAULT_CHUNK_SIZE,
            started_unix_s: started,
            finished_unix_s: unix_now(),
        },
    })
}

fn point_config<T: SampleScalar>(cfg: &SystemConfig<T>, axis: Axis, x: T) -> Option<SystemConfig<T>> {
    let mut raw = cfg.to_raw();
    match axis {
        Axis::SnrDb => return Some(cfg.clone()),
        Axis::Theta => {
            raw.a_n = x;
            raw.a_m = T::one() - x;
        }
        Axis::Rate => {
            raw.r_m = x;
            raw.r_n = x;
        }
    }
    raw.validate().ok()
}

fn evaluate_point<T: SampleScalar>(cfg: &SystemConfig<T>, spec: &SweepSpec<T>, x: T) -> Vec<CopPoint<T>> {
    let snr_db = if spec.axis == Axis::SnrDb { x } else { spec.snr_db };
    let rho = db_to_linear(snr_db);
    let label = |mode| row_label(spec.quantity, mode, &spec.tag);
    let Some(cfg) = point_config(cfg, spec.axis, x) else {
        let worst = match spec.quantity {
            Quantity::Cop => T::one(),
            Quantity::Throughput => T::zero(),
        };
        return spec
            .modes
            .iter()
            .map(|&mode| CopPoint {
                axis_value: x,
                label: label(mode),
                mode,
                exact: worst,
                asymptotic: None,
                mc_estimate: None,
                mc_stderr: None,
                trials: 0,
                feasible: false,
                upsilon_feasible: false,
                config_valid: false,
            })
            .collect();
    };
    let analyzer = Analyzer::new(&cfg);
    match spec.quantity {
        Quantity::Cop => {
            let mc = (spec.trials > 0).then(|| Simulator::new(&cfg).estimate(rho, &spec.modes, spec.trials, spec.seed));
            spec.modes
                .iter()
                .enumerate()
                .map(|(i, &mode)| {
                    let v = analyzer.cop(rho, mode);
                    cop_row(x, label(mode), &v, mc.as_ref().map(|e| &e[i]), spec.trials)
                })
                .collect()
        }
        Quantity::Throughput => spec
            .modes
            .iter()
            .map(|&mode| throughput_row(&analyzer, &cfg, spec, x, rho, mode, label(mode)))
            .collect(),
    }
}

fn cop_row<T: SampleScalar>(
    x: T,
    label: String,
    v: &CopValue<T>,
    mc: Option<&OutageEstimate<T>>,
    trials: u64,
) -> CopPoint<T> {
    CopPoint {
        axis_value: x,
        label,
        mode: v.mode,
        exact: v.exact,
        asymptotic: v.asymptotic,
        mc_estimate: mc.map(|e| e.p_hat),
        mc_stderr: mc.map(|e| e.stderr),
        trials: if mc.is_some() { trials } else { 0 },
        feasible: v.feasible,
        upsilon_feasible: v.thresholds.upsilon.feasible,
        config_valid: true,
    }
}

fn throughput_row<T: SampleScalar>(
    analyzer: &Analyzer<T>,
    cfg: &SystemConfig<T>,
    spec: &SweepSpec<T>,
    x: T,
    rho: T,
    mode: EvalMode,
    label: String,
) -> CopPoint<T> {
    let tp = |p_m: T, p_n: T| delay_limited_throughput(p_m, p_n, cfg.r_m(), cfg.r_n(), cfg.throughput_pairing());
    let m = analyzer.cop_user_m(rho);
    let n = analyzer.cop_user_n(rho, mode.sic, mode.formulation);
    let asymptotic = match (m.asymptotic, n.asymptotic) {
        (Some(a), Some(b)) => Some(tp(a, b)),
        _ => None,
    };
    let mc = (spec.trials > 0).then(|| {
        let modes = [EvalMode::user_m(), EvalMode::user_n(mode.sic, mode.formulation)];
        let est = Simulator::new(cfg).estimate(rho, &modes, spec.trials, spec.seed);
        // throughput is affine in (P_m, P_n)
        let base = tp(T::zero(), T::zero());
        let (w_m, w_n) = (base - tp(T::one(), T::zero()), base - tp(T::zero(), T::one()));
        let var = (w_m * est[0].stderr).powi(2) + (w_n * est[1].stderr).powi(2);
        (tp(est[0].p_hat, est[1].p_hat), var.sqrt())
    });
    CopPoint {
        axis_value: x,
        label,
        mode: EvalMode::new(Target::UserN, mode.sic, mode.formulation),
        exact: tp(m.exact, n.exact),
        asymptotic,
        mc_estimate: mc.map(|p| p.0),
        mc_stderr: mc.map(|p| p.1),
        trials: if mc.is_some() { spec.trials } else { 0 },
        feasible: m.feasible && n.feasible,
        upsilon_feasible: n.thresholds.upsilon.feasible,
        config_valid: true,
    }
}
