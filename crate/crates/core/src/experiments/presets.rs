use serde::Serialize;

use super::sweep::{linear_grid, run_sweep, Axis, Quantity, SweepError, SweepResult, SweepSpec};
use crate::config::{db_to_linear, EvalMode, Formulation, RawConfig, Sic, SystemConfig};
use crate::montecarlo::SampleScalar;

/// Monte Carlo trials per grid point used by the presets.
pub const DEFAULT_TRIALS: u64 = 1_000_000;

/// Figure numbers with a preset.
pub const FIGURES: [u8; 8] = [2, 3, 4, 5, 6, 7, 8, 9];

/// One curve family of a figure: a configuration and the sweep run on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series<T> {
    pub cfg: SystemConfig<T>,
    pub spec: SweepSpec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure<T> {
    pub number: u8,
    pub title: &'static str,
    pub series: Vec<Series<T>>,
}

impl<T: SampleScalar> Figure<T> {
    pub fn run(&self) -> Result<Vec<SweepResult<T>>, SweepError> {
        self.series.iter().map(|s| run_sweep(&s.cfg, &s.spec)).collect()
    }

    /// Replaces the trial count and seed of every series.
    pub fn with_trials(mut self, trials: u64, seed: u64) -> Self {
        for s in &mut self.series {
            s.spec.trials = trials;
            s.spec.seed = seed;
        }
        self
    }

    /// Replaces the SNR grid of every SNR-axis series.
    pub fn with_snr_grid(mut self, grid: &[T]) -> Self {
        for s in &mut self.series {
            if s.spec.axis == Axis::SnrDb {
                s.spec.grid = grid.to_vec();
            }
        }
        self
    }
}

fn cfg_with<T: SampleScalar>(edit: impl FnOnce(&mut RawConfig<T>)) -> SystemConfig<T> {
    let mut raw = RawConfig::baseline();
    edit(&mut raw);
    raw.validate().expect("preset parameters are valid")
}

fn n_modes(sics: &[Sic]) -> Vec<EvalMode> {
    let mut out = Vec::new();
    for &sic in sics {
        for f in [Formulation::Exf, Formulation::Alf] {
            out.push(EvalMode::user_n(sic, f));
        }
    }
    out
}

fn with_m(mut modes: Vec<EvalMode>) -> Vec<EvalMode> {
    modes.insert(0, EvalMode::user_m());
    modes
}

fn snr_series<T: SampleScalar>(cfg: SystemConfig<T>, modes: Vec<EvalMode>, tag: &str) -> Series<T> {
    let grid = linear_grid(T::zero(), T::lit(50.0), T::lit(5.0)).expect("static grid");
    Series {
        cfg,
        spec: SweepSpec::snr(grid, modes).with_trials(DEFAULT_TRIALS, 1).with_tag(tag),
    }
}

/// Preset for figure `number` (2 to 9), `None` otherwise.
pub fn figure<T: SampleScalar>(number: u8) -> Option<Figure<T>> {
    let both = [Sic::Imperfect, Sic::Perfect];
    let fig = match number {
        2 => {
            let mut series = Vec::new();
            for ri in [-30.0, -25.0, -20.0] {
                let cfg = cfg_with(|r| r.omega_i_total = db_to_linear(T::lit(ri)));
                let modes = if ri == -30.0 {
                    with_m(n_modes(&both))
                } else {
                    n_modes(&[Sic::Imperfect])
                };
                series.push(snr_series(cfg, modes, &format!("ri{ri}db")));
            }
            Figure {
                number,
                title: "COP vs SNR, K=2, residual interference -30/-25/-20 dB",
                series,
            }
        }
        3 => Figure {
            number,
            title: "COP vs SNR, K=1, R_n=0.1, R_m=0.5 BPCU",
            series: vec![snr_series(
                cfg_with(|r| {
                    r.num_subcarriers = 1;
                    r.r_n = T::lit(0.1);
                    r.r_m = T::lit(0.5);
                }),
                with_m(n_modes(&both)),
                "",
            )],
        },
        4 => Figure {
            number,
            title: "COP vs SNR, K=3 and K=1",
            series: [3, 1]
                .into_iter()
                .map(|k| {
                    snr_series(cfg_with(|r| r.num_subcarriers = k), with_m(n_modes(&both)), &format!("k{k}"))
                })
                .collect(),
        },
        5 => {
            let mut series = Vec::new();
            for rd in [2.0, 10.0] {
                for alpha in [2.0, 3.0] {
                    let cfg = cfg_with(|r| {
                        r.r_d = T::lit(rd);
                        r.alpha = T::lit(alpha);
                    });
                    let modes = with_m(vec![
                        EvalMode::user_n(Sic::Imperfect, Formulation::Exf),
                        EvalMode::user_n(Sic::Perfect, Formulation::Exf),
                    ]);
                    series.push(snr_series(cfg, modes, &format!("rd{rd}-alpha{alpha}")));
                }
            }
            Figure {
                number,
                title: "COP vs SNR for disk radius 2/10 m and path-loss exponent 2/3",
                series,
            }
        }
        6 => Figure {
            number,
            title: "COP vs SNR for target rates 0.01/0.1/0.5 BPCU",
            series: [0.01, 0.1, 0.5]
                .into_iter()
                .map(|rate| {
                    let cfg = cfg_with(|r| {
                        r.r_m = T::lit(rate);
                        r.r_n = T::lit(rate);
                    });
                    let modes = with_m(vec![
                        EvalMode::user_n(Sic::Imperfect, Formulation::Exf),
                        EvalMode::user_n(Sic::Perfect, Formulation::Exf),
                    ]);
                    snr_series(cfg, modes, &format!("rate{rate}"))
                })
                .collect(),
        },
        7 => Figure {
            number,
            title: "COP vs SNR, K=1, R_n=R_m=1 BPCU, eta=1",
            series: vec![snr_series(
                cfg_with(|r| {
                    r.num_subcarriers = 1;
                    r.r_n = T::one();
                    r.r_m = T::one();
                }),
                with_m(n_modes(&both)),
                "",
            )],
        },
        8 => {
            let theta = linear_grid(T::lit(0.02), T::lit(0.98), T::lit(0.02)).expect("static grid");
            let series = [0.0, 10.0, 20.0, 30.0, 40.0]
                .into_iter()
                .map(|snr| Series {
                    cfg: SystemConfig::baseline(),
                    spec: SweepSpec {
                        axis: Axis::Theta,
                        grid: theta.clone(),
                        snr_db: T::lit(snr),
                        ..SweepSpec::snr(vec![], vec![EvalMode::pair(Sic::Perfect, Formulation::Exf)])
                    }
                    .with_trials(DEFAULT_TRIALS, 1)
                    .with_tag(format!("snr{snr}db")),
                })
                .collect();
            Figure {
                number,
                title: "Pair COP vs dynamic power factor theta (a_n = theta, a_m = 1 - theta)",
                series,
            }
        }
        9 => {
            let grid = linear_grid(T::zero(), T::lit(40.0), T::lit(2.5)).expect("static grid");
            let mut series = Vec::new();
            for k in [2, 1] {
                for (sic, ri) in [(Sic::Perfect, -30.0), (Sic::Imperfect, -30.0), (Sic::Imperfect, -20.0)] {
                    let cfg = cfg_with(|r| {
                        r.num_subcarriers = k;
                        r.omega_i_total = db_to_linear(T::lit(ri));
                    });
                    let tag = match sic {
                        Sic::Perfect => format!("k{k}"),
                        Sic::Imperfect => format!("k{k}-ri{ri}db"),
                    };
                    let spec = SweepSpec {
                        quantity: Quantity::Throughput,
                        ..SweepSpec::snr(grid.clone(), vec![EvalMode::user_n(sic, Formulation::Exf)])
                    }
                    .with_trials(DEFAULT_TRIALS, 1)
                    .with_tag(tag);
                    series.push(Series { cfg, spec });
                }
            }
            Figure {
                number,
                title: "Delay-limited throughput vs SNR, K=2 and K=1",
                series,
            }
        }
        _ => return None,
    };
    Some(fig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_exists_and_runs_analytically() {
        for n in FIGURES {
            let fig = figure::<f64>(n).unwrap().with_trials(0, 0);
            let results = fig.run().unwrap();
            assert!(!results.is_empty());
            for r in results {
                assert!(r.rows.iter().all(|p| p.exact.is_finite()));
            }
        }
        assert!(figure::<f64>(1).is_none());
        assert!(figure::<f64>(10).is_none());
    }

    #[test]
    fn figure_two_labels() {
        let fig = figure::<f64>(2).unwrap().with_trials(0, 0).with_snr_grid(&[10.0]);
        let labels: Vec<String> = fig.run().unwrap().into_iter().flat_map(|r| r.rows).map(|p| p.label).collect();
        assert_eq!(labels.len(), 5 + 2 + 2);
        assert_eq!(labels[0], "m@ri-30db");
        assert!(labels.contains(&"n-ipsic-alf@ri-20db".to_string()));
    }
}
