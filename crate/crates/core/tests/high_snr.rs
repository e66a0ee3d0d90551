use noma_core::analytic::expected_diversity_order;
use noma_core::experiments::{detect_error_floor, fit_diversity_order, linear_grid, run_sweep, SweepSpec};
use noma_core::{db_to_linear, Analyzer64, Config, EvalMode, Formulation, RawConfig64, Sic};

fn curve(cfg: &Config, mode: EvalMode, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let spec = SweepSpec::snr(linear_grid(lo, hi, 2.5).unwrap(), vec![mode]);
    let res = run_sweep(cfg, &spec).unwrap();
    res.rows.iter().map(|p| (db_to_linear(p.axis_value), p.exact)).collect()
}

#[test]
fn fitted_slopes_match_expected_orders() {
    for k in [1, 2, 3] {
        let cfg = RawConfig64 {
            num_subcarriers: k,
            ..RawConfig64::baseline()
        }
        .validate()
        .unwrap();
        for mode in [EvalMode::user_m(), EvalMode::user_n(Sic::Perfect, Formulation::Alf)] {
            let fit = fit_diversity_order(&curve(&cfg, mode, 30.0, 50.0), (30.0, 50.0)).unwrap();
            let want = expected_diversity_order(&cfg, mode) as f64;
            assert!((fit.slope - want).abs() <= 0.05 * want, "K={k} {mode}: {}", fit.slope);
        }
    }
}

#[test]
fn imperfect_sic_curve_settles_on_its_floor() {
    let cfg = Config::baseline();
    let mode = EvalMode::user_n(Sic::Imperfect, Formulation::Exf);
    let floor = detect_error_floor(&curve(&cfg, mode, 20.0, 70.0)).expect("floor reached");
    let expected = Analyzer64::new(&cfg).error_floor();
    assert!((floor - expected).abs() <= 1e-3 * expected);
    assert!(detect_error_floor(&curve(&cfg, EvalMode::user_m(), 20.0, 70.0)).is_none());
}

#[test]
fn sweep_monte_carlo_tracks_analytic_values() {
    let cfg = Config::baseline();
    let spec = SweepSpec::snr(vec![0.0, 5.0], EvalMode::all()).with_trials(100_000, 5);
    for p in run_sweep(&cfg, &spec).unwrap().rows.into_iter().filter(|p| p.exact >= 1e-3) {
        let (mc, se) = (p.mc_estimate.unwrap(), p.mc_stderr.unwrap());
        assert!(
            (mc - p.exact).abs() <= (4.0 * se).max(0.05 * p.exact),
            "{} at {} dB: {mc} vs {}",
            p.label,
            p.axis_value,
            p.exact
        );
    }
}
