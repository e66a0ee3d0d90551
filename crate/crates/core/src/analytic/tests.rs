use approx::assert_relative_eq;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp1};

use super::*;
use crate::config::{db_to_linear, RawConfig};

const ALL_N: [(Sic, Formulation); 4] = [
    (Sic::Perfect, Formulation::Exf),
    (Sic::Perfect, Formulation::Alf),
    (Sic::Imperfect, Formulation::Exf),
    (Sic::Imperfect, Formulation::Alf),
];

fn baseline() -> SystemConfig<f64> {
    SystemConfig::baseline()
}

fn with(f: impl FnOnce(&mut RawConfig<f64>)) -> SystemConfig<f64> {
    let mut raw = RawConfig::baseline();
    f(&mut raw);
    raw.validate().unwrap()
}

#[test]
fn gain_cdf_vanishes_at_zero_threshold() {
    let an = Analyzer::new(&baseline());
    assert_eq!(an.cdf_sinr_user_m(0.0, 100.0), 0.0);
    assert!(an.cdf_sinr_user_m(1e-12, 100.0) < 1e-20);
    assert_eq!(an.sorted_gain_cdf(f64::INFINITY, PairedUser::N), 1.0);
}

#[test]
fn single_subcarrier_kernel_is_exponential() {
    let cfg = with(|r| r.num_subcarriers = 1);
    let an = Analyzer::new(&cfg);
    let z = 0.37;
    let kernel: f64 = an
        .table()
        .b
        .iter()
        .zip(&an.table().c)
        .map(|(b, c)| b * (1.0 - (-z * c / cfg.eta()).exp()))
        .sum();
    let want = 1.0 - (1.0 - kernel).powi(3);
    assert_relative_eq!(an.sorted_gain_cdf(z, PairedUser::M), want, max_relative = 1e-13);
}

/// Direct simulation of the weakest of three users' effective gains.
fn simulate_min_gain_cdf(cfg: &SystemConfig<f64>, z: f64, trials: usize, seed: u64) -> f64 {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut gains: Vec<f64> = (0..cfg.num_users())
            .map(|_| {
                let d = cfg.r_d() * rng.random::<f64>().sqrt();
                let y: f64 = (0..cfg.num_subcarriers()).map(|_| -> f64 { Exp1.sample(&mut rng) }).sum::<f64>();
                cfg.eta() / (1.0 + d.powf(cfg.alpha())) * y
            })
            .collect();
        gains.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if gains[cfg.rank_m() - 1] < z {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

#[test]
fn sinr_cdf_matches_simulated_gain() {
    let cfg = baseline();
    let an = Analyzer::new(&cfg);
    let trials = 1_000_000;
    for (x, rho, seed) in [(0.01, 100.0, 1u64), (1.0, 1.0, 2), (0.5, 3.0, 3)] {
        let want = an.cdf_sinr_user_m(x, rho);
        let z = x / (rho * (cfg.a_m() - x * cfg.a_n()));
        let got = simulate_min_gain_cdf(&cfg, z, trials, seed);
        let se = (want * (1.0 - want) / trials as f64).sqrt();
        // the disk quadrature itself carries an O(1e-3) bias at U = 15
        assert!((got - want).abs() <= (3.0 * se).max(2e-3), "x={x} rho={rho}: {got} vs {want}");
    }
}

#[test]
fn infeasible_tau_is_certain_outage() {
    // eps_m = 2^2.5 - 1 ~ 4.66 exceeds a_m / a_n = 4
    let cfg = with(|r| r.r_m = 2.5);
    let an = Analyzer::new(&cfg);
    let v = an.cop_user_m(1e4);
    assert!(!v.feasible);
    assert_eq!(v.exact, 1.0);
    for (sic, form) in ALL_N {
        let n = an.cop_user_n(1e4, sic, form);
        match form {
            Formulation::Exf => assert_eq!(n.exact, 1.0),
            // direct decoding still possible when upsilon is feasible
            Formulation::Alf => assert!(n.thresholds.upsilon.feasible && n.exact < 1.0),
        }
    }
}

#[test]
fn user_m_vanishes_at_high_snr() {
    let an = Analyzer::new(&baseline());
    assert!(an.cop_user_m(1e12).exact < 1e-18);
}

#[test]
fn equal_rates_make_formulations_coincide() {
    let an = Analyzer::new(&baseline());
    for db in [0.0, 10.0, 25.0, 40.0] {
        let rho = db_to_linear(db);
        for sic in [Sic::Perfect, Sic::Imperfect] {
            let exf = an.cop_user_n(rho, sic, Formulation::Exf).exact;
            let alf = an.cop_user_n(rho, sic, Formulation::Alf).exact;
            assert!((exf - alf).abs() <= 1e-10 * exf.max(1e-300), "{db} dB: {exf} vs {alf}");
        }
    }
}

#[test]
fn perfect_sic_ignores_residual_interference() {
    let a = Analyzer::new(&with(|r| r.omega_i_total = 1e-3));
    let b = Analyzer::new(&with(|r| r.omega_i_total = 0.3));
    for form in [Formulation::Exf, Formulation::Alf] {
        assert_eq!(
            a.cop_user_n(100.0, Sic::Perfect, form).exact,
            b.cop_user_n(100.0, Sic::Perfect, form).exact
        );
    }
}

#[test]
fn imperfect_sic_reaches_floor_at_50_db() {
    let an = Analyzer::new(&baseline());
    let floor = an.error_floor();
    assert!(floor > 0.0);
    for form in [Formulation::Exf, Formulation::Alf] {
        let exact = an.cop_user_n(db_to_linear(50.0), Sic::Imperfect, form).exact;
        assert_relative_eq!(exact, floor, max_relative = 0.01);
    }
}

#[test]
fn pair_combination() {
    assert_relative_eq!(combine_pair(0.1, 0.2), 0.28, max_relative = 1e-15);
    assert_eq!(combine_pair(0.0, 0.37), 0.37);
    assert_eq!(combine_pair(1.0, 0.2), 1.0);
    assert_eq!(combine_pair(0.3, 1.0), 1.0);
}

#[test]
fn asymptotic_power_law_slopes() {
    for k in [1usize, 2, 3] {
        let an = Analyzer::new(&with(|r| r.num_subcarriers = k));
        let a = an.asymptotic(1e5, EvalMode::user_m()).value;
        let b = an.asymptotic(1e6, EvalMode::user_m()).value;
        assert_relative_eq!(a.log10() - b.log10(), k as f64, max_relative = 1e-10);
        let a = an.asymptotic(1e5, EvalMode::user_n(Sic::Perfect, Formulation::Exf)).value;
        let b = an.asymptotic(1e6, EvalMode::user_n(Sic::Perfect, Formulation::Exf)).value;
        assert_relative_eq!(a.log10() - b.log10(), (2 * k) as f64, max_relative = 1e-10);
    }
}

#[test]
fn asymptote_tracks_exact_at_50_db() {
    let an = Analyzer::new(&baseline());
    let v = an.cop_user_m(db_to_linear(50.0));
    let ratio = v.exact / v.asymptotic.unwrap();
    assert!((0.9..=1.1).contains(&ratio), "{ratio}");
}

#[test]
fn throughput_limits() {
    for pairing in [ThroughputPairing::AsPrinted, ThroughputPairing::Conventional] {
        assert_relative_eq!(delay_limited_throughput(0.0, 0.0, 0.5, 0.1, pairing), 0.6);
        assert_eq!(delay_limited_throughput(1.0, 1.0, 0.5, 0.1, pairing), 0.0);
    }
    assert_relative_eq!(
        delay_limited_throughput(0.5, 0.0, 0.5, 0.1, ThroughputPairing::AsPrinted),
        0.55
    );
    assert_relative_eq!(
        delay_limited_throughput(0.5, 0.0, 0.5, 0.1, ThroughputPairing::Conventional),
        0.35
    );
    let cfg = baseline();
    let tp = Analyzer::new(&cfg).throughput(db_to_linear(40.0), Sic::Perfect, Formulation::Exf);
    assert_relative_eq!(tp, cfg.r_m() + cfg.r_n(), max_relative = 0.01);
}

#[test]
fn expected_orders() {
    let cfg = baseline();
    assert_eq!(expected_diversity_order(&cfg, EvalMode::user_m()), 2);
    assert_eq!(expected_diversity_order(&cfg, EvalMode::user_n(Sic::Perfect, Formulation::Alf)), 4);
    assert_eq!(expected_diversity_order(&cfg, EvalMode::user_n(Sic::Imperfect, Formulation::Exf)), 0);
    assert_eq!(expected_diversity_order(&cfg, EvalMode::pair(Sic::Perfect, Formulation::Exf)), 2);
}

#[test]
fn single_precision_evaluator() {
    let cfg = SystemConfig::<f32>::baseline();
    let an = Analyzer::new(&cfg);
    let lo = an.cop_user_m(10.0).exact as f64;
    let hi = Analyzer::new(&baseline()).cop_user_m(10.0).exact;
    assert_relative_eq!(lo, hi, max_relative = 1e-4);
}

fn arb_config() -> impl Strategy<Value = SystemConfig<f64>> {
    (
        2usize..=6,
        1usize..=4,
        0.55f64..0.95,
        0.005f64..1.5,
        0.005f64..1.5,
        2.0f64..4.0,
        0.5f64..10.0,
        -40.0f64..-10.0,
        any::<u64>(),
    )
        .prop_map(|(users, k, a_m, r_m, r_n, alpha, r_d, ri_db, pick)| {
            let m = 1 + (pick as usize) % (users - 1);
            let n = m + 1 + ((pick >> 16) as usize) % (users - m);
            RawConfig {
                num_users: users,
                num_subcarriers: k,
                rank_m: m,
                rank_n: n,
                a_m,
                a_n: 1.0 - a_m,
                r_m,
                r_n,
                alpha,
                r_d,
                omega_i_total: db_to_linear(ri_db),
                ..RawConfig::baseline()
            }
            .validate()
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orderings_hold(cfg in arb_config(), snr_db in -10.0f64..60.0) {
        let an = Analyzer::new(&cfg);
        let rho = db_to_linear(snr_db);
        let p_m = an.cop_user_m(rho).exact;
        prop_assert!((0.0..=1.0).contains(&p_m));
        for sic in [Sic::Perfect, Sic::Imperfect] {
            let exf = an.cop_user_n(rho, sic, Formulation::Exf).exact;
            let alf = an.cop_user_n(rho, sic, Formulation::Alf).exact;
            prop_assert!((0.0..=1.0).contains(&exf) && (0.0..=1.0).contains(&alf));
            prop_assert!(alf <= exf * (1.0 + 1e-12) + 1e-300);
            for form in [Formulation::Exf, Formulation::Alf] {
                let pair = an.cop_pair(rho, sic, form).exact;
                let n = an.cop_user_n(rho, sic, form).exact;
                prop_assert!(pair + 1e-15 >= p_m.max(n));
            }
        }
        for form in [Formulation::Exf, Formulation::Alf] {
            let p = an.cop_user_n(rho, Sic::Perfect, form).exact;
            let ip = an.cop_user_n(rho, Sic::Imperfect, form).exact;
            prop_assert!(ip >= p * (1.0 - 1e-12));
        }
    }

    #[test]
    fn perfect_sic_nonincreasing(cfg in arb_config(), snr_db in -10.0f64..55.0) {
        let an = Analyzer::new(&cfg);
        let (lo, hi) = (db_to_linear(snr_db), db_to_linear(snr_db + 5.0));
        prop_assert!(an.cop_user_m(hi).exact <= an.cop_user_m(lo).exact);
        for form in [Formulation::Exf, Formulation::Alf] {
            let a = an.cop_user_n(lo, Sic::Perfect, form).exact;
            let b = an.cop_user_n(hi, Sic::Perfect, form).exact;
            prop_assert!(b <= a * (1.0 + 1e-12));
        }
    }
}
