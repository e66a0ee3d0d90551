//! Closed-form and high-SNR connection-outage probabilities.
//!
//! Every expression is built from one primitive, the CDF of the `r`-th
//! smallest effective gain `F_r(z)` (Gauss–Chebyshev over the disk, composed
//! with the order-statistics transform), and the expectation over the
//! residual-interference power `Y ~ Gamma(K, Omega_I)`.
//!
//! With thresholds `T = tau`, `zeta = min(tau, upsilon)` and the imperfect-SIC
//! line `vartheta Y + beta`, the `n`-th user's outage is
//!
//! * EXF: `F_n(T) + J`,
//! * ALF: `F_n(zeta) + J`,
//!
//! where `J = Pr(T < Z_n < vartheta Y + beta)`. Under perfect SIC `Y = 0`.

mod asymptotic;
mod throughput;

pub use asymptotic::Asymptote;
pub use throughput::{delay_limited_throughput, throughput_delay_limited, ThroughputPairing};

use serde::Serialize;

use crate::config::{DerivedThresholds, EvalMode, Formulation, Sic, SystemConfig, Target};
use crate::numerics::{gamma_sf_int, FiniteRule, OrderStatistic, QuadratureTable, SemiInfRule};
use crate::Scalar;

/// Which paired user an order-statistic rank refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairedUser {
    M,
    N,
}

/// One outage evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CopValue<T> {
    pub exact: T,
    pub asymptotic: Option<T>,
    /// False when an infeasible threshold forces `exact = 1`.
    pub feasible: bool,
    /// Set when the asymptotic expression left `[0, 1]` and was clamped.
    pub asymptotic_clamped: bool,
    pub mode: EvalMode,
    pub rho: T,
    pub thresholds: DerivedThresholds<T>,
}

/// Pre-built evaluator for one configuration.
#[derive(Debug, Clone)]
pub struct Analyzer<T> {
    cfg: SystemConfig<T>,
    table: QuadratureTable<T>,
    rule: SemiInfRule<T>,
    stat_m: OrderStatistic<T>,
    stat_n: OrderStatistic<T>,
    inv_k_fact: T,
    panel: FiniteRule<T>,
    c_max: T,
    /// Smallest gain at which the unsorted disk CDF reaches one, when the
    /// quadrature weights sum past one.
    saturation: Option<T>,
}

/// Above this decay rate (per unit of `Y / Omega_I`) the integrand of a
/// residual-interference expectation changes too fast for the Laguerre rule.
const LAGUERRE_MAX_RATE: f64 = 0.05;
/// Extent, in units of `Omega_I`, of the graded panels used otherwise.
const GRADED_SPAN: f64 = 40.0;
const PANEL_NODES: usize = 20;
const MAX_PANEL_WIDTH: f64 = 4.0;

impl<T: Scalar> Analyzer<T> {
    pub fn new(cfg: &SystemConfig<T>) -> Self {
        let table = QuadratureTable::new(cfg.cheb_nodes(), cfg.r_d(), cfg.alpha())
            .expect("validated config has cheb_nodes >= 1");
        let rule = SemiInfRule::new(cfg.semi_nodes()).expect("validated config has semi_nodes >= 1");
        Self::with_rules(cfg, table, rule)
    }

    /// Evaluator with caller-supplied quadrature rules.
    pub fn with_rules(cfg: &SystemConfig<T>, table: QuadratureTable<T>, rule: SemiInfRule<T>) -> Self {
        let stat_m = OrderStatistic::new(cfg.rank_m(), cfg.num_users()).expect("validated ranks");
        let stat_n = OrderStatistic::new(cfg.rank_n(), cfg.num_users()).expect("validated ranks");
        let k_fact = (1..cfg.num_subcarriers()).fold(T::one(), |acc, i| acc * T::count(i));
        Analyzer {
            cfg: cfg.clone(),
            rule,
            stat_m,
            stat_n,
            inv_k_fact: T::one() / k_fact,
            panel: FiniteRule::new(PANEL_NODES).expect("nonzero node count"),
            c_max: table.c.iter().copied().fold(T::zero(), T::max),
            saturation: saturation_point(&table, cfg.num_subcarriers(), cfg.eta()),
            table,
        }
    }

    pub fn config(&self) -> &SystemConfig<T> {
        &self.cfg
    }

    pub fn table(&self) -> &QuadratureTable<T> {
        &self.table
    }

    pub fn rule(&self) -> &SemiInfRule<T> {
        &self.rule
    }

    pub fn thresholds(&self, rho: T) -> DerivedThresholds<T> {
        DerivedThresholds::new(&self.cfg, rho)
    }

    fn stat(&self, user: PairedUser) -> &OrderStatistic<T> {
        match user {
            PairedUser::M => &self.stat_m,
            PairedUser::N => &self.stat_n,
        }
    }

    /// CDF of the effective gain of the given paired user at `z`; `+inf`
    /// maps to 1.
    pub fn sorted_gain_cdf(&self, z: T, user: PairedUser) -> T {
        if z.is_infinite() && z > T::zero() {
            return T::one();
        }
        // the disk quadrature weights sum to slightly more than one
        let unsorted = self
            .table
            .unsorted_gain_cdf(z, self.cfg.num_subcarriers(), self.cfg.eta())
            .min(T::one());
        clamp_unit(self.stat(user).apply(unsorted))
    }

    /// CDF of the `m`-th user's SINR at `x`. Returns 1 once `a_m <= x a_n`.
    pub fn cdf_sinr_user_m(&self, x: T, rho: T) -> T {
        let den = self.cfg.a_m() - x * self.cfg.a_n();
        if den <= T::zero() {
            return T::one();
        }
        self.sorted_gain_cdf(x / (rho * den), PairedUser::M)
    }

    /// CDF of the `n`-th user's post-SIC SINR at `x`.
    pub fn cdf_sinr_user_n(&self, x: T, rho: T, sic: Sic) -> T {
        let scale = x / (rho * self.cfg.a_n());
        if sic == Sic::Perfect || self.cfg.omega_i_total() == T::zero() {
            return self.sorted_gain_cdf(scale, PairedUser::N);
        }
        clamp_unit(self.ri_expectation(T::zero(), scale * rho, scale, |y| {
            self.sorted_gain_cdf(scale * (rho * y + T::one()), PairedUser::N)
        }))
    }

    /// `E[g(Y); Y > start]` for the residual-interference power `Y`, where
    /// `g` sees `y` only through the gain threshold `slope * y + offset`.
    ///
    /// Slowly varying integrands go straight to the Laguerre rule. When the
    /// gain CDF changes within a small fraction of `Omega_I`, or saturates
    /// (clamped at one) close to `start`, the head of the integral is covered
    /// by Gauss–Legendre panels of growing width instead.
    fn ri_expectation(&self, start: T, slope: T, offset: T, g: impl Fn(T) -> T) -> T {
        let omega = self.cfg.omega_i();
        let k = self.cfg.num_subcarriers();
        let t0 = start / omega;
        let rate = slope * omega * self.c_max / self.cfg.eta();
        let t_sat = match self.saturation {
            Some(z) if slope > T::zero() => ((z - offset) / slope / omega).max(t0),
            _ => T::infinity(),
        };
        let span = T::lit(GRADED_SPAN);
        if t_sat - t0 > span {
            if !(rate > T::lit(LAGUERRE_MAX_RATE)) {
                return self.rule.integrate_from(k, T::one(), t0, |t| g(omega * t)) * self.inv_k_fact;
            }
            let end = t0 + span;
            let head = self.graded(t0, end, rate, &g);
            let tail = self.rule.integrate_from(k, T::one(), end, |t| g(omega * t)) * self.inv_k_fact;
            return head + tail;
        }
        // beyond t_sat the integrand is constant
        let saturated = g(omega * (t_sat * T::lit(2.0) + T::one()));
        let head = if t_sat > t0 { self.graded(t0, t_sat, rate, &g) } else { T::zero() };
        head + saturated * gamma_sf_int(t_sat, k)
    }

    /// `int_a^b t^{K-1} e^{-t} g(Omega_I t) dt / (K-1)!` on panels that start
    /// at the integrand's fastest scale and double up to a fixed cap.
    fn graded(&self, a: T, b: T, rate: T, g: &impl Fn(T) -> T) -> T {
        let omega = self.cfg.omega_i();
        let power = (self.cfg.num_subcarriers() - 1) as i32;
        let f = |t: T| t.powi(power) * (-t).exp() * g(omega * t);
        let cap = T::lit(MAX_PANEL_WIDTH);
        let mut width = if rate > T::one() { T::one() / rate } else { T::one() };
        let mut lo = a;
        let mut acc = T::zero();
        while lo < b {
            let hi = (lo + width).min(b);
            acc = acc + self.panel.integrate(lo, hi, &f);
            lo = hi;
            width = (width * T::lit(2.0)).min(cap);
        }
        acc * self.inv_k_fact
    }

    fn imperfect(&self, sic: Sic) -> bool {
        sic == Sic::Imperfect && self.cfg.omega_i_total() > T::zero()
    }

    /// `Pr(T < Z_n < vartheta Y + beta)`, the "SIC succeeds, own decoding
    /// fails" term shared by both formulations.
    fn sic_failure_term(&self, th: &DerivedThresholds<T>, sic: Sic) -> T {
        let t = th.tau.value;
        if !th.tau.feasible {
            return T::zero();
        }
        let f_t = self.sorted_gain_cdf(t, PairedUser::N);
        if !self.imperfect(sic) {
            return (self.sorted_gain_cdf(th.beta, PairedUser::N) - f_t).max(T::zero());
        }
        let start = ((t - th.beta) / th.vartheta).max(T::zero());
        self.ri_expectation(start, th.vartheta, th.beta, |y| {
            (self.sorted_gain_cdf(th.vartheta * y + th.beta, PairedUser::N) - f_t).max(T::zero())
        })
    }

    /// Exact COP of the `m`-th user.
    pub fn cop_user_m(&self, rho: T) -> CopValue<T> {
        let th = self.thresholds(rho);
        let exact = if th.tau.feasible {
            self.sorted_gain_cdf(th.tau.value, PairedUser::M)
        } else {
            T::one()
        };
        let asy = self.asymptotic_user_m(&th);
        CopValue {
            exact,
            asymptotic: Some(asy.value),
            feasible: th.tau.feasible,
            asymptotic_clamped: asy.clamped,
            mode: EvalMode::user_m(),
            rho,
            thresholds: th,
        }
    }

    /// Exact COP of the `n`-th user under the given SIC and formulation.
    pub fn cop_user_n(&self, rho: T, sic: Sic, formulation: Formulation) -> CopValue<T> {
        let th = self.thresholds(rho);
        let (first, feasible) = match formulation {
            Formulation::Exf => (th.tau, th.tau.feasible),
            Formulation::Alf => (th.zeta, th.zeta.feasible),
        };
        let exact = if feasible {
            clamp_unit(self.sorted_gain_cdf(first.value, PairedUser::N) + self.sic_failure_term(&th, sic))
        } else {
            T::one()
        };
        let asy = self.asymptotic_user_n(&th, sic, formulation);
        CopValue {
            exact,
            asymptotic: Some(asy.value),
            feasible,
            asymptotic_clamped: asy.clamped,
            mode: EvalMode::user_n(sic, formulation),
            rho,
            thresholds: th,
        }
    }

    /// COP of the selected pair, `1 - (1 - P_m)(1 - P_n)`.
    pub fn cop_pair(&self, rho: T, sic: Sic, formulation: Formulation) -> CopValue<T> {
        let m = self.cop_user_m(rho);
        let n = self.cop_user_n(rho, sic, formulation);
        let asymptotic = match (m.asymptotic, n.asymptotic) {
            (Some(a), Some(b)) => Some(clamp_unit(a + b - a * b)),
            _ => None,
        };
        CopValue {
            exact: combine_pair(m.exact, n.exact),
            asymptotic,
            feasible: m.feasible && n.feasible,
            asymptotic_clamped: m.asymptotic_clamped || n.asymptotic_clamped,
            mode: EvalMode::pair(sic, formulation),
            rho,
            thresholds: m.thresholds,
        }
    }

    /// Dispatches on the mode's target.
    pub fn cop(&self, rho: T, mode: EvalMode) -> CopValue<T> {
        match mode.target {
            Target::UserM => self.cop_user_m(rho),
            Target::UserN => self.cop_user_n(rho, mode.sic, mode.formulation),
            Target::Pair => self.cop_pair(rho, mode.sic, mode.formulation),
        }
    }
}

fn saturation_point<T: Scalar>(table: &QuadratureTable<T>, k: usize, eta: T) -> Option<T> {
    if table.weight_sum() <= T::one() {
        return None;
    }
    let reached = |z: T| table.unsorted_gain_cdf(z, k, eta) >= T::one();
    let mut hi = T::one();
    while !reached(hi) {
        hi = hi * T::lit(2.0);
    }
    let mut lo = T::zero();
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if reached(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `1 - (1 - p_m)(1 - p_n)`, in a form that keeps precision for tiny inputs.
pub fn combine_pair<T: Scalar>(p_m: T, p_n: T) -> T {
    clamp_unit(p_m + p_n * (T::one() - p_m))
}

pub(crate) fn clamp_unit<T: Scalar>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// Diversity order predicted for the mode: `mK` / `nK` with perfect SIC,
/// zero with residual interference. Pairs inherit the `m`-th user's order.
pub fn expected_diversity_order<T: Scalar>(cfg: &SystemConfig<T>, mode: EvalMode) -> usize {
    let k = cfg.num_subcarriers();
    let ri = mode.sic == Sic::Imperfect && cfg.omega_i_total() > T::zero();
    match mode.target {
        Target::UserM => cfg.rank_m() * k,
        Target::UserN if ri => 0,
        Target::UserN => cfg.rank_n() * k,
        Target::Pair if ri => 0,
        Target::Pair => cfg.rank_m() * k,
    }
}

/// Exact COP of the `m`-th user.
pub fn cop_user_m<T: Scalar>(cfg: &SystemConfig<T>, rho: T) -> CopValue<T> {
    Analyzer::new(cfg).cop_user_m(rho)
}

/// Exact COP of the `n`-th user.
pub fn cop_user_n<T: Scalar>(cfg: &SystemConfig<T>, rho: T, mode: EvalMode) -> CopValue<T> {
    Analyzer::new(cfg).cop_user_n(rho, mode.sic, mode.formulation)
}

/// Exact COP of the pair.
pub fn cop_pair<T: Scalar>(cfg: &SystemConfig<T>, rho: T, mode: EvalMode) -> CopValue<T> {
    Analyzer::new(cfg).cop_pair(rho, mode.sic, mode.formulation)
}

/// High-SNR approximation for any mode.
pub fn asymptotic_cop<T: Scalar>(cfg: &SystemConfig<T>, rho: T, mode: EvalMode) -> Asymptote<T> {
    Analyzer::new(cfg).asymptotic(rho, mode)
}

/// CDF of the paired user's effective gain.
pub fn cdf_sorted_gain<T: Scalar>(cfg: &SystemConfig<T>, z: T, user: PairedUser) -> T {
    Analyzer::new(cfg).sorted_gain_cdf(z, user)
}

#[cfg(test)]
mod tests;
