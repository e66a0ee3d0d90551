use serde::Serialize;

use super::{clamp_unit, Analyzer, PairedUser};
use crate::config::{DerivedThresholds, EvalMode, Formulation, Sic, Target};
use crate::Scalar;

/// High-SNR outage approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote<T> {
    pub value: T,
    /// The raw expression fell outside `[0, 1]`.
    pub clamped: bool,
}

impl<T: Scalar> Asymptote<T> {
    fn new(raw: T) -> Self {
        let value = clamp_unit(raw);
        Asymptote {
            value,
            clamped: value != raw,
        }
    }

    fn certain() -> Self {
        Asymptote {
            value: T::one(),
            clamped: false,
        }
    }
}

impl<T: Scalar> Analyzer<T> {
    /// Leading power law `C(M, r) [sum_u b_u (x c_u / eta)^K / K!]^r` of the
    /// rank-`r` gain CDF.
    pub fn power_law(&self, x: T, user: PairedUser) -> T {
        let stat = self.stat(user);
        let inner = self
            .table
            .unsorted_gain_cdf_leading(x, self.cfg.num_subcarriers(), self.cfg.eta());
        stat.leading_coefficient() * inner.powi(stat.rank() as i32)
    }

    /// SNR-independent outage floor `E[F_n(vartheta Y)]` reached with
    /// residual interference. Zero without residual interference.
    pub fn error_floor(&self) -> T {
        if self.cfg.omega_i_total() == T::zero() {
            return T::zero();
        }
        let vartheta = self.cfg.eps_n() / self.cfg.a_n();
        clamp_unit(self.ri_expectation(T::zero(), vartheta, T::zero(), |y| {
            self.sorted_gain_cdf(vartheta * y, PairedUser::N)
        }))
    }

    pub(super) fn asymptotic_user_m(&self, th: &DerivedThresholds<T>) -> Asymptote<T> {
        if !th.tau.feasible {
            return Asymptote::certain();
        }
        Asymptote::new(self.power_law(th.tau.value, PairedUser::M))
    }

    pub(super) fn asymptotic_user_n(
        &self,
        th: &DerivedThresholds<T>,
        sic: Sic,
        formulation: Formulation,
    ) -> Asymptote<T> {
        let law = |x: T| self.power_law(x, PairedUser::N);
        if !th.tau.feasible {
            // SIC of the m-th message never succeeds
            return match formulation {
                Formulation::Alf if th.upsilon.feasible => Asymptote::new(law(th.upsilon.value)),
                _ => Asymptote::certain(),
            };
        }
        let tau = th.tau.value;
        let ri = self.imperfect(sic);
        let raw = match (formulation, ri) {
            (Formulation::Exf, false) => law(tau.max(th.beta)),
            (Formulation::Exf, true) => self.error_floor(),
            (Formulation::Alf, false) => law(th.zeta.value) + law(tau.max(th.beta)) - law(tau),
            (Formulation::Alf, true) => law(th.zeta.value) - law(tau) + self.error_floor(),
        };
        Asymptote::new(raw)
    }

    /// High-SNR approximation for any mode at linear SNR `rho`.
    pub fn asymptotic(&self, rho: T, mode: EvalMode) -> Asymptote<T> {
        let th = self.thresholds(rho);
        match mode.target {
            Target::UserM => self.asymptotic_user_m(&th),
            Target::UserN => self.asymptotic_user_n(&th, mode.sic, mode.formulation),
            Target::Pair => {
                let m = self.asymptotic_user_m(&th);
                let n = self.asymptotic_user_n(&th, mode.sic, mode.formulation);
                let joint = Asymptote::new(m.value + n.value - m.value * n.value);
                Asymptote {
                    value: joint.value,
                    clamped: joint.clamped || m.clamped || n.clamped,
                }
            }
        }
    }
}
