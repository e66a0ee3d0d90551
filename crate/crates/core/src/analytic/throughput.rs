use serde::{Deserialize, Serialize};

use super::Analyzer;
use crate::config::{Formulation, Sic};
use crate::Scalar;

/// How success probabilities are paired with target rates in the
/// delay-limited throughput.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThroughputPairing {
    /// `(1 - P_m) R_n + (1 - P_n) R_m`.
    #[default]
    AsPrinted,
    /// `(1 - P_m) R_m + (1 - P_n) R_n`.
    Conventional,
}

impl std::str::FromStr for ThroughputPairing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "as_printed" => Ok(ThroughputPairing::AsPrinted),
            "conventional" => Ok(ThroughputPairing::Conventional),
            other => Err(format!("unknown throughput pairing {other:?}")),
        }
    }
}

/// Delay-limited throughput from the two outage probabilities.
pub fn delay_limited_throughput<T: Scalar>(
    p_m: T,
    p_n: T,
    r_m: T,
    r_n: T,
    pairing: ThroughputPairing,
) -> T {
    let (s_m, s_n) = (T::one() - p_m, T::one() - p_n);
    match pairing {
        ThroughputPairing::AsPrinted => s_m * r_n + s_n * r_m,
        ThroughputPairing::Conventional => s_m * r_m + s_n * r_n,
    }
}

impl<T: Scalar> Analyzer<T> {
    /// System throughput in BPCU at linear SNR `rho`.
    pub fn throughput(&self, rho: T, sic: Sic, formulation: Formulation) -> T {
        let p_m = self.cop_user_m(rho).exact;
        let p_n = self.cop_user_n(rho, sic, formulation).exact;
        delay_limited_throughput(p_m, p_n, self.cfg.r_m(), self.cfg.r_n(), self.cfg.throughput_pairing())
    }
}

/// Delay-limited throughput for the configuration.
pub fn throughput_delay_limited<T: Scalar>(
    cfg: &crate::SystemConfig<T>,
    rho: T,
    sic: Sic,
    formulation: Formulation,
) -> T {
    Analyzer::new(cfg).throughput(rho, sic, formulation)
}
