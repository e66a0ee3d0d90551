//! System parameters, derived SINR thresholds and evaluation modes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::ThroughputPairing;
use crate::Scalar;

/// Power ratio in dB to linear scale.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("POWER_SPLIT: a_m + a_n must equal 1 with a_m > a_n > 0 (got a_m={a_m}, a_n={a_n})")]
    PowerSplit { a_m: f64, a_n: f64 },
    #[error("ORDER: ranks must satisfy 1 <= m < n <= M (got m={m}, n={n}, M={users})")]
    Order { m: usize, n: usize, users: usize },
    #[error("NEGATIVE: {name} must be {requirement} (got {value})")]
    Negative {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
}

impl ConfigError {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::PowerSplit { .. } => "POWER_SPLIT",
            ConfigError::Order { .. } => "ORDER",
            ConfigError::Negative { .. } => "NEGATIVE",
        }
    }
}

/// Unvalidated parameter set. Field names double as the JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig<T> {
    /// Number of users in the disk (`M`).
    pub num_users: usize,
    /// Subcarriers per user (`K`); `1` selects power-domain NOMA.
    pub num_subcarriers: usize,
    /// Rank of the weak user (`m`).
    pub rank_m: usize,
    /// Rank of the strong user (`n`).
    pub rank_n: usize,
    pub a_m: T,
    pub a_n: T,
    /// Target rate of the `m`-th user, BPCU.
    pub r_m: T,
    /// Target rate of the `n`-th user, BPCU.
    pub r_n: T,
    pub alpha: T,
    pub eta: T,
    /// Disk radius in meters.
    pub r_d: T,
    /// Total residual-interference power `E{|h_I|^2}` (linear).
    pub omega_i_total: T,
    /// Gauss–Chebyshev node count `U`.
    pub cheb_nodes: usize,
    /// Gauss–Laguerre node count for the residual-interference integrals.
    pub semi_nodes: usize,
    pub throughput_pairing: ThroughputPairing,
}

impl<T: Scalar> RawConfig<T> {
    /// Default parameter set of the numerical study: M=3, K=2, (m, n)=(1, 2),
    /// (a_m, a_n)=(0.8, 0.2), R_m=R_n=0.01 BPCU, alpha=2, eta=1, R_D=2 m and
    /// residual interference -30 dB.
    pub fn baseline() -> Self {
        RawConfig {
            num_users: 3,
            num_subcarriers: 2,
            rank_m: 1,
            rank_n: 2,
            a_m: T::lit(0.8),
            a_n: T::lit(0.2),
            r_m: T::lit(0.01),
            r_n: T::lit(0.01),
            alpha: T::lit(2.0),
            eta: T::one(),
            r_d: T::lit(2.0),
            omega_i_total: db_to_linear(T::lit(-30.0)),
            cheb_nodes: 15,
            semi_nodes: 64,
            throughput_pairing: ThroughputPairing::AsPrinted,
        }
    }

    pub fn validate(self) -> Result<SystemConfig<T>, ConfigError> {
        let positive = |name: &'static str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Negative {
                    name,
                    requirement: "positive and finite",
                    value: v.to_f64_lossy(),
                })
            }
        };
        let count = |name: &'static str, v: usize| {
            if v >= 1 {
                Ok(())
            } else {
                Err(ConfigError::Negative {
                    name,
                    requirement: "at least 1",
                    value: 0.0,
                })
            }
        };
        count("num_users", self.num_users)?;
        count("num_subcarriers", self.num_subcarriers)?;
        count("cheb_nodes", self.cheb_nodes)?;
        count("semi_nodes", self.semi_nodes)?;
        if !(1 <= self.rank_m && self.rank_m < self.rank_n && self.rank_n <= self.num_users) {
            return Err(ConfigError::Order {
                m: self.rank_m,
                n: self.rank_n,
                users: self.num_users,
            });
        }
        positive("a_m", self.a_m)?;
        positive("a_n", self.a_n)?;
        let split_tol = T::epsilon() * T::lit(4.0);
        if (self.a_m + self.a_n - T::one()).abs() > split_tol || self.a_m <= self.a_n {
            return Err(ConfigError::PowerSplit {
                a_m: self.a_m.to_f64_lossy(),
                a_n: self.a_n.to_f64_lossy(),
            });
        }
        positive("r_m", self.r_m)?;
        positive("r_n", self.r_n)?;
        if !(self.alpha >= T::lit(2.0) && self.alpha.is_finite()) {
            return Err(ConfigError::Negative {
                name: "alpha",
                requirement: "finite and >= 2",
                value: self.alpha.to_f64_lossy(),
            });
        }
        positive("eta", self.eta)?;
        positive("r_d", self.r_d)?;
        if !(self.omega_i_total >= T::zero() && self.omega_i_total.is_finite()) {
            return Err(ConfigError::Negative {
                name: "omega_i_total",
                requirement: "finite and non-negative",
                value: self.omega_i_total.to_f64_lossy(),
            });
        }
        Ok(SystemConfig { raw: self })
    }
}

/// Validated, immutable system configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SystemConfig<T> {
    raw: RawConfig<T>,
}

/// Validates a candidate configuration.
pub fn validate_config<T: Scalar>(raw: RawConfig<T>) -> Result<SystemConfig<T>, ConfigError> {
    raw.validate()
}

impl<T: Scalar> SystemConfig<T> {
    pub fn baseline() -> Self {
        RawConfig::baseline()
            .validate()
            .expect("default parameters are valid")
    }

    /// Copy of the parameters for building a modified candidate.
    pub fn to_raw(&self) -> RawConfig<T> {
        self.raw.clone()
    }

    pub fn raw(&self) -> &RawConfig<T> {
        &self.raw
    }

    pub fn num_users(&self) -> usize {
        self.raw.num_users
    }
    pub fn num_subcarriers(&self) -> usize {
        self.raw.num_subcarriers
    }
    pub fn rank_m(&self) -> usize {
        self.raw.rank_m
    }
    pub fn rank_n(&self) -> usize {
        self.raw.rank_n
    }
    pub fn a_m(&self) -> T {
        self.raw.a_m
    }
    pub fn a_n(&self) -> T {
        self.raw.a_n
    }
    pub fn r_m(&self) -> T {
        self.raw.r_m
    }
    pub fn r_n(&self) -> T {
        self.raw.r_n
    }
    pub fn alpha(&self) -> T {
        self.raw.alpha
    }
    pub fn eta(&self) -> T {
        self.raw.eta
    }
    pub fn r_d(&self) -> T {
        self.raw.r_d
    }
    pub fn omega_i_total(&self) -> T {
        self.raw.omega_i_total
    }
    /// Per-subcarrier residual-interference variance `Omega_I = total / K`.
    pub fn omega_i(&self) -> T {
        self.raw.omega_i_total / T::count(self.raw.num_subcarriers)
    }
    pub fn cheb_nodes(&self) -> usize {
        self.raw.cheb_nodes
    }
    pub fn semi_nodes(&self) -> usize {
        self.raw.semi_nodes
    }
    pub fn throughput_pairing(&self) -> ThroughputPairing {
        self.raw.throughput_pairing
    }
    pub fn eps_m(&self) -> T {
        rate_threshold(self.raw.r_m)
    }
    pub fn eps_n(&self) -> T {
        rate_threshold(self.raw.r_n)
    }
}

/// Partial parameter set, as read from a JSON config file or assembled from
/// command-line flags. Unset fields fall through to the base configuration.
///
/// The residual-interference power may be given linearly (`omega_i_total`)
/// or in dB (`omega_i_total_db`), not both.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Deserialize<'de>"))]
pub struct ConfigOverrides<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_users: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num_subcarriers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_m: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_n: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_m: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_n: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_d: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_i_total: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_i_total_db: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cheb_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semi_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub throughput_pairing: Option<ThroughputPairing>,
}

impl<T: Scalar + serde::de::DeserializeOwned> ConfigOverrides<T> {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let parsed: Self = serde_json::from_str(text)?;
        if parsed.omega_i_total.is_some() && parsed.omega_i_total_db.is_some() {
            return Err(serde::de::Error::custom(
                "omega_i_total and omega_i_total_db are mutually exclusive",
            ));
        }
        Ok(parsed)
    }
}

impl<T: Scalar> ConfigOverrides<T> {
    /// Layers `top` over `self`: fields set in `top` win.
    pub fn merge(self, top: ConfigOverrides<T>) -> Self {
        let (omega_i_total, omega_i_total_db) =
            if top.omega_i_total.is_some() || top.omega_i_total_db.is_some() {
                (top.omega_i_total, top.omega_i_total_db)
            } else {
                (self.omega_i_total, self.omega_i_total_db)
            };
        ConfigOverrides {
            num_users: top.num_users.or(self.num_users),
            num_subcarriers: top.num_subcarriers.or(self.num_subcarriers),
            rank_m: top.rank_m.or(self.rank_m),
            rank_n: top.rank_n.or(self.rank_n),
            a_m: top.a_m.or(self.a_m),
            a_n: top.a_n.or(self.a_n),
            r_m: top.r_m.or(self.r_m),
            r_n: top.r_n.or(self.r_n),
            alpha: top.alpha.or(self.alpha),
            eta: top.eta.or(self.eta),
            r_d: top.r_d.or(self.r_d),
            omega_i_total,
            omega_i_total_db,
            cheb_nodes: top.cheb_nodes.or(self.cheb_nodes),
            semi_nodes: top.semi_nodes.or(self.semi_nodes),
            throughput_pairing: top.throughput_pairing.or(self.throughput_pairing),
        }
    }

    /// Applies the set fields to `base`. dB values are converted here, once.
    pub fn apply(&self, mut base: RawConfig<T>) -> RawConfig<T> {
        macro_rules! set {
            ($($f:ident),*) => {$(
                if let Some(v) = self.$f {
                    base.$f = v;
                }
            )*};
        }
        set!(
            num_users,
            num_subcarriers,
            rank_m,
            rank_n,
            a_m,
            a_n,
            r_m,
            r_n,
            alpha,
            eta,
            r_d,
            omega_i_total,
            cheb_nodes,
            semi_nodes,
            throughput_pairing
        );
        if let Some(db) = self.omega_i_total_db {
            base.omega_i_total = db_to_linear(db);
        }
        base
    }
}

/// SINR threshold `2^R - 1` for a target rate in BPCU.
pub fn rate_threshold<T: Scalar>(rate: T) -> T {
    // exp_m1 keeps precision for the small rates used in IoT-style settings.
    (rate * T::LN_2()).exp_m1()
}

/// A composite outage threshold on the effective channel gain.
///
/// Infeasible thresholds carry `+inf`: the corresponding SINR can never reach
/// its target, so the event "gain below threshold" is certain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold<T> {
    pub value: T,
    pub feasible: bool,
}

impl<T: Scalar> Threshold<T> {
    fn finite(value: T) -> Self {
        Threshold {
            value,
            feasible: true,
        }
    }

    fn infeasible() -> Self {
        Threshold {
            value: T::infinity(),
            feasible: false,
        }
    }

    /// `num / (rho * den)` when `den > 0`, otherwise infeasible.
    fn ratio(num: T, rho: T, den: T) -> Self {
        if den > T::zero() {
            Self::finite(num / (rho * den))
        } else {
            Self::infeasible()
        }
    }
}

/// Thresholds at one transmit SNR.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedThresholds<T> {
    pub rho: T,
    pub eps_m: T,
    pub eps_n: T,
    /// Gain below which the `m`-th message cannot be decoded (by either user).
    pub tau: Threshold<T>,
    /// Gain below which the `n`-th user fails after perfect SIC.
    pub beta: T,
    /// Slope of the `n`-th user's threshold in the residual-interference power
    /// (imperfect SIC).
    pub vartheta: T,
    /// Gain below which direct decoding (no SIC) of the `n`-th message fails.
    pub upsilon: Threshold<T>,
    /// `min(tau, upsilon)`; equals `tau` when `upsilon` is infeasible.
    pub zeta: Threshold<T>,
}

impl<T: Scalar> DerivedThresholds<T> {
    pub fn new(cfg: &SystemConfig<T>, rho: T) -> Self {
        assert!(rho > T::zero(), "transmit SNR must be positive");
        let (a_m, a_n) = (cfg.a_m(), cfg.a_n());
        let eps_m = cfg.eps_m();
        let eps_n = cfg.eps_n();
        let tau = Threshold::ratio(eps_m, rho, a_m - eps_m * a_n);
        let upsilon = Threshold::ratio(eps_n, rho, a_n - eps_n * a_m);
        let zeta = if tau.value <= upsilon.value {
            tau
        } else {
            upsilon
        };
        DerivedThresholds {
            rho,
            eps_m,
            eps_n,
            tau,
            beta: eps_n / (rho * a_n),
            vartheta: eps_n / a_n,
            upsilon,
            zeta,
        }
    }
}

/// Derives all thresholds at linear SNR `rho`.
pub fn derive_thresholds<T: Scalar>(cfg: &SystemConfig<T>, rho: T) -> DerivedThresholds<T> {
    DerivedThresholds::new(cfg, rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sic {
    Perfect,
    Imperfect,
}

/// Outage formulation of the `n`-th user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    /// Outage whenever SIC of the `m`-th message fails.
    Exf,
    /// Falls back to direct decoding when SIC of the `m`-th message fails.
    Alf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    UserM,
    UserN,
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvalMode {
    pub target: Target,
    pub sic: Sic,
    pub formulation: Formulation,
}

impl EvalMode {
    pub const fn new(target: Target, sic: Sic, formulation: Formulation) -> Self {
        EvalMode {
            target,
            sic,
            formulation,
        }
    }

    /// The `m`-th user's mode; SIC and formulation do not affect it.
    pub const fn user_m() -> Self {
        EvalMode::new(Target::UserM, Sic::Perfect, Formulation::Exf)
    }

    pub const fn user_n(sic: Sic, formulation: Formulation) -> Self {
        EvalMode::new(Target::UserN, sic, formulation)
    }

    pub const fn pair(sic: Sic, formulation: Formulation) -> Self {
        EvalMode::new(Target::Pair, sic, formulation)
    }

    /// The `m`-th user followed by every `n`-th user and pair mode.
    pub fn all() -> Vec<EvalMode> {
        let mut modes = vec![EvalMode::user_m()];
        for target in [Target::UserN, Target::Pair] {
            for sic in [Sic::Perfect, Sic::Imperfect] {
                for formulation in [Formulation::Exf, Formulation::Alf] {
                    modes.push(EvalMode::new(target, sic, formulation));
                }
            }
        }
        modes
    }

    /// Collapses fields that do not influence the outcome.
    pub fn canonical(self) -> Self {
        match self.target {
            Target::UserM => EvalMode::user_m(),
            _ => self,
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let target = match self.target {
            Target::UserM => return f.write_str("m"),
            Target::UserN => "n",
            Target::Pair => "pair",
        };
        let sic = match self.sic {
            Sic::Perfect => "psic",
            Sic::Imperfect => "ipsic",
        };
        let form = match self.formulation {
            Formulation::Exf => "exf",
            Formulation::Alf => "alf",
        };
        write!(f, "{target}-{sic}-{form}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognised mode {0:?}; expected m, or {{n,pair}}-{{psic,ipsic}}-{{exf,alf}}")]
pub struct ParseModeError(pub String);

impl FromStr for EvalMode {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseModeError(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split(['-', ':', '/']).collect();
        let target = match parts.first().copied() {
            Some("m") => Target::UserM,
            Some("n") => Target::UserN,
            Some("pair") => Target::Pair,
            _ => return Err(err()),
        };
        let mut sic = Sic::Perfect;
        let mut formulation = Formulation::Exf;
        let mut seen_sic = false;
        let mut seen_form = false;
        for part in &parts[1..] {
            match *part {
                "psic" if !seen_sic => (sic, seen_sic) = (Sic::Perfect, true),
                "ipsic" if !seen_sic => (sic, seen_sic) = (Sic::Imperfect, true),
                "exf" if !seen_form => (formulation, seen_form) = (Formulation::Exf, true),
                "alf" if !seen_form => (formulation, seen_form) = (Formulation::Alf, true),
                _ => return Err(err()),
            }
        }
        if target != Target::UserM && !(seen_sic && seen_form) {
            return Err(err());
        }
        Ok(EvalMode::new(target, sic, formulation).canonical())
    }
}
