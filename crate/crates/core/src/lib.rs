//! Connection-outage analysis for a unified downlink NOMA framework.
//!
//! A single evaluator covers code-domain NOMA (`K > 1` subcarriers) and
//! power-domain NOMA (`K = 1`). Users are dropped uniformly in a disk around
//! the base station, channels are Rayleigh over `K` subcarriers with a bounded
//! path loss `eta / (1 + d^alpha)`, and the strong (`n`-th) user runs perfect
//! or imperfect successive interference cancellation.
//!
//! The crate is organised bottom-up:
//!
//! * [`config`]: validated system parameters, thresholds and evaluation modes.
//! * [`numerics`]: Gauss–Chebyshev disk table, Erlang laws, Gauss–Laguerre
//!   semi-infinite rule and the order-statistics transform.
//! * [`analytic`]: closed-form and high-SNR outage expressions plus throughput.
//! * [`montecarlo`]: an independent simulator of the physical model.
//! * [`experiments`]: sweeps, slope fitting, error floors, validation reports
//!   and figure presets.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below pin the common `f64` instantiation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod config;
pub mod experiments;
pub mod montecarlo;
pub mod numerics;
mod scalar;

pub use scalar::Scalar;

pub use analytic::{Analyzer, CopValue, ThroughputPairing};
pub use config::{
    db_to_linear, ConfigError, ConfigOverrides, DerivedThresholds, EvalMode, Formulation, RawConfig, Sic,
    SystemConfig, Target, Threshold,
};
pub use montecarlo::{ChannelRealization, OutageEstimate};
pub use numerics::{NumericsError, QuadratureTable, SemiInfRule};

/// Double-precision system configuration.
pub type Config = SystemConfig<f64>;
/// Double-precision configuration candidate (pre-validation).
pub type RawConfig64 = RawConfig<f64>;
/// Double-precision outage evaluator.
pub type Analyzer64 = Analyzer<f64>;
/// Double-precision outage value.
pub type Cop = CopValue<f64>;
/// Double-precision Gauss–Chebyshev table.
pub type Table = QuadratureTable<f64>;
/// Double-precision semi-infinite rule.
pub type LaguerreRule = SemiInfRule<f64>;
/// Double-precision Monte Carlo estimate.
pub type Estimate = OutageEstimate<f64>;
