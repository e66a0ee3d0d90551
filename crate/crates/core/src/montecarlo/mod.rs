//! Monte Carlo simulator of the physical model, used as an independent
//! oracle for the analytic expressions.
//!
//! Users are dropped uniformly in the disk, every user sees `K` independent
//! unit-variance Rayleigh subcarriers scaled by the bounded path loss, and
//! the paired users are the `m`-th and `n`-th smallest effective gains of one
//! draw. Residual interference is a `K`-element complex Gaussian vector of
//! per-element variance `Omega_I`.
//!
//! Trials run in fixed-size chunks; chunk `i` draws from a ChaCha8 stream
//! keyed by `(seed, i)`, so estimates do not depend on the worker count.

mod estimate;
mod realization;

pub use estimate::{estimate_cop, estimate_cop_batch, OutageEstimate, Simulator, DEFAULT_CHUNK_SIZE};
pub use realization::{
    compute_sinrs, outage_events, sample_realization, ChannelRealization, OutageFlags, SampleScalar,
    SinrRecord,
};
