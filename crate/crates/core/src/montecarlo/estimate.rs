use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::realization::{compute_sinrs, outage_events, ChannelRealization, SampleScalar};
use crate::config::{DerivedThresholds, EvalMode, SystemConfig, Target};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 14;

/// Empirical outage probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutageEstimate<T> {
    pub p_hat: T,
    pub stderr: T,
    pub hits: u64,
    pub trials: u64,
    pub seed: u64,
    pub mode: EvalMode,
}

impl<T: SampleScalar> OutageEstimate<T> {
    fn from_counts(hits: u64, trials: u64, seed: u64, mode: EvalMode) -> Self {
        let n = T::lit(trials as f64);
        let p_hat = T::lit(hits as f64) / n;
        OutageEstimate {
            p_hat,
            stderr: (p_hat * (T::one() - p_hat) / n).sqrt(),
            hits,
            trials,
            seed,
            mode,
        }
    }
}

/// Chunked, seed-deterministic outage estimator.
#[derive(Debug, Clone)]
pub struct Simulator<T> {
    cfg: SystemConfig<T>,
    chunk_size: u64,
}

impl<T: SampleScalar> Simulator<T> {
    pub fn new(cfg: &SystemConfig<T>) -> Self {
        Simulator {
            cfg: cfg.clone(),
            chunk_size: DEFAULT_CHUNK_SIZE,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> Self {
        assert!(chunk_size > 0, "chunk size must be positive");
        self.chunk_size = chunk_size;
        self
    }

    pub fn chunk_size(&self) -> u64 {
        self.chunk_size
    }

    /// Generator for chunk `index`: the seed selects the key, the chunk
    /// index selects the ChaCha stream.
    pub fn chunk_rng(seed: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    }

    /// Outage indicator counts for every mode over `trials` realizations.
    ///
    /// All modes share the same draws, so per-trial relations between modes
    /// (for instance ALF outage implying EXF outage) carry over to the counts.
    pub fn count(&self, rho: T, modes: &[EvalMode], trials: u64, seed: u64) -> Vec<u64> {
        let cfg = &self.cfg;
        let th = DerivedThresholds::new(cfg, rho);
        let chunks = trials.div_ceil(self.chunk_size);
        (0..chunks)
            .into_par_iter()
            .map(|index| {
                let len = self.chunk_size.min(trials - index * self.chunk_size);
                let mut rng = Self::chunk_rng(seed, index);
                let mut real = ChannelRealization::empty(cfg.num_users(), cfg.num_subcarriers());
                let mut counts = vec![0u64; modes.len()];
                for _ in 0..len {
                    real.resample(cfg, &mut rng);
                    let sinr = compute_sinrs(real.gain_m(cfg), real.gain_n(cfg), real.y_i, cfg, rho);
                    for (count, mode) in counts.iter_mut().zip(modes) {
                        let flags = outage_events(&sinr, &th, mode.sic, mode.formulation);
                        let hit = match mode.target {
                            Target::UserM => flags.m,
                            Target::UserN => flags.n,
                            Target::Pair => flags.pair,
                        };
                        *count += u64::from(hit);
                    }
                }
                counts
            })
            .reduce(
                || vec![0u64; modes.len()],
                |mut acc, part| {
                    acc.iter_mut().zip(part).for_each(|(a, p)| *a += p);
                    acc
                },
            )
    }

    pub fn estimate(&self, rho: T, modes: &[EvalMode], trials: u64, seed: u64) -> Vec<OutageEstimate<T>> {
        assert!(trials >= 1, "at least one trial required");
        self.count(rho, modes, trials, seed)
            .into_iter()
            .zip(modes)
            .map(|(hits, &mode)| OutageEstimate::from_counts(hits, trials, seed, mode))
            .collect()
    }

    /// Per-trial indicator sequence for one mode (diagnostics and tests).
    pub fn indicators(&self, rho: T, mode: EvalMode, trials: u64, seed: u64) -> Vec<bool> {
        let cfg = &self.cfg;
        let th = DerivedThresholds::new(cfg, rho);
        let mut out = Vec::with_capacity(trials as usize);
        let mut real = ChannelRealization::empty(cfg.num_users(), cfg.num_subcarriers());
        let chunks = trials.div_ceil(self.chunk_size);
        for index in 0..chunks {
            let len = self.chunk_size.min(trials - index * self.chunk_size);
            let mut rng = Self::chunk_rng(seed, index);
            for _ in 0..len {
                real.resample(cfg, &mut rng);
                let sinr = compute_sinrs(real.gain_m(cfg), real.gain_n(cfg), real.y_i, cfg, rho);
                let flags = outage_events(&sinr, &th, mode.sic, mode.formulation);
                out.push(match mode.target {
                    Target::UserM => flags.m,
                    Target::UserN => flags.n,
                    Target::Pair => flags.pair,
                });
            }
        }
        out
    }
}

/// Estimates one mode's outage probability.
pub fn estimate_cop<T: SampleScalar>(
    cfg: &SystemConfig<T>,
    rho: T,
    mode: EvalMode,
    trials: u64,
    seed: u64,
) -> OutageEstimate<T> {
    Simulator::new(cfg).estimate(rho, &[mode], trials, seed)[0]
}

/// Estimates several modes on shared draws.
pub fn estimate_cop_batch<T: SampleScalar>(
    cfg: &SystemConfig<T>,
    rho: T,
    modes: &[EvalMode],
    trials: u64,
    seed: u64,
) -> Vec<OutageEstimate<T>> {
    Simulator::new(cfg).estimate(rho, modes, trials, seed)
}
