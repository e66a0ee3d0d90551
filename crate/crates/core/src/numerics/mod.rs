//! Quadrature and distribution kernels shared by the analytic evaluators.

mod chebyshev;
mod erlang;
mod laguerre;
mod legendre;
mod order_stat;

pub use chebyshev::{build_chebyshev_table, QuadratureTable};
pub use erlang::{erlang_cdf, erlang_pdf, gamma_cdf_int, gamma_sf_int};
pub use laguerre::{integrate_semi_infinite, SemiInfRule};
pub use legendre::FiniteRule;
pub use order_stat::{order_stat_cdf, OrderStatistic};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("node count must be at least 1")]
    ZeroNodes,
    #[error("argument must be non-negative (got {0})")]
    NegativeArgument(f64),
    #[error("shape must be at least 1")]
    ZeroShape,
    #[error("scale must be positive (got {0})")]
    NonPositiveScale(f64),
    #[error("rank {rank} outside 1..={population}")]
    RankOutOfRange { rank: usize, population: usize },
}
