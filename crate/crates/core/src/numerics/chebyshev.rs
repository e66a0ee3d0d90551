use serde::Serialize;

use super::erlang::gamma_cdf_int;
use super::NumericsError;
use crate::Scalar;

/// Gauss–Chebyshev discretisation of the uniform-disk distance law.
///
/// For `r = R_D (theta + 1) / 2`, the disk average of a function of the
/// path-loss factor `1 + r^alpha` becomes `sum_u b_u g(c_u)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureTable<T> {
    pub theta: Vec<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

impl<T: Scalar> QuadratureTable<T> {
    pub fn new(nodes: usize, r_d: T, alpha: T) -> Result<Self, NumericsError> {
        if nodes == 0 {
            return Err(NumericsError::ZeroNodes);
        }
        let u_count = T::count(nodes);
        let half = T::lit(0.5);
        let mut theta = Vec::with_capacity(nodes);
        let mut b = Vec::with_capacity(nodes);
        let mut c = Vec::with_capacity(nodes);
        for u in 1..=nodes {
            let angle = T::count(2 * u - 1) * T::PI() / (T::lit(2.0) * u_count);
            // cos is not exactly zero at pi/2 in floating point
            let th = if 2 * u - 1 == nodes {
                T::zero()
            } else {
                angle.cos()
            };
            let weight = T::PI() / (T::lit(2.0) * u_count) * (T::one() - th * th).sqrt() * (th + T::one());
            theta.push(th);
            b.push(weight);
            c.push(T::one() + (r_d * (th + T::one()) * half).powf(alpha));
        }
        Ok(QuadratureTable { theta, b, c })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn weight_sum(&self) -> T {
        self.b.iter().copied().sum()
    }

    /// Approximate CDF of one user's unsorted effective gain
    /// `eta / (1 + d^alpha) * Gamma(K, 1)` at `z`.
    pub fn unsorted_gain_cdf(&self, z: T, k: usize, eta: T) -> T {
        if z <= T::zero() {
            return T::zero();
        }
        self.b
            .iter()
            .zip(&self.c)
            .map(|(&b, &c)| b * gamma_cdf_int(z * c / eta, k))
            .sum()
    }

    /// Small-argument form `sum_u b_u (z c_u / eta)^K / K!` of
    /// [`unsorted_gain_cdf`](Self::unsorted_gain_cdf).
    pub fn unsorted_gain_cdf_leading(&self, z: T, k: usize, eta: T) -> T {
        let k_fact = (1..=k).fold(T::one(), |acc, i| acc * T::count(i));
        self.b
            .iter()
            .zip(&self.c)
            .map(|(&b, &c)| b * (z * c / eta).powi(k as i32))
            .sum::<T>()
            / k_fact
    }
}

/// Builds the `U`-node table for disk radius `r_d` and path-loss exponent
/// `alpha`.
pub fn build_chebyshev_table<T: Scalar>(
    nodes: usize,
    r_d: T,
    alpha: T,
) -> Result<QuadratureTable<T>, NumericsError> {
    QuadratureTable::new(nodes, r_d, alpha)
}
