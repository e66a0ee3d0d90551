use serde::Serialize;

use super::NumericsError;
use crate::Scalar;

const NEWTON_MAX_ITER: usize = 100;

/// Gauss–Laguerre rule for `int_0^inf e^{-t} g(t) dt`.
///
/// Integrals against an Erlang weight `y^{K-1} e^{-y/omega}` are mapped onto
/// it with `t = y / omega`, leaving the polynomial factor `t^{K-1}` inside
/// the integrand where the rule is exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiInfRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> SemiInfRule<T> {
    /// Builds the `n`-point rule by Newton iteration on the Laguerre
    /// three-term recurrence (nodes computed in `f64`).
    pub fn new(n: usize) -> Result<Self, NumericsError> {
        if n == 0 {
            return Err(NumericsError::ZeroNodes);
        }
        let nf = n as f64;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut z = 0.0f64;
        for i in 0..n {
            // asymptotic initial guesses
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            let mut deriv = 0.0;
            let mut prev = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let (p, p_prev) = laguerre_pair(n, z);
                prev = p_prev;
                deriv = nf * (p - p_prev) / z;
                let step = p / deriv;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let (p, p_prev) = laguerre_pair(n, z);
            deriv = if z != 0.0 { nf * (p - p_prev) / z } else { deriv };
            prev = if z != 0.0 { p_prev } else { prev };
            nodes.push(z);
            weights.push(-1.0 / (deriv * nf * prev));
        }
        Ok(SemiInfRule {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_0^inf y^{k-1} e^{-y/omega} f(y) dy`.
    pub fn integrate(&self, k: usize, omega: T, f: impl Fn(T) -> T) -> T {
        self.integrate_from(k, omega, T::zero(), f)
    }

    /// `int_{start}^inf y^{k-1} e^{-y/omega} f(y) dy` for `start >= 0`.
    ///
    /// Shifting the origin keeps a kink of `f` at `start` out of the
    /// quadrature's interior.
    pub fn integrate_from(&self, k: usize, omega: T, start: T, f: impl Fn(T) -> T) -> T {
        let power = (k.max(1) - 1) as i32;
        let sum: T = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| {
                let y = start + omega * t;
                w * y.powi(power) * f(y)
            })
            .sum();
        if start > T::zero() {
            omega * (-start / omega).exp() * sum
        } else {
            omega * sum
        }
    }
}

/// `(L_n(z), L_{n-1}(z))` by the three-term recurrence.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// Approximates `int_0^inf y^{k-1} e^{-y/omega} f(y) dy` with `rule`.
pub fn integrate_semi_infinite<T: Scalar>(
    f: impl Fn(T) -> T,
    k: usize,
    omega: T,
    rule: &SemiInfRule<T>,
) -> Result<T, NumericsError> {
    if k == 0 {
        return Err(NumericsError::ZeroShape);
    }
    if !(omega > T::zero()) {
        return Err(NumericsError::NonPositiveScale(omega.to_f64_lossy()));
    }
    Ok(rule.integrate(k, omega, f))
}
