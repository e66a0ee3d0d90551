use serde::Serialize;

use super::NumericsError;
use crate::Scalar;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> FiniteRule<T> {
    /// `n`-point rule, nodes by Newton iteration from Chebyshev guesses.
    pub fn new(n: usize) -> Result<Self, NumericsError> {
        if n == 0 {
            return Err(NumericsError::ZeroNodes);
        }
        let nf = n as f64;
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        for i in 0..n.div_ceil(2) {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, z);
                dp = nf * (z * p - p_prev) / (z * z - 1.0);
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (p, p_prev) = legendre_pair(n, z);
            if z * z != 1.0 {
                dp = nf * (z * p - p_prev) / (z * z - 1.0);
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(FiniteRule {
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

    /// `int_a^b f(t) dt`.
    pub fn integrate(&self, a: T, b: T, f: impl Fn(T) -> T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<T>()
    }
}

/// `(P_n(z), P_{n-1}(z))` by the three-term recurrence.
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_point_rule() {
        let r = FiniteRule::<f64>::new(2).unwrap();
        assert_relative_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(r.weights[0], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn odd_rule_has_centre_node() {
        let r = FiniteRule::<f64>::new(5).unwrap();
        assert!(r.nodes[2].abs() < 1e-16);
        assert_relative_eq!(r.weights[2], 128.0 / 225.0, max_relative = 1e-14);
        assert_relative_eq!(r.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let r = FiniteRule::<f64>::new(8).unwrap();
        for d in 0..16 {
            let got = r.integrate(0.0, 2.0, |t| t.powi(d));
            let want = 2f64.powi(d + 1) / (d + 1) as f64;
            assert_relative_eq!(got, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn exponential_on_wide_panel() {
        let r = FiniteRule::<f64>::new(20).unwrap();
        let got = r.integrate(0.0, 20.0, |t| (-t).exp());
        assert_relative_eq!(got, -(-20f64).exp_m1(), max_relative = 1e-14);
    }

    #[test]
    fn zero_nodes_rejected() {
        assert_eq!(FiniteRule::<f64>::new(0), Err(NumericsError::ZeroNodes));
    }
}
