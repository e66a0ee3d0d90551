use super::NumericsError;
use crate::Scalar;

/// CDF transform from one unsorted draw to the `rank`-th smallest of
/// `population` i.i.d. draws:
///
/// `F_(m)(z) = phi_m sum_{p=0}^{M-m} C(M-m, p) (-1)^p / (m+p) F(z)^{m+p}`,
/// with `phi_m = M! / ((M-m)! (m-1)!)`.
///
/// Coefficients are formed in floating point; this stays accurate for
/// `population <= 20`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStatistic<T> {
    rank: usize,
    population: usize,
    /// `phi_m C(M-m, p) (-1)^p / (m+p)` for `p = 0..=M-m`.
    coeffs: Vec<T>,
}

impl<T: Scalar> OrderStatistic<T> {
    pub fn new(rank: usize, population: usize) -> Result<Self, NumericsError> {
        if rank == 0 || rank > population {
            return Err(NumericsError::RankOutOfRange { rank, population });
        }
        let phi = falling(population, rank) / falling(rank - 1, rank - 1);
        let tail = population - rank;
        let mut binom = 1.0f64;
        let coeffs = (0..=tail)
            .map(|p| {
                if p > 0 {
                    binom = binom * (tail - p + 1) as f64 / p as f64;
                }
                let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
                T::lit(phi * binom * sign / (rank + p) as f64)
            })
            .collect();
        Ok(OrderStatistic {
            rank,
            population,
            coeffs,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn population(&self) -> usize {
        self.population
    }

    /// Binomial prefactor `M! / ((M-m)! m!)` of the leading small-`F` term.
    pub fn leading_coefficient(&self) -> T {
        self.coeffs[0]
    }

    /// Applies the transform to an unsorted CDF value `f`.
    pub fn apply(&self, f: T) -> T {
        if f <= T::zero() {
            return T::zero();
        }
        // Horner in f, then scale by f^m
        let inner = self
            .coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * f + c);
        inner * f.powi(self.rank as i32)
    }
}

/// `n! / (n-k)!` as `f64`.
fn falling(n: usize, k: usize) -> f64 {
    ((n - k + 1)..=n).map(|i| i as f64).product()
}

/// Evaluates the `rank`-th order-statistic CDF at `z` given the unsorted CDF.
pub fn order_stat_cdf<T: Scalar>(
    unsorted_cdf: impl Fn(T) -> T,
    z: T,
    rank: usize,
    population: usize,
) -> Result<T, NumericsError> {
    Ok(OrderStatistic::new(rank, population)?.apply(unsorted_cdf(z)))
}
