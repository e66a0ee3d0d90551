use super::NumericsError;
use crate::Scalar;

const SERIES_MAX_TERMS: usize = 2000;

/// Regularised lower incomplete gamma `P(k, y)` for integer shape, i.e. the
/// CDF of `Gamma(k, 1)`.
///
/// Below `y = k` the tail series `e^{-y} sum_{i>=k} y^i / i!` is used so that
/// tiny probabilities keep full relative precision; above it the finite
/// complement `1 - e^{-y} sum_{i<k} y^i / i!` is exact and stable.
pub fn gamma_cdf_int<T: Scalar>(y: T, k: usize) -> T {
    if y <= T::zero() {
        return T::zero();
    }
    if y.is_infinite() {
        return T::one();
    }
    if y < T::count(k) {
        // e^{-y} y^k / k!
        let mut term = (-y).exp();
        for i in 1..=k {
            term = term * y / T::count(i);
        }
        let mut sum = term;
        for i in (k + 1)..(k + SERIES_MAX_TERMS) {
            term = term * y / T::count(i);
            sum = sum + term;
            if term <= sum * T::epsilon() {
                break;
            }
        }
        sum.min(T::one())
    } else {
        T::one() - gamma_sf_int(y, k)
    }
}

/// Regularised upper incomplete gamma `Q(k, y) = e^{-y} sum_{i<k} y^i / i!`.
pub fn gamma_sf_int<T: Scalar>(y: T, k: usize) -> T {
    if y <= T::zero() {
        return T::one();
    }
    let mut term = T::one();
    let mut sum = T::one();
    for i in 1..k {
        term = term * y / T::count(i);
        sum = sum + term;
    }
    (-y).exp() * sum
}

/// CDF of the unit-scale Erlang law with shape `k`.
pub fn erlang_cdf<T: Scalar>(y: T, k: usize) -> Result<T, NumericsError> {
    if k == 0 {
        return Err(NumericsError::ZeroShape);
    }
    if y < T::zero() || y.is_nan() {
        return Err(NumericsError::NegativeArgument(y.to_f64_lossy()));
    }
    Ok(gamma_cdf_int(y, k))
}

/// Density `y^{k-1} e^{-y/omega} / ((k-1)! omega^k)` of the Erlang law with
/// shape `k` and scale `omega`.
pub fn erlang_pdf<T: Scalar>(y: T, k: usize, omega: T) -> Result<T, NumericsError> {
    if k == 0 {
        return Err(NumericsError::ZeroShape);
    }
    if !(omega > T::zero()) {
        return Err(NumericsError::NonPositiveScale(omega.to_f64_lossy()));
    }
    if y < T::zero() || y.is_nan() {
        return Err(NumericsError::NegativeArgument(y.to_f64_lossy()));
    }
    let t = y / omega;
    let mut density = (-t).exp() / omega;
    for i in 1..k {
        density = density * t / T::count(i);
    }
    Ok(density)
}
