//! Log-space helpers for the closed-form expressions.

/// `ln(k!)`.
pub(crate) fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    if k <= 32 {
        return (2..=k).map(|i| libm::log(i as f64)).sum();
    }
    libm::lgamma(k as f64 + 1.0)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}
