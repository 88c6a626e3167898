//! Log-space helpers for factorials and Gamma values.

use statrs::function::{factorial, gamma};

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    factorial::ln_factorial(n)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// `n!` as a float; overflows to infinity above `170!`.
pub fn factorial(n: u64) -> f64 {
    factorial::factorial(n)
}
