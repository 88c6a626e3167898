//! Standardized Legendre polynomials `χ_n` with `χ_n(1) = 1`.
//!
//! Values come from the three-term recurrence
//! `(k+1) χ_{k+1}(t) = (2k+1) t χ_k(t) − k χ_{k−1}(t)`, never from the
//! Rodrigues derivative form. Degrees above [`MAX_DEGREE`] are rejected: for
//! arguments around `√n` the values leave the `f64` range soon after.

use crate::error::{Error, Result};
use crate::special::ln_factorial;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 120;

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(Error::Range(format!(
            "degree {n} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// `(χ_n(t), χ_n'(t))` without range checks.
///
/// The derivative uses `χ'_{k+1} = χ'_{k−1} + (2k+1) χ_k`, which stays
/// accurate arbitrarily close to `t = ±1`.
fn eval_with_derivative(n: usize, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, t);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * t * p - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
    }
    (p, d)
}

fn eval_raw(n: usize, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut p_prev, mut p) = (1.0, t);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * t * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    p
}

/// `χ_n(t)`.
pub fn eval(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("argument {t} is not finite")));
    }
    let v = eval_raw(n, t);
    if !v.is_finite() {
        return Err(Error::Range(format!("chi_{n}({t}) overflows f64")));
    }
    Ok(v)
}

/// `χ_n'(t)`.
///
/// At `t = ±1` the analytic limit `±n(n+1)/2` (sign `(−1)^{n+1}` at `−1`) is
/// returned directly.
pub fn eval_derivative(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    if !t.is_finite() {
        return Err(Error::Domain(format!("argument {t} is not finite")));
    }
    if n == 0 {
        return Ok(0.0);
    }
    let edge = (n * (n + 1)) as f64 / 2.0;
    if t == 1.0 {
        return Ok(edge);
    }
    if t == -1.0 {
        return Ok(if n % 2 == 1 { edge } else { -edge });
    }
    let (_, d) = eval_with_derivative(n, t);
    if !d.is_finite() {
        return Err(Error::Range(format!("chi_{n}'({t}) overflows f64")));
    }
    Ok(d)
}

const MAX_SOLVER_STEPS: usize = 400;

/// The inverse of `χ_n` restricted to `[1, ∞)`: the unique `γ ≥ 1` with
/// `χ_n(γ) = s`.
///
/// Bracket `[1, max(2, s)]`, expanded by doubling until `χ_n` exceeds `s`,
/// then Newton on `ln χ_n` with every iterate clamped to the bracket and a
/// bisection fallback. Bisection is geometric while the bracket spans more
/// than a factor of two.
pub fn inverse_on_ray(n: usize, s: f64) -> Result<f64> {
    check_degree(n)?;
    if n == 0 {
        return Err(Error::Domain("chi_0 is constant and has no inverse".into()));
    }
    if s.is_nan() || s < 1.0 {
        return Err(Error::Domain(format!(
            "chi_n maps [1, inf) onto [1, inf); got s = {s}"
        )));
    }
    if !s.is_finite() {
        return Err(Error::Range("s is infinite".into()));
    }
    if s == 1.0 {
        return Ok(1.0);
    }
    if n == 1 {
        return Ok(s);
    }

    let mut lo = 1.0_f64;
    let mut hi = s.max(2.0);
    loop {
        let v = eval_raw(n, hi);
        if !v.is_finite() || v >= s {
            break;
        }
        lo = hi;
        hi *= 2.0;
    }

    let ln_s = s.ln();
    // χ_n(cosh u) grows like e^{nu}.
    let guess = (ln_s / n as f64).cosh();
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        midpoint(lo, hi)
    };

    for _ in 0..MAX_SOLVER_STEPS {
        let (p, d) = eval_with_derivative(n, x);
        if !p.is_finite() || !d.is_finite() {
            hi = x;
            x = midpoint(lo, hi);
            continue;
        }
        if p > s {
            hi = x;
        } else if p < s {
            lo = x;
        } else {
            return Ok(x);
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            return Ok(x);
        }
        let step = (p.ln() - ln_s) * p / d;
        let next = x - step;
        if d > 0.0 && next.is_finite() && next > lo && next < hi {
            if step.abs() <= 1e-15 * x {
                return Ok(next);
            }
            x = next;
        } else {
            x = midpoint(lo, hi);
        }
    }
    Ok(x)
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    if hi > 2.0 * lo {
        (lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

/// Closed-form lower estimate of `χ_n^{-1}(s)`:
///
/// - `n = 2k`: `((k!)² s / (2k)!)^{1/(2k)}`
/// - `n = 2k+1`: `((k+1)! k! s / (2k+1)!)^{1/(2k+1)}`
///
/// For `n ≥ 2` and `s > 1` the estimate is strictly below the true inverse;
/// for `n = 1` it coincides with it.
pub fn inverse_lower_bound(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    if s.is_nan() || s < 1.0 {
        return Err(Error::Domain(format!("expected s >= 1, got {s}")));
    }
    let k = (n / 2) as u64;
    let ln_coeff = if n % 2 == 0 {
        2.0 * ln_factorial(k) - ln_factorial(2 * k)
    } else {
        ln_factorial(k + 1) + ln_factorial(k) - ln_factorial(2 * k + 1)
    };
    Ok(((ln_coeff + s.ln()) / n as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_examples() {
        assert_eq!(eval(2, 1.0).unwrap(), 1.0);
        assert_eq!(eval(1, 2.75).unwrap(), 2.75);
        assert!((eval(2, 3f64.sqrt()).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(eval(0, -7.0).unwrap(), 1.0);
    }

    #[test]
    fn value_at_one_up_to_sixty() {
        for n in 0..=60 {
            assert!((eval(n, 1.0).unwrap() - 1.0).abs() <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn degree_cap_and_overflow() {
        assert!(matches!(eval(121, 1.0), Err(Error::Range(_))));
        assert!(eval(120, 11.0).is_ok());
        assert!(matches!(eval(120, 1e5), Err(Error::Range(_))));
        assert!(matches!(eval(3, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(eval_derivative(1, -0.3).unwrap(), 1.0);
        assert!((eval_derivative(2, 2.0).unwrap() - 6.0).abs() < 1e-14);
        assert_eq!(eval_derivative(3, 1.0).unwrap(), 6.0);
        // χ_3'(−1) = 6, χ_2'(−1) = −3
        assert_eq!(eval_derivative(3, -1.0).unwrap(), 6.0);
        assert_eq!(eval_derivative(2, -1.0).unwrap(), -3.0);
        assert_eq!(eval_derivative(0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_matches_central_difference() {
        for n in 1..=30 {
            for &t in &[-0.9f64, -0.2, 0.4, 1.0 + 1e-3, 1.5, 3.0, 7.0] {
                let h = 1e-6 * f64::max(1.0, t.abs());
                let fd = (eval(n, t + h).unwrap() - eval(n, t - h).unwrap()) / (2.0 * h);
                let d = eval_derivative(n, t).unwrap();
                let scale = d.abs().max(eval(n, t).unwrap().abs()).max(1.0);
                assert!((fd - d).abs() <= 1e-6 * scale, "n={n} t={t}: {fd} vs {d}");
            }
        }
    }

    #[test]
    fn derivative_near_one_is_continuous() {
        for n in 1..=40 {
            let edge = eval_derivative(n, 1.0).unwrap();
            let near = eval_derivative(n, 1.0 + 1e-12).unwrap();
            assert!((edge - near).abs() <= 1e-8 * edge, "n={n}");
        }
    }

    #[test]
    fn inverse_examples() {
        for n in 1..=20 {
            assert_eq!(inverse_on_ray(n, 1.0).unwrap(), 1.0);
        }
        assert!((inverse_on_ray(2, 4.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        let s = eval(3, 2.5).unwrap();
        assert!((inverse_on_ray(3, s).unwrap() - 2.5).abs() < 1e-13);
    }

    #[test]
    fn inverse_domain() {
        assert!(matches!(inverse_on_ray(3, 0.99), Err(Error::Domain(_))));
        assert!(matches!(inverse_on_ray(0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(inverse_on_ray(3, f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(inverse_lower_bound(2, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn inverse_of_huge_values() {
        // Bracket [1, 1e300] cannot be evaluated directly at degree 120.
        let g = inverse_on_ray(120, 1e300).unwrap();
        let back = eval(120, g).unwrap();
        assert!((back / 1e300 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lower_bound_examples() {
        assert!((inverse_lower_bound(2, 4.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(inverse_lower_bound(2, 4.0).unwrap() < inverse_on_ray(2, 4.0).unwrap());
        assert!((inverse_lower_bound(3, 6.0).unwrap() - 2f64.cbrt()).abs() < 1e-14);
        assert!((inverse_lower_bound(1, 3.5).unwrap() - 3.5).abs() < 1e-14);
    }
}
