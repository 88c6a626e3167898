//! Lower bounds on projector norms over `B_n`.
//!
//! For a simplex `S ⊂ B_n` with projector `P`,
//! `‖P‖ ≥ γ* = χ_n^{-1}(ϰ_n / vol S)`. Since `vol S ≤ σ_n`, the
//! dimension-only bound `θ_n(B_n) ≥ χ_n^{-1}(ϰ_n / σ_n)` follows, and that in
//! turn exceeds `c √n` with `c = π^{1/3} / (√(12e) · 3^{1/6})`.
//!
//! All ratios of large quantities are formed from logarithms before the
//! inverse Legendre function is applied.

use serde::Serialize;
use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::legendre::{self, MAX_DEGREE};
use crate::norms;
use crate::simplex::{ln_ball_volume, ln_regular_simplex_volume, Simplex};
use crate::special::ln_factorial;

/// Uniform numerical slack for the norm-versus-bound inequalities.
pub const SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundCertificate {
    pub dimension: usize,
    pub volume: f64,
    /// `ϰ_n / vol(S)`.
    pub ratio: f64,
    /// `χ_n^{-1}(ratio)`.
    pub gamma_star: f64,
    pub computed_norm: f64,
    /// `computed_norm − gamma_star`.
    pub slack: f64,
}

impl LowerBoundCertificate {
    pub fn holds(&self) -> bool {
        self.slack >= -SLACK_TOLERANCE
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "dimension must lie in 1..={MAX_DEGREE}, got {n}"
        )));
    }
    Ok(())
}

/// Exponentiates a log-ratio that is at least 1 in exact arithmetic.
fn ratio_from_ln(ln_ratio: f64, what: &str) -> Result<f64> {
    // Rounding may leave the log a few ulps below zero when the ratio is 1.
    if ln_ratio < -1e-12 {
        return Err(Error::Consistency(format!(
            "{what} ratio {} is below 1",
            ln_ratio.exp()
        )));
    }
    let ratio = ln_ratio.max(0.0).exp();
    if !ratio.is_finite() {
        return Err(Error::Range(format!("{what} ratio exceeds f64 range")));
    }
    Ok(ratio)
}

/// `γ* = χ_n^{-1}(n! ϰ_n / |det A|)` together with the exact norm of the
/// projector of `s`.
///
/// Fails with [`Error::BoundViolated`] if the norm falls more than `1e-9`
/// below `γ*`.
pub fn theorem1_bound(s: &Simplex) -> Result<LowerBoundCertificate> {
    s.require_in_ball()?;
    let n = s.dimension();
    check_dimension(n)?;
    let a = s.vertex_matrix()?;
    let ln_det = a.determinant().abs().ln();
    let ln_volume = ln_det - ln_factorial(n as u64);
    let ratio = ratio_from_ln(ln_ball_volume(n) - ln_volume, "ball-to-simplex volume")?;
    let gamma_star = legendre::inverse_on_ray(n, ratio)?;
    let computed_norm = norms::ball_norm_exact(s)?.norm;
    let cert = LowerBoundCertificate {
        dimension: n,
        volume: ln_volume.exp(),
        ratio,
        gamma_star,
        computed_norm,
        slack: computed_norm - gamma_star,
    };
    if !cert.holds() {
        return Err(Error::BoundViolated {
            norm: cert.computed_norm,
            gamma_star: cert.gamma_star,
            slack: cert.slack,
        });
    }
    Ok(cert)
}

/// `ln(ϰ_n / σ_n)`.
fn ln_ball_to_regular(n: usize) -> f64 {
    ln_ball_volume(n) - ln_regular_simplex_volume(n)
}

/// `χ_n^{-1}(ϰ_n / σ_n)`, a lower bound for every projector on `B_n`.
pub fn corollary1_bound(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let ratio = ratio_from_ln(ln_ball_to_regular(n), "ball-to-regular-simplex")?;
    legendre::inverse_on_ray(n, ratio)
}

/// Logarithm of the argument of `χ_n^{-1}` in the explicit parity forms:
///
/// - `n = 2k`: `π^k (2k)! / (k! √(2k+1) ((2k+1)/(2k))^k)`
/// - `n = 2k+1`: `2 k! (4π)^k / (√(2k+2) ((2k+2)/(2k+1))^{(2k+1)/2})`
pub fn ln_corollary2_argument(n: usize) -> f64 {
    let k = (n / 2) as u64;
    let kf = k as f64;
    if n % 2 == 0 {
        kf * PI.ln() + ln_factorial(2 * k)
            - ln_factorial(k)
            - 0.5 * (2.0 * kf + 1.0).ln()
            - kf * ((2.0 * kf + 1.0) / (2.0 * kf)).ln()
    } else {
        2f64.ln() + ln_factorial(k) + kf * (4.0 * PI).ln()
            - 0.5 * (2.0 * kf + 2.0).ln()
            - 0.5 * (2.0 * kf + 1.0) * ((2.0 * kf + 2.0) / (2.0 * kf + 1.0)).ln()
    }
}

/// Logarithm of `π^{n/2} n! / (Γ(n/2+1) √(n+1) ((n+1)/n)^{n/2})`, the
/// dimension-generic form of [`ln_corollary2_argument`].
pub fn ln_corollary2_argument_gamma_form(n: usize) -> f64 {
    let nf = n as f64;
    0.5 * nf * PI.ln() + ln_factorial(n as u64)
        - crate::special::ln_gamma(0.5 * nf + 1.0)
        - 0.5 * (nf + 1.0).ln()
        - 0.5 * nf * ((nf + 1.0) / nf).ln()
}

/// The dimension-only bound evaluated through the explicit even/odd formulas.
pub fn corollary2_bound(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let ratio = ratio_from_ln(ln_corollary2_argument(n), "explicit")?;
    legendre::inverse_on_ray(n, ratio)
}

/// [`corollary2_bound`] with `χ_n^{-1}` replaced by its closed-form lower
/// estimate; never larger than the exact bound.
pub fn corollary2_bound_estimate(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let ratio = ratio_from_ln(ln_corollary2_argument(n), "explicit")?;
    legendre::inverse_lower_bound(n, ratio)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinVolumeBound {
    /// `ϰ_n / χ_n(√(n+1))`.
    pub vol_bound: f64,
    /// `n!` times `vol_bound`: a lower bound on `|det A|`.
    pub det_bound: f64,
}

/// Minimum simplex volume (and vertex-matrix determinant) for any projector
/// whose norm does not exceed `√(n+1)`, in particular a minimal one.
pub fn corollary3_min_volume(n: usize) -> Result<MinVolumeBound> {
    check_dimension(n)?;
    let chi = legendre::eval(n, ((n + 1) as f64).sqrt())?;
    let ln_vol = ln_ball_volume(n) - chi.ln();
    Ok(MinVolumeBound {
        vol_bound: ln_vol.exp(),
        det_bound: (ln_vol + ln_factorial(n as u64)).exp(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StirlingBounds {
    /// `ln(√(2πn) (n/e)^n)`.
    pub ln_lower: f64,
    /// `ln_lower + 1/(12n)`.
    pub ln_upper: f64,
}

impl StirlingBounds {
    pub fn lower(&self) -> f64 {
        self.ln_lower.exp()
    }

    pub fn upper(&self) -> f64 {
        self.ln_upper.exp()
    }

    /// Whether `lower < n! < upper`, compared in log space.
    pub fn brackets(&self, ln_factorial: f64) -> bool {
        self.ln_lower < ln_factorial && ln_factorial < self.ln_upper
    }
}

/// `√(2πn)(n/e)^n < n! < √(2πn)(n/e)^n e^{1/(12n)}`.
pub fn stirling_bounds(n: u64) -> Result<StirlingBounds> {
    if n == 0 {
        return Err(Error::Domain("Stirling bounds need n >= 1".into()));
    }
    let nf = n as f64;
    let ln_lower = 0.5 * (2.0 * PI * nf).ln() + nf * (nf.ln() - 1.0);
    Ok(StirlingBounds {
        ln_lower,
        ln_upper: ln_lower + 1.0 / (12.0 * nf),
    })
}

/// `c = π^{1/3} / (√(12e) · 3^{1/6}) = 0.2135…`, valid for every `n`.
pub fn theorem2_constant() -> f64 {
    PI.cbrt() / ((12.0 * E).sqrt() * 3f64.powf(1.0 / 6.0))
}

/// `√(π/(3e)) = 0.6206…`, valid for even `n`.
pub fn even_dimension_constant() -> f64 {
    (PI / (3.0 * E)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthCheck {
    pub dimension: usize,
    pub bound: f64,
    pub c_times_sqrt_n: f64,
    pub holds: bool,
    /// `√(π/(3e)) √n` and whether the bound exceeds it; even `n` only.
    pub even_constant_times_sqrt_n: Option<f64>,
    pub even_holds: Option<bool>,
}

/// Compares [`corollary2_bound`] with `c √n`.
pub fn theorem2_check(n: usize) -> Result<GrowthCheck> {
    let bound = corollary2_bound(n)?;
    let sqrt_n = (n as f64).sqrt();
    let c_times_sqrt_n = theorem2_constant() * sqrt_n;
    let even = (n % 2 == 0).then(|| even_dimension_constant() * sqrt_n);
    Ok(GrowthCheck {
        dimension: n,
        bound,
        c_times_sqrt_n,
        holds: bound > c_times_sqrt_n,
        even_constant_times_sqrt_n: even,
        even_holds: even.map(|e| bound > e),
    })
}
