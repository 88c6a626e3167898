//! The sets `E_{n,γ} = { x : Σ|x_j| + |1 − Σx_j| ≤ γ }` and their measure.
//!
//! The closed form is `mes(E_{n,γ}) = χ_n(γ)/n!`; [`e_measure_mc`] provides an
//! independent Monte Carlo estimate to check it against.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::legendre::{self, MAX_DEGREE};
use crate::rng;
use crate::special::ln_factorial;

pub const MIN_SAMPLES: u64 = 1_000;

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation of the box-scaled indicator over `√samples`.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// `(mean − reference) / stderr`.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.stderr == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY.copysign(self.mean - reference)
            }
        } else {
            (self.mean - reference) / self.stderr
        }
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < 1.0 {
        return Err(Error::Domain(format!("gamma must be >= 1, got {gamma}")));
    }
    if !gamma.is_finite() {
        return Err(Error::Range("gamma is infinite".into()));
    }
    Ok(())
}

/// Whether `x ∈ E_{n,γ}` with `n = x.len()`.
pub fn e_member(gamma: f64, x: &[f64]) -> bool {
    let (abs_sum, sum) = x
        .iter()
        .fold((0.0, 0.0), |(a, s), &xi| (a + xi.abs(), s + xi));
    abs_sum + (1.0 - sum).abs() <= gamma
}

/// `χ_n(γ) / n!`.
pub fn e_measure_closed_form(n: usize, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if n == 0 || n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "dimension must lie in 1..={MAX_DEGREE}, got {n}"
        )));
    }
    let chi = legendre::eval(n, gamma)?;
    Ok((chi.ln() - ln_factorial(n as u64)).exp())
}

/// Hits of `E_{n,γ}` among the `count` uniform draws of chunk `chunk`.
fn chunk_hits(n: usize, gamma: f64, seed: u64, chunk: u64, count: u64) -> u64 {
    let mut rng = rng::stream(seed, chunk);
    let mut hits = 0;
    for _ in 0..count {
        let mut abs_sum = 0.0;
        let mut sum = 0.0;
        for _ in 0..n {
            let x = gamma * (2.0 * rng.random::<f64>() - 1.0);
            abs_sum += x.abs();
            sum += x;
        }
        if abs_sum + (1.0 - sum).abs() <= gamma {
            hits += 1;
        }
    }
    hits
}

/// Monte Carlo estimate of `mes(E_{n,γ})` from uniform draws on `[−γ, γ]^n`.
///
/// The box contains `E_{n,γ}`: membership forces `Σ|x_j| ≤ γ`, hence every
/// `|x_j| ≤ γ`. The estimate is identical for a given `(samples, seed)` on
/// any number of threads.
pub fn e_measure_mc(n: usize, gamma: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    check_gamma(gamma)?;
    if n == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_SAMPLES} samples required, got {samples}"
        )));
    }
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| chunk_hits(n, gamma, seed, c, CHUNK.min(samples - c * CHUNK)))
        .sum();

    let box_volume = (2.0 * gamma).powi(n as i32);
    let p = hits as f64 / samples as f64;
    let nf = samples as f64;
    // Unbiased variance of the scaled indicator: V² · N p(1−p) / (N − 1).
    let variance = box_volume * box_volume * p * (1.0 - p) * nf / (nf - 1.0);
    Ok(McEstimate {
        mean: box_volume * p,
        stderr: (variance / nf).sqrt(),
        samples,
        seed,
    })
}
