//! Test-only oracles, independent of the library's evaluation paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use ballinterp::Simplex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gauss–Legendre nodes and weights on [−1, 1] by Golub–Welsch: eigenvalues
/// of the Jacobi matrix with off-diagonal `k / √(4k² − 1)`.
pub fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    let mut jacobi = DMatrix::<f64>::zeros(points, points);
    for k in 1..points {
        let kf = k as f64;
        let b = kf / (4.0 * kf * kf - 1.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    (0..points)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], 2.0 * v0 * v0)
        })
        .collect()
}

/// Coefficients (constant term first) of `[(t² − 1)^n]^{(n)} / (2^n n!)`,
/// expanded exactly in integers before the final division.
pub fn rodrigues_coefficients(n: u32) -> Vec<f64> {
    assert!(n <= 10);
    let fact = |m: u32| (1..=m as i128).product::<i128>();
    let binom = |a: u32, b: u32| fact(a) / (fact(b) * fact(a - b));
    let denom = (1i128 << n) * fact(n);
    let mut coeffs = vec![0.0; n as usize + 1];
    for k in 0..=n {
        // (t² − 1)^n = Σ_k C(n,k) (−1)^{n−k} t^{2k}
        if 2 * k < n {
            continue;
        }
        let sign = if (n - k) % 2 == 0 { 1 } else { -1 };
        let falling = fact(2 * k) / fact(2 * k - n);
        let num = sign * binom(n, k) * falling;
        coeffs[(2 * k - n) as usize] = num as f64 / denom as f64;
    }
    coeffs
}

pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// `ln n!` by direct summation.
pub fn ln_factorial_sum(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn uniform_in_ball<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
    let radius = rng.random::<f64>().powf(1.0 / n as f64);
    x.iter_mut().for_each(|c| *c *= radius / r);
    x
}

/// A nondegenerate simplex with vertices uniform in `B_n`.
pub fn random_simplex_in_ball<R: Rng>(n: usize, rng: &mut R) -> Simplex {
    loop {
        let verts = (0..=n).map(|_| uniform_in_ball(n, rng)).collect();
        if let Ok(s) = Simplex::new_in_ball(verts) {
            return s;
        }
    }
}

/// Haar-ish orthogonal matrix from the QR factorization of a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    g.qr().q()
}

pub fn rotate(s: &Simplex, q: &DMatrix<f64>) -> Simplex {
    let verts = s
        .vertices()
        .iter()
        .map(|v| {
            let x = q * nalgebra::DVector::from_column_slice(v);
            x.iter().copied().collect()
        })
        .collect();
    Simplex::new(verts).unwrap()
}

/// `max Σ|β_j|` over random `β` with `Σβ_j = 1` and `Σβ_j x^(j) ∈ B_n`,
/// drawing `β_1..β_n` uniformly from `[−box, box]^n`.
pub fn constrained_beta_max<R: Rng>(s: &Simplex, samples: usize, half_width: f64, rng: &mut R) -> f64 {
    let n = s.dimension();
    let verts = s.vertices();
    let mut best = f64::NEG_INFINITY;
    let mut beta = vec![0.0; n + 1];
    let mut point = vec![0.0; n];
    for _ in 0..samples {
        let mut partial = 0.0;
        for b in beta.iter_mut().take(n) {
            *b = half_width * (2.0 * rng.random::<f64>() - 1.0);
            partial += *b;
        }
        beta[n] = 1.0 - partial;
        point.iter_mut().for_each(|p| *p = 0.0);
        for (b, v) in beta.iter().zip(verts) {
            for (p, vi) in point.iter_mut().zip(v) {
                *p += b * vi;
            }
        }
        if point.iter().map(|p| p * p).sum::<f64>() <= 1.0 {
            best = best.max(beta.iter().map(|b| b.abs()).sum());
        }
    }
    best
}
