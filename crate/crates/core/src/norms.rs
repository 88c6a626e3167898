//! Norms of the interpolation projector `Pf = Σ f(x^(j)) λ_j`.
//!
//! On a convex body `Ω` the operator norm is `max_{x∈Ω} Σ_j |λ_j(x)|`.
//!
//! For the ball the maximum is computed exactly by enumerating sign patterns.
//! `Σ_j |λ_j(x)| = max_σ Σ_j σ_j λ_j(x)` over `σ ∈ {−1,+1}^{n+1}`, and each
//! `Σ_j σ_j λ_j(x) = a_σ·x + b_σ` is affine, so its maximum over `‖x‖ ≤ 1` is
//! `b_σ + ‖a_σ‖` (Cauchy–Schwarz, attained at `a_σ/‖a_σ‖`). Swapping the two
//! maxima gives `‖P‖ = max_σ (‖a_σ‖ + b_σ)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;
use crate::simplex::{norm, LagrangeBasis, Simplex};
use rand::Rng;
use rand_distr::StandardNormal;

/// Largest dimension accepted by [`ball_norm_exact`] (`2^21` patterns).
pub const MAX_EXACT_DIMENSION: usize = 20;

/// Patterns per work unit. Each unit restarts its Gray-code walk from a
/// directly computed pattern, so results do not depend on the thread count.
const PATTERN_CHUNK_BITS: u32 = 12;

/// Relative slack under which two pattern values count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

const SAMPLE_CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub norm: f64,
    /// `σ_j ∈ {−1, +1}` of the maximizing pattern.
    pub sign_pattern: Vec<i8>,
    /// A point of the closed ball where `Σ |λ_j|` attains `norm`.
    pub witness: Vec<f64>,
}

/// Gradients and constant terms of the `λ_j`, laid out for the pattern walk.
struct AffineParts {
    n: usize,
    /// Row `j` is the gradient of `λ_j`.
    gradients: Vec<f64>,
    constants: Vec<f64>,
}

impl AffineParts {
    fn new(basis: &LagrangeBasis) -> Self {
        let n = basis.dimension();
        let mut gradients = Vec::with_capacity(n * (n + 1));
        let mut constants = Vec::with_capacity(n + 1);
        for j in 0..=n {
            gradients.extend(basis.gradient(j));
            constants.push(basis.constant(j));
        }
        Self {
            n,
            gradients,
            constants,
        }
    }

    fn gradient(&self, j: usize) -> &[f64] {
        &self.gradients[j * self.n..(j + 1) * self.n]
    }

    fn vertices(&self) -> usize {
        self.n + 1
    }

    /// Pattern codes: bit `n − j` set means `σ_j = −1`. Numeric order on codes
    /// is lexicographic order on `(σ_1, …, σ_{n+1})` with `+1` before `−1`.
    fn is_negative(&self, code: u64, j: usize) -> bool {
        code >> (self.n - j) & 1 == 1
    }

    fn bit_to_vertex(&self, bit: u32) -> usize {
        self.n - bit as usize
    }

    fn combine(&self, code: u64) -> (Vec<f64>, f64) {
        let mut a = vec![0.0; self.n];
        let mut b = 0.0;
        for j in 0..self.vertices() {
            let s = if self.is_negative(code, j) { -1.0 } else { 1.0 };
            for (ai, gi) in a.iter_mut().zip(self.gradient(j)) {
                *ai += s * gi;
            }
            b += s * self.constants[j];
        }
        (a, b)
    }

    fn pattern_count(&self) -> u64 {
        1u64 << self.vertices()
    }

    fn chunk_count(&self) -> u64 {
        (self.pattern_count() >> PATTERN_CHUNK_BITS).max(1)
    }

    /// Visits every pattern of chunk `chunk` in Gray-code order, calling
    /// `visit(code, value)`.
    fn walk_chunk(&self, chunk: u64, mut visit: impl FnMut(u64, f64)) {
        let len = self.pattern_count().min(1 << PATTERN_CHUNK_BITS);
        let start = chunk * len;
        let mut code = gray(start);
        let (mut a, mut b) = self.combine(code);
        visit(code, norm(&a) + b);
        for i in start + 1..start + len {
            let bit = i.trailing_zeros();
            code ^= 1 << bit;
            let j = self.bit_to_vertex(bit);
            let s = if self.is_negative(code, j) { -2.0 } else { 2.0 };
            for (ai, gi) in a.iter_mut().zip(self.gradient(j)) {
                *ai += s * gi;
            }
            b += s * self.constants[j];
            visit(code, norm(&a) + b);
        }
    }

    fn max_value(&self) -> f64 {
        (0..self.chunk_count())
            .into_par_iter()
            .map(|c| {
                let mut best = f64::NEG_INFINITY;
                self.walk_chunk(c, |_, v| best = best.max(v));
                best
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }

    fn first_code_reaching(&self, threshold: f64) -> u64 {
        (0..self.chunk_count())
            .into_par_iter()
            .map(|c| {
                let mut first = u64::MAX;
                self.walk_chunk(c, |code, v| {
                    if v >= threshold {
                        first = first.min(code);
                    }
                });
                first
            })
            .reduce(|| u64::MAX, u64::min)
    }

    fn eval_abs_sum(&self, x: &[f64]) -> f64 {
        (0..self.vertices())
            .map(|j| {
                let g = self.gradient(j);
                (g.iter().zip(x).map(|(gi, xi)| gi * xi).sum::<f64>() + self.constants[j]).abs()
            })
            .sum()
    }
}

fn gray(i: u64) -> u64 {
    i ^ (i >> 1)
}

fn check_budget(n: usize) -> Result<()> {
    if n > MAX_EXACT_DIMENSION {
        return Err(Error::Budget {
            n,
            max: MAX_EXACT_DIMENSION,
        });
    }
    Ok(())
}

/// `‖P‖_{B_n}` with the maximizing sign pattern and a witness point.
///
/// Patterns whose value is within a relative `1e-12` of the maximum are
/// treated as tied and the lexicographically smallest one wins (`+1` sorts
/// before `−1`). The witness is `a_σ/‖a_σ‖`; when `a_σ = 0` the value is
/// constant on the ball and the witness is the centroid direction (or the
/// origin if the centroid is the origin).
pub fn ball_norm_exact(s: &Simplex) -> Result<NormReport> {
    check_budget(s.dimension())?;
    let parts = AffineParts::new(&s.lagrange_basis()?);
    let max = parts.max_value();
    let code = parts.first_code_reaching(max - TIE_TOLERANCE * max.abs().max(1.0));

    let (a, b) = parts.combine(code);
    let a_norm = norm(&a);
    let witness = if a_norm > 1e-15 {
        a.iter().map(|ai| ai / a_norm).collect()
    } else {
        let c = s.centroid();
        let r = norm(&c);
        if r > 0.0 {
            c.iter().map(|ci| ci / r).collect()
        } else {
            c
        }
    };
    let sign_pattern = (0..parts.vertices())
        .map(|j| if parts.is_negative(code, j) { -1 } else { 1 })
        .collect();
    Ok(NormReport {
        norm: a_norm + b,
        sign_pattern,
        witness,
    })
}

/// Only the value of [`ball_norm_exact`].
pub fn ball_norm(s: &Simplex) -> Result<f64> {
    check_budget(s.dimension())?;
    Ok(AffineParts::new(&s.lagrange_basis()?).max_value())
}

/// `max_{v ∈ vertices} Σ_j |λ_j(v)|`, the norm over the convex hull of the
/// supplied points.
pub fn polytope_vertex_norm(s: &Simplex, vertices: &[Vec<f64>]) -> Result<f64> {
    if vertices.is_empty() {
        return Err(Error::InvalidArgument("vertex list is empty".into()));
    }
    let basis = s.lagrange_basis()?;
    let mut best = f64::NEG_INFINITY;
    for v in vertices {
        let sum: f64 = basis.eval_all(v)?.iter().map(|l| l.abs()).sum();
        best = best.max(sum);
    }
    Ok(best)
}

/// The `2^n` vertices of `[0, 1]^n`.
pub fn cube_vertices(n: usize) -> Vec<Vec<f64>> {
    (0..1u64 << n)
        .map(|m| (0..n).map(|i| (m >> i & 1) as f64).collect())
        .collect()
}

/// Lower estimate of `‖P‖_{B_n}` from `resolution` points on the unit sphere.
///
/// `Σ |λ_j|` is convex, so its maximum over the ball is attained on the
/// sphere. Dimension 1 uses the whole sphere `{−1, 1}`, dimension 2 an
/// equispaced angle grid with a seeded offset, higher dimensions normalized
/// Gaussian vectors drawn from per-chunk streams.
pub fn sphere_sampling_norm(s: &Simplex, resolution: usize, seed: u64) -> Result<f64> {
    let parts = AffineParts::new(&s.lagrange_basis()?);
    let n = parts.n;
    if n == 1 {
        return Ok(parts.eval_abs_sum(&[1.0]).max(parts.eval_abs_sum(&[-1.0])));
    }
    let resolution = resolution.max(1);
    if n == 2 {
        let offset: f64 = rng::stream(seed, 0).random();
        let step = std::f64::consts::TAU / resolution as f64;
        let best = (0..resolution)
            .into_par_iter()
            .map(|i| {
                let t = (i as f64 + offset) * step;
                parts.eval_abs_sum(&[t.cos(), t.sin()])
            })
            .reduce(|| f64::NEG_INFINITY, f64::max);
        return Ok(best);
    }

    let chunks = resolution.div_ceil(SAMPLE_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(seed, c as u64);
            let count = SAMPLE_CHUNK.min(resolution - c * SAMPLE_CHUNK);
            let mut x = vec![0.0; n];
            let mut best = f64::NEG_INFINITY;
            for _ in 0..count {
                loop {
                    x.iter_mut().for_each(|xi| *xi = rng.sample(StandardNormal));
                    let r = norm(&x);
                    if r > 1e-12 {
                        x.iter_mut().for_each(|xi| *xi /= r);
                        break;
                    }
                }
                best = best.max(parts.eval_abs_sum(&x));
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(best)
}

/// `Pf(x) = Σ_j f(x^(j)) λ_j(x)`.
pub fn interpolate(s: &Simplex, node_values: &[f64], x: &[f64]) -> Result<f64> {
    if node_values.len() != s.dimension() + 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} node values, got {}",
            s.dimension() + 1,
            node_values.len()
        )));
    }
    let lambda = s.barycentric(x)?;
    Ok(lambda.iter().zip(node_values).map(|(l, f)| l * f).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::regular_inscribed_simplex;

    fn interval() -> Simplex {
        Simplex::new(vec![vec![-1.0], vec![1.0]]).unwrap()
    }

    fn corner2() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn interval_norm_is_one() {
        let r = ball_norm_exact(&interval()).unwrap();
        assert_eq!(r.norm, 1.0);
        assert_eq!(r.sign_pattern, vec![1, 1]);
        assert_eq!(r.witness, vec![0.0]);
        assert_eq!(sphere_sampling_norm(&interval(), 10, 3).unwrap(), 1.0);
    }

    #[test]
    fn regular_triangle_and_tetrahedron() {
        let r2 = ball_norm_exact(&regular_inscribed_simplex(2)).unwrap();
        assert!((r2.norm - 5.0 / 3.0).abs() < 1e-12);
        let r3 = ball_norm_exact(&regular_inscribed_simplex(3)).unwrap();
        assert!((r3.norm - 2.0).abs() < 1e-12);
        let r4 = ball_norm(&regular_inscribed_simplex(4)).unwrap();
        assert!((r4 - 2.2).abs() < 1e-12);
    }

    #[test]
    fn report_invariants() {
        for n in 1..=8 {
            let s = regular_inscribed_simplex(n);
            let r = ball_norm_exact(&s).unwrap();
            assert!(norm(&r.witness) <= 1.0 + 1e-12);
            let lambda = s.barycentric(&r.witness).unwrap();
            let sum: f64 = lambda.iter().map(|l| l.abs()).sum();
            assert!((sum - r.norm).abs() < 1e-9);
            for (l, &sg) in lambda.iter().zip(&r.sign_pattern) {
                if l.abs() > 1e-9 {
                    assert_eq!(l.signum() as i8, sg);
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = regular_inscribed_simplex(21);
        assert!(matches!(ball_norm_exact(&s), Err(Error::Budget { n: 21, .. })));
        assert!(sphere_sampling_norm(&s, 100, 1).is_ok());
    }

    #[test]
    fn chunked_walk_matches_direct_evaluation() {
        // n = 12 has 2^13 patterns, i.e. two chunks.
        let s = regular_inscribed_simplex(12);
        let parts = AffineParts::new(&s.lagrange_basis().unwrap());
        assert_eq!(parts.chunk_count(), 2);
        let mut seen = vec![false; parts.pattern_count() as usize];
        for c in 0..parts.chunk_count() {
            parts.walk_chunk(c, |code, v| {
                seen[code as usize] = true;
                let (a, b) = parts.combine(code);
                assert!((norm(&a) + b - v).abs() < 1e-10);
            });
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn polytope_norms() {
        let cube = cube_vertices(2);
        assert!((polytope_vertex_norm(&corner2(), &cube).unwrap() - 3.0).abs() < 1e-15);
        let s = regular_inscribed_simplex(3);
        assert!((polytope_vertex_norm(&s, s.vertices()).unwrap() - 1.0).abs() < 1e-12);
        let unit = Simplex::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(polytope_vertex_norm(&unit, &cube_vertices(1)).unwrap(), 1.0);
        assert!(polytope_vertex_norm(&unit, &[]).is_err());
    }

    #[test]
    fn sampling_is_a_lower_bound_and_reproducible() {
        let s = regular_inscribed_simplex(2);
        let v = sphere_sampling_norm(&s, 100_000, 5).unwrap();
        assert!(v <= 5.0 / 3.0 + 1e-12);
        assert!(5.0 / 3.0 - v < 1e-4);
        let s3 = regular_inscribed_simplex(3);
        let a = sphere_sampling_norm(&s3, 50_000, 9).unwrap();
        assert_eq!(a, sphere_sampling_norm(&s3, 50_000, 9).unwrap());
        assert!(a <= 2.0 + 1e-12);
    }

    #[test]
    fn interpolation() {
        let s = regular_inscribed_simplex(2);
        let vals = [3.5; 3];
        assert!((interpolate(&s, &vals, &[0.2, -0.7]).unwrap() - 3.5).abs() < 1e-12);

        let f = |x: &[f64]| 2.0 * x[0] - x[1] + 3.0;
        let t = corner2();
        let nodes: Vec<f64> = t.vertices().iter().map(|v| f(v)).collect();
        for x in [[0.3, 0.1], [-2.0, 5.0], [0.0, 0.0]] {
            assert!((interpolate(&t, &nodes, &x).unwrap() - f(&x)).abs() < 1e-12);
        }

        // ‖x‖² is 1 at every node on the sphere.
        let sq: Vec<f64> = s.vertices().iter().map(|v| norm(v).powi(2)).collect();
        assert!((interpolate(&s, &sq, &[0.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);

        assert!(matches!(
            interpolate(&s, &[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
