//! Simplices, vertex matrices, basic Lagrange polynomials and volumes.
//!
//! For vertices `x^(1), …, x^(n+1)` in `R^n` the vertex matrix `A` has row
//! `j` equal to `(x^(j)_1, …, x^(j)_n, 1)`. Column `j` of `A^{-1}` holds the
//! coefficients of the affine function `λ_j`, so `λ_j(x^(i)) = δ_ij` and the
//! values `λ_j(x)` are the barycentric coordinates of `x`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_gamma};

/// Slack allowed when checking that vertices lie in the closed unit ball.
pub const BALL_TOLERANCE: f64 = 1e-12;

/// Relative factor of the scale-aware degeneracy threshold
/// `1e-12 · (max vertex norm)^n`.
const DEGENERACY_FACTOR: f64 = 1e-12;

/// `n + 1` points in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
}

/// On-disk form: `{ "n": 2, "vertices": [[x, y], [x, y], [x, y]] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexFile {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl Simplex {
    /// Builds a nondegenerate simplex.
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let s = Self::new_lenient(vertices)?;
        s.vertex_matrix()?;
        Ok(s)
    }

    /// Checks only the shape (`n + 1` finite points of length `n`, `n ≥ 1`);
    /// degenerate vertex sets are accepted.
    pub fn new_lenient(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a simplex needs at least 2 vertices, got {}",
                vertices.len()
            )));
        }
        let n = vertices.len() - 1;
        for (j, v) in vertices.iter().enumerate() {
            if v.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {j} has {} coordinates, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "vertex {j} has a non-finite coordinate"
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Like [`Simplex::new`], additionally requiring every vertex in `B_n`.
    pub fn new_in_ball(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let s = Self::new(vertices)?;
        s.require_in_ball()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SimplexFile = serde_json::from_str(text)?;
        if file.vertices.len() != file.n + 1 {
            return Err(Error::InvalidArgument(format!(
                "n = {} requires {} vertices, found {}",
                file.n,
                file.n + 1,
                file.vertices.len()
            )));
        }
        Self::new_lenient(file.vertices)
    }

    pub fn to_file(&self) -> SimplexFile {
        SimplexFile {
            n: self.dimension(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("plain numeric data serializes")
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Vec<f64>> {
        self.vertices
    }

    pub fn max_vertex_norm(&self) -> f64 {
        self.vertices.iter().map(|v| norm(v)).fold(0.0, f64::max)
    }

    /// Whether every vertex satisfies `‖x‖ ≤ 1 + 1e-12`.
    pub fn in_ball(&self) -> bool {
        self.require_in_ball().is_ok()
    }

    pub fn require_in_ball(&self) -> Result<()> {
        for (index, v) in self.vertices.iter().enumerate() {
            let r = norm(v);
            if r > 1.0 + BALL_TOLERANCE {
                return Err(Error::NotInBall { index, norm: r });
            }
        }
        Ok(())
    }

    pub fn centroid(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut c = vec![0.0; n];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        c.iter_mut().for_each(|ci| *ci /= (n + 1) as f64);
        c
    }

    fn raw_vertex_matrix(&self) -> DMatrix<f64> {
        let n = self.dimension();
        DMatrix::from_fn(n + 1, n + 1, |i, j| {
            if j < n {
                self.vertices[i][j]
            } else {
                1.0
            }
        })
    }

    fn degeneracy_threshold(&self) -> f64 {
        let n = self.dimension();
        let r = self.max_vertex_norm();
        if r == 0.0 {
            return 0.0;
        }
        DEGENERACY_FACTOR * (n as f64 * r.ln()).exp()
    }

    /// The vertex matrix `A`, rejecting degenerate simplices.
    pub fn vertex_matrix(&self) -> Result<VertexMatrix> {
        let entries = self.raw_vertex_matrix();
        let determinant = entries.clone().lu().determinant();
        let threshold = self.degeneracy_threshold();
        if !(determinant.abs() > threshold) {
            return Err(Error::Degenerate {
                determinant,
                threshold,
            });
        }
        Ok(VertexMatrix {
            entries,
            determinant,
        })
    }

    /// Columns of `A^{-1}`.
    pub fn lagrange_basis(&self) -> Result<LagrangeBasis> {
        let a = self.vertex_matrix()?;
        let determinant = a.determinant;
        let coefficients = a.entries.lu().try_inverse().ok_or(Error::Degenerate {
            determinant,
            threshold: self.degeneracy_threshold(),
        })?;
        Ok(LagrangeBasis { coefficients })
    }

    /// `(λ_1(x), …, λ_{n+1}(x))`.
    pub fn barycentric(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.lagrange_basis()?.eval_all(x)
    }

    /// `|det A| / n!`; zero for degenerate vertex sets.
    pub fn volume(&self) -> f64 {
        let n = self.dimension() as u64;
        let det = self.raw_vertex_matrix().lu().determinant().abs();
        if det == 0.0 {
            return 0.0;
        }
        (det.ln() - ln_factorial(n)).exp()
    }
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The `(n+1) × (n+1)` vertex matrix with its determinant.
#[derive(Debug, Clone)]
pub struct VertexMatrix {
    entries: DMatrix<f64>,
    determinant: f64,
}

impl VertexMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn determinant(&self) -> f64 {
        self.determinant
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows() - 1
    }

    /// `B` with `b_ij = x^(i)_j − x^(n+1)_j`: subtract the last row from each
    /// of the first `n` rows and keep the leading `n × n` block. Row
    /// operations of this kind leave the determinant unchanged, and the last
    /// column of the result is `(0, …, 0, 1)`, so `det B = det A`.
    pub fn difference_matrix(&self) -> DMatrix<f64> {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] - self.entries[(n, j)])
    }
}

/// Equivalent to [`Simplex::vertex_matrix`].
pub fn build_vertex_matrix(s: &Simplex) -> Result<VertexMatrix> {
    s.vertex_matrix()
}

pub fn difference_matrix(a: &VertexMatrix) -> DMatrix<f64> {
    a.difference_matrix()
}

pub fn simplex_volume(s: &Simplex) -> f64 {
    s.volume()
}

/// Coefficients of the basic Lagrange polynomials: `λ_j(x) = Σ_i l_ij x_i + l_{n+1,j}`.
#[derive(Debug, Clone)]
pub struct LagrangeBasis {
    coefficients: DMatrix<f64>,
}

impl LagrangeBasis {
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coefficients
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.nrows() - 1
    }

    /// Gradient of `λ_j`.
    pub fn gradient(&self, j: usize) -> Vec<f64> {
        let n = self.dimension();
        self.coefficients.view((0, j), (n, 1)).iter().copied().collect()
    }

    /// Constant term of `λ_j`.
    pub fn constant(&self, j: usize) -> f64 {
        self.coefficients[(self.dimension(), j)]
    }

    pub fn eval(&self, j: usize, x: &[f64]) -> f64 {
        let n = self.dimension();
        let col = self.coefficients.column(j);
        col.rows(0, n).iter().zip(x).map(|(l, xi)| l * xi).sum::<f64>() + col[n]
    }

    pub fn eval_all(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dimension();
        if x.len() != n {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, expected {n}",
                x.len()
            )));
        }
        let mut aug = DVector::from_element(n + 1, 1.0);
        aug.rows_mut(0, n).copy_from_slice(x);
        Ok((self.coefficients.transpose() * aug).iter().copied().collect())
    }
}

/// `ϰ_n = π^{n/2} / Γ(n/2 + 1)`.
pub fn ball_volume(n: usize) -> f64 {
    ln_ball_volume(n).exp()
}

pub fn ln_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    half * std::f64::consts::PI.ln() - ln_gamma(half + 1.0)
}

/// `σ_n = (1/n!) √(n+1) ((n+1)/n)^{n/2}`, the volume of a regular simplex
/// inscribed in `B_n`.
pub fn regular_simplex_volume(n: usize) -> f64 {
    ln_regular_simplex_volume(n).exp()
}

pub fn ln_regular_simplex_volume(n: usize) -> f64 {
    let nf = n as f64;
    -ln_factorial(n as u64) + 0.5 * (nf + 1.0).ln() + 0.5 * nf * ((nf + 1.0) / nf).ln()
}

/// Regular simplex with all `n + 1` vertices on the unit sphere.
///
/// The standard basis of `R^{n+1}` is centered at its barycenter and
/// expressed in an orthonormal basis of the hyperplane `Σ y_i = 0` obtained
/// by Gram–Schmidt from the first `n` centered vectors, then scaled to unit
/// length. The first vertex is `(1, 0, …, 0)`.
pub fn regular_inscribed_simplex(n: usize) -> Simplex {
    assert!(n >= 1, "dimension must be at least 1");
    let m = n + 1;
    let centered: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| if i == j { 1.0 } else { 0.0 } - 1.0 / m as f64)
                .collect()
        })
        .collect();

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for v in centered.iter().take(n) {
        let mut u = v.clone();
        for b in &basis {
            let p = dot(&u, b);
            u.iter_mut().zip(b).for_each(|(ui, bi)| *ui -= p * bi);
        }
        let r = norm(&u);
        u.iter_mut().for_each(|ui| *ui /= r);
        basis.push(u);
    }

    let vertices = centered
        .iter()
        .map(|c| {
            let mut coords: Vec<f64> = basis.iter().map(|b| dot(c, b)).collect();
            let r = norm(&coords);
            coords.iter_mut().for_each(|x| *x /= r);
            coords
        })
        .collect();
    Simplex { vertices }
}
