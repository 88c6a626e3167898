//! Linear interpolation on the Euclidean unit ball.
//!
//! The crate computes the exact operator norm of the interpolation projector
//! attached to a simplex inscribed in `B_n`, the Legendre-polynomial lower
//! bounds on that norm expressed through simplex volume, a Monte Carlo check of
//! the measure of the sets `E_{n,γ}`, and a derivative-free search for
//! simplices of minimal projector norm.
//!
//! Module map:
//!
//! - [`legendre`]: standardized Legendre polynomials `χ_n`, derivatives, the
//!   inverse on `[1, ∞)` and its closed-form lower estimates.
//! - [`simplex`]: simplices, vertex matrices, Lagrange bases, volumes.
//! - [`norms`]: projector norms over the ball and over vertex lists.
//! - [`measure`]: membership and measure of `E_{n,γ}`.
//! - [`bounds`]: volume certificates and dimension-only lower bounds.
//! - [`search`]: Nelder–Mead minimization of the projector norm.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod legendre;
pub mod measure;
pub mod nelder_mead;
pub mod norms;
pub mod rng;
pub mod search;
pub mod simplex;
pub mod special;

pub use error::{Error, Result};
pub use norms::NormReport;
pub use simplex::{LagrangeBasis, Simplex, VertexMatrix};
