//! Numerical search for simplices in `B_n` of minimal projector norm.
//!
//! The decision vector is the `(n+1)·n` vertex coordinates. Vertices are kept
//! in the ball by radial clamping; they are not pinned to the sphere. Restart
//! 0 starts from the regular inscribed simplex and the others from seeded
//! Gaussian perturbations of it, so the result is never worse than the
//! regular simplex.

use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::nelder_mead::{self, Options};
use crate::norms;
use crate::rng;
use crate::simplex::{norm, regular_inscribed_simplex, Simplex};

pub const MAX_SEARCH_DIMENSION: usize = 10;

pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_ITERATIONS: usize = 2000;
pub const DEFAULT_PERTURBATION: f64 = 0.15;
pub const DEFAULT_SEED: u64 = 20_190_509;

/// Offset of the initial Nelder–Mead simplex around each start.
const INITIAL_STEP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub dimension: usize,
    pub restarts: usize,
    pub max_iterations: usize,
    pub perturbation: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            restarts: DEFAULT_RESTARTS,
            max_iterations: DEFAULT_ITERATIONS,
            perturbation: DEFAULT_PERTURBATION,
            seed: DEFAULT_SEED,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 || self.dimension > MAX_SEARCH_DIMENSION {
            return Err(Error::InvalidArgument(format!(
                "search dimension must lie in 1..={MAX_SEARCH_DIMENSION}, got {}",
                self.dimension
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be >= 1".into()));
        }
        if !(self.perturbation > 0.0 && self.perturbation.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "perturbation scale must be positive, got {}",
                self.perturbation
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    #[serde(serialize_with = "serialize_simplex")]
    pub best_simplex: Simplex,
    pub best_norm: f64,
    /// Dimension-only lower bound on any projector norm.
    pub lower_bound: f64,
    /// `√(n+1)`.
    pub upper_bound: f64,
    pub iterations_used: usize,
    pub best_restart: usize,
}

fn serialize_simplex<S: serde::Serializer>(s: &Simplex, ser: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&s.to_file(), ser)
}

/// Pulls every vertex of the flattened coordinate vector back into `B_n`.
pub fn clamp_to_ball(coords: &mut [f64], n: usize) {
    for v in coords.chunks_mut(n) {
        let r = norm(v);
        if r > 1.0 {
            v.iter_mut().for_each(|c| *c /= r);
        }
    }
}

fn unflatten(coords: &[f64], n: usize) -> Vec<Vec<f64>> {
    coords.chunks(n).map(<[f64]>::to_vec).collect()
}

/// Projector norm of the simplex with flattened vertices `coords`, or `+∞`
/// when the vertices are degenerate.
pub fn objective(coords: &[f64], n: usize) -> f64 {
    Simplex::new(unflatten(coords, n))
        .and_then(|s| norms::ball_norm(&s))
        .unwrap_or(f64::INFINITY)
}

struct RestartOutcome {
    coords: Vec<f64>,
    value: f64,
    iterations: usize,
}

fn starting_point(config: &SearchConfig, restart: usize) -> Vec<f64> {
    let n = config.dimension;
    let mut x: Vec<f64> = regular_inscribed_simplex(n)
        .into_vertices()
        .into_iter()
        .flatten()
        .collect();
    if restart > 0 {
        let mut rng = rng::stream(config.seed, restart as u64);
        let noise = Normal::new(0.0, config.perturbation).expect("validated scale");
        x.iter_mut().for_each(|c| *c += noise.sample(&mut rng));
        clamp_to_ball(&mut x, n);
    }
    x
}

fn run_restart<A: FnMut(&[f64], f64)>(
    config: &SearchConfig,
    restart: usize,
    on_accept: &mut A,
) -> RestartOutcome {
    let n = config.dimension;
    let x0 = starting_point(config, restart);
    let opts = Options {
        max_iterations: config.max_iterations,
        initial_step: INITIAL_STEP,
        ..Options::default()
    };
    let m = nelder_mead::minimize(
        |x| objective(x, n),
        |x| clamp_to_ball(x, n),
        &x0,
        &opts,
        on_accept,
    );
    RestartOutcome {
        coords: m.point,
        value: m.value,
        iterations: m.iterations,
    }
}

/// Lower norm wins; equal norms go to the lexicographically smaller
/// coordinate vector, then to the earlier restart.
fn better(a: &RestartOutcome, b: &RestartOutcome) -> bool {
    match a.value.total_cmp(&b.value) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => {
            for (x, y) in a.coords.iter().zip(&b.coords) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Less => return true,
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
            false
        }
    }
}

/// Runs all restarts (in parallel) and keeps the best simplex found.
pub fn minimize_norm(config: &SearchConfig) -> Result<SearchResult> {
    minimize_norm_observed(config, |_, _, _| {})
}

/// [`minimize_norm`], reporting `(restart, coords, value)` for every point
/// accepted into a working simplex.
pub fn minimize_norm_observed<O>(config: &SearchConfig, observer: O) -> Result<SearchResult>
where
    O: Fn(usize, &[f64], f64) + Sync,
{
    config.validate()?;
    let n = config.dimension;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(config, r, &mut |x: &[f64], v: f64| observer(r, x, v)))
        .collect();

    let iterations_used = outcomes.iter().map(|o| o.iterations).sum();
    let (best_restart, best) = outcomes
        .iter()
        .enumerate()
        .reduce(|acc, cur| if better(cur.1, acc.1) { cur } else { acc })
        .expect("at least one restart");

    let best_simplex = Simplex::new_in_ball(unflatten(&best.coords, n))?;
    let best_norm = norms::ball_norm_exact(&best_simplex)?.norm;
    let lower_bound = bounds::corollary2_bound(n)?;
    if best_norm < lower_bound - bounds::SLACK_TOLERANCE {
        return Err(Error::BoundViolated {
            norm: best_norm,
            gamma_star: lower_bound,
            slack: best_norm - lower_bound,
        });
    }
    Ok(SearchResult {
        best_simplex,
        best_norm,
        lower_bound,
        upper_bound: ((n + 1) as f64).sqrt(),
        iterations_used,
        best_restart,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaWindow {
    pub lower: f64,
    pub upper: f64,
    pub best_found: f64,
}

impl ThetaWindow {
    pub fn contains_best(&self) -> bool {
        self.lower - bounds::SLACK_TOLERANCE <= self.best_found && self.best_found <= self.upper + 1e-6
    }
}

/// Bracket for the minimal projector norm `θ_n(B_n)`: the dimension-only
/// lower bound, `√(n+1)`, and the best norm found with the default search.
pub fn theta_window(n: usize) -> Result<ThetaWindow> {
    let result = minimize_norm(&SearchConfig::new(n))?;
    let window = ThetaWindow {
        lower: result.lower_bound,
        upper: result.upper_bound,
        best_found: result.best_norm,
    };
    if !window.contains_best() {
        return Err(Error::Consistency(format!(
            "best norm {} outside [{}, {}]",
            window.best_found, window.lower, window.upper
        )));
    }
    Ok(window)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(n: usize, restarts: usize) -> SearchConfig {
        SearchConfig {
            restarts,
            max_iterations: 400,
            ..SearchConfig::new(n)
        }
    }

    #[test]
    fn interval_is_optimal() {
        let r = minimize_norm(&quick(1, 4)).unwrap();
        assert!((r.best_norm - 1.0).abs() < 1e-12);
        assert!((r.lower_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_does_not_beat_regular() {
        let r = minimize_norm(&quick(2, 4)).unwrap();
        assert!((r.best_norm - 5.0 / 3.0).abs() < 1e-3);
        assert!(r.best_norm <= 5.0 / 3.0 + 1e-6);
        assert!(r.best_simplex.in_ball());
    }

    #[test]
    fn deterministic_and_monotone_in_restarts() {
        let a = minimize_norm(&quick(3, 3)).unwrap();
        let b = minimize_norm(&quick(3, 3)).unwrap();
        assert_eq!(a.best_norm, b.best_norm);
        assert_eq!(a.best_simplex, b.best_simplex);
        let mut prev = f64::INFINITY;
        for restarts in 1..=5 {
            let r = minimize_norm(&quick(3, restarts)).unwrap();
            assert!(r.best_norm <= prev);
            prev = r.best_norm;
        }
    }

    #[test]
    fn accepted_points_stay_in_ball() {
        let n = 3;
        minimize_norm_observed(&quick(n, 2), |_, x, _| {
            for v in x.chunks(n) {
                assert!(norm(v) <= 1.0 + 1e-12);
            }
        })
        .unwrap();
    }

    #[test]
    fn degenerate_points_are_rejected() {
        let n = 2;
        assert_eq!(objective(&[0.1, 0.1, 0.1, 0.1, 0.5, 0.5], n), f64::INFINITY);
    }

    #[test]
    fn config_validation() {
        assert!(minimize_norm(&SearchConfig::new(11)).is_err());
        assert!(minimize_norm(&SearchConfig { restarts: 0, ..SearchConfig::new(2) }).is_err());
        assert!(minimize_norm(&SearchConfig { perturbation: 0.0, ..SearchConfig::new(2) }).is_err());
    }
}
