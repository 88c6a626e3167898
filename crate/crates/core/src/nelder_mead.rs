//! Nelder–Mead simplex minimization with a feasibility projection.
//!
//! Every trial point is passed through `project` before evaluation, so all
//! points that enter the working simplex are feasible. The objective may
//! return `+∞` to reject a point; such points never replace a finite vertex.

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_iterations: usize,
    /// Offset used to build the initial working simplex around `x0`.
    pub initial_step: f64,
    /// Convergence threshold on the spread of objective values.
    pub f_tolerance: f64,
    /// Convergence threshold on the working simplex diameter.
    pub x_tolerance: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            initial_step: 0.1,
            f_tolerance: 1e-12,
            x_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Working<'a, F, P, A> {
    f: F,
    project: P,
    on_accept: &'a mut A,
}

impl<F, P, A> Working<'_, F, P, A>
where
    F: FnMut(&[f64]) -> f64,
    P: FnMut(&mut [f64]),
    A: FnMut(&[f64], f64),
{
    fn eval(&mut self, mut x: Vec<f64>) -> (Vec<f64>, f64) {
        (self.project)(&mut x);
        let v = (self.f)(&x);
        (x, if v.is_nan() { f64::INFINITY } else { v })
    }

    fn accept(&mut self, x: &[f64], v: f64) {
        (self.on_accept)(x, v);
    }

    fn initial(&mut self, x0: &[f64], step: f64) -> Vec<(Vec<f64>, f64)> {
        let mut pts = Vec::with_capacity(x0.len() + 1);
        let start = self.eval(x0.to_vec());
        self.accept(&start.0, start.1);
        pts.push(start);
        for i in 0..x0.len() {
            let mut x = x0.to_vec();
            // Step toward the origin so a point on the boundary of a
            // star-shaped feasible set stays distinct after projection.
            x[i] += if x[i] > 0.0 { -step } else { step };
            let p = self.eval(x);
            self.accept(&p.0, p.1);
            pts.push(p);
        }
        pts
    }
}

fn along(c: &[f64], w: &[f64], t: f64) -> Vec<f64> {
    c.iter().zip(w).map(|(ci, wi)| ci + t * (ci - wi)).collect()
}

fn sort(pts: &mut [(Vec<f64>, f64)]) {
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
}

fn converged(pts: &[(Vec<f64>, f64)], opts: &Options) -> bool {
    let best = pts[0].1;
    let worst = pts[pts.len() - 1].1;
    if !worst.is_finite() {
        return false;
    }
    let spread = worst - best;
    let diameter = pts[1..]
        .iter()
        .map(|(x, _)| {
            x.iter()
                .zip(&pts[0].0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    spread <= opts.f_tolerance * best.abs().max(1.0) && diameter <= opts.x_tolerance
}

/// Minimizes `f` from `x0`. When the working simplex converges with budget
/// left, it is rebuilt around the incumbent; the run stops once a rebuild
/// fails to improve the incumbent by more than `f_tolerance`.
///
/// `on_accept` sees every point that enters the working simplex.
pub fn minimize<F, P, A>(f: F, project: P, x0: &[f64], opts: &Options, on_accept: &mut A) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
    P: FnMut(&mut [f64]),
    A: FnMut(&[f64], f64),
{
    let mut w = Working {
        f,
        project,
        on_accept,
    };
    let dim = x0.len();
    let mut pts = w.initial(x0, opts.initial_step);
    sort(&mut pts);
    let mut incumbent = pts[0].clone();
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;

        let centroid: Vec<f64> = (0..dim)
            .map(|i| pts[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
            .collect();
        let worst_value = pts[dim].1;
        let (xr, fr) = w.eval(along(&centroid, &pts[dim].0, REFLECT));

        let replacement = if fr < pts[0].1 {
            let (xe, fe) = w.eval(along(&centroid, &pts[dim].0, EXPAND));
            Some(if fe < fr { (xe, fe) } else { (xr, fr) })
        } else if fr < pts[dim - 1].1 {
            Some((xr, fr))
        } else {
            let (xc, fc) = if fr < worst_value {
                w.eval(along(&centroid, &pts[dim].0, CONTRACT * REFLECT))
            } else {
                w.eval(along(&centroid, &pts[dim].0, -CONTRACT))
            };
            (fc < worst_value.min(fr)).then_some((xc, fc))
        };

        match replacement {
            Some((x, v)) => {
                w.accept(&x, v);
                pts[dim] = (x, v);
            }
            None => {
                let best = pts[0].0.clone();
                for p in pts.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&p.0)
                        .map(|(b, xi)| b + SHRINK * (xi - b))
                        .collect();
                    let (x, v) = w.eval(x);
                    w.accept(&x, v);
                    *p = (x, v);
                }
            }
        }
        sort(&mut pts);

        if converged(&pts, opts) && iterations < opts.max_iterations {
            let improved = pts[0].1 < incumbent.1 - opts.f_tolerance * incumbent.1.abs().max(1.0);
            if pts[0].1 < incumbent.1 {
                incumbent = pts[0].clone();
            }
            if !improved {
                break;
            }
            pts = w.initial(&incumbent.0, opts.initial_step);
            sort(&mut pts);
        }
    }
    if pts[0].1 < incumbent.1 {
        incumbent = pts[0].clone();
    }
    Minimum {
        point: incumbent.0,
        value: incumbent.1,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = Options {
            max_iterations: 5000,
            ..Options::default()
        };
        let m = minimize(f, |_: &mut [f64]| {}, &[-1.2, 1.0], &opts, &mut |_, _| {});
        assert!((m.point[0] - 1.0).abs() < 1e-5 && (m.point[1] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn projection_keeps_points_feasible() {
        // Minimize distance to (2, 2) over the unit disk: optimum (1,1)/√2.
        let f = |x: &[f64]| (x[0] - 2.0).powi(2) + (x[1] - 2.0).powi(2);
        let project = |x: &mut [f64]| {
            let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
            if r > 1.0 {
                x.iter_mut().for_each(|c| *c /= r);
            }
        };
        let mut seen = 0;
        let m = minimize(f, project, &[0.0, 0.0], &Options::default(), &mut |x, _| {
            seen += 1;
            assert!(x[0].hypot(x[1]) <= 1.0 + 1e-15);
        });
        assert!(seen > 0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.point[0] - h).abs() < 1e-4 && (m.point[1] - h).abs() < 1e-4);
    }

    #[test]
    fn rejected_points_do_not_win() {
        // +∞ outside x > 0.5; minimum of x² on the feasible part is at 0.5.
        let f = |x: &[f64]| if x[0] < 0.5 { f64::INFINITY } else { x[0] * x[0] };
        let m = minimize(f, |_: &mut [f64]| {}, &[2.0], &Options::default(), &mut |_, _| {});
        assert!(m.value.is_finite());
        assert!((m.point[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| x.iter().map(|c| c.abs()).sum::<f64>();
        let x0 = [0.0, 0.0, 0.0];
        let m = minimize(f, |_: &mut [f64]| {}, &x0, &Options::default(), &mut |_, _| {});
        assert_eq!(m.value, 0.0);
    }
}
