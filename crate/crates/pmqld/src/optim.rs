//! In-house numerical workhorses for the estimation module: a BFGS
//! maximizer with backtracking line search, and a damped Newton solver for
//! small nonlinear systems. Both operate on unconstrained coordinates; the
//! callers own the reparameterizations.

use nalgebra::{DMatrix, DVector};

pub(crate) struct MaxOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximizes `f` from `x0` using BFGS with an Armijo backtracking line
/// search. `f` may return NaN or -inf for invalid points; the line search
/// treats those as rejections. `grad` must return None exactly where `f` is
/// invalid.
///
/// Convergence is declared when the gradient infinity norm drops below
/// `grad_tol * max(1, |f|)`; the scaling keeps the threshold attainable in
/// f64 when the objective is large.
pub(crate) fn maximize_bfgs<F, G>(
    f: F,
    grad: G,
    x0: &[f64],
    max_iter: usize,
    grad_tol: f64,
) -> Option<MaxOutcome>
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let dim = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice());
    if !fx.is_finite() {
        return None;
    }
    let mut g = DVector::from_vec(grad(x.as_slice())?);
    let mut h = DMatrix::<f64>::identity(dim, dim);
    let mut iterations = 0;
    let mut stalled = 0;

    for _ in 0..max_iter {
        iterations += 1;
        let gnorm = g.amax();
        if gnorm < grad_tol * fx.abs().max(1.0) {
            return Some(MaxOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations,
                converged: true,
            });
        }
        let mut dir = &h * &g; // ascent direction
        let mut slope = dir.dot(&g);
        if !slope.is_finite() || slope <= 0.0 {
            // lost curvature; restart from steepest ascent
            h = DMatrix::identity(dim, dim);
            dir = g.clone();
            slope = dir.dot(&g);
        }
        // keep single steps inside the well-scaled region
        let dmax = dir.amax();
        let mut t = if dmax > 5.0 { 5.0 / dmax } else { 1.0 };
        let mut accepted = false;
        let mut x_new = x.clone();
        let mut f_new = fx;
        for _ in 0..60 {
            x_new = &x + &dir * t;
            f_new = f(x_new.as_slice());
            if f_new.is_finite() && f_new >= fx + 1e-4 * t * slope {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // objective saturated at f64 resolution along the ascent
            // direction; accept stationarity when the gradient is small
            let gnorm = g.amax();
            return Some(MaxOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations,
                converged: gnorm < 1e-4 * fx.abs().max(1.0),
            });
        }
        let g_new = match grad(x_new.as_slice()) {
            Some(v) => DVector::from_vec(v),
            None => {
                return Some(MaxOutcome {
                    x: x.as_slice().to_vec(),
                    value: fx,
                    iterations,
                    converged: false,
                })
            }
        };
        let s = &x_new - &x;
        let y = &g - &g_new; // gradient of -f increases along s
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            // BFGS update of the inverse Hessian of -f
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            h = &h - (&hy * s.transpose() + &s * hy.transpose()) * rho
                + &s * s.transpose() * (rho * rho * yhy + rho);
        }
        if f_new - fx < 4.0 * f64::EPSILON * fx.abs().max(1.0) {
            stalled += 1;
        } else {
            stalled = 0;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if stalled >= 3 {
            // several consecutive below-resolution improvements
            let gnorm = g.amax();
            return Some(MaxOutcome {
                x: x.as_slice().to_vec(),
                value: fx,
                iterations,
                converged: gnorm < 1e-4 * fx.abs().max(1.0),
            });
        }
    }
    let gnorm = g.amax();
    Some(MaxOutcome {
        x: x.as_slice().to_vec(),
        value: fx,
        iterations,
        converged: gnorm < grad_tol * fx.abs().max(1.0),
    })
}

/// Damped Newton iteration for square systems `res(x) = 0` with a
/// forward-difference Jacobian. Returns the solution and the final residual
/// infinity norm.
pub(crate) fn solve_newton<R>(
    res: R,
    x0: &[f64],
    max_iter: usize,
    tol: f64,
) -> Option<(Vec<f64>, f64)>
where
    R: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut r = DVector::from_vec(res(&x)?);
    for _ in 0..max_iter {
        let rnorm = r.amax();
        if rnorm < tol {
            return Some((x, rnorm));
        }
        // central-difference Jacobian
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for j in 0..dim {
            let h = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let rp = DVector::from_vec(res(&xp)?);
            let rm = DVector::from_vec(res(&xm)?);
            let col = (rp - rm) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let step = jac.lu().solve(&r)?;
        // backtrack on the residual norm
        let base = r.norm_squared();
        let mut t = 1.0;
        let mut advanced = false;
        for _ in 0..40 {
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - si * t).collect();
            if let Some(rc) = res(&cand) {
                let rc = DVector::from_vec(rc);
                if rc.norm_squared() < base * (1.0 - 1e-4 * t) || rc.amax() < tol {
                    x = cand;
                    r = rc;
                    advanced = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !advanced {
            return None;
        }
    }
    let rnorm = r.amax();
    if rnorm < tol {
        Some((x, rnorm))
    } else {
        None
    }
}
