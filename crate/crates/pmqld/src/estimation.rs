//! Maximum-likelihood and moment estimation for the PMQLD and its
//! zero-modified variant, with analytic scores, the observed information
//! matrix, Wald intervals, and the likelihood-ratio test.
//!
//! Optimization always runs in unconstrained coordinates
//! `a = ln θ, b = ln(α³+1), c = ln δ` (plus a logistic coordinate for the
//! zero-cell probability in the zero-modified fit), which removes the
//! boundary failures at α³ → −1 and θ → 0 that plague boxed optimizers on
//! these likelihoods. Multi-start search covers the flat, ridge-shaped
//! surfaces that show up when δ runs away from θ and α.

use crate::data::FrequencyTable;
use crate::dist::{digamma_for, trigamma_for, PmqldParams};
use crate::error::{Error, Result};
use crate::optim::{maximize_bfgs, solve_newton};
use crate::parallel::par_map_range;
use crate::specfun::{chi_square_sf, std_normal_quantile};
use crate::zeromod::ZeroModified;
use nalgebra::DMatrix;
use serde::Serialize;

/// Estimation method recorded in a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Mle,
    Mme,
}

/// Outcome of a model fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// Short model tag, e.g. "pmqld" or "zmpmqld".
    pub model: String,
    pub method: Method,
    pub param_names: Vec<String>,
    pub estimates: Vec<f64>,
    /// Wald standard errors from the inverse observed information; absent
    /// when the information matrix is not positive definite.
    pub std_errors: Option<Vec<f64>>,
    /// Inverse observed information, row major.
    pub covariance: Option<Vec<Vec<f64>>>,
    pub neg2_loglik: f64,
    pub aic: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FitResult {
    pub fn num_params(&self) -> usize {
        self.estimates.len()
    }

    /// Reconstructs PMQLD parameters from a "pmqld" or "zmpmqld" fit.
    pub fn pmqld_params(&self) -> Result<PmqldParams> {
        if self.estimates.len() < 3 {
            return Err(Error::Estimation(format!(
                "fit for model '{}' does not carry PMQLD parameters",
                self.model
            )));
        }
        PmqldParams::new(self.estimates[0], self.estimates[1], self.estimates[2])
    }

    pub fn estimate(&self, name: &str) -> Option<f64> {
        self.param_names
            .iter()
            .position(|p| p == name)
            .map(|i| self.estimates[i])
    }
}

/// Knobs for the optimizer shared by every fit in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Infinity-norm threshold on the transformed-space gradient, relative
    /// to max(1, |log-likelihood|).
    pub grad_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            grad_tol: 1e-8,
        }
    }
}

/// Log-likelihood of PMQLD parameters on a frequency table.
///
/// Parameters whose mass function is not everywhere nonnegative (possible
/// when α³ < 0) are outside the likelihood domain and produce an error.
pub fn log_likelihood(params: &PmqldParams, data: &FrequencyTable) -> Result<f64> {
    if !params.has_proper_mass() {
        return Err(Error::Numeric(
            "mass function is negative somewhere on the support; outside the likelihood domain"
                .into(),
        ));
    }
    let mut ll = 0.0;
    for &(x, f) in data.rows() {
        if f == 0 {
            continue;
        }
        ll += f as f64 * params.log_pmf(x);
    }
    if !ll.is_finite() {
        return Err(Error::Numeric(
            "log-likelihood is not finite at the given parameters".into(),
        ));
    }
    Ok(ll)
}

/// Per-observation derivatives of log f(x) in the natural coordinates
/// (θ, α³, δ).
struct ObsScore {
    theta: f64,
    alpha3: f64,
    delta: f64,
}

fn obs_score(params: &PmqldParams, x: u64) -> ObsScore {
    let t = params.theta();
    let d = params.delta();
    let xf = x as f64;
    let w = params.branch_weights(x);
    let gamma = w.w1 / (1.0 + t) + w.w2 / t;
    let a1 = (1.0 + t).ln() + digamma_for(d);
    let a2 = t.ln() + digamma_for(xf + d);
    ObsScore {
        theta: 1.0 / t + (d - 1.0) * gamma - (xf + d) / (1.0 + t),
        alpha3: w.c - 1.0 / (params.alpha_cubed() + 1.0),
        delta: w.w2 * (a2 - a1),
    }
}

/// Analytic score vector (∂ℓ/∂θ, ∂ℓ/∂α, ∂ℓ/∂δ).
pub fn score(params: &PmqldParams, data: &FrequencyTable) -> [f64; 3] {
    let mut s = [0.0; 3];
    for &(x, f) in data.rows() {
        if f == 0 {
            continue;
        }
        let o = obs_score(params, x);
        let f = f as f64;
        s[0] += f * o.theta;
        s[1] += f * o.alpha3;
        s[2] += f * o.delta;
    }
    s[1] *= 3.0 * params.alpha() * params.alpha();
    s
}

/// Score in (θ, α³, δ); the α³ component is score_α / (3α²), well defined
/// at α = 0. This is what the unconstrained optimizer consumes.
fn score_alpha3(params: &PmqldParams, data: &FrequencyTable) -> [f64; 3] {
    let mut s = [0.0; 3];
    for &(x, f) in data.rows() {
        if f == 0 {
            continue;
        }
        let o = obs_score(params, x);
        let f = f as f64;
        s[0] += f * o.theta;
        s[1] += f * o.alpha3;
        s[2] += f * o.delta;
    }
    s
}

/// Observed information matrix, the negative Hessian of the log-likelihood
/// in (θ, α, δ). Assembled from the closed-form second derivatives written
/// in mixture-weight form, which keeps every term finite for large δ and
/// extreme θ.
pub fn observed_information(params: &PmqldParams, data: &FrequencyTable) -> [[f64; 3]; 3] {
    let t = params.theta();
    let d = params.delta();
    let alpha = params.alpha();
    let a3 = params.alpha_cubed();
    let a1 = (1.0 + t).ln() + digamma_for(d);
    let trig_d = trigamma_for(d);
    let mut h = [[0.0; 3]; 3];
    let mut n = 0.0;
    for &(x, f) in data.rows() {
        if f == 0 {
            continue;
        }
        let f = f as f64;
        n += f;
        let xf = x as f64;
        let w = params.branch_weights(x);
        let gamma = w.w1 / (1.0 + t) + w.w2 / t;
        let a2 = t.ln() + digamma_for(xf + d);
        let dbar = w.w1 * a1 + w.w2 * a2;

        // theta-theta
        h[0][0] += f
            * ((xf + d) / (1.0 + t).powi(2)
                + (d - 1.0) * (d - 2.0) * (w.w1 / (1.0 + t).powi(2) + w.w2 / (t * t))
                - ((d - 1.0) * gamma).powi(2));
        // alpha-alpha
        h[1][1] += f * (6.0 * alpha * w.c - 9.0 * alpha.powi(4) * w.c * w.c);
        // delta-delta
        h[2][2] += f
            * (w.w1 * w.w2 * (a1 - a2).powi(2)
                + w.w2 * (trigamma_for(xf + d) - trig_d));
        // theta-alpha
        h[0][1] += f * 3.0 * alpha * alpha * (d - 1.0) * w.c * (1.0 / (1.0 + t) - gamma);
        // delta-alpha
        h[1][2] += f * 3.0 * alpha * alpha * w.c * w.w2 * (a1 - a2);
        // delta-theta
        h[0][2] += f
            * (gamma + (d - 1.0) * (w.w1 * a1 / (1.0 + t) + w.w2 * a2 / t)
                - (d - 1.0) * gamma * dbar);
    }
    h[0][0] -= n / (t * t);
    h[1][1] -= 3.0 * n * alpha * (2.0 - a3) / (a3 + 1.0).powi(2);
    h[0][2] -= n / (1.0 + t);
    // negate and symmetrize
    [
        [-h[0][0], -h[0][1], -h[0][2]],
        [-h[0][1], -h[1][1], -h[1][2]],
        [-h[0][2], -h[1][2], -h[2][2]],
    ]
}

fn to_natural(z: &[f64]) -> Option<PmqldParams> {
    let theta = z[0].exp();
    let a3 = z[1].exp_m1();
    let delta = z[2].exp();
    let alpha = a3.cbrt();
    PmqldParams::new(theta, alpha, delta).ok()
}

fn from_natural(params: &PmqldParams) -> [f64; 3] {
    [
        params.theta().ln(),
        params.alpha_cubed().ln_1p(),
        params.delta().ln(),
    ]
}

#[allow(clippy::type_complexity)]
fn transformed_objective(data: &FrequencyTable) -> impl Fn(&[f64]) -> f64 + '_ {
    move |z: &[f64]| match to_natural(z) {
        Some(p) => log_likelihood(&p, data).unwrap_or(f64::NAN),
        None => f64::NAN,
    }
}

#[allow(clippy::type_complexity)]
fn transformed_gradient(data: &FrequencyTable) -> impl Fn(&[f64]) -> Option<Vec<f64>> + '_ {
    move |z: &[f64]| {
        let p = to_natural(z)?;
        if !p.has_proper_mass() {
            return None;
        }
        let s = score_alpha3(&p, data);
        let g = vec![
            p.theta() * s[0],
            (p.alpha_cubed() + 1.0) * s[1],
            p.delta() * s[2],
        ];
        g.iter().all(|v| v.is_finite()).then_some(g)
    }
}

/// Deterministic start recipes: the moment solution when it exists, a
/// moment-matched negative binomial, a geometric, and scaled variants that
/// probe the long (θ, δ) ridge.
fn mle_starts(data: &FrequencyTable, init: Option<&PmqldParams>) -> Vec<[f64; 3]> {
    let mean = data.mean();
    let var = data.sample_variance();
    let mut starts: Vec<[f64; 3]> = Vec::new();
    if let Some(p) = init {
        starts.push(from_natural(p));
    }
    if let Ok(p) = solve_moment_equations(
        data.raw_moment(1),
        data.raw_moment(2),
        data.raw_moment(3),
    ) {
        starts.push(from_natural(&p));
    }
    let (theta_nb, delta_nb) = if var > mean {
        let th = mean / (var - mean);
        (th, (mean * th).max(0.05))
    } else {
        (1.0 / mean.max(1e-6), 1.0)
    };
    let pack = |theta: f64, a3: f64, delta: f64| [theta.ln(), a3.ln_1p(), delta.ln()];
    starts.push(pack(theta_nb, 0.02, delta_nb));
    starts.push(pack(1.0 / mean.max(1e-6), 1.0, 1.0));
    // along the ridge theta, delta scaled together the NB mean is preserved
    starts.push(pack(4.0 * theta_nb, 0.5, 4.0 * delta_nb));
    starts.push(pack(10.0 * theta_nb, 0.5, 10.0 * delta_nb));
    starts.push(pack(theta_nb * 3.32, 2.0, delta_nb * 0.3));
    starts.push(pack(theta_nb * 0.3, 0.5, delta_nb * 3.32));
    starts.push(pack(2.0 / mean.max(1e-6), 1.0, 0.8));
    starts
}

/// Maximum-likelihood fit of the PMQLD.
pub fn fit_mle(
    data: &FrequencyTable,
    init: Option<PmqldParams>,
    options: &FitOptions,
) -> Result<FitResult> {
    if data.distinct_values() < 2 {
        return Err(Error::Estimation(
            "maximum likelihood needs at least two distinct observed values".into(),
        ));
    }
    let starts = mle_starts(data, init.as_ref());
    let objective = transformed_objective(data);
    let gradient = transformed_gradient(data);
    let outcomes = par_map_range(starts.len(), |i| {
        maximize_bfgs(
            &objective,
            &gradient,
            &starts[i],
            options.max_iterations,
            options.grad_tol,
        )
    });
    let best = outcomes
        .into_iter()
        .flatten()
        .filter(|o| o.value.is_finite())
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| {
            Error::Convergence(format!(
                "all {} starts failed on n={} observations",
                starts.len(),
                data.n()
            ))
        })?;
    let params = to_natural(&best.x).ok_or_else(|| {
        Error::Convergence("optimizer settled outside the parameter space".into())
    })?;
    let ll = best.value;
    let info = observed_information(&params, data);
    let (std_errors, covariance, pd) = invert_information(&info);
    Ok(FitResult {
        model: "pmqld".into(),
        method: Method::Mle,
        param_names: vec!["theta".into(), "alpha".into(), "delta".into()],
        estimates: vec![params.theta(), params.alpha(), params.delta()],
        std_errors,
        covariance,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 6.0,
        converged: best.converged && pd,
        iterations: best.iterations,
    })
}

/// (standard errors, covariance, information was positive definite)
pub(crate) type InformationInverse = (Option<Vec<f64>>, Option<Vec<Vec<f64>>>, bool);

/// Inverts a symmetric information matrix via Cholesky.
pub(crate) fn invert_information(info: &[[f64; 3]; 3]) -> InformationInverse {
    let m = DMatrix::from_fn(3, 3, |i, j| info[i][j]);
    invert_information_dyn(&m)
}

pub(crate) fn invert_information_dyn(info: &DMatrix<f64>) -> InformationInverse {
    if info.iter().any(|v| !v.is_finite()) {
        return (None, None, false);
    }
    match info.clone().cholesky() {
        Some(chol) => {
            let cov = chol.inverse();
            let k = info.nrows();
            let se: Vec<f64> = (0..k).map(|i| cov[(i, i)].sqrt()).collect();
            let rows: Vec<Vec<f64>> = (0..k)
                .map(|i| (0..k).map(|j| cov[(i, j)]).collect())
                .collect();
            (Some(se), Some(rows), true)
        }
        None => (None, None, false),
    }
}

/// Solves the three moment equations μ′ᵣ(θ, α, δ) = mᵣ for r = 1, 2, 3.
pub fn solve_moment_equations(m1: f64, m2: f64, m3: f64) -> Result<PmqldParams> {
    if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0) {
        return Err(Error::Estimation(
            "moment equations need positive sample moments".into(),
        ));
    }
    let residual = |z: &[f64]| -> Option<Vec<f64>> {
        let p = to_natural(z)?;
        let m = p.moments();
        let r = vec![
            m.raw_moments[0] / m1 - 1.0,
            m.raw_moments[1] / m2 - 1.0,
            m.raw_moments[2] / m3 - 1.0,
        ];
        r.iter().all(|v| v.is_finite()).then_some(r)
    };
    let var = m2 - m1 * m1;
    let (theta_nb, delta_nb) = if var > m1 {
        let th = m1 / (var - m1);
        (th, (m1 * th).max(0.05))
    } else {
        return Err(Error::Estimation(
            "sample variance does not exceed the mean; moment equations are infeasible".into(),
        ));
    };
    let pack = |theta: f64, a3: f64, delta: f64| [theta.ln(), a3.ln_1p(), delta.ln()];
    let starts = [
        pack(theta_nb, 0.02, delta_nb),
        pack(theta_nb, 1.0, delta_nb),
        pack(theta_nb * 3.0, 0.5, delta_nb * 3.0),
        pack(theta_nb * 0.4, 0.2, delta_nb),
        pack(1.0 / m1, 1.0, 1.0),
    ];
    for s in &starts {
        if let Some((z, _)) = solve_newton(residual, s, 200, 1e-10) {
            if let Some(p) = to_natural(&z) {
                return Ok(p);
            }
        }
    }
    Err(Error::Estimation(
        "no root of the moment equations found in the parameter domain".into(),
    ))
}

/// Method-of-moments fit.
pub fn fit_mme(data: &FrequencyTable) -> Result<FitResult> {
    if data.distinct_values() < 2 {
        return Err(Error::Estimation(
            "moment estimation needs at least two distinct observed values".into(),
        ));
    }
    if data.sample_variance() <= data.mean() {
        return Err(Error::Estimation(
            "sample variance does not exceed the mean; the PMQLD is over-dispersed".into(),
        ));
    }
    let params = solve_moment_equations(
        data.raw_moment(1),
        data.raw_moment(2),
        data.raw_moment(3),
    )?;
    let ll = log_likelihood(&params, data)?;
    Ok(FitResult {
        model: "pmqld".into(),
        method: Method::Mme,
        param_names: vec!["theta".into(), "alpha".into(), "delta".into()],
        estimates: vec![params.theta(), params.alpha(), params.delta()],
        std_errors: None,
        covariance: None,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 6.0,
        converged: true,
        iterations: 0,
    })
}

/// Log-likelihood of the zero-modified PMQLD.
pub fn zm_log_likelihood(
    zm: &ZeroModified<PmqldParams>,
    data: &FrequencyTable,
) -> Result<f64> {
    let ll = zm_ll_raw(zm.phi(), zm.base(), data);
    if !ll.is_finite() {
        return Err(Error::Numeric(
            "zero-modified log-likelihood is not finite at the given parameters".into(),
        ));
    }
    Ok(ll)
}

fn zm_ll_raw(phi: f64, base: &PmqldParams, data: &FrequencyTable) -> f64 {
    let n0 = data.zero_count() as f64;
    let mut ll = 0.0;
    if n0 > 0.0 {
        ll += n0 * (phi + (1.0 - phi) * base.pmf(0)).max(0.0).ln();
    }
    let log_1mphi = if data.n() > data.zero_count() {
        (1.0 - phi).ln()
    } else {
        0.0
    };
    for &(x, f) in data.rows() {
        if x == 0 || f == 0 {
            continue;
        }
        ll += f as f64 * (log_1mphi + base.log_pmf(x));
    }
    ll
}

/// Analytic score of the zero-modified log-likelihood, ordered
/// (∂/∂θ, ∂/∂α, ∂/∂δ, ∂/∂φ).
pub fn zm_score(zm: &ZeroModified<PmqldParams>, data: &FrequencyTable) -> [f64; 4] {
    zm_score_raw(zm.phi(), zm.base(), data)
}

fn zm_score_raw(phi: f64, base: &PmqldParams, data: &FrequencyTable) -> [f64; 4] {
    let n = data.n() as f64;
    let n0 = data.zero_count() as f64;
    let f0 = base.pmf(0);
    let g0 = phi + (1.0 - phi) * f0;
    let s0 = obs_score(base, 0);
    // weight applied to the x = 0 base scores through the modified zero cell
    let zero_w = n0 * (1.0 - phi) * f0 / g0;
    let mut st = zero_w * s0.theta;
    let mut sa3 = zero_w * s0.alpha3;
    let mut sd = zero_w * s0.delta;
    for &(x, f) in data.rows() {
        if x == 0 || f == 0 {
            continue;
        }
        let o = obs_score(base, x);
        let f = f as f64;
        st += f * o.theta;
        sa3 += f * o.alpha3;
        sd += f * o.delta;
    }
    let sphi = n0 * (1.0 - f0) / g0 - (n - n0) / (1.0 - phi);
    [
        st,
        3.0 * base.alpha() * base.alpha() * sa3,
        sd,
        sphi,
    ]
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

/// Maximum-likelihood fit of the zero-modified PMQLD.
///
/// The zero-cell probability is optimized through a logistic coordinate,
/// which maps the real line onto the admissible φ interval
/// (phi_lower_bound(base), 1) smoothly for every base parameter value.
pub fn fit_zm_mle(data: &FrequencyTable, options: &FitOptions) -> Result<FitResult> {
    if data.distinct_values() < 2 {
        return Err(Error::Estimation(
            "maximum likelihood needs at least two distinct observed values".into(),
        ));
    }
    let n = data.n() as f64;
    let n0 = data.zero_count() as f64;
    let g_emp = (n0 / n).clamp(1e-9, 1.0 - 1e-9);
    let t0 = (g_emp / (1.0 - g_emp)).ln();

    // zero-deleted table drives the base starts
    let positive_rows: Vec<(u64, u64)> =
        data.rows().iter().copied().filter(|&(x, _)| x > 0).collect();
    let base_starts = if let Ok(trunc) = FrequencyTable::from_rows(positive_rows) {
        let mut s = mle_starts(data, None);
        s.extend(mle_starts(&trunc, None));
        s
    } else {
        mle_starts(data, None)
    };
    let mut starts: Vec<[f64; 4]> = base_starts
        .iter()
        .map(|b| [t0, b[0], b[1], b[2]])
        .collect();
    if let Ok(plain) = fit_mle(data, None, options) {
        if let Ok(p) = plain.pmqld_params() {
            let b = from_natural(&p);
            starts.insert(0, [t0, b[0], b[1], b[2]]);
        }
    }

    let objective = |z: &[f64]| -> f64 {
        let Some(p) = to_natural(&z[1..]) else {
            return f64::NAN;
        };
        if !p.has_proper_mass() {
            return f64::NAN;
        }
        let f0 = p.pmf(0);
        if !(0.0..1.0).contains(&f0) {
            return f64::NAN;
        }
        let g0 = sigmoid(z[0]);
        let mut ll = n0 * g0.ln() + (n - n0) * ((-g0).ln_1p() - (-f0).ln_1p());
        for &(x, f) in data.rows() {
            if x == 0 || f == 0 {
                continue;
            }
            ll += f as f64 * p.log_pmf(x);
        }
        ll
    };
    let gradient = |z: &[f64]| -> Option<Vec<f64>> {
        let p = to_natural(&z[1..])?;
        if !p.has_proper_mass() {
            return None;
        }
        let f0 = p.pmf(0);
        if !(0.0..1.0).contains(&f0) {
            return None;
        }
        let g0 = sigmoid(z[0]);
        let s0 = obs_score(&p, 0);
        let tail_w = (n - n0) * f0 / (1.0 - f0);
        let mut st = tail_w * s0.theta;
        let mut sa3 = tail_w * s0.alpha3;
        let mut sd = tail_w * s0.delta;
        for &(x, f) in data.rows() {
            if x == 0 || f == 0 {
                continue;
            }
            let o = obs_score(&p, x);
            let f = f as f64;
            st += f * o.theta;
            sa3 += f * o.alpha3;
            sd += f * o.delta;
        }
        let g = vec![
            n0 - n * g0,
            p.theta() * st,
            (p.alpha_cubed() + 1.0) * sa3,
            p.delta() * sd,
        ];
        g.iter().all(|v| v.is_finite()).then_some(g)
    };

    let outcomes = par_map_range(starts.len(), |i| {
        maximize_bfgs(
            objective,
            gradient,
            &starts[i],
            options.max_iterations,
            options.grad_tol,
        )
    });
    let best = outcomes
        .into_iter()
        .flatten()
        .filter(|o| o.value.is_finite())
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| {
            Error::Convergence("all starts failed for the zero-modified fit".into())
        })?;
    let params = to_natural(&best.x[1..]).ok_or_else(|| {
        Error::Convergence("optimizer settled outside the parameter space".into())
    })?;
    let f0 = params.pmf(0);
    let g0 = sigmoid(best.x[0]);
    let phi = (g0 - f0) / (1.0 - f0);
    let ll = best.value;

    // 4x4 observed information by central differences of the analytic score
    let est = [params.theta(), params.alpha(), params.delta(), phi];
    let score_at = |v: &[f64; 4]| -> Option<[f64; 4]> {
        let p = PmqldParams::new(v[0], v[1], v[2]).ok()?;
        let s = zm_score_raw(v[3], &p, data);
        s.iter().all(|x| x.is_finite()).then_some(s)
    };
    let mut hess = DMatrix::<f64>::zeros(4, 4);
    let mut fd_ok = true;
    'outer: for j in 0..4 {
        let h = 1e-5 * est[j].abs().max(1e-3);
        let mut vp = est;
        let mut vm = est;
        vp[j] += h;
        vm[j] -= h;
        match (score_at(&vp), score_at(&vm)) {
            (Some(sp), Some(sm)) => {
                for i in 0..4 {
                    hess[(i, j)] = (sp[i] - sm[i]) / (2.0 * h);
                }
            }
            _ => {
                fd_ok = false;
                break 'outer;
            }
        }
    }
    let (std_errors, covariance, pd) = if fd_ok {
        let info = -(&hess + hess.transpose()) / 2.0;
        invert_information_dyn(&info)
    } else {
        (None, None, false)
    };

    Ok(FitResult {
        model: "zmpmqld".into(),
        method: Method::Mle,
        param_names: vec![
            "theta".into(),
            "alpha".into(),
            "delta".into(),
            "phi".into(),
        ],
        estimates: est.to_vec(),
        std_errors,
        covariance,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 8.0,
        converged: best.converged && pd,
        iterations: best.iterations,
    })
}

/// Likelihood-ratio test of a nested null fit against an alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LrTest {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
}

pub fn lr_test(fit_null: &FitResult, fit_alt: &FitResult) -> Result<LrTest> {
    if fit_alt.num_params() <= fit_null.num_params() {
        return Err(Error::Estimation(
            "alternative model must have more parameters than the null".into(),
        ));
    }
    let statistic = fit_null.neg2_loglik - fit_alt.neg2_loglik;
    if statistic < -1e-6 {
        return Err(Error::Estimation(format!(
            "negative LR statistic {statistic:.3e}: fits are non-nested or unconverged"
        )));
    }
    let statistic = statistic.max(0.0);
    let df = (fit_alt.num_params() - fit_null.num_params()) as u32;
    Ok(LrTest {
        statistic,
        df,
        p_value: chi_square_sf(statistic, df)?,
    })
}

/// Wald confidence intervals at the given level for every parameter.
pub fn confidence_intervals(fit: &FitResult, level: f64) -> Result<Vec<(f64, f64)>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!(
            "confidence level must be in (0, 1), got {level}"
        )));
    }
    let se = fit.std_errors.as_ref().ok_or_else(|| {
        Error::Estimation("fit carries no standard errors; intervals unavailable".into())
    })?;
    let z = std_normal_quantile(1.0 - (1.0 - level) / 2.0)?;
    Ok(fit
        .estimates
        .iter()
        .zip(se.iter())
        .map(|(&e, &s)| (e - z * s, e + z * s))
        .collect())
}
