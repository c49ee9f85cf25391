//! Baseline models, chi-square goodness of fit with tail pooling, and
//! multi-model comparison tables.
//!
//! The baselines are the geometric, negative binomial, and Poisson-Lindley
//! distributions plus their zero-modified forms; together with the PMQLD
//! and ZMPMQLD they make up the model sets compared on the bundled data
//! sets.

use crate::data::FrequencyTable;
use crate::dist::{digamma_for, trigamma_for, CountDistribution, PmqldParams};
use crate::error::{Error, Result};
use crate::estimation::{
    fit_mle, fit_zm_mle, invert_information_dyn, FitOptions, FitResult, Method,
};
use crate::optim::maximize_bfgs;
use crate::parallel::par_map_range;
use crate::specfun::{chi_square_sf, lgamma_raw};
use crate::zeromod::ZeroModified;
use nalgebra::DMatrix;
use serde::Serialize;

/// One-, and two-parameter baseline count distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BaselineModel {
    /// f(x) = θ/(1+θ)^(x+1).
    Geometric { theta: f64 },
    /// f(x) = Γ(x+δ)/(x! Γ(δ)) (θ/(1+θ))^δ (1/(1+θ))^x.
    NegBinomial { delta: f64, theta: f64 },
    /// f(x) = θ²(x+θ+2)/(θ+1)^(x+3).
    PoissonLindley { theta: f64 },
}

impl BaselineModel {
    pub fn geometric(theta: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        Ok(Self::Geometric { theta })
    }

    pub fn neg_binomial(delta: f64, theta: f64) -> Result<Self> {
        check_positive("delta", delta)?;
        check_positive("theta", theta)?;
        Ok(Self::NegBinomial { delta, theta })
    }

    pub fn poisson_lindley(theta: f64) -> Result<Self> {
        check_positive("theta", theta)?;
        Ok(Self::PoissonLindley { theta })
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::Parameter(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

impl CountDistribution for BaselineModel {
    fn log_pmf(&self, x: u64) -> f64 {
        let xf = x as f64;
        match *self {
            Self::Geometric { theta } => theta.ln() - (xf + 1.0) * theta.ln_1p(),
            Self::NegBinomial { delta, theta } => {
                lgamma_raw(xf + delta) - lgamma_raw(delta) - lgamma_raw(xf + 1.0)
                    + delta * (theta.ln() - theta.ln_1p())
                    - xf * theta.ln_1p()
            }
            Self::PoissonLindley { theta } => {
                2.0 * theta.ln() + (xf + theta + 2.0).ln() - (xf + 3.0) * theta.ln_1p()
            }
        }
    }

    fn cdf(&self, x: u64) -> Result<f64> {
        match *self {
            Self::Geometric { theta } => {
                Ok(-(-(x as f64 + 1.0) * theta.ln_1p()).exp_m1())
            }
            _ => {
                let mut acc = 0.0;
                for t in 0..=x {
                    acc += self.pmf(t);
                }
                Ok(acc.min(1.0))
            }
        }
    }
}

/// Models understood by [`compare_models`] and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelSpec {
    Gd,
    Nbd,
    Pld,
    ZmNbd,
    ZmPld,
    Pmqld,
    ZmPmqld,
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gd => "gd",
            Self::Nbd => "nbd",
            Self::Pld => "pld",
            Self::ZmNbd => "zmnbd",
            Self::ZmPld => "zmpld",
            Self::Pmqld => "pmqld",
            Self::ZmPmqld => "zmpmqld",
        }
    }

    pub fn all() -> &'static [ModelSpec] {
        &[
            Self::Gd,
            Self::Nbd,
            Self::Pld,
            Self::ZmNbd,
            Self::ZmPld,
            Self::Pmqld,
            Self::ZmPmqld,
        ]
    }
}

impl std::str::FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gd" | "geometric" => Ok(Self::Gd),
            "nbd" | "negbinomial" | "nb" => Ok(Self::Nbd),
            "pld" | "poissonlindley" => Ok(Self::Pld),
            "zmnbd" => Ok(Self::ZmNbd),
            "zmpld" => Ok(Self::ZmPld),
            "pmqld" => Ok(Self::Pmqld),
            "zmpmqld" => Ok(Self::ZmPmqld),
            other => Err(Error::Data(format!("unknown model name '{other}'"))),
        }
    }
}

/// A fitted model carrying enough state to evaluate probabilities.
#[derive(Debug, Clone)]
pub enum FittedModel {
    Pmqld(PmqldParams),
    ZmPmqld(ZeroModified<PmqldParams>),
    Baseline(BaselineModel),
    ZmBaseline(ZeroModified<BaselineModel>),
}

impl CountDistribution for FittedModel {
    fn log_pmf(&self, x: u64) -> f64 {
        match self {
            Self::Pmqld(p) => p.log_pmf(x),
            Self::ZmPmqld(p) => p.log_pmf(x),
            Self::Baseline(p) => p.log_pmf(x),
            Self::ZmBaseline(p) => p.log_pmf(x),
        }
    }

    fn cdf(&self, x: u64) -> Result<f64> {
        match self {
            Self::Pmqld(p) => p.cdf(x),
            Self::ZmPmqld(p) => p.cdf(x),
            Self::Baseline(p) => p.cdf(x),
            Self::ZmBaseline(p) => p.cdf(x),
        }
    }

    fn survival(&self, x: u64) -> Result<f64> {
        match self {
            Self::Pmqld(p) => p.survival(x),
            Self::ZmPmqld(p) => Ok((1.0 - p.phi()) * p.base().survival(x)?),
            _ => Ok((1.0 - self.cdf(x)?).max(0.0)),
        }
    }
}

fn sum_x(data: &FrequencyTable) -> f64 {
    data.sum_x() as f64
}

/// Geometric MLE; closed form θ̂ = 1/x̄.
fn fit_gd(data: &FrequencyTable) -> Result<FitResult> {
    let n = data.n() as f64;
    let mean = data.mean();
    if mean <= 0.0 {
        return Err(Error::Estimation(
            "geometric fit requires a positive sample mean".into(),
        ));
    }
    let theta = 1.0 / mean;
    let model = BaselineModel::Geometric { theta };
    let ll = baseline_ll(&model, data);
    let info = n / (theta * theta) - (sum_x(data) + n) / (1.0 + theta).powi(2);
    let se = if info > 0.0 {
        Some(vec![(1.0 / info).sqrt()])
    } else {
        None
    };
    Ok(FitResult {
        model: "gd".into(),
        method: Method::Mle,
        param_names: vec!["theta".into()],
        estimates: vec![theta],
        covariance: se.as_ref().map(|s| vec![vec![s[0] * s[0]]]),
        std_errors: se,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 2.0,
        converged: true,
        iterations: 0,
    })
}

fn baseline_ll(model: &BaselineModel, data: &FrequencyTable) -> f64 {
    data.rows()
        .iter()
        .map(|&(x, f)| f as f64 * model.log_pmf(x))
        .sum()
}

/// Poisson-Lindley MLE by bisecting the score in θ.
fn fit_pld(data: &FrequencyTable) -> Result<FitResult> {
    let n = data.n() as f64;
    let sx = sum_x(data);
    if data.mean() <= 0.0 {
        return Err(Error::Estimation(
            "Poisson-Lindley fit requires a positive sample mean".into(),
        ));
    }
    let score = |theta: f64| -> f64 {
        let mut s = 2.0 * n / theta - (sx + 3.0 * n) / (1.0 + theta);
        for &(x, f) in data.rows() {
            s += f as f64 / (x as f64 + theta + 2.0);
        }
        s
    };
    let mut lo = 1e-9;
    let mut hi = 1.0;
    let mut expansions = 0;
    while score(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::Convergence(
                "Poisson-Lindley score has no root in a bounded range".into(),
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if score(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) < 1e-13 * hi {
            break;
        }
    }
    let theta = 0.5 * (lo + hi);
    let model = BaselineModel::PoissonLindley { theta };
    let ll = baseline_ll(&model, data);
    // observed information from the analytic second derivative
    let mut info = 2.0 * n / (theta * theta) - (sx + 3.0 * n) / (1.0 + theta).powi(2);
    for &(x, f) in data.rows() {
        info += f as f64 / (x as f64 + theta + 2.0).powi(2);
    }
    let se = if info > 0.0 {
        Some(vec![(1.0 / info).sqrt()])
    } else {
        None
    };
    Ok(FitResult {
        model: "pld".into(),
        method: Method::Mle,
        param_names: vec!["theta".into()],
        estimates: vec![theta],
        covariance: se.as_ref().map(|s| vec![vec![s[0] * s[0]]]),
        std_errors: se,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 2.0,
        converged: true,
        iterations: 0,
    })
}

/// Negative binomial MLE with analytic score and information.
fn fit_nbd(data: &FrequencyTable, options: &FitOptions) -> Result<FitResult> {
    let n = data.n() as f64;
    let sx = sum_x(data);
    let mean = data.mean();
    let var = data.sample_variance();
    if mean <= 0.0 {
        return Err(Error::Estimation(
            "negative binomial fit requires a positive sample mean".into(),
        ));
    }
    // z = (ln theta, ln delta)
    let objective = |z: &[f64]| -> f64 {
        let (theta, delta) = (z[0].exp(), z[1].exp());
        if !theta.is_finite() || !delta.is_finite() || theta <= 0.0 || delta <= 0.0 {
            return f64::NAN;
        }
        baseline_ll(&BaselineModel::NegBinomial { delta, theta }, data)
    };
    let gradient = |z: &[f64]| -> Option<Vec<f64>> {
        let (theta, delta) = (z[0].exp(), z[1].exp());
        let mut sd = n * (theta.ln() - theta.ln_1p());
        for &(x, f) in data.rows() {
            sd += f as f64 * (digamma_for(x as f64 + delta) - digamma_for(delta));
        }
        let st = n * delta / theta - (n * delta + sx) / (1.0 + theta);
        let g = vec![theta * st, delta * sd];
        g.iter().all(|v| v.is_finite()).then_some(g)
    };
    let (theta0, delta0) = if var > mean {
        let t = mean / (var - mean);
        (t, mean * t)
    } else {
        (1.0 / mean, mean.max(1.0))
    };
    let starts = [
        [theta0.ln(), delta0.ln()],
        [(theta0 * 4.0).ln(), (delta0 * 4.0).ln()],
        [(theta0 * 0.25).ln(), (delta0 * 0.25).ln()],
        [0.0, 0.0],
    ];
    let best = starts
        .iter()
        .filter_map(|s| {
            maximize_bfgs(objective, gradient, s, options.max_iterations, options.grad_tol)
        })
        .filter(|o| o.value.is_finite())
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::Convergence("negative binomial fit failed".into()))?;
    let (theta, delta) = (best.x[0].exp(), best.x[1].exp());
    let ll = best.value;
    // analytic observed information in (theta, delta)
    let h_tt = -n * delta / (theta * theta) + (n * delta + sx) / (1.0 + theta).powi(2);
    let h_td = n / theta - n / (1.0 + theta);
    let mut h_dd = 0.0;
    for &(x, f) in data.rows() {
        h_dd += f as f64 * (trigamma_for(x as f64 + delta) - trigamma_for(delta));
    }
    let info = DMatrix::from_row_slice(2, 2, &[-h_tt, -h_td, -h_td, -h_dd]);
    let (std_errors, covariance, pd) = invert_information_dyn(&info);
    Ok(FitResult {
        model: "nbd".into(),
        method: Method::Mle,
        param_names: vec!["theta".into(), "delta".into()],
        estimates: vec![theta, delta],
        std_errors,
        covariance,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 4.0,
        converged: best.converged && pd,
        iterations: best.iterations,
    })
}

/// Fits one of the baseline kinds by maximum likelihood.
pub fn fit_baseline(
    spec: ModelSpec,
    data: &FrequencyTable,
    options: &FitOptions,
) -> Result<FitResult> {
    match spec {
        ModelSpec::Gd => fit_gd(data),
        ModelSpec::Nbd => fit_nbd(data, options),
        ModelSpec::Pld => fit_pld(data),
        other => Err(Error::Estimation(format!(
            "fit_baseline does not handle '{}'",
            other.name()
        ))),
    }
}

fn zm_ll_generic<D: CountDistribution>(phi: f64, base: &D, data: &FrequencyTable) -> f64 {
    let n0 = data.zero_count() as f64;
    let mut ll = 0.0;
    if n0 > 0.0 {
        ll += n0 * (phi + (1.0 - phi) * base.pmf(0)).max(0.0).ln();
    }
    let positive = data.n() - data.zero_count();
    let log_1mphi = if positive > 0 { (1.0 - phi).ln() } else { 0.0 };
    for &(x, f) in data.rows() {
        if x == 0 || f == 0 {
            continue;
        }
        ll += f as f64 * (log_1mphi + base.log_pmf(x));
    }
    ll
}

/// Fits a zero-modified baseline (ZMNBD or ZMPLD).
///
/// The zero cell profile-solves to the empirical zero fraction, so the base
/// parameters maximize the zero-deleted part of the likelihood and φ follows
/// in closed form.
pub fn fit_zm_baseline(
    spec: ModelSpec,
    data: &FrequencyTable,
    options: &FitOptions,
) -> Result<FitResult> {
    let (base_dim, model_name): (usize, &str) = match spec {
        ModelSpec::ZmNbd => (2, "zmnbd"),
        ModelSpec::ZmPld => (1, "zmpld"),
        other => {
            return Err(Error::Estimation(format!(
                "fit_zm_baseline does not handle '{}'",
                other.name()
            )))
        }
    };
    if data.distinct_values() < 2 {
        return Err(Error::Estimation(
            "zero-modified fits need at least two distinct observed values".into(),
        ));
    }
    let n = data.n() as f64;
    let n0 = data.zero_count() as f64;
    let build = move |z: &[f64]| -> Option<BaselineModel> {
        match spec {
            ModelSpec::ZmNbd => {
                let (theta, delta) = (z[0].exp(), z[1].exp());
                (theta.is_finite() && delta.is_finite())
                    .then_some(BaselineModel::NegBinomial { delta, theta })
            }
            _ => {
                let theta = z[0].exp();
                theta.is_finite().then_some(BaselineModel::PoissonLindley { theta })
            }
        }
    };
    // zero-deleted objective: sum_{x>=1} f log f(x) - (n - n0) ln(1 - f(0))
    let objective = |z: &[f64]| -> f64 {
        let Some(m) = build(z) else { return f64::NAN };
        let f0 = m.pmf(0);
        if !(0.0..1.0).contains(&f0) {
            return f64::NAN;
        }
        let mut ll = -(n - n0) * (-f0).ln_1p();
        for &(x, f) in data.rows() {
            if x == 0 || f == 0 {
                continue;
            }
            ll += f as f64 * m.log_pmf(x);
        }
        ll
    };
    let gradient = |z: &[f64]| -> Option<Vec<f64>> {
        // numeric central differences; one or two dimensions only
        let mut g = vec![0.0; z.len()];
        for j in 0..z.len() {
            let h = 1e-6 * z[j].abs().max(1.0);
            let mut zp = z.to_vec();
            let mut zm = z.to_vec();
            zp[j] += h;
            zm[j] -= h;
            let (fp, fm) = (objective(&zp), objective(&zm));
            if !fp.is_finite() || !fm.is_finite() {
                return None;
            }
            g[j] = (fp - fm) / (2.0 * h);
        }
        Some(g)
    };
    let mean = data.mean();
    let var = data.sample_variance();
    let starts: Vec<Vec<f64>> = match spec {
        ModelSpec::ZmNbd => {
            let (t0, d0) = if var > mean {
                let t = mean / (var - mean);
                (t, (mean * t).max(0.05))
            } else {
                (1.0 / mean.max(1e-6), 1.0)
            };
            vec![
                vec![t0.ln(), d0.ln()],
                vec![(4.0 * t0).ln(), (4.0 * d0).ln()],
                vec![(0.25 * t0).ln(), (0.25 * d0).ln()],
                vec![0.0, 0.0],
            ]
        }
        _ => vec![
            vec![(2.0 / mean.max(1e-6)).ln()],
            vec![0.0],
            vec![(0.2f64).ln()],
        ],
    };
    let best = starts
        .iter()
        .filter_map(|s| {
            maximize_bfgs(objective, gradient, s, options.max_iterations, options.grad_tol)
        })
        .filter(|o| o.value.is_finite())
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| {
            Error::Convergence(format!("zero-modified {model_name} fit failed"))
        })?;
    let base = build(&best.x)
        .ok_or_else(|| Error::Convergence("optimizer left the parameter space".into()))?;
    let f0 = base.pmf(0);
    let g_hat = n0 / n;
    let phi = (g_hat - f0) / (1.0 - f0);
    let mut ll = best.value;
    if n0 > 0.0 {
        ll += n0 * g_hat.ln();
    }
    if n - n0 > 0.0 {
        ll += (n - n0) * (1.0 - g_hat).ln();
    }

    // observed information by second differences of the natural
    // log-likelihood over (base params, phi)
    let k = base_dim + 1;
    let mut natural: Vec<f64> = match base {
        BaselineModel::NegBinomial { delta, theta } => vec![theta, delta],
        BaselineModel::PoissonLindley { theta } => vec![theta],
        BaselineModel::Geometric { theta } => vec![theta],
    };
    natural.push(phi);
    let nat_ll = |v: &[f64]| -> f64 {
        let m = match spec {
            ModelSpec::ZmNbd => BaselineModel::NegBinomial {
                theta: v[0],
                delta: v[1],
            },
            _ => BaselineModel::PoissonLindley { theta: v[0] },
        };
        if v[..base_dim].iter().any(|&p| p <= 0.0) {
            return f64::NAN;
        }
        zm_ll_generic(v[base_dim], &m, data)
    };
    let mut info = DMatrix::<f64>::zeros(k, k);
    let steps: Vec<f64> = natural
        .iter()
        .map(|v| 1e-4 * v.abs().max(1e-2))
        .collect();
    let f00 = nat_ll(&natural);
    let mut fd_ok = f00.is_finite();
    if fd_ok {
        'outer: for i in 0..k {
            for j in i..k {
                let mut vpp = natural.clone();
                let mut vpm = natural.clone();
                let mut vmp = natural.clone();
                let mut vmm = natural.clone();
                vpp[i] += steps[i];
                vpp[j] += steps[j];
                vpm[i] += steps[i];
                vpm[j] -= steps[j];
                vmp[i] -= steps[i];
                vmp[j] += steps[j];
                vmm[i] -= steps[i];
                vmm[j] -= steps[j];
                let val = (nat_ll(&vpp) - nat_ll(&vpm) - nat_ll(&vmp) + nat_ll(&vmm))
                    / (4.0 * steps[i] * steps[j]);
                if !val.is_finite() {
                    fd_ok = false;
                    break 'outer;
                }
                info[(i, j)] = -val;
                info[(j, i)] = -val;
            }
        }
    }
    let (std_errors, covariance, pd) = if fd_ok {
        invert_information_dyn(&info)
    } else {
        (None, None, false)
    };
    let mut param_names: Vec<String> = match spec {
        ModelSpec::ZmNbd => vec!["theta".into(), "delta".into()],
        _ => vec!["theta".into()],
    };
    param_names.push("phi".into());
    Ok(FitResult {
        model: model_name.into(),
        method: Method::Mle,
        param_names,
        estimates: natural,
        std_errors,
        covariance,
        neg2_loglik: -2.0 * ll,
        aic: -2.0 * ll + 2.0 * k as f64,
        converged: best.converged && pd,
        iterations: best.iterations,
    })
}

/// Fits any [`ModelSpec`], returning the summary and an evaluable model.
pub fn fit_model(
    spec: ModelSpec,
    data: &FrequencyTable,
    options: &FitOptions,
) -> Result<(FitResult, FittedModel)> {
    match spec {
        ModelSpec::Pmqld => {
            let fit = fit_mle(data, None, options)?;
            let params = fit.pmqld_params()?;
            Ok((fit, FittedModel::Pmqld(params)))
        }
        ModelSpec::ZmPmqld => {
            let fit = fit_zm_mle(data, options)?;
            let params = fit.pmqld_params()?;
            let phi = fit.estimate("phi").unwrap();
            Ok((
                fit,
                FittedModel::ZmPmqld(ZeroModified::new(phi, params)?),
            ))
        }
        ModelSpec::Gd | ModelSpec::Nbd | ModelSpec::Pld => {
            let fit = fit_baseline(spec, data, options)?;
            let model = match spec {
                ModelSpec::Gd => BaselineModel::Geometric {
                    theta: fit.estimates[0],
                },
                ModelSpec::Nbd => BaselineModel::NegBinomial {
                    theta: fit.estimates[0],
                    delta: fit.estimates[1],
                },
                _ => BaselineModel::PoissonLindley {
                    theta: fit.estimates[0],
                },
            };
            Ok((fit, FittedModel::Baseline(model)))
        }
        ModelSpec::ZmNbd | ModelSpec::ZmPld => {
            let fit = fit_zm_baseline(spec, data, options)?;
            let phi = *fit.estimates.last().unwrap();
            let model = match spec {
                ModelSpec::ZmNbd => BaselineModel::NegBinomial {
                    theta: fit.estimates[0],
                    delta: fit.estimates[1],
                },
                _ => BaselineModel::PoissonLindley {
                    theta: fit.estimates[0],
                },
            };
            Ok((
                fit,
                FittedModel::ZmBaseline(ZeroModified::new(phi, model)?),
            ))
        }
    }
}

/// A partition of the support into table cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Cell {
    Single(u64),
    /// Inclusive range.
    Span(u64, u64),
    /// Open-ended `>= k` tail.
    Tail(u64),
}

impl Cell {
    fn label(&self) -> String {
        match *self {
            Cell::Single(v) => v.to_string(),
            Cell::Span(a, b) => format!("{a}-{b}"),
            Cell::Tail(k) => format!(">={k}"),
        }
    }

    fn lo(&self) -> u64 {
        match *self {
            Cell::Single(v) => v,
            Cell::Span(a, _) => a,
            Cell::Tail(k) => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cells(Vec<Cell>);

impl Cells {
    /// Validates that the cells partition {0, 1, 2, ...} contiguously with
    /// an open tail as the final cell.
    pub fn new(cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Gof("cell specification is empty".into()));
        }
        let mut next = 0u64;
        for (i, c) in cells.iter().enumerate() {
            let last = i + 1 == cells.len();
            match *c {
                Cell::Single(v) => {
                    if v != next || last {
                        return Err(Error::Gof(format!(
                            "cells do not partition the support at value {v}"
                        )));
                    }
                    next = v + 1;
                }
                Cell::Span(a, b) => {
                    if a != next || b < a || last {
                        return Err(Error::Gof(format!(
                            "cells do not partition the support at span {a}-{b}"
                        )));
                    }
                    next = b + 1;
                }
                Cell::Tail(k) => {
                    if k != next || !last {
                        return Err(Error::Gof(
                            "open tail must be the final cell and continue the partition"
                                .into(),
                        ));
                    }
                }
            }
        }
        if !matches!(cells.last(), Some(Cell::Tail(_))) {
            return Err(Error::Gof("final cell must be an open tail".into()));
        }
        Ok(Self(cells))
    }

    /// The layout used by the comparison tables: one cell per count up to
    /// the largest observed value, whose cell is open-ended.
    pub fn table_layout(data: &FrequencyTable) -> Result<Self> {
        let max = data.max_value().max(1);
        let mut cells: Vec<Cell> = (0..max).map(Cell::Single).collect();
        cells.push(Cell::Tail(max));
        Self::new(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.0
    }

    pub fn labels(&self) -> Vec<String> {
        self.0.iter().map(Cell::label).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Observed frequencies aggregated into the cells.
    pub fn observed(&self, data: &FrequencyTable) -> Vec<u64> {
        let mut out = vec![0u64; self.0.len()];
        for &(x, f) in data.rows() {
            let idx = self
                .0
                .iter()
                .position(|c| match *c {
                    Cell::Single(v) => x == v,
                    Cell::Span(a, b) => (a..=b).contains(&x),
                    Cell::Tail(k) => x >= k,
                })
                .expect("cells partition the support");
            out[idx] += f;
        }
        out
    }
}

/// Expected counts n·P(cell) for each cell; the open tail uses the survival
/// function.
pub fn expected_counts<D: CountDistribution>(
    model: &D,
    n: f64,
    cells: &Cells,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(cells.len());
    for c in cells.cells() {
        let e = match *c {
            Cell::Single(v) => n * model.pmf(v),
            Cell::Span(a, b) => {
                let mut acc = 0.0;
                for x in a..=b {
                    acc += model.pmf(x);
                }
                n * acc
            }
            Cell::Tail(0) => n,
            Cell::Tail(k) => n * model.survival(k - 1)?,
        };
        out.push(e);
    }
    Ok(out)
}

/// One row of a pooled goodness-of-fit table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofCell {
    pub label: String,
    pub observed: u64,
    pub expected: f64,
}

/// Chi-square goodness-of-fit report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub cells: Vec<GofCell>,
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    /// Number of cells before tail pooling.
    pub pooled_from: usize,
}

/// Pools cells from the tail until every expected count reaches the
/// threshold (or the minimum admissible cell count), then computes
/// χ² = Σ (O−E)²/E with df = cells − 1 − fitted parameters.
pub fn chi_square_gof(
    cells: &Cells,
    observed: &[u64],
    expected: &[f64],
    fitted_params: usize,
    pooling_threshold: f64,
) -> Result<GofReport> {
    if observed.len() != cells.len() || expected.len() != cells.len() {
        return Err(Error::Gof(
            "observed/expected lengths do not match the cell layout".into(),
        ));
    }
    let original = cells.len();
    let mut rows: Vec<(Cell, u64, f64)> = cells
        .cells()
        .iter()
        .cloned()
        .zip(observed.iter().copied())
        .zip(expected.iter().copied())
        .map(|((c, o), e)| (c, o, e))
        .collect();
    let min_cells = (fitted_params + 2).max(2);
    while rows.len() > min_cells
        && rows.iter().any(|&(_, _, e)| e < pooling_threshold)
    {
        let (tail_cell, o_tail, e_tail) = rows.pop().expect("nonempty");
        let (prev_cell, o_prev, e_prev) = rows.pop().expect("len > min_cells >= 2");
        let merged = Cell::Tail(prev_cell.lo());
        let _ = tail_cell;
        rows.push((merged, o_prev + o_tail, e_prev + e_tail));
    }
    if rows.len() < fitted_params + 2 {
        return Err(Error::Gof(format!(
            "only {} cells remain after pooling; need at least {}",
            rows.len(),
            fitted_params + 2
        )));
    }
    let mut statistic = 0.0;
    for &(_, o, e) in &rows {
        if e <= 0.0 {
            return Err(Error::Gof(
                "expected count is nonpositive; cannot form the statistic".into(),
            ));
        }
        let d = o as f64 - e;
        statistic += d * d / e;
    }
    let df = (rows.len() - 1 - fitted_params) as u32;
    let p_value = chi_square_sf(statistic, df)?;
    Ok(GofReport {
        cells: rows
            .into_iter()
            .map(|(c, o, e)| GofCell {
                label: c.label(),
                observed: o,
                expected: e,
            })
            .collect(),
        statistic,
        df,
        p_value,
        pooled_from: original,
    })
}

/// One model's slot in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelRow {
    pub model: String,
    pub fit: Option<FitResult>,
    pub gof: Option<GofReport>,
    /// Expected counts on the shared unpooled cell layout.
    pub expected: Option<Vec<f64>>,
    pub error: Option<String>,
}

/// Multi-model comparison on a shared cell layout, sorted by AIC.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub cell_labels: Vec<String>,
    pub observed: Vec<u64>,
    pub rows: Vec<ModelRow>,
    /// Name of the minimum-AIC model among the successful fits.
    pub best_model: Option<String>,
}

/// Fits every requested model and assembles the comparison table.
pub fn compare_models(
    data: &FrequencyTable,
    specs: &[ModelSpec],
    options: &FitOptions,
) -> Result<Comparison> {
    if specs.len() < 2 {
        return Err(Error::Gof(
            "model comparison needs at least two models".into(),
        ));
    }
    let cells = Cells::table_layout(data)?;
    let observed = cells.observed(data);
    let n = data.n() as f64;
    let outcomes = par_map_range(specs.len(), |i| fit_model(specs[i], data, options));
    let mut rows: Vec<ModelRow> = Vec::with_capacity(specs.len());
    for (spec, outcome) in specs.iter().zip(outcomes) {
        let row = match outcome {
            Ok((fit, model)) => {
                let expected = expected_counts(&model, n, &cells);
                match expected {
                    Ok(exp) => {
                        let gof = chi_square_gof(
                            &cells,
                            &observed,
                            &exp,
                            fit.num_params(),
                            1.0,
                        )
                        .ok();
                        ModelRow {
                            model: spec.name().into(),
                            fit: Some(fit),
                            gof,
                            expected: Some(exp),
                            error: None,
                        }
                    }
                    Err(e) => ModelRow {
                        model: spec.name().into(),
                        fit: Some(fit),
                        gof: None,
                        expected: None,
                        error: Some(e.to_string()),
                    },
                }
            }
            Err(e) => ModelRow {
                model: spec.name().into(),
                fit: None,
                gof: None,
                expected: None,
                error: Some(e.to_string()),
            },
        };
        rows.push(row);
    }
    rows.sort_by(|a, b| {
        let ka = a.fit.as_ref().map(|f| f.aic).unwrap_or(f64::INFINITY);
        let kb = b.fit.as_ref().map(|f| f.aic).unwrap_or(f64::INFINITY);
        ka.total_cmp(&kb)
    });
    let best_model = rows
        .iter()
        .find(|r| r.fit.is_some())
        .map(|r| r.model.clone());
    Ok(Comparison {
        cell_labels: cells.labels(),
        observed,
        rows,
        best_model,
    })
}
