//! The Poisson-modified Quasi Lindley distribution (PMQLD).
//!
//! A PMQLD variate is a Poisson count whose rate is drawn from the MQLD
//! mixing density, a two-component mixture of exponential(θ) and
//! gamma(δ, θ) with weight α³/(α³ + 1). Marginally the count is a mixture
//! of a geometric and a negative binomial with the same weight, which is the
//! decomposition used throughout this module: every probability is assembled
//! in log space from the two mixture branches so that large δ, extreme θ,
//! and the signed branch arising from −1 < α³ < 0 are all handled without
//! overflow.

use crate::data::FrequencyTable;
use crate::error::{Error, Result};
use crate::specfun::{
    self, digamma_raw, lgamma_raw, log_add_exp, log_gauss_2f1_1, log_sub_exp, reg_gamma_lower,
};
use serde::Serialize;

/// A discrete distribution on the nonnegative integers.
///
/// Implemented by [`PmqldParams`] and the goodness-of-fit baselines so the
/// zero-modification wrapper and the cell machinery can treat them uniformly.
pub trait CountDistribution {
    /// Natural log of the probability mass at `x`. NaN marks a parameter
    /// combination whose mass function is not everywhere nonnegative.
    fn log_pmf(&self, x: u64) -> f64;

    fn pmf(&self, x: u64) -> f64 {
        self.log_pmf(x).exp()
    }

    /// P(X <= x).
    fn cdf(&self, x: u64) -> Result<f64>;

    /// P(X > x).
    fn survival(&self, x: u64) -> Result<f64> {
        Ok(1.0 - self.cdf(x)?)
    }
}

/// Validated parameter triple (θ, α, δ) of the PMQLD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmqldParams {
    theta: f64,
    alpha: f64,
    delta: f64,
}

/// First four raw moments together with the derived summary measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    /// Variance-to-mean ratio; exceeds one everywhere on the parameter space.
    pub dispersion_index: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    /// μ′₁..μ′₄ about the origin.
    pub raw_moments: [f64; 4],
}

/// Mode structure of the mass function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShapeKind {
    UnimodalAtZero,
    UnimodalAtX0,
    BimodalAtX0AndX0Plus1,
    /// Two or more separated local maxima within the scan window (the
    /// regime where a zero spike coexists with an interior bump).
    Multimodal,
    LogConvex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeReport {
    pub kind: ShapeKind,
    /// Local maxima in ascending order; empty only for `LogConvex`.
    pub mode_locations: Vec<u64>,
    pub scanned_up_to: u64,
}

/// Gamma distribution in the (shape, rate) convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaShapeRate {
    pub shape: f64,
    pub rate: f64,
}

/// Conjugate posterior of the Poisson rate: a two-component gamma mixture.
///
/// `weight` applies to `comp1` and may be negative when α³ < 0; the mixture
/// density itself remains nonnegative whenever the prior mass function is
/// proper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorMixture {
    pub weight: f64,
    pub comp1: GammaShapeRate,
    pub comp2: GammaShapeRate,
}

impl PmqldParams {
    /// Validates θ > 0, δ > 0, α³ > −1 and builds the parameter set.
    pub fn new(theta: f64, alpha: f64, delta: f64) -> Result<Self> {
        if !theta.is_finite() || theta <= 0.0 {
            return Err(Error::Parameter(format!(
                "theta must be positive and finite, got {theta}"
            )));
        }
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::Parameter(format!(
                "delta must be positive and finite, got {delta}"
            )));
        }
        let a3 = alpha * alpha * alpha;
        if !a3.is_finite() {
            return Err(Error::Parameter(format!(
                "alpha^3 must be finite, got alpha={alpha}"
            )));
        }
        if a3 <= -1.0 {
            return Err(Error::Parameter(format!(
                "alpha^3 must exceed -1, got alpha={alpha} (alpha^3={a3})"
            )));
        }
        Ok(Self {
            theta,
            alpha,
            delta,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha_cubed(&self) -> f64 {
        self.alpha * self.alpha * self.alpha
    }

    /// Mixing weight α³/(α³+1) of the geometric component.
    pub fn mixing_proportion(&self) -> f64 {
        let a3 = self.alpha_cubed();
        a3 / (a3 + 1.0)
    }

    /// Smallest α³ that keeps the mass function nonnegative at the current
    /// (θ, δ): −(θ/(1+θ))^(δ−1) when δ ≥ 1; zero when δ < 1, where any
    /// negative α³ turns the far tail negative.
    pub fn alpha_cubed_lower_bound(&self) -> f64 {
        if self.delta >= 1.0 {
            -((self.delta - 1.0) * (self.theta.ln() - self.theta.ln_1p())).exp()
        } else {
            0.0
        }
    }

    /// Whether the mass function is nonnegative at every support point.
    pub fn has_proper_mass(&self) -> bool {
        self.alpha_cubed() >= self.alpha_cubed_lower_bound()
    }

    /// Log of the two branch magnitudes at `x`, without the α³ weight:
    /// `(lnΓ(δ) + lnΓ(x+1) + (δ−1)ln(1+θ), (δ−1)lnθ + lnΓ(x+δ))`.
    fn branch_logs(&self, x: u64) -> (f64, f64) {
        let xf = x as f64;
        let m1 = lgamma_raw(self.delta)
            + lgamma_raw(xf + 1.0)
            + (self.delta - 1.0) * self.theta.ln_1p();
        let m2 = (self.delta - 1.0) * self.theta.ln() + lgamma_raw(xf + self.delta);
        (m1, m2)
    }

    /// ln(α³ e^m1 + e^m2) with the sign of α³ honoured. Returns NaN when the
    /// signed sum is negative, NEG_INFINITY when it vanishes.
    fn log_branch_sum(&self, m1: f64, m2: f64) -> f64 {
        let a3 = self.alpha_cubed();
        if a3 == 0.0 {
            m2
        } else if a3 > 0.0 {
            log_add_exp(a3.ln() + m1, m2)
        } else {
            let neg = (-a3).ln() + m1;
            if neg > m2 + 1e-12 {
                f64::NAN
            } else if neg >= m2 {
                // zero-truncation boundary: mass vanishes within rounding
                f64::NEG_INFINITY
            } else {
                log_sub_exp(m2, neg)
            }
        }
    }

    /// Branch weights (w₁, w₂) with w₁ + w₂ = 1, where w₁ is the share of
    /// the geometric branch, plus c = e^m1 / (α³ e^m1 + e^m2) which drives
    /// the α-derivatives.
    pub(crate) fn branch_weights(&self, x: u64) -> BranchWeights {
        let (m1, m2) = self.branch_logs(x);
        let a3 = self.alpha_cubed();
        let u = m1 - m2;
        // c = e^u / (1 + a3 e^u), evaluated from whichever side avoids overflow
        let c = if u > 0.0 {
            1.0 / (a3 + (-u).exp())
        } else {
            u.exp() / (1.0 + a3 * u.exp())
        };
        let w1 = a3 * c;
        BranchWeights {
            w1,
            w2: 1.0 - w1,
            c,
        }
    }

    /// Log mass function, Eq.-(6)-shaped with both branches combined in log
    /// space. NaN flags a parameter point whose mass would be negative.
    pub fn log_pmf(&self, x: u64) -> f64 {
        let xf = x as f64;
        let (m1, m2) = self.branch_logs(x);
        let lsum = self.log_branch_sum(m1, m2);
        self.theta.ln() + lsum
            - lgamma_raw(xf + 1.0)
            - self.alpha_cubed().ln_1p()
            - (xf + self.delta) * self.theta.ln_1p()
            - lgamma_raw(self.delta)
    }

    pub fn pmf(&self, x: u64) -> f64 {
        self.log_pmf(x).exp()
    }

    /// f(x+1)/f(x) through the probability recurrence.
    pub fn pmf_ratio(&self, x: u64) -> f64 {
        let xf = x as f64;
        let w = self.branch_weights(x);
        (w.w1 * (xf + 1.0) + w.w2 * (xf + self.delta)) / ((xf + 1.0) * (1.0 + self.theta))
    }

    /// Distribution function in closed form: the geometric branch summed
    /// exactly and the negative binomial branch through ₂F₁(1, x+δ+1; δ+1; w)
    /// with w = θ/(1+θ).
    pub fn cdf(&self, x: u64) -> Result<f64> {
        let xf = x as f64;
        let ln1pt = self.theta.ln_1p();
        let gd_cdf = -(-(xf + 1.0) * ln1pt).exp_m1();
        let w = self.theta / (1.0 + self.theta);
        let log_f = log_gauss_2f1_1(xf + self.delta + 1.0, self.delta + 1.0, w)?;
        let log_nbd = self.delta * self.theta.ln() + lgamma_raw(xf + self.delta + 1.0) + log_f
            - lgamma_raw(self.delta)
            - lgamma_raw(xf + 1.0)
            - self.delta.ln()
            - (xf + self.delta + 1.0) * ln1pt;
        let nbd_cdf = log_nbd.exp().min(1.0);
        let p = self.mixing_proportion();
        let value = p * gd_cdf + (1.0 - p) * nbd_cdf;
        if !value.is_finite() {
            return Err(Error::Numeric(format!(
                "cdf evaluation produced a non-finite value at x={x}"
            )));
        }
        Ok(value.clamp(0.0, 1.0))
    }

    /// P(X > x); switches to explicit tail summation when 1 − F(x) would
    /// cancel catastrophically.
    pub fn survival(&self, x: u64) -> Result<f64> {
        let c = self.cdf(x)?;
        if c <= 1.0 - 1e-8 {
            return Ok(1.0 - c);
        }
        let mut term = self.pmf(x + 1);
        let mut sum = term;
        for t in (x + 1)..(x + 1_000_001) {
            let ratio = self.pmf_ratio(t);
            term *= ratio;
            sum += term;
            if ratio < 1.0 && term < sum * 1e-17 {
                return Ok(sum);
            }
        }
        Err(Error::Numeric(format!(
            "tail summation for survival did not terminate at x={x}"
        )))
    }

    /// Hazard rate f(x)/S(x).
    pub fn hazard(&self, x: u64) -> Result<f64> {
        let s = self.survival(x)?;
        if s <= 0.0 {
            return Err(Error::Numeric(format!(
                "survival underflows to zero at x={x}; hazard undefined"
            )));
        }
        Ok(self.pmf(x) / s)
    }

    /// Mode-at-zero inequality: f(1) < f(0) expressed through the closed
    /// form `(1+θ)^(δ−1)α³ + θ^(δ−1)δ < (1+θ)((1+θ)^(δ−1)α³ + θ^(δ−1))`.
    pub fn mode_at_zero_condition(&self) -> bool {
        // divide both sides by θ^(δ−1)
        let rho = ((self.delta - 1.0) * ((1.0 + self.theta).ln() - self.theta.ln())).exp();
        let a3 = self.alpha_cubed();
        a3 * rho + self.delta < (1.0 + self.theta) * (a3 * rho + 1.0)
    }

    /// Scan window used by [`classify_shape`](Self::classify_shape) when the
    /// caller has no better bound: ten means plus a hundred standard
    /// deviations, clamped to a sane range.
    pub fn default_scan_limit(&self) -> u64 {
        let m = self.moments();
        let limit = 10.0 * (m.mean + 10.0 * m.variance.sqrt());
        (limit.ceil() as u64).clamp(2, 5_000_000)
    }

    /// Classifies the mode structure by scanning the probability recurrence
    /// over `[0, scan_limit]` and cross-checking the closed-form
    /// mode-at-zero inequality.
    pub fn classify_shape(&self, scan_limit: u64) -> Result<ShapeReport> {
        if scan_limit < 2 {
            return Err(Error::Domain(
                "classify_shape requires scan_limit >= 2".into(),
            ));
        }
        let n = scan_limit as usize;
        let ratios: Vec<f64> = (0..n).map(|t| self.pmf_ratio(t as u64)).collect();
        if ratios.iter().any(|r| !r.is_finite()) {
            return Err(Error::Numeric(
                "probability recurrence is not finite; mass function is improper".into(),
            ));
        }

        // log-convexity: ratio never decreases but does increase somewhere
        let mut increases = false;
        let mut decreases = false;
        for win in ratios.windows(2) {
            if win[1] > win[0] * (1.0 + 1e-12) {
                increases = true;
            }
            if win[1] < win[0] * (1.0 - 1e-12) {
                decreases = true;
            }
        }
        if increases && !decreases {
            return Ok(ShapeReport {
                kind: ShapeKind::LogConvex,
                mode_locations: Vec::new(),
                scanned_up_to: scan_limit,
            });
        }

        // cumulative log mass over the window
        let mut log_f = vec![self.log_pmf(0)];
        for r in &ratios {
            log_f.push(log_f.last().unwrap() + r.ln());
        }
        const TIE: f64 = 1e-12;
        let mut peaks: Vec<u64> = Vec::new();
        for t in 0..log_f.len() {
            let left_ok = t == 0 || log_f[t] >= log_f[t - 1] - TIE;
            let right_ok = t + 1 == log_f.len() || log_f[t] >= log_f[t + 1] - TIE;
            if left_ok && right_ok {
                peaks.push(t as u64);
            }
        }
        // collapse strictly adjacent tied peaks into a bimodal pair
        let tied_pair = peaks.len() == 2
            && peaks[1] == peaks[0] + 1
            && (log_f[peaks[0] as usize] - log_f[peaks[1] as usize]).abs() <= TIE;
        let kind = if tied_pair {
            ShapeKind::BimodalAtX0AndX0Plus1
        } else if peaks.len() == 1 && peaks[0] == 0 {
            ShapeKind::UnimodalAtZero
        } else if peaks.len() == 1 {
            ShapeKind::UnimodalAtX0
        } else {
            ShapeKind::Multimodal
        };
        Ok(ShapeReport {
            kind,
            mode_locations: peaks,
            scanned_up_to: scan_limit,
        })
    }

    /// r-th factorial moment E[X(X−1)...(X−r+1)].
    pub fn factorial_moment(&self, r: u32) -> Result<f64> {
        if !(1..=8).contains(&r) {
            return Err(Error::Domain(format!(
                "factorial_moment supports 1 <= r <= 8, got {r}"
            )));
        }
        let rf = f64::from(r);
        let a3 = self.alpha_cubed();
        let ld = lgamma_raw(self.delta);
        let m1 = ld + lgamma_raw(rf + 1.0);
        let m2 = lgamma_raw(self.delta + rf);
        let lsum = if a3 == 0.0 {
            m2
        } else if a3 > 0.0 {
            log_add_exp(a3.ln() + m1, m2)
        } else {
            let neg = (-a3).ln() + m1;
            if neg >= m2 {
                return Err(Error::Numeric(
                    "factorial moment is not positive; mass function is improper".into(),
                ));
            }
            log_sub_exp(m2, neg)
        };
        Ok((lsum - ld - a3.ln_1p() - rf * self.theta.ln()).exp())
    }

    /// Raw moments from the κ closed forms plus the derived central
    /// summaries.
    pub fn moments(&self) -> MomentSummary {
        let a3 = self.alpha_cubed();
        let d = self.delta;
        let t = self.theta;
        let k1 = a3 + d;
        let k2 = 2.0 * a3 + d * (d + 1.0);
        let k3 = 6.0 * a3 + d * (d + 1.0) * (d + 2.0);
        let k4 = 24.0 * a3 + d * (d + 1.0) * (d + 2.0) * (d + 3.0);
        let c = a3 + 1.0;
        let m1 = k1 / (c * t);
        let m2 = (t * k1 + k2) / (c * t * t);
        let m3 = (t * t * k1 + 3.0 * t * k2 + k3) / (c * t.powi(3));
        let m4 = (t.powi(3) * k1 + 7.0 * t * t * k2 + 6.0 * t * k3 + k4) / (c * t.powi(4));
        let var = m2 - m1 * m1;
        let mu3 = m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3);
        let mu4 = m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1.powi(4);
        MomentSummary {
            mean: m1,
            variance: var,
            dispersion_index: var / m1,
            skewness: mu3 / var.powf(1.5),
            kurtosis: mu4 / (var * var),
            raw_moments: [m1, m2, m3, m4],
        }
    }

    /// Probability generating function G(t) = E[t^X], defined for
    /// 1 − t + θ > 0.
    pub fn pgf(&self, t: f64) -> Result<f64> {
        let base = 1.0 - t + self.theta;
        if base.is_nan() || base <= 0.0 || !t.is_finite() {
            return Err(Error::Domain(format!(
                "pgf requires 1 - t + theta > 0, got t={t}, theta={}",
                self.theta
            )));
        }
        let a3 = self.alpha_cubed();
        // theta (a3 base^(d-1) + theta^(d-1)) / ((a3+1) base^d), split so
        // neither power overflows on its own
        let gamma_part = ((self.delta - 1.0) * self.theta.ln() - self.delta * base.ln()).exp();
        Ok(self.theta * (a3 / base + gamma_part) / (a3 + 1.0))
    }

    /// Moment generating function M(t) = G(e^t), defined for
    /// 1 − e^t + θ > 0.
    pub fn mgf(&self, t: f64) -> Result<f64> {
        let et = t.exp();
        let base = 1.0 - et + self.theta;
        if base.is_nan() || base <= 0.0 {
            return Err(Error::Domain(format!(
                "mgf requires 1 - e^t + theta > 0, got t={t}, theta={}",
                self.theta
            )));
        }
        self.pgf(et)
    }

    /// Smallest nonnegative integer x with F(x) ≥ u.
    pub fn quantile(&self, u: f64) -> Result<u64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(format!(
                "quantile requires 0 < u < 1, got {u}"
            )));
        }
        if self.cdf(0)? >= u {
            return Ok(0);
        }
        // exponential bracket, then bisect for the smallest qualifying x
        let mut lo = 0u64; // cdf(lo) < u
        let mut hi = 1u64;
        let mut doublings = 0;
        while self.cdf(hi)? < u {
            lo = hi;
            hi = hi.saturating_mul(2);
            doublings += 1;
            if doublings > 200 {
                return Err(Error::Numeric(format!(
                    "quantile bracketing failed for u={u}"
                )));
            }
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cdf(mid)? >= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// Density of the MQLD mixing distribution at `lambda`.
    pub fn mqld_pdf(&self, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::Domain(format!(
                "mqld_pdf requires lambda > 0, got {lambda}"
            )));
        }
        let a3 = self.alpha_cubed();
        let tl = self.theta * lambda;
        let gamma_branch = ((self.delta - 1.0) * tl.ln() - lgamma_raw(self.delta) - tl).exp();
        Ok(self.theta * (a3 * (-tl).exp() + gamma_branch) / (a3 + 1.0))
    }

    /// Distribution function of the MQLD mixing distribution.
    pub fn mqld_cdf(&self, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::Domain(format!(
                "mqld_cdf requires lambda > 0, got {lambda}"
            )));
        }
        let a3 = self.alpha_cubed();
        let tl = self.theta * lambda;
        let p = reg_gamma_lower(self.delta, tl)?;
        let value = (a3 * (-(-tl).exp_m1()) + p) / (a3 + 1.0);
        Ok(value.clamp(0.0, 1.0))
    }

    /// Conjugate posterior of the Poisson rate given observed counts: a
    /// two-component gamma mixture with components
    /// gamma(Σx + 1, n + θ) and gamma(Σx + δ, n + θ).
    pub fn posterior_mixture(&self, data: &FrequencyTable) -> PosteriorMixture {
        let n = data.n() as f64;
        let s = data.sum_x() as f64;
        let a3 = self.alpha_cubed();
        let rate = n + self.theta;
        let la = lgamma_raw(self.delta) + (self.delta - 1.0) * rate.ln() + lgamma_raw(s + 1.0);
        let lb = (self.delta - 1.0) * self.theta.ln() + lgamma_raw(s + self.delta);
        // p = a3 e^la / (a3 e^la + e^lb)
        let weight = if a3 == 0.0 {
            0.0
        } else {
            let r = (lb - la).exp() / a3;
            1.0 / (1.0 + r)
        };
        PosteriorMixture {
            weight,
            comp1: GammaShapeRate {
                shape: s + 1.0,
                rate,
            },
            comp2: GammaShapeRate {
                shape: s + self.delta,
                rate,
            },
        }
    }
}

pub(crate) struct BranchWeights {
    /// Weight of the geometric branch; negative when α³ < 0.
    pub w1: f64,
    /// Weight of the negative-binomial branch, 1 − w1.
    pub w2: f64,
    /// e^m1 / (α³ e^m1 + e^m2), the α³-free branch ratio.
    pub c: f64,
}

impl CountDistribution for PmqldParams {
    fn log_pmf(&self, x: u64) -> f64 {
        PmqldParams::log_pmf(self, x)
    }

    fn cdf(&self, x: u64) -> Result<f64> {
        PmqldParams::cdf(self, x)
    }

    fn survival(&self, x: u64) -> Result<f64> {
        PmqldParams::survival(self, x)
    }
}

// unchecked polygamma access for the estimation module's hot loops
pub(crate) fn digamma_for(x: f64) -> f64 {
    digamma_raw(x)
}

pub(crate) fn trigamma_for(x: f64) -> f64 {
    specfun::trigamma_raw(x)
}
