//! Monte Carlo study of estimator quality: repeated simulation plus
//! maximum-likelihood fitting, reporting average estimates, bias, and mean
//! square error per sample size.
//!
//! Replicates run as independent tasks with deterministically derived child
//! seeds, so the full table is reproducible regardless of thread count;
//! aggregation always sums in replicate order.

use crate::data::FrequencyTable;
use crate::dist::PmqldParams;
use crate::error::{Error, Result};
use crate::estimation::{fit_mle, score, FitOptions};
use crate::parallel::par_map_range;
use crate::sampling::{sample_pmqld_alg1, sample_pmqld_alg2, RandomSource};
use serde::Serialize;

/// Which simulation algorithm drives the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleAlgorithm {
    /// Mixture route: MQLD rate, then Poisson count.
    AlgI,
    /// Quantile route.
    AlgII,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub true_params: PmqldParams,
    pub sample_sizes: Vec<u64>,
    pub replications: u32,
    pub seed: u64,
    pub algorithm: SampleAlgorithm,
}

impl StudyConfig {
    /// Study defaults: n ∈ {60, 100, 200, 300}, 1000 replications, the
    /// quantile-route sampler.
    pub fn new(true_params: PmqldParams, seed: u64) -> Self {
        Self {
            true_params,
            sample_sizes: vec![60, 100, 200, 300],
            replications: 1000,
            seed,
            algorithm: SampleAlgorithm::AlgII,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Parameter("replications must be at least 1".into()));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Parameter("no sample sizes requested".into()));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 10) {
            return Err(Error::Parameter(format!(
                "sample sizes below 10 are not meaningful, got {n}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub n: u64,
    pub param: String,
    pub avg: f64,
    pub bias: f64,
    pub mse: f64,
    /// Replicates whose fit failed to converge; excluded from the averages.
    pub failures: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyTable {
    pub rows: Vec<StudyRow>,
}

impl StudyTable {
    /// CSV emission with columns `n,param,avg,bias,mse,failures`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,param,avg,bias,mse,failures\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n, r.param, r.avg, r.bias, r.mse, r.failures
            ));
        }
        out
    }

    pub fn mse_for(&self, n: u64, param: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.param == param)
            .map(|r| r.mse)
    }

    pub fn avg_for(&self, n: u64, param: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.param == param)
            .map(|r| r.avg)
    }
}

/// Runs the simulation/estimation study.
pub fn run_study(config: &StudyConfig, options: &FitOptions) -> Result<StudyTable> {
    config.validate()?;
    let truth = [
        config.true_params.theta(),
        config.true_params.alpha(),
        config.true_params.delta(),
    ];
    let names = ["theta", "alpha", "delta"];
    let reps = config.replications as usize;
    let mut rows = Vec::new();
    for &n in &config.sample_sizes {
        let fits: Vec<Option<[f64; 3]>> = par_map_range(reps, |r| {
            let mut rng = RandomSource::child(config.seed, &[n, r as u64]);
            let draws = match config.algorithm {
                SampleAlgorithm::AlgI => {
                    sample_pmqld_alg1(&config.true_params, n as usize, &mut rng)
                }
                SampleAlgorithm::AlgII => {
                    sample_pmqld_alg2(&config.true_params, n as usize, &mut rng)
                }
            }
            .ok()?;
            let table = FrequencyTable::from_observations(&draws).ok()?;
            let fit = fit_mle(&table, None, options).ok()?;
            // accept a replicate when the score vanishes at the estimate or
            // the estimate sits on the nonnegative-mass boundary in alpha
            // (a valid constrained maximum for samples with few zeros);
            // standard errors are not needed, so positive definiteness of
            // the information matrix is not required
            let p = fit.pmqld_params().ok()?;
            let s = score(&p, &table);
            let tol = 1e-4 * table.n() as f64;
            let stationary = s.iter().all(|v| v.abs() < tol);
            let lb = p.alpha_cubed_lower_bound();
            let at_boundary = p.alpha_cubed() - lb <= 1e-5 * (1.0 + lb.abs());
            (stationary || at_boundary)
                .then(|| [fit.estimates[0], fit.estimates[1], fit.estimates[2]])
        });
        let failures = fits.iter().filter(|f| f.is_none()).count() as u32;
        if 5 * failures > config.replications {
            return Err(Error::Estimation(format!(
                "{failures} of {} replicates failed at n={n}; study aborted",
                config.replications
            )));
        }
        let successes = (reps as u32 - failures) as f64;
        for (idx, name) in names.iter().enumerate() {
            let mut sum = 0.0;
            let mut sum_sq_err = 0.0;
            for est in fits.iter().flatten() {
                sum += est[idx];
                let e = est[idx] - truth[idx];
                sum_sq_err += e * e;
            }
            let avg = sum / successes;
            rows.push(StudyRow {
                n,
                param: (*name).into(),
                avg,
                bias: avg - truth[idx],
                mse: sum_sq_err / successes,
                failures,
            });
        }
    }
    Ok(StudyTable { rows })
}
