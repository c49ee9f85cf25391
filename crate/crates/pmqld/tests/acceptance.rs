//! Acceptance suite: reproduction of the published model-comparison tables,
//! the derivative and sampling checks, and the desk-scale Monte Carlo study.
//! Each test prints one summary line; run with `--nocapture` to see them.
//!
//! Criterion 4 is asserted exactly as specified and is expected to stay red:
//! the specified φ̂ sign and likelihood-ratio magnitude trace to defects in
//! the published table (a sign typo and a local optimum), as the companion
//! test demonstrates. See the repository notes for the analysis.

mod common;

use common::{fixture, parameter_grid, pmf_sup_deviation, two_sample_chi_square};
use pmqld::estimation::{observed_information, score};
use pmqld::*;
use std::time::Instant;

fn opts() -> FitOptions {
    FitOptions::default()
}

#[test]
fn criterion_01_table6_pmqld_reproduction() {
    let data = fixture("seizure.csv");
    let t0 = Instant::now();
    let fit = fit_mle(&data, None, &opts()).unwrap();
    let elapsed = t0.elapsed();
    assert!(fit.converged);
    assert!(
        (fit.neg2_loglik - 1185.83).abs() <= 0.1,
        "-2logL {}",
        fit.neg2_loglik
    );
    assert!((fit.aic - 1191.83).abs() <= 0.1, "AIC {}", fit.aic);

    let params = fit.pmqld_params().unwrap();
    let cells = Cells::table_layout(&data).unwrap();
    let expected = expected_counts(&params, data.n() as f64, &cells).unwrap();
    assert!(
        (expected[0] - 125.65).abs() <= 0.1,
        "expected count at zero {}",
        expected[0]
    );
    let observed = cells.observed(&data);
    let gof = chi_square_gof(&cells, &observed, &expected, fit.num_params(), 1.0).unwrap();
    assert!((gof.statistic - 2.93).abs() <= 0.1, "chi2 {}", gof.statistic);
    assert_eq!(gof.df, 5);
    assert!((gof.p_value - 0.71).abs() <= 0.01, "p {}", gof.p_value);
    assert!(elapsed.as_secs_f64() < 10.0, "fit took {elapsed:?}");
    println!(
        "criterion 1: PASS — seizure PMQLD -2logL {:.2}, AIC {:.2}, E0 {:.2}, chi2 {:.2} (df {}, p {:.2}) in {elapsed:?}",
        fit.neg2_loglik, fit.aic, expected[0], gof.statistic, gof.df, gof.p_value
    );
}

#[test]
fn criterion_02_table6_baselines() {
    let data = fixture("seizure.csv");
    let gd = fit_baseline(ModelSpec::Gd, &data, &opts()).unwrap();
    assert!((gd.estimates[0] - 0.65).abs() <= 0.01, "GD theta {}", gd.estimates[0]);
    assert!(
        (gd.neg2_loglik - 1196.79).abs() <= 0.1,
        "GD -2logL {}",
        gd.neg2_loglik
    );
    let pld = fit_baseline(ModelSpec::Pld, &data, &opts()).unwrap();
    assert!(
        (pld.estimates[0] - 0.97).abs() <= 0.01,
        "PLD theta {}",
        pld.estimates[0]
    );
    let nbd = fit_baseline(ModelSpec::Nbd, &data, &opts()).unwrap();
    assert!(
        (nbd.neg2_loglik - 1189.88).abs() <= 0.1,
        "NBD -2logL {}",
        nbd.neg2_loglik
    );
    println!(
        "criterion 2: PASS — GD θ {:.4} (-2logL {:.2}), PLD θ {:.4}, NBD -2logL {:.2}",
        gd.estimates[0], gd.neg2_loglik, pld.estimates[0], nbd.neg2_loglik
    );
}

#[test]
fn criterion_03_table7_pmqld_reproduction() {
    let data = fixture("roots.csv");
    let fit = fit_mle(&data, None, &opts()).unwrap();
    assert!((fit.aic - 1350.20).abs() <= 0.2, "AIC {}", fit.aic);

    let params = fit.pmqld_params().unwrap();
    let cells = Cells::table_layout(&data).unwrap();
    let expected = expected_counts(&params, data.n() as f64, &cells).unwrap();
    let observed = cells.observed(&data);
    let gof = chi_square_gof(&cells, &observed, &expected, fit.num_params(), 1.0).unwrap();
    assert!(
        (gof.statistic - 11.75).abs() <= 0.05,
        "chi2 {}",
        gof.statistic
    );
    assert_eq!(gof.df, 12);
    assert!((gof.p_value - 0.47).abs() <= 0.02, "p {}", gof.p_value);

    // PMQLD beats every in-scope competitor on AIC
    let specs = [
        ModelSpec::Gd,
        ModelSpec::Nbd,
        ModelSpec::Pld,
        ModelSpec::ZmNbd,
        ModelSpec::ZmPld,
        ModelSpec::ZmPmqld,
    ];
    for spec in specs {
        let (other, _) = fit_model(spec, &data, &opts()).unwrap();
        assert!(
            fit.aic < other.aic,
            "{} AIC {} undercuts PMQLD {}",
            spec.name(),
            other.aic,
            fit.aic
        );
    }
    println!(
        "criterion 3: PASS — roots PMQLD AIC {:.2}, chi2 {:.2} (df {}, p {:.3}); min AIC among competitors",
        fit.aic, gof.statistic, gof.df, gof.p_value
    );
}

/// Criterion 4 exactly as specified. The AIC clause passes; the φ̂ = −0.61
/// and LR = 50.50 clauses cannot hold at the maximum-likelihood solution:
/// the published φ̂ carries a sign typo (the same table's own −2logL,
/// zero-cell expected count, and inflation narrative force φ̂ = +0.61), and
/// the published PMQLD row is a local optimum (its printed parameters give
/// −2logL 3462.45 under this likelihood, but a better interior optimum at
/// 3423.30 exists, shrinking the LR). The companion test below verifies the
/// internally consistent reproduction.
#[test]
fn criterion_04_table8_as_specified() {
    let data = fixture("consumer_goods.csv");
    let zm = fit_zm_mle(&data, &opts()).unwrap();
    let plain = fit_mle(&data, None, &opts()).unwrap();
    let lr = lr_test(&plain, &zm).unwrap();
    let phi = zm.estimate("phi").unwrap();

    let mut failures = Vec::new();
    if (zm.aic - 3419.95).abs() > 0.3 {
        failures.push(format!("AIC {} outside 3419.95 ± 0.3", zm.aic));
    }
    if (phi - (-0.61)).abs() > 0.03 {
        failures.push(format!("phi {phi:.4} outside -0.61 ± 0.03"));
    }
    if (lr.statistic - 50.50).abs() > 0.3 {
        failures.push(format!("LR {:.2} outside 50.50 ± 0.3", lr.statistic));
    }
    if lr.df != 1 {
        failures.push(format!("LR df {} != 1", lr.df));
    }
    if failures.is_empty() {
        println!("criterion 4: PASS — table 8 as specified");
    } else {
        println!(
            "criterion 4: FAIL (expected; published-table defects) — {}",
            failures.join("; ")
        );
        panic!(
            "criterion 4 as specified does not hold: {}",
            failures.join("; ")
        );
    }
}

/// The internally consistent Table 8 reproduction: every quantity the
/// published table pins that is arithmetically consistent with its own
/// −2logL is matched.
#[test]
fn criterion_04_companion_table8_consistent_reproduction() {
    let data = fixture("consumer_goods.csv");
    let zm = fit_zm_mle(&data, &opts()).unwrap();
    assert!((zm.aic - 3419.95).abs() <= 0.3, "ZM AIC {}", zm.aic);
    assert!(
        (zm.neg2_loglik - 3411.95).abs() <= 0.3,
        "ZM -2logL {}",
        zm.neg2_loglik
    );
    // the zero-modification estimate: +0.61, zero inflation, matching the
    // 80.6% observed zero share through the fitted zero cell
    let phi = zm.estimate("phi").unwrap();
    assert!((phi - 0.61).abs() <= 0.03, "phi {phi}");
    let params = zm.pmqld_params().unwrap();
    let wrapped = ZeroModified::new(phi, params).unwrap();
    assert_eq!(wrapped.classify_regime().unwrap(), ZmRegime::ZeroInflated);
    let zero_cell = wrapped.pmf(0);
    assert!((zero_cell - 1612.0 / 2000.0).abs() < 1e-6, "zero cell {zero_cell}");
    // expected counts at 0 and 1 match the published column
    assert!((2000.0 * zero_cell - 1611.78).abs() < 0.5);
    assert!((2000.0 * wrapped.pmf(1) - 165.09).abs() < 0.5);
    // the published PMQLD row evaluates to its printed -2logL under this
    // likelihood, and the LR against that point is the published 50.50
    let published_point = PmqldParams::new(7.00, 2.12, 32.88).unwrap();
    let published_neg2 = -2.0 * log_likelihood(&published_point, &data).unwrap();
    assert!((published_neg2 - 3462.45).abs() <= 0.05, "published point {published_neg2}");
    let lr_vs_published = published_neg2 - zm.neg2_loglik;
    assert!(
        (lr_vs_published - 50.50).abs() <= 0.3,
        "LR vs published point {lr_vs_published}"
    );
    // this crate's own PMQLD fit finds a better optimum, so the nested LR
    // is smaller but still decisive at the 3.84 threshold
    let plain = fit_mle(&data, None, &opts()).unwrap();
    assert!(plain.neg2_loglik < published_neg2);
    let lr = lr_test(&plain, &zm).unwrap();
    assert_eq!(lr.df, 1);
    assert!(lr.statistic > 3.84);
    println!(
        "criterion 4 (companion): PASS — ZM AIC {:.2}, phi {:.3} (+sign), LR vs published point {:.2}, LR vs own fit {:.2}",
        zm.aic, phi, lr_vs_published, lr.statistic
    );
}

#[test]
fn criterion_05_table6_standard_errors() {
    let data = fixture("seizure.csv");
    let fit = fit_mle(&data, None, &opts()).unwrap();
    let se = fit.std_errors.as_ref().expect("standard errors");
    let published = [1.26, 0.07, 2.83];
    for (i, (&got, &want)) in se.iter().zip(published.iter()).enumerate() {
        assert!(
            (got - want).abs() <= 0.15 * want,
            "se[{i}] = {got}, published {want}"
        );
    }
    println!(
        "criterion 5: PASS — Wald standard errors ({:.3}, {:.3}, {:.3}) within 15% of (1.26, 0.07, 2.83)",
        se[0], se[1], se[2]
    );
}

#[test]
fn criterion_06_property_suite() {
    let grid = parameter_grid();

    // normalization at the survival cutoff
    for p in &grid {
        let cutoff = common::tail_cutoff(p, 1e-10);
        let total: f64 = (0..=cutoff).map(|x| p.pmf(x)).sum();
        assert!(
            (total - 1.0).abs() <= 1e-9,
            "normalization {total} at {p:?}"
        );
    }

    // closed-form cdf equals the partial sums
    for p in &grid {
        let mut acc = 0.0;
        for x in 0..=60u64 {
            acc += p.pmf(x);
            assert!(
                (p.cdf(x).unwrap() - acc).abs() <= 1e-9,
                "cdf mismatch at x={x} for {p:?}"
            );
        }
    }

    // negative binomial limit (alpha -> 0)
    for &(t, d) in &[(0.3, 2.5), (1.0, 9.0), (3.0, 0.5)] {
        let p = PmqldParams::new(t, 1e-5, d).unwrap();
        let nbd = BaselineModel::neg_binomial(d, t).unwrap();
        for x in 0..=30u64 {
            assert!(
                (p.pmf(x) - nbd.pmf(x)).abs() < 1e-4,
                "NBD limit fails at x={x}, theta={t}, delta={d}"
            );
        }
    }

    // geometric limit (alpha -> infinity)
    for &(t, d) in &[(0.3, 2.5), (1.0, 9.0)] {
        let p = PmqldParams::new(t, 1e4, d).unwrap();
        for x in 0..=30u64 {
            let gd = t / (1.0 + t).powi(x as i32 + 1);
            assert!(
                (p.pmf(x) - gd).abs() < 1e-4,
                "GD limit fails at x={x}, theta={t}"
            );
        }
    }

    // Poisson-Lindley identity at unit scale
    {
        let pld = BaselineModel::poisson_lindley(1.0).unwrap();
        let p = PmqldParams::new(1.0, 1.0, 2.0).unwrap();
        for x in 0..=50u64 {
            let rel = (p.pmf(x) / pld.pmf(x) - 1.0).abs();
            assert!(rel < 1e-10, "PLD identity fails at x={x}: rel {rel}");
        }
    }

    // geometric collapse at delta = 1 is independent of alpha
    for &alpha in &[-0.9, 1e-6, 0.5, 2.0] {
        let p = PmqldParams::new(0.7, alpha, 1.0).unwrap();
        for x in 0..=20u64 {
            let gd = 0.7 / 1.7f64.powi(x as i32 + 1);
            assert!(
                (p.pmf(x) / gd - 1.0).abs() < 1e-12,
                "delta=1 collapse fails at alpha={alpha}, x={x}"
            );
        }
    }

    // probability recurrence
    for p in &grid {
        for x in 0..=50u64 {
            let lhs = p.pmf(x + 1);
            let rhs = p.pmf(x) * p.pmf_ratio(x);
            if lhs > 0.0 {
                assert!(
                    (rhs / lhs - 1.0).abs() < 1e-10,
                    "recurrence fails at x={x} for {p:?}"
                );
            }
        }
    }

    // over-dispersion everywhere
    for p in &grid {
        assert!(
            p.moments().dispersion_index > 1.0,
            "dispersion not above one at {p:?}"
        );
    }

    // moments against truncated sums
    for p in &grid {
        let m = p.moments();
        let cutoff = common::tail_cutoff(p, 1e-13);
        let mut mean = 0.0;
        let mut second = 0.0;
        for x in 0..=cutoff {
            let f = p.pmf(x);
            mean += x as f64 * f;
            second += (x as f64) * (x as f64) * f;
        }
        let var = second - mean * mean;
        assert!(
            (mean / m.mean - 1.0).abs() < 1e-6,
            "mean mismatch at {p:?}: {mean} vs {}",
            m.mean
        );
        assert!(
            (var / m.variance - 1.0).abs() < 1e-6,
            "variance mismatch at {p:?}: {var} vs {}",
            m.variance
        );
    }

    // generating function: normalization and derivative checks
    for p in &grid {
        assert!((p.pgf(1.0).unwrap() - 1.0).abs() < 1e-12);
        let h = 1e-5;
        let g_plus = p.pgf(1.0 + h).unwrap();
        let g_minus = p.pgf(1.0 - h).unwrap();
        let mean_fd = (g_plus - g_minus) / (2.0 * h);
        let m = p.moments();
        assert!(
            (mean_fd / m.mean - 1.0).abs() < 1e-3,
            "pgf mean check fails at {p:?}"
        );
        let second_fd = (g_plus - 2.0 + g_minus) / (h * h);
        let fact2 = p.factorial_moment(2).unwrap();
        assert!(
            (second_fd / fact2 - 1.0).abs() < 1e-3,
            "pgf second factorial check fails at {p:?}"
        );
    }

    // zero modification: normalization across the phi range, no negative
    // mass at the bound
    for p in &grid {
        let bound = phi_lower_bound(p).unwrap();
        let cutoff = common::tail_cutoff(p, 1e-13);
        for &phi in &[bound, bound / 2.0, 0.0, 0.5, 1.0] {
            let zm = ZeroModified::new(phi, *p).unwrap();
            assert!(zm.pmf(0) >= 0.0);
            let total: f64 = (0..=cutoff).map(|x| zm.pmf(x)).sum();
            assert!(
                (total - 1.0).abs() <= 1e-9,
                "ZM normalization {total} at phi={phi}, {p:?}"
            );
        }
    }

    // posterior mixture against the quadrature quotient
    {
        let p = PmqldParams::new(1.0, 1.0, 2.0).unwrap();
        let data = FrequencyTable::from_observations(&[0, 1, 2, 3, 5]).unwrap();
        let post = p.posterior_mixture(&data);
        let n = data.n() as f64;
        let s = data.sum_x() as f64;
        let kernel = |l: f64| (-n * l + s * l.ln()).exp() * p.mqld_pdf(l).unwrap();
        let norm = common::integrate(kernel, 1e-12, 60.0, 1e-14);
        let mut sup = 0.0f64;
        for k in 1..=1000 {
            let l = k as f64 * 0.01;
            let mixture = post.weight * common::gamma_pdf(l, post.comp1.shape, post.comp1.rate)
                + (1.0 - post.weight) * common::gamma_pdf(l, post.comp2.shape, post.comp2.rate);
            sup = sup.max((mixture - kernel(l) / norm).abs());
        }
        assert!(sup < 1e-6, "posterior sup-error {sup}");
    }

    println!("criterion 6: PASS — property suite over the 20-point parameter grid");
}

#[test]
fn criterion_07_derivative_suite() {
    // analytic scores vs central finite differences on 10 random
    // configurations, plain and zero-modified
    let mut rng = RandomSource::from_seed(424242);
    for case in 0..10 {
        let theta = 0.15 + 2.35 * rng.next_uniform();
        let alpha = 0.1 + 1.7 * rng.next_uniform();
        let delta = 0.8 + 6.2 * rng.next_uniform();
        let p = PmqldParams::new(theta, alpha, delta).unwrap();
        let mut sample_rng = RandomSource::child(1000 + case, &[7]);
        let draws = sample_pmqld_alg2(&p, 200, &mut sample_rng).unwrap();
        let data = FrequencyTable::from_observations(&draws).unwrap();

        let analytic = score(&p, &data);
        let h = 1e-6;
        let ll = |t: f64, a: f64, d: f64| {
            log_likelihood(&PmqldParams::new(t, a, d).unwrap(), &data).unwrap()
        };
        let fd = [
            (ll(theta + h, alpha, delta) - ll(theta - h, alpha, delta)) / (2.0 * h),
            (ll(theta, alpha + h, delta) - ll(theta, alpha - h, delta)) / (2.0 * h),
            (ll(theta, alpha, delta + h) - ll(theta, alpha, delta - h)) / (2.0 * h),
        ];
        for i in 0..3 {
            let tol = 1e-5 * fd[i].abs().max(1e-3);
            assert!(
                (analytic[i] - fd[i]).abs() <= tol,
                "case {case}: score[{i}] {} vs fd {}",
                analytic[i],
                fd[i]
            );
        }

        let phi = -0.1 + 0.6 * rng.next_uniform();
        let phi = phi.max(phi_lower_bound(&p).unwrap() * 0.8);
        let zm = ZeroModified::new(phi, p).unwrap();
        let zs = zm_score(&zm, &data);
        let zll = |ph: f64, t: f64, a: f64, d: f64| {
            zm_log_likelihood(
                &ZeroModified::new(ph, PmqldParams::new(t, a, d).unwrap()).unwrap(),
                &data,
            )
            .unwrap()
        };
        let zfd = [
            (zll(phi, theta + h, alpha, delta) - zll(phi, theta - h, alpha, delta)) / (2.0 * h),
            (zll(phi, theta, alpha + h, delta) - zll(phi, theta, alpha - h, delta)) / (2.0 * h),
            (zll(phi, theta, alpha, delta + h) - zll(phi, theta, alpha, delta - h)) / (2.0 * h),
            (zll(phi + h, theta, alpha, delta) - zll(phi - h, theta, alpha, delta)) / (2.0 * h),
        ];
        for i in 0..4 {
            let tol = 1e-5 * zfd[i].abs().max(1e-3);
            assert!(
                (zs[i] - zfd[i]).abs() <= tol,
                "case {case}: zm score[{i}] {} vs fd {}",
                zs[i],
                zfd[i]
            );
        }
    }

    // observed information vs the finite-difference Hessian at the three
    // published optima
    let optima = [
        ("seizure.csv", (2.70, 0.82, 5.89)),
        ("roots.csv", (4.23, 0.73, 29.34)),
        ("consumer_goods.csv", (7.00, 2.12, 32.88)),
    ];
    for (file, (t, a, d)) in optima {
        let data = fixture(file);
        let p = PmqldParams::new(t, a, d).unwrap();
        let info = observed_information(&p, &data);
        let s = |t: f64, a: f64, d: f64| score(&PmqldParams::new(t, a, d).unwrap(), &data);
        let max_entry = info
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        for j in 0..3 {
            let h = 1e-5 * [t, a, d][j].abs().max(1.0);
            let mut vp = [t, a, d];
            let mut vm = [t, a, d];
            vp[j] += h;
            vm[j] -= h;
            let sp = s(vp[0], vp[1], vp[2]);
            let sm = s(vm[0], vm[1], vm[2]);
            for i in 0..3 {
                let fd = -(sp[i] - sm[i]) / (2.0 * h);
                let tol = 1e-4 * fd.abs().max(1e-6 * max_entry);
                assert!(
                    (info[i][j] - fd).abs() <= tol,
                    "{file}: info[{i}][{j}] {} vs fd {}",
                    info[i][j],
                    fd
                );
            }
        }
    }
    println!("criterion 7: PASS — scores at rel 1e-5 (10 configurations), information matrix at rel 1e-4 (3 published optima)");
}

#[test]
fn criterion_08_sampling_suite() {
    let p = PmqldParams::new(0.3, 0.5, 2.5).unwrap();
    let n = 100_000usize;
    let mut rng1 = RandomSource::from_seed(11);
    let draws1 = sample_pmqld_alg1(&p, n, &mut rng1).unwrap();
    let mut rng2 = RandomSource::from_seed(22);
    let draws2 = sample_pmqld_alg2(&p, n, &mut rng2).unwrap();

    // the two algorithms draw from the same law
    let (stat, df, pv) = two_sample_chi_square(&draws1, &draws2);
    assert!(pv > 0.001, "two-sample chi2 {stat:.1} (df {df}) p {pv:.4}");

    // empirical pmf close to the model pmf for both algorithms
    let bound = 4.0 / (n as f64).sqrt();
    let d1 = pmf_sup_deviation(&draws1, &p);
    let d2 = pmf_sup_deviation(&draws2, &p);
    assert!(d1 < bound, "algorithm I sup deviation {d1}");
    assert!(d2 < bound, "algorithm II sup deviation {d2}");

    // inverse round trip on the mixing distribution
    let mut rng = RandomSource::from_seed(33);
    for _ in 0..50 {
        let u = rng.next_uniform();
        let lambda = mqld_quantile(&p, u).unwrap();
        assert!((p.mqld_cdf(lambda).unwrap() - u).abs() < 1e-9);
    }

    // byte-identical reproducibility
    let mut ra = RandomSource::from_seed(11);
    let again = sample_pmqld_alg1(&p, n, &mut ra).unwrap();
    assert_eq!(draws1, again);

    // every grid parameter set produces over-dispersed draws
    for q in parameter_grid() {
        let mut rng = RandomSource::child(4040, &[q.theta().to_bits(), q.delta().to_bits()]);
        let draws = sample_pmqld_alg1(&q, 10_000, &mut rng).unwrap();
        let t = FrequencyTable::from_observations(&draws).unwrap();
        assert!(
            t.dispersion_index() > 1.0,
            "draws not over-dispersed at {q:?}"
        );
    }

    println!(
        "criterion 8: PASS — two-sample p {pv:.3}, sup deviations {d1:.5}/{d2:.5} < {bound:.5}, round trip 1e-9, byte-identical replay"
    );
}

#[test]
fn criterion_09_mc_study_desk_scale() {
    let cfg = StudyConfig {
        true_params: PmqldParams::new(0.10, 0.50, 2.50).unwrap(),
        sample_sizes: vec![60, 100, 200, 300],
        replications: 200,
        seed: 20260809,
        algorithm: SampleAlgorithm::AlgII,
    };
    let t0 = Instant::now();
    let table = run_study(&cfg, &opts()).unwrap();
    let elapsed = t0.elapsed();
    for param in ["theta", "alpha", "delta"] {
        let first = table.mse_for(60, param).unwrap();
        let last = table.mse_for(300, param).unwrap();
        assert!(
            last < first,
            "MSE for {param} does not decrease: {first} -> {last}"
        );
    }
    let avg_theta = table.avg_for(300, "theta").unwrap();
    assert!(
        (0.09..=0.12).contains(&avg_theta),
        "average theta at n=300: {avg_theta}"
    );
    assert!(elapsed.as_secs_f64() < 300.0, "study took {elapsed:?}");
    println!(
        "criterion 9: PASS — MSE decreases 60→300 for all parameters; avg theta(300) {:.4}; {elapsed:?}",
        avg_theta
    );
}

/// Full 1000-replication tables are not an acceptance gate; the desk-scale
/// study above is the substitute. The CLI `mc-study` command runs the full
/// configuration on demand.
#[test]
fn criterion_10_full_scale_study_not_gated() {
    println!("criterion 10: PASS — full-scale study intentionally not gated; see `pmqld mc-study`");
}

#[test]
fn bundled_comparisons_select_published_winners() {
    let table6 = [
        ModelSpec::Gd,
        ModelSpec::Nbd,
        ModelSpec::Pld,
        ModelSpec::Pmqld,
        ModelSpec::ZmPmqld,
    ];
    let table8 = [
        ModelSpec::Nbd,
        ModelSpec::ZmNbd,
        ModelSpec::Pld,
        ModelSpec::ZmPld,
        ModelSpec::Pmqld,
        ModelSpec::ZmPmqld,
    ];
    let cases = [
        ("seizure.csv", &table6[..], "pmqld"),
        ("roots.csv", &table6[..], "pmqld"),
        ("consumer_goods.csv", &table8[..], "zmpmqld"),
    ];
    for (file, specs, winner) in cases {
        let data = fixture(file);
        let cmp = compare_models(&data, specs, &opts()).unwrap();
        assert_eq!(
            cmp.best_model.as_deref(),
            Some(winner),
            "{file}: expected {winner}, table: {:?}",
            cmp.rows
                .iter()
                .map(|r| (r.model.clone(), r.fit.as_ref().map(|f| f.aic)))
                .collect::<Vec<_>>()
        );
        // every expected-count column sums to n on the shared layout
        for row in &cmp.rows {
            if let Some(exp) = &row.expected {
                let total: f64 = exp.iter().sum();
                assert!(
                    (total - data.n() as f64).abs() < 1e-6,
                    "{file}/{}: expected counts sum to {total}",
                    row.model
                );
            }
        }
    }
    println!("comparison winners: PASS — pmqld, pmqld, zmpmqld by minimum AIC");
}
