//! Shared fixtures and independent oracles for the integration suites.
//! Each suite uses its own subset, so unused-item lints are silenced here.
#![allow(dead_code)]

use pmqld::{CountDistribution, FrequencyTable, PmqldParams};
use std::path::PathBuf;

pub fn fixture(name: &str) -> FrequencyTable {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    FrequencyTable::from_csv_path(&path).unwrap_or_else(|e| panic!("loading {name}: {e}"))
}

/// Twenty parameter sets spanning θ ∈ {0.05, 0.3, 1, 3}, α ∈ {−0.9, ~0,
/// 0.5, 2}, δ ∈ {0.5, 1, 2.5, 9}, all with a proper (nonnegative) mass
/// function; α = 0 is exercised through α = 1e−6 and α = −0.9 pairs with
/// δ = 1 where every negative α³ is admissible.
pub fn parameter_grid() -> Vec<PmqldParams> {
    let raw = [
        (0.05, 1e-6, 2.5),
        (0.3, 1e-6, 2.5),
        (1.0, 1e-6, 2.5),
        (3.0, 1e-6, 2.5),
        (0.05, 0.5, 0.5),
        (0.3, 0.5, 0.5),
        (1.0, 0.5, 0.5),
        (3.0, 0.5, 0.5),
        (0.05, 2.0, 9.0),
        (0.3, 2.0, 9.0),
        (1.0, 2.0, 9.0),
        (3.0, 2.0, 9.0),
        (0.05, -0.9, 1.0),
        (0.3, -0.9, 1.0),
        (1.0, -0.9, 1.0),
        (3.0, -0.9, 1.0),
        (0.05, 0.5, 2.5),
        (0.3, 2.0, 0.5),
        (1.0, 1e-6, 9.0),
        (3.0, -0.5, 2.5),
    ];
    raw.iter()
        .map(|&(t, a, d)| {
            let p = PmqldParams::new(t, a, d).unwrap();
            assert!(p.has_proper_mass(), "grid point ({t}, {a}, {d}) improper");
            p
        })
        .collect()
}

/// Smallest x with survival below the threshold, by doubling then stepping.
pub fn tail_cutoff(p: &PmqldParams, threshold: f64) -> u64 {
    let mut x = 8u64;
    while p.survival(x).unwrap() >= threshold {
        x *= 2;
        assert!(x < 1 << 40, "tail cutoff runaway");
    }
    x
}

/// Adaptive Simpson quadrature with a forced minimum subdivision depth so
/// sharply localized integrands cannot fool the initial coarse estimate.
pub fn integrate<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
        force: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || (force == 0 && delta.abs() <= 15.0 * tol) {
            left + right + delta / 15.0
        } else {
            let fnext = force.saturating_sub(1);
            rec(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1, fnext)
                + rec(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1, fnext)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(&f, a, fa, b, fb);
    rec(&f, a, fa, b, fb, whole, m, fm, tol, 50, 11)
}

/// Gamma density in the (shape, rate) convention; test-side oracle.
pub fn gamma_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lg = pmqld::specfun::log_gamma(shape).unwrap();
    (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - lg).exp()
}

/// Two-sample chi-square homogeneity test on pooled count categories.
/// Categories are pooled from the tail until each combined count is at
/// least 10. Returns (statistic, df, p-value).
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> (f64, u32, f64) {
    let max = *a.iter().chain(b.iter()).max().unwrap();
    let mut ca = vec![0u64; max as usize + 1];
    let mut cb = vec![0u64; max as usize + 1];
    for &x in a {
        ca[x as usize] += 1;
    }
    for &x in b {
        cb[x as usize] += 1;
    }
    // pool sparse tail categories
    let mut cats: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for i in 0..ca.len() {
        acc.0 += ca[i] as f64;
        acc.1 += cb[i] as f64;
        if acc.0 + acc.1 >= 10.0 {
            cats.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 + acc.1 > 0.0 {
        match cats.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => cats.push(acc),
        }
    }
    let na: f64 = cats.iter().map(|c| c.0).sum();
    let nb: f64 = cats.iter().map(|c| c.1).sum();
    let n = na + nb;
    let mut stat = 0.0;
    for &(oa, ob) in &cats {
        let col = oa + ob;
        let ea = col * na / n;
        let eb = col * nb / n;
        if ea > 0.0 {
            stat += (oa - ea).powi(2) / ea;
        }
        if eb > 0.0 {
            stat += (ob - eb).powi(2) / eb;
        }
    }
    let df = (cats.len() - 1) as u32;
    let p = pmqld::specfun::chi_square_sf(stat, df.max(1)).unwrap();
    (stat, df, p)
}

/// Empirical pmf of a sample over 0..=max.
pub fn empirical_pmf(sample: &[u64]) -> Vec<f64> {
    let max = *sample.iter().max().unwrap();
    let mut counts = vec![0.0; max as usize + 1];
    for &x in sample {
        counts[x as usize] += 1.0;
    }
    let n = sample.len() as f64;
    counts.iter().map(|c| c / n).collect()
}

/// Largest absolute deviation between the empirical and model pmf.
pub fn pmf_sup_deviation(sample: &[u64], model: &impl CountDistribution) -> f64 {
    let emp = empirical_pmf(sample);
    emp.iter()
        .enumerate()
        .map(|(x, &e)| (e - model.pmf(x as u64)).abs())
        .fold(0.0, f64::max)
}
