//! Plain-text table rendering for `--pretty` output.

use crate::{DescribePayload, FitPayload, GofPayload, SamplePayload, StudyPayload};
use pmqld::Comparison;
use std::fmt::Write;

pub fn fit(payload: &FitPayload) -> String {
    let f = &payload.fit;
    let mut out = String::new();
    let _ = writeln!(out, "model: {}  method: {:?}", f.model, f.method);
    let _ = writeln!(
        out,
        "-2logL: {:.4}  AIC: {:.4}  converged: {}  iterations: {}",
        f.neg2_loglik, f.aic, f.converged, f.iterations
    );
    let _ = writeln!(
        out,
        "{:<8} {:>12} {:>12} {:>26}",
        "param", "estimate", "std.err",
        format!("{:.0}% interval", payload.confidence_level * 100.0)
    );
    for (i, name) in f.param_names.iter().enumerate() {
        let se = f
            .std_errors
            .as_ref()
            .map(|s| format!("{:.4}", s[i]))
            .unwrap_or_else(|| "-".into());
        let ci = payload
            .confidence_intervals
            .as_ref()
            .map(|c| format!("({:.4}, {:.4})", c[i].0, c[i].1))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "{:<8} {:>12.4} {:>12} {:>26}", name, f.estimates[i], se, ci);
    }
    out.trim_end().to_string()
}

pub fn gof(payload: &GofPayload) -> String {
    let mut out = fit(&FitPayload {
        fit: payload.fit.clone(),
        confidence_level: 0.95,
        confidence_intervals: None,
    });
    out.push('\n');
    let _ = writeln!(out, "{:<8} {:>10} {:>12}", "cell", "observed", "expected");
    for c in &payload.report.cells {
        let _ = writeln!(out, "{:<8} {:>10} {:>12.2}", c.label, c.observed, c.expected);
    }
    let _ = writeln!(
        out,
        "chi-square: {:.4}  df: {}  p-value: {:.4}  (cells pooled from {})",
        payload.report.statistic, payload.report.df, payload.report.p_value,
        payload.report.pooled_from
    );
    out.trim_end().to_string()
}

pub fn comparison(cmp: &Comparison) -> String {
    let mut out = String::new();
    // observed/expected table, one column per model
    let _ = write!(out, "{:<8} {:>9}", "count", "observed");
    for row in &cmp.rows {
        let _ = write!(out, " {:>9}", row.model);
    }
    out.push('\n');
    for (i, label) in cmp.cell_labels.iter().enumerate() {
        let _ = write!(out, "{:<8} {:>9}", label, cmp.observed[i]);
        for row in &cmp.rows {
            match &row.expected {
                Some(e) => {
                    let _ = write!(out, " {:>9.2}", e[i]);
                }
                None => {
                    let _ = write!(out, " {:>9}", "-");
                }
            }
        }
        out.push('\n');
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<9} {:>10} {:>10} {:>9} {:>4} {:>8}  estimates",
        "model", "-2logL", "AIC", "chi2", "df", "p"
    );
    for row in &cmp.rows {
        match (&row.fit, &row.gof) {
            (Some(f), Some(g)) => {
                let est = f
                    .param_names
                    .iter()
                    .zip(&f.estimates)
                    .map(|(n, v)| format!("{n}={v:.3}"))
                    .collect::<Vec<_>>()
                    .join(" ");
                let _ = writeln!(
                    out,
                    "{:<9} {:>10.2} {:>10.2} {:>9.2} {:>4} {:>8.3}  {est}",
                    row.model, f.neg2_loglik, f.aic, g.statistic, g.df, g.p_value
                );
            }
            (Some(f), None) => {
                let _ = writeln!(
                    out,
                    "{:<9} {:>10.2} {:>10.2} {:>9} {:>4} {:>8}  (no gof)",
                    row.model, f.neg2_loglik, f.aic, "-", "-", "-"
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "{:<9} failed: {}",
                    row.model,
                    row.error.as_deref().unwrap_or("unknown")
                );
            }
        }
    }
    if let Some(best) = &cmp.best_model {
        let _ = writeln!(out, "minimum AIC: {best}");
    }
    out.trim_end().to_string()
}

pub fn samples(payload: &SamplePayload) -> String {
    let mut out = format!("# seed: {}\n", payload.seed);
    for x in &payload.samples {
        let _ = writeln!(out, "{x}");
    }
    out.trim_end().to_string()
}

pub fn describe(payload: &DescribePayload) -> String {
    let mut out = String::new();
    let m = &payload.moments;
    let _ = writeln!(
        out,
        "mean {:.6}  variance {:.6}  dispersion {:.6}  skewness {:.6}  kurtosis {:.6}",
        m.mean, m.variance, m.dispersion_index, m.skewness, m.kurtosis
    );
    let _ = writeln!(
        out,
        "shape: {:?} at {:?} (scanned to {})",
        payload.shape.kind, payload.shape.mode_locations, payload.shape.scanned_up_to
    );
    let _ = writeln!(
        out,
        "{:<6} {:>12} {:>12} {:>12} {:>12}",
        "x", "pmf", "cdf", "survival", "hazard"
    );
    for row in &payload.support {
        let hz = row
            .hazard
            .map(|h| format!("{h:.6}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:<6} {:>12.8} {:>12.8} {:>12.8} {:>12}",
            row.x, row.pmf, row.cdf, row.survival, hz
        );
    }
    for (u, q) in &payload.quantiles {
        let _ = writeln!(out, "quantile({u}) = {q}");
    }
    out.trim_end().to_string()
}

pub fn study(payload: &StudyPayload) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<7} {:>12} {:>12} {:>12} {:>9}",
        "n", "param", "avg", "bias", "mse", "failures"
    );
    for r in &payload.table.rows {
        let _ = writeln!(
            out,
            "{:<6} {:<7} {:>12.6} {:>12.6} {:>12.6} {:>9}",
            r.n, r.param, r.avg, r.bias, r.mse, r.failures
        );
    }
    out.trim_end().to_string()
}
