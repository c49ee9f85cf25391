//! Command-line front end: data ingestion, fitting, goodness of fit, model
//! comparison, sampling, distribution description, and the Monte Carlo
//! study. Every invocation prints one structured JSON report on standard
//! output (or a human-readable rendering with `--pretty`) and is fully
//! deterministic given its flags; `--timestamps` opts into wall-clock
//! fields at the cost of byte-identical reruns.

mod render;
mod report;

use clap::{Args, Parser, Subcommand};
use pmqld::*;
use report::{Report, Timestamps};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable consulted for the default seed when `--seed` is
/// not given.
const SEED_ENV: &str = "PMQLD_SEED";

#[derive(Parser)]
#[command(
    name = "pmqld",
    version,
    about = "Poisson-modified Quasi Lindley distribution toolkit for over-dispersed counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Render human-readable tables instead of the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Include wall-clock timestamps in the report (sacrifices
    /// byte-identical reruns).
    #[arg(long, global = true)]
    timestamps: bool,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Scale parameter θ > 0.
    #[arg(long)]
    theta: f64,
    /// Shape parameter α with α³ > −1.
    #[arg(long)]
    alpha: f64,
    /// Shape parameter δ > 0.
    #[arg(long)]
    delta: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<PmqldParams> {
        PmqldParams::new(self.theta, self.alpha, self.delta)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model to count data by maximum likelihood (or moments).
    Fit {
        /// CSV file: `count,frequency` rows or a raw `x` column.
        #[arg(long)]
        data: PathBuf,
        /// Model: pmqld, zmpmqld, gd, nbd, pld, zmnbd, zmpld.
        #[arg(long, default_value = "pmqld")]
        model: String,
        /// Estimation method: mle, or mme (pmqld only).
        #[arg(long, default_value = "mle")]
        method: String,
        /// Confidence level for Wald intervals.
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Chi-square goodness of fit for one fitted model.
    Gof {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = "pmqld")]
        model: String,
        /// Pool tail cells until every expected count reaches this value.
        #[arg(long, default_value_t = 1.0)]
        pooling_threshold: f64,
    },
    /// Fit several models and compare them by AIC and chi-square fit.
    Compare {
        #[arg(long)]
        data: PathBuf,
        /// Comma-separated model list.
        #[arg(long, default_value = "gd,nbd,pld,pmqld,zmpmqld")]
        models: String,
    },
    /// Draw samples from the PMQLD or its zero-modified variant.
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        /// Zero-modification parameter; omits the wrapper when absent.
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long)]
        n: usize,
        /// RNG seed; falls back to $PMQLD_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Sampling algorithm: i (mixture route) or ii (quantile route).
        #[arg(long, default_value = "ii")]
        algorithm: String,
    },
    /// Probabilities, moments, shape, and quantiles of one parameter set.
    Describe {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest support point tabulated; defaults to the 0.999 quantile.
        #[arg(long)]
        xmax: Option<u64>,
        /// Comma-separated quantile levels.
        #[arg(long, default_value = "0.25,0.5,0.75")]
        quantiles: String,
    },
    /// Monte Carlo bias/MSE study of the maximum-likelihood estimator.
    McStudy {
        #[command(flatten)]
        params: ParamArgs,
        /// Comma-separated sample sizes.
        #[arg(long, default_value = "60,100,200,300")]
        sizes: String,
        #[arg(long, default_value_t = 1000)]
        reps: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "ii")]
        algorithm: String,
        /// Emit the study table as CSV instead of a JSON report.
        #[arg(long)]
        csv: bool,
    },
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(0)
}

fn parse_algorithm(s: &str) -> Result<SampleAlgorithm> {
    match s.to_ascii_lowercase().as_str() {
        "i" | "1" | "alg1" => Ok(SampleAlgorithm::AlgI),
        "ii" | "2" | "alg2" => Ok(SampleAlgorithm::AlgII),
        other => Err(Error::Parameter(format!(
            "unknown algorithm '{other}'; expected i or ii"
        ))),
    }
}

fn load(data: &Path) -> Result<FrequencyTable> {
    FrequencyTable::from_csv_path(data)
}

#[derive(Serialize)]
struct DataEcho {
    path: String,
    n: u64,
    distinct_values: usize,
    mean: f64,
    dispersion_index: f64,
}

impl DataEcho {
    fn new(path: &Path, t: &FrequencyTable) -> Self {
        Self {
            path: path.display().to_string(),
            n: t.n(),
            distinct_values: t.distinct_values(),
            mean: t.mean(),
            dispersion_index: t.dispersion_index(),
        }
    }
}

#[derive(Serialize)]
struct FitPayload {
    fit: FitResult,
    confidence_level: f64,
    confidence_intervals: Option<Vec<(f64, f64)>>,
}

#[derive(Serialize)]
struct GofPayload {
    fit: FitResult,
    cell_labels: Vec<String>,
    observed: Vec<u64>,
    expected: Vec<f64>,
    report: GofReport,
}

#[derive(Serialize)]
struct SamplePayload {
    seed: u64,
    algorithm: String,
    samples: Vec<u64>,
}

#[derive(Serialize)]
struct SupportRow {
    x: u64,
    pmf: f64,
    cdf: f64,
    survival: f64,
    hazard: Option<f64>,
}

#[derive(Serialize)]
struct DescribePayload {
    params: PmqldParams,
    moments: MomentSummary,
    shape: ShapeReport,
    support: Vec<SupportRow>,
    quantiles: Vec<(f64, u64)>,
}

#[derive(Serialize)]
struct StudyPayload {
    config: StudyConfig,
    table: StudyTable,
}

fn run(cli: &Cli) -> Result<String> {
    let started = Timestamps::now();
    let options = FitOptions::default();
    match &cli.command {
        Command::Fit {
            data,
            model,
            method,
            level,
        } => {
            let table = load(data)?;
            let spec: ModelSpec = model.parse()?;
            let fit = match method.to_ascii_lowercase().as_str() {
                "mle" => fit_model(spec, &table, &options)?.0,
                "mme" => {
                    if spec != ModelSpec::Pmqld {
                        return Err(Error::Parameter(
                            "--method mme is only available for the pmqld model".into(),
                        ));
                    }
                    fit_mme(&table)?
                }
                other => {
                    return Err(Error::Parameter(format!(
                        "unknown method '{other}'; expected mle or mme"
                    )))
                }
            };
            let intervals = confidence_intervals(&fit, *level).ok();
            let payload = FitPayload {
                fit,
                confidence_level: *level,
                confidence_intervals: intervals,
            };
            let echo = DataEcho::new(data, &table);
            if cli.pretty {
                return Ok(render::fit(&payload));
            }
            Report::new("fit", echo, payload, started.stamp(cli.timestamps)).to_json()
        }
        Command::Gof {
            data,
            model,
            pooling_threshold,
        } => {
            let table = load(data)?;
            let spec: ModelSpec = model.parse()?;
            let (fit, fitted) = fit_model(spec, &table, &options)?;
            let cells = Cells::table_layout(&table)?;
            let observed = cells.observed(&table);
            let expected = expected_counts(&fitted, table.n() as f64, &cells)?;
            let report = chi_square_gof(
                &cells,
                &observed,
                &expected,
                fit.num_params(),
                *pooling_threshold,
            )?;
            let payload = GofPayload {
                fit,
                cell_labels: cells.labels(),
                observed,
                expected,
                report,
            };
            let echo = DataEcho::new(data, &table);
            if cli.pretty {
                return Ok(render::gof(&payload));
            }
            Report::new("gof", echo, payload, started.stamp(cli.timestamps)).to_json()
        }
        Command::Compare { data, models } => {
            let table = load(data)?;
            let specs: Vec<ModelSpec> = models
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_>>()?;
            let comparison = compare_models(&table, &specs, &options)?;
            let echo = DataEcho::new(data, &table);
            if cli.pretty {
                return Ok(render::comparison(&comparison));
            }
            Report::new("compare", echo, comparison, started.stamp(cli.timestamps)).to_json()
        }
        Command::Sample {
            params,
            phi,
            n,
            seed,
            algorithm,
        } => {
            let p = params.build()?;
            let seed = resolve_seed(*seed);
            let alg = parse_algorithm(algorithm)?;
            let mut rng = RandomSource::from_seed(seed);
            let samples = match phi {
                Some(phi) => {
                    let zm = ZeroModified::new(*phi, p)?;
                    sample_zmpmqld(&zm, *n, &mut rng)?
                }
                None => match alg {
                    SampleAlgorithm::AlgI => sample_pmqld_alg1(&p, *n, &mut rng)?,
                    SampleAlgorithm::AlgII => sample_pmqld_alg2(&p, *n, &mut rng)?,
                },
            };
            let payload = SamplePayload {
                seed,
                algorithm: algorithm.clone(),
                samples,
            };
            if cli.pretty {
                return Ok(render::samples(&payload));
            }
            let echo = serde_json::json!({
                "theta": params.theta, "alpha": params.alpha, "delta": params.delta,
                "phi": phi, "n": n,
            });
            Report::new("sample", echo, payload, started.stamp(cli.timestamps)).to_json()
        }
        Command::Describe {
            params,
            xmax,
            quantiles,
        } => {
            let p = params.build()?;
            let levels: Vec<f64> = quantiles
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Error::Parameter(format!("cannot parse quantile level '{s}'"))
                    })
                })
                .collect::<Result<_>>()?;
            let xmax = match xmax {
                Some(x) => *x,
                None => p.quantile(0.999)?,
            };
            let mut support = Vec::with_capacity(xmax as usize + 1);
            for x in 0..=xmax {
                support.push(SupportRow {
                    x,
                    pmf: p.pmf(x),
                    cdf: p.cdf(x)?,
                    survival: p.survival(x)?,
                    hazard: p.hazard(x).ok(),
                });
            }
            let quantiles = levels
                .iter()
                .map(|&u| p.quantile(u).map(|q| (u, q)))
                .collect::<Result<Vec<_>>>()?;
            let payload = DescribePayload {
                params: p,
                moments: p.moments(),
                shape: p.classify_shape(p.default_scan_limit())?,
                support,
                quantiles,
            };
            if cli.pretty {
                return Ok(render::describe(&payload));
            }
            let echo = serde_json::json!({
                "theta": params.theta, "alpha": params.alpha, "delta": params.delta,
                "xmax": xmax,
            });
            Report::new("describe", echo, payload, started.stamp(cli.timestamps)).to_json()
        }
        Command::McStudy {
            params,
            sizes,
            reps,
            seed,
            algorithm,
            csv,
        } => {
            let p = params.build()?;
            let sizes: Vec<u64> = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parameter(format!("cannot parse sample size '{s}'")))
                })
                .collect::<Result<_>>()?;
            let config = StudyConfig {
                true_params: p,
                sample_sizes: sizes,
                replications: *reps,
                seed: resolve_seed(*seed),
                algorithm: parse_algorithm(algorithm)?,
            };
            let table = run_study(&config, &options)?;
            if *csv {
                // the print layer appends the final newline
                return Ok(table.to_csv().trim_end().to_string());
            }
            let payload = StudyPayload {
                config: config.clone(),
                table,
            };
            if cli.pretty {
                return Ok(render::study(&payload));
            }
            let echo = serde_json::json!({
                "theta": params.theta, "alpha": params.alpha, "delta": params.delta,
                "replications": reps, "seed": config.seed,
            });
            Report::new("mc-study", echo, payload, started.stamp(cli.timestamps)).to_json()
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Domain(_) => 2,
        Error::Data(_) => 3,
        Error::Convergence(_) | Error::Estimation(_) | Error::Numeric(_) | Error::Gof(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            println!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pmqld: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
