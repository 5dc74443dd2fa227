//! `zetalaw` command-line front end.
//!
//! Exit codes: 0 success, 1 checks ran but failed (or a computation error),
//! 2 usage error.

mod complex_arg;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use zetalaw::density::log_grid;
use zetalaw::li::{check_proposition, li_reports, DEFAULT_RADIUS, MAX_RADIUS};
use zetalaw::sampler::{build_sampler, ks_statistic, DEFAULT_TABLE_SIZE};
use zetalaw::{verify, xi, DensityModel, Error, FieldId, VerificationReport};

use crate::complex_arg::parse_complex;
use crate::output::{jnum, num, report_csv, report_json, report_text, Format, REPORT_CSV_HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "zetalaw",
    version,
    about = "Completed Dedekind zeta functions as moments of a random variable"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate xi_K at complex points.
    Xi {
        #[arg(long)]
        field: FieldId,
        /// Comma-separated complex values such as 0.5+14.1i.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_complex)]
        s: Vec<Complex64>,
    },
    /// Tabulate the density of X on a logarithmic grid.
    Density {
        #[arg(long)]
        field: FieldId,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Run a verification suite.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        /// Replace every check's tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Li coefficients by contour and from the cumulants of -log X.
    Li {
        #[arg(long)]
        field: FieldId,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=8))]
        n_max: u32,
        /// Contour radius around s = 1.
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
    },
    /// Draw samples of X by inverse CDF.
    Sample {
        #[arg(long)]
        field: FieldId,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TABLE_SIZE)]
        table_size: usize,
        /// Print only the summary.
        #[arg(long)]
        summary_only: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    LocalZeta,
    Poisson,
    Positivity,
    FunctionalEquation,
    Mellin,
    All,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Compute(other),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("ZETALAW_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if threads > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().ok();
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::ValueValidation, msg).exit(),
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Xi { field, s } => cmd_xi(*field, s, cli.format),
        Command::Density {
            field,
            t_min,
            t_max,
            points,
        } => cmd_density(*field, *t_min, *t_max, *points, cli.format),
        Command::Check { suite, tolerance } => cmd_check(*suite, *tolerance, cli.format),
        Command::Li { field, n_max, radius } => cmd_li(*field, *n_max, *radius, cli.format),
        Command::Sample {
            field,
            count,
            seed,
            table_size,
            summary_only,
        } => cmd_sample(*field, *count as usize, *seed, *table_size, *summary_only, cli.format),
    }
}

fn cmd_xi(field: FieldId, points: &[Complex64], format: Format) -> Outcome {
    let spec = field.spec();
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|&s| xi(&spec, s))
        .collect::<zetalaw::Result<_>>()?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .zip(&values)
                .map(|(s, v)| {
                    json!({"field": field.short_name(), "s_re": jnum(s.re), "s_im": jnum(s.im), "re": jnum(v.re), "im": jnum(v.im)})
                })
                .collect();
            println!("{}", Value::Array(rows));
        }
        Format::Csv => {
            println!("field,s_re,s_im,re,im");
            for (s, v) in points.iter().zip(&values) {
                println!(
                    "{},{},{},{},{}",
                    field.short_name(),
                    num(s.re),
                    num(s.im),
                    num(v.re),
                    num(v.im)
                );
            }
        }
        Format::Text => {
            for (s, v) in points.iter().zip(&values) {
                println!("xi_{}({}) = {}", field.short_name(), complex_text(*s), complex_text(*v));
            }
        }
    }
    Ok(true)
}

fn complex_text(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", num(z.re), num(-z.im))
    } else {
        format!("{}+{}i", num(z.re), num(z.im))
    }
}

fn cmd_density(field: FieldId, t_min: f64, t_max: f64, points: usize, format: Format) -> Outcome {
    if !(t_min > 0.0 && t_min < t_max && t_max.is_finite()) {
        return Err(Failure::Usage(format!(
            "need 0 < t-min < t-max, got [{t_min}, {t_max}]"
        )));
    }
    if points < 2 {
        return Err(Failure::Usage(format!("need at least 2 points, got {points}")));
    }
    let model = DensityModel::new(field);
    let grid = log_grid(t_min, t_max, points);
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&t| model.density(t))
        .collect::<zetalaw::Result<_>>()?;
    match format {
        Format::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .zip(&values)
                .map(|(t, v)| json!({"t": jnum(*t), "psi": jnum(*v)}))
                .collect();
            println!("{}", json!({"field": field.short_name(), "points": rows}));
        }
        Format::Csv | Format::Text => {
            println!("t,psi");
            for (t, v) in grid.iter().zip(&values) {
                println!("{},{}", num(*t), num(*v));
            }
        }
    }
    Ok(true)
}

fn run_suite(suite: Suite, tolerance: Option<f64>) -> zetalaw::Result<Vec<VerificationReport>> {
    Ok(match suite {
        Suite::LocalZeta => verify::suite_local_zeta(tolerance)?,
        Suite::Poisson => verify::suite_poisson(tolerance)?,
        Suite::Positivity => verify::suite_positivity(tolerance)?,
        Suite::FunctionalEquation => verify::suite_functional_equation(tolerance)?,
        Suite::Mellin => verify::suite_mellin(tolerance)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::FunctionalEquation,
                Suite::LocalZeta,
                Suite::Poisson,
                Suite::Positivity,
                Suite::Mellin,
            ] {
                all.extend(run_suite(s, tolerance)?);
            }
            all
        }
    })
}

fn print_reports(reports: &[VerificationReport], format: Format) {
    match format {
        Format::Json => println!("{}", Value::Array(reports.iter().map(report_json).collect())),
        Format::Csv => {
            println!("{REPORT_CSV_HEADER}");
            for r in reports {
                println!("{}", report_csv(r));
            }
        }
        Format::Text => {
            for r in reports {
                println!("{}", report_text(r));
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} checks passed", reports.len());
        }
    }
}

fn cmd_check(suite: Suite, tolerance: Option<f64>, format: Format) -> Outcome {
    if let Some(tol) = tolerance {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Failure::Usage(format!("tolerance must be finite and >= 0, got {tol}")));
        }
    }
    let reports = run_suite(suite, tolerance)?;
    print_reports(&reports, format);
    Ok(reports.iter().all(|r| r.passed))
}

fn cmd_li(field: FieldId, n_max: u32, radius: f64, format: Format) -> Outcome {
    if !(radius > 0.0 && radius <= MAX_RADIUS) {
        return Err(Failure::Usage(format!(
            "radius must be in (0, {MAX_RADIUS}], got {radius}"
        )));
    }
    let spec = field.spec();
    let (rows, checks) = rayon::join(|| li_reports(&spec, n_max, radius), || check_proposition(&spec));
    let (rows, checks) = (rows?, checks?);
    match format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "field": r.field.short_name(),
                        "n": r.n,
                        "lambda_contour": jnum(r.lambda_contour),
                        "lambda_probabilistic": r.lambda_probabilistic.map(jnum),
                        "agreement": jnum(r.agreement),
                        "positive": r.positive,
                    })
                })
                .collect();
            let checks: Vec<Value> = checks.iter().map(report_json).collect();
            println!("{}", json!({"coefficients": rows, "checks": checks}));
        }
        Format::Csv => {
            println!("field,n,lambda_contour,lambda_probabilistic,agreement,positive");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.field.short_name(),
                    r.n,
                    num(r.lambda_contour),
                    r.lambda_probabilistic.map(num).unwrap_or_default(),
                    num(r.agreement),
                    r.positive
                );
            }
            println!();
            println!("{REPORT_CSV_HEADER}");
            for c in &checks {
                println!("{}", report_csv(c));
            }
        }
        Format::Text => {
            for r in &rows {
                let prob = r
                    .lambda_probabilistic
                    .map(|p| format!("  probabilistic={}  agreement={}", num(p), num(r.agreement)))
                    .unwrap_or_default();
                println!(
                    "lambda_{} [{}] contour={}{prob}",
                    r.n,
                    r.field.short_name(),
                    num(r.lambda_contour)
                );
            }
            for c in &checks {
                println!("{}", report_text(c));
            }
        }
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn cmd_sample(
    field: FieldId,
    count: usize,
    seed: u64,
    table_size: usize,
    summary_only: bool,
    format: Format,
) -> Outcome {
    let model = DensityModel::new(field);
    let mut state = build_sampler(&model, table_size, seed)?;
    let samples = state.sample(count);
    let n = count as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let variance = if count > 1 {
        samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let ks = ks_statistic(&model, &samples)?;
    let expected_mean = 1.0 / field.spec().sqrt_abs_disc();
    let summary = json!({
        "field": field.short_name(),
        "count": count,
        "seed": seed,
        "table_size": table_size,
        "mean": jnum(mean),
        "expected_mean": jnum(expected_mean),
        "variance": jnum(variance),
        "ks_statistic": jnum(ks),
        "ks_critical_95": jnum(1.95 / n.sqrt()),
    });
    match format {
        Format::Json => {
            let mut doc = json!({"summary": summary});
            if !summary_only {
                doc["samples"] = Value::Array(samples.iter().map(|x| jnum(*x)).collect());
            }
            println!("{doc}");
        }
        Format::Csv => {
            // samples on stdout, summary on stderr so the stream stays one column
            if !summary_only {
                println!("x");
                for x in &samples {
                    println!("{}", num(*x));
                }
            }
            eprintln!("{summary}");
        }
        Format::Text => {
            if !summary_only {
                for x in &samples {
                    println!("{}", num(*x));
                }
            }
            println!("{summary}");
        }
    }
    Ok(true)
}
