//! Command-line front end.
//!
//! Every command writes one JSON document to stdout (or `--out`). Exit
//! status: 0 on success, 1 when a verification fails, 2 on usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog::parse_spec;
use crate::classify::{classify, ClassificationReport};
use crate::diffops::{DiffConfig, Scheme, Tolerance};
use crate::error::{Error, Result};
use crate::function::SampleGrid;
use crate::laurent::{
    coefficient_class_check, laurent_coefficients, AnnulusRegion, CoefficientVerdict, SeriesExport,
};
use crate::quaternion::SphericalPoint;
use crate::verify::{verify_props, Summary, VerifyConfig, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fueterlab",
    version,
    about = "Classify quaternionic functions and verify their properties"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Class I/II/III, regularity and centrality verdicts for a function spec.
    Classify {
        spec: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the full property suite.
    VerifyProps {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Slice-wise Laurent coefficients about `c1 + c2 ι`.
    Laurent {
        spec: String,
        /// c1,c2
        #[arg(long, default_value = "0,1")]
        center: String,
        /// s,S
        #[arg(long, default_value = "0.2,0.6")]
        radii: String,
        /// n_min,n_max
        #[arg(long, default_value = "-8,8", allow_hyphen_values = true)]
        n_range: String,
        #[arg(long, default_value_t = 64)]
        quadrature: usize,
        /// Run the spherical Cauchy–Riemann test on every coefficient.
        #[arg(long)]
        check_class: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// t0,t1,r0,r1,a0,a1,b0,b1,n_per_axis
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Validated settings shared by all commands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub grid: SampleGrid,
    pub diff: DiffConfig,
    pub seed: u64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let grid = match &args.grid {
            Some(g) => SampleGrid::parse(g)?,
            None => SampleGrid::default(),
        };
        let defaults = DiffConfig::default();
        let diff = DiffConfig {
            h: args.h.unwrap_or(defaults.h),
            scheme: args.scheme.unwrap_or(defaults.scheme),
            tol: Tolerance {
                abs: args.tol_abs.unwrap_or(defaults.tol.abs),
                rel: args.tol_rel.unwrap_or(defaults.tol.rel),
            },
        };
        grid.validate()?;
        diff.validate()?;
        Ok(Self {
            grid,
            diff,
            seed: args.seed,
            out: args.out.clone(),
        })
    }
}

fn parse_pair<T: std::str::FromStr>(flag: &str, s: &str) -> Result<(T, T)>
where
    T::Err: std::fmt::Display,
{
    let (a, b) = s.split_once(',').ok_or_else(|| {
        Error::Spec(format!(
            "--{flag} expects two comma-separated values, got `{s}`"
        ))
    })?;
    let parse = |v: &str| {
        v.trim()
            .parse::<T>()
            .map_err(|e| Error::Spec(format!("--{flag}: bad value `{v}`: {e}")))
    };
    Ok((parse(a)?, parse(b)?))
}

#[derive(Debug, Serialize)]
struct Document<'a, T: Serialize> {
    command: &'a str,
    timestamp: String,
    report: T,
}

#[derive(Debug, Serialize)]
pub struct LaurentReport {
    pub series: SeriesExport,
    /// Max `|reconstruct(p) − f(p)|` over probes on the contour circle.
    pub probe_max_error: f64,
    pub probe_max_tail_estimate: f64,
    pub probes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_classes: Option<Vec<CoefficientVerdict>>,
}

/// Outcome of a command before serialization.
pub enum Outcome {
    Classify(ClassificationReport),
    Verify(Summary),
    Laurent(LaurentReport),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Classify(r) => r.inclusion_consistent,
            Outcome::Verify(s) => s.all_passed,
            Outcome::Laurent(r) => r
                .coefficient_classes
                .as_ref()
                .is_none_or(|v| v.iter().all(|c| c.passed)),
        }
    }

    fn to_json(&self, command: &str) -> serde_json::Result<String> {
        let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        match self {
            Outcome::Classify(r) => serde_json::to_string_pretty(&Document {
                command,
                timestamp,
                report: r,
            }),
            Outcome::Verify(s) => serde_json::to_string_pretty(&Document {
                command,
                timestamp,
                report: s,
            }),
            Outcome::Laurent(l) => serde_json::to_string_pretty(&Document {
                command,
                timestamp,
                report: l,
            }),
        }
    }
}

pub fn cmd_classify(spec: &str, cfg: &RunConfig) -> Result<ClassificationReport> {
    let f = parse_spec(spec, &cfg.grid, &cfg.diff)?;
    classify(&f, &cfg.grid, &cfg.diff)
}

pub fn cmd_verify_props(cfg: &RunConfig) -> Summary {
    verify_props(&VerifyConfig {
        seed: cfg.seed,
        diff: cfg.diff,
        grid: cfg.grid,
    })
}

pub fn cmd_laurent(
    spec: &str,
    region: &AnnulusRegion,
    n_range: (i32, i32),
    quadrature: usize,
    check_class: bool,
    cfg: &RunConfig,
) -> Result<LaurentReport> {
    let f = parse_spec(spec, &cfg.grid, &cfg.diff)?;
    let series = laurent_coefficients(&f, region, n_range, quadrature)?;
    let radius = region.contour_radius();
    let mut probe_max_error = 0.0_f64;
    let mut probe_max_tail_estimate = 0.0_f64;
    let mut probes = 0;
    for &alpha in series.alphas.iter().step_by(4) {
        for &beta in series.betas.iter().step_by(4) {
            for k in 0..8 {
                let z = region.center()
                    + num_complex::Complex64::from_polar(
                        radius,
                        0.25 * std::f64::consts::PI * k as f64,
                    );
                let p = SphericalPoint::new(z.re, z.im, alpha, beta).to_quaternion();
                probe_max_error =
                    probe_max_error.max(series.reconstruct(p)?.max_abs_diff(f.eval(p)?));
                probe_max_tail_estimate = probe_max_tail_estimate.max(series.tail_estimate(p)?);
                probes += 1;
            }
        }
    }
    let coefficient_classes = if check_class {
        Some(coefficient_class_check(&series, &cfg.diff)?)
    } else {
        None
    };
    Ok(LaurentReport {
        series: series.export(),
        probe_max_error,
        probe_max_tail_estimate,
        probes,
        coefficient_classes,
    })
}

fn execute(command: &Command) -> Result<(Outcome, Option<PathBuf>)> {
    match command {
        Command::Classify { spec, common } => {
            let cfg = RunConfig::from_args(common)?;
            Ok((Outcome::Classify(cmd_classify(spec, &cfg)?), cfg.out))
        }
        Command::VerifyProps { common } => {
            let cfg = RunConfig::from_args(common)?;
            Ok((Outcome::Verify(cmd_verify_props(&cfg)), cfg.out))
        }
        Command::Laurent {
            spec,
            center,
            radii,
            n_range,
            quadrature,
            check_class,
            common,
        } => {
            let cfg = RunConfig::from_args(common)?;
            let region =
                AnnulusRegion::new(parse_pair("center", center)?, parse_pair("radii", radii)?)?;
            let n_range = parse_pair("n-range", n_range)?;
            let report = cmd_laurent(spec, &region, n_range, *quadrature, *check_class, &cfg)?;
            Ok((Outcome::Laurent(report), cfg.out))
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Classify { .. } => "classify",
        Command::VerifyProps { .. } => "verify-props",
        Command::Laurent { .. } => "laurent",
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (outcome, out) = match execute(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let json = match outcome.to_json(command_name(&cli.command)) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return EXIT_FAILED;
        }
    };
    let written = match out {
        Some(path) => fs::write(&path, json + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => writeln!(std::io::stdout().lock(), "{json}").map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
