//! Command dispatch for the `gainprophet` binary.
//!
//! Every subcommand reads CSV input files and renders a single JSON document
//! (or `path<TAB>value` lines with `--output table`). Output is produced only
//! after the whole computation succeeded.

mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use gainprophet_core::fuzzy::{self, Partition};
use gainprophet_core::predictors::{self, ArModel, MaModel, Policy, ScoreFamily, ScoreProblem};
use gainprophet_core::{mining, model, stats, Factor, GainError};
use serde::Serialize;
use serde_json::{json, Value};

pub use render::round_number;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable files or rejected input; exit status 2.
    Input(String),
    /// Usage or help text from the argument parser.
    Usage {
        text: String,
        code: u8,
    },
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Usage { code, .. } => *code,
            CliError::Internal(_) => 1,
        }
    }

    /// Text for standard error (or standard output for `--help`).
    pub fn message(&self) -> String {
        match self {
            CliError::Input(msg) => format!("error: {msg}\n"),
            CliError::Usage { text, .. } => text.clone(),
            CliError::Internal(msg) => format!("internal error: {msg}\n"),
        }
    }
}

impl From<GainError> for CliError {
    fn from(err: GainError) -> Self {
        CliError::Input(err.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gainprophet",
    version,
    about = "Gain prediction and analysis toolkit"
)]
struct Cli {
    /// Rendering of the result.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    PaperLiteral,
    Trend,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Normal,
    Exponential,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Delta-average next-gain prediction.
    Predict {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::PaperLiteral)]
        policy: PolicyArg,
    },
    /// Maximum-likelihood expected gain by bisection on the score equation.
    Mle {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::Normal)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, requires = "hi", allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, requires = "lo", allow_hyphen_values = true)]
        hi: Option<f64>,
        /// Bisection width; defaults to 1e-12 of the bracket.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Support of every factor level and the optimum condition.
    Support {
        #[arg(long)]
        table: PathBuf,
    },
    /// Boolean sequence matrix and dominant column pattern.
    Sequence {
        #[arg(long)]
        table: PathBuf,
    },
    /// All 32 crisp factor states, one JSON object per line.
    States,
    /// Gaps exceeding a multiple of the average gap.
    Flags {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        multiplier: f64,
    },
    /// Fuzzy optimum gain with year realization.
    FuzzyOpt {
        #[arg(long)]
        sets: PathBuf,
        #[arg(long)]
        years: PathBuf,
        /// Elements combined by max, e.g. `x1,x2,x3` or `P,Q,M`.
        #[arg(long, value_delimiter = ',', requires = "intersection")]
        union: Option<Vec<String>>,
        /// Elements combined by min.
        #[arg(long, value_delimiter = ',', requires = "union")]
        intersection: Option<Vec<String>>,
    },
    /// Expectation of a discrete gain distribution (`outcome,probability`).
    Expect {
        #[arg(long)]
        dist: PathBuf,
    },
    /// E(G+Q) against E(G)+E(Q) for a joint mass function (`g,q,p`).
    Joint {
        #[arg(long)]
        joint: PathBuf,
    },
    /// Autoregressive one-step forecast.
    Ar {
        /// Gain history (`year,gain`).
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        intercept: f64,
        /// Most recent lag first.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        coefficients: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        shock: f64,
    },
    /// Moving-average one-step forecast.
    Ma {
        /// Past shocks, single-column CSV.
        #[arg(long)]
        shocks: PathBuf,
        /// Most recent shock first.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        coefficients: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        next_shock: f64,
    },
    /// Least-squares AR fit with intercept.
    FitAr {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        order: usize,
    },
    /// Exponential-growth midpoint against the geometric mean of the endpoints.
    GmCheck {
        /// Scale of `m * n^t`.
        #[arg(long = "m")]
        scale: f64,
        /// Base of `m * n^t`.
        #[arg(long = "n")]
        base: f64,
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
    },
    /// Harmonic mean of a value column.
    Hm {
        #[arg(long)]
        values: PathBuf,
    },
    /// Mean deviation about a center, or about the mean when no center is given.
    Md {
        #[arg(long)]
        values: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<f64>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn finite(x: f64, what: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Input(format!("{what} is not finite")))
    }
}

fn value<T: Serialize>(result: &T) -> Result<Value, CliError> {
    render::to_value(result)
}

fn parse_factors(names: &[String]) -> Result<Vec<Factor>, CliError> {
    names
        .iter()
        .map(|n| Factor::parse(n).ok_or_else(|| CliError::Input(format!("unknown element `{n}`"))))
        .collect()
}

/// Parses `args` (including the program name) and returns the rendered output.
pub fn run<I, T>(args: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage {
        text: e.render().to_string(),
        code: if e.use_stderr() { 2 } else { 0 },
    })?;

    if let Command::States = cli.command {
        let rows = mining::enumerate_states()
            .iter()
            .map(|s| {
                value(&json!({
                    "code": s.code(),
                    "bits": s.bits(),
                    "levels": s.to_string(),
                }))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return match cli.output {
            Output::Json => render::json_lines(&rows),
            Output::Table => Ok(rows
                .iter()
                .map(|r| {
                    format!(
                        "{:05b}\t{}\n",
                        r["code"].as_u64().unwrap_or(0),
                        r["levels"].as_str().unwrap_or("")
                    )
                })
                .collect()),
        };
    }

    let result = execute(cli.command)?;
    match cli.output {
        Output::Json => render::json(&result),
        Output::Table => Ok(render::table(&result)),
    }
}

fn execute(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Predict { series, policy } => {
            let series = model::parse_gain_series(&read(&series)?)?;
            let policy = match policy {
                PolicyArg::PaperLiteral => Policy::PaperLiteral,
                PolicyArg::Trend => Policy::Trend,
            };
            value(&predictors::predict_next(&series, policy)?)
        }
        Command::Mle {
            series,
            family,
            sigma,
            lo,
            hi,
            tol,
        } => {
            let gains = model::parse_gain_series(&read(&series)?)?.gains();
            let family = match family {
                FamilyArg::Normal => ScoreFamily::NormalLocation { sigma },
                FamilyArg::Exponential => ScoreFamily::ExponentialMean,
            };
            let bracket = match (lo, hi) {
                (Some(lo), Some(hi)) => (lo, hi),
                _ => predictors::default_bracket(&family, &gains).ok_or_else(|| {
                    CliError::Input("no default bracket for this input; pass --lo and --hi".into())
                })?,
            };
            let tol = tol.unwrap_or_else(|| predictors::default_tolerance(bracket));
            let problem = ScoreProblem::new(gains, family, bracket)?;
            let estimate = predictors::mle_expected_gain(&problem, tol)?;
            let residual = problem.score(estimate)?;
            value(&json!({
                "expected_gain": estimate,
                "score_residual": residual,
                "bracket": [bracket.0, bracket.1],
                "tolerance": tol,
            }))
        }
        Command::Support { table } => {
            let table = model::parse_observation_table(&read(&table)?)?;
            let report = mining::support_counts(&table)?;
            let optimum = mining::optimum_condition(&report);
            value(&json!({
                "rows": report.rows(),
                "support": report,
                "optimum": optimum,
            }))
        }
        Command::Sequence { table } => {
            let table = model::parse_observation_table(&read(&table)?)?;
            let matrix = model::encode_sequence(&table);
            let pattern = mining::dominant_pattern(&matrix)?;
            value(&json!({ "matrix": matrix, "pattern": pattern }))
        }
        Command::States => unreachable!("handled by run"),
        Command::Flags { series, multiplier } => {
            let series = model::parse_gain_series(&read(&series)?)?;
            let flags = mining::deviation_flags(&series, multiplier)?;
            value(&json!({
                "multiplier": multiplier,
                "delta_avg": predictors::delta_avg(&series)?,
                "flags": flags,
            }))
        }
        Command::FuzzyOpt {
            sets,
            years,
            union,
            intersection,
        } => {
            let sets = fuzzy::parse_fuzzy_sets(&read(&sets)?)?;
            let years: BTreeMap<String, String> = fuzzy::parse_year_map(&read(&years)?)?;
            let partition = match (union, intersection) {
                (Some(u), Some(i)) => Partition::new(&parse_factors(&u)?, &parse_factors(&i)?)?,
                _ => Partition::default(),
            };
            value(&fuzzy::optimum_gain(&sets, &years, &partition)?)
        }
        Command::Expect { dist } => {
            let dist = stats::parse_distribution(&read(&dist)?)?;
            value(&json!({ "expectation": stats::expectation(&dist) }))
        }
        Command::Joint { joint } => {
            let joint = stats::parse_joint(&read(&joint)?)?;
            let e = stats::joint_expectation_sum(&joint);
            value(&json!({
                "e_sum": e.e_sum,
                "e_g": e.e_g,
                "e_q": e.e_q,
                "e_g_plus_e_q": e.e_g + e.e_q,
            }))
        }
        Command::Ar {
            series,
            intercept,
            coefficients,
            shock,
        } => {
            let history = model::parse_gain_series(&read(&series)?)?.gains();
            let model = ArModel::new(intercept, coefficients)?;
            let forecast = finite(
                predictors::ar_forecast(&model, &history, shock)?,
                "forecast",
            )?;
            value(&json!({ "model": model, "shock": shock, "forecast": forecast }))
        }
        Command::Ma {
            shocks,
            coefficients,
            next_shock,
        } => {
            let shocks = model::parse_values(&read(&shocks)?)?;
            let model = MaModel::new(coefficients)?;
            let forecast = finite(
                predictors::ma_forecast(&model, &shocks, next_shock)?,
                "forecast",
            )?;
            value(&json!({
                "model": model,
                "q": model.q(),
                "next_shock": next_shock,
                "forecast": forecast,
            }))
        }
        Command::FitAr { series, order } => {
            let series = model::parse_gain_series(&read(&series)?)?;
            let fit = predictors::fit_ar_least_squares(&series, order)?;
            let next = predictors::ar_forecast(&fit.model, &series.gains(), 0.0)?;
            value(&json!({ "fit": fit, "next_forecast": next }))
        }
        Command::GmCheck {
            scale,
            base,
            a1,
            a2,
        } => value(&stats::exponential_midpoint_check(scale, base, a1, a2)?),
        Command::Hm { values } => {
            let values = model::parse_values(&read(&values)?)?;
            value(&json!({ "harmonic_mean": stats::harmonic_mean(&values)? }))
        }
        Command::Md { values, center } => {
            let values = model::parse_values(&read(&values)?)?;
            let mean = stats::arithmetic_mean(&values)?;
            let (center, deviation) = match center {
                Some(c) => (c, stats::mean_deviation(&values, c)?),
                None => (mean, stats::mean_deviation_about_mean(&values)?),
            };
            value(&json!({
                "center": center,
                "mean": mean,
                "mean_deviation": deviation,
            }))
        }
    }
}
