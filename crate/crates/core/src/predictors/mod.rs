//! Next-gain predictors and forecasting models.

mod delta;
mod fit;
mod forecast;
mod mle;

pub use delta::{delta_avg, delta_gaps, predict_next, DeltaReport, Policy};
pub use fit::{fit_ar_least_squares, ArFit};
pub use forecast::{ar_forecast, ma_forecast, ArModel, MaModel};
pub use mle::{
    default_bracket, default_tolerance, mle_expected_gain, ScoreFamily, ScoreFn, ScoreProblem,
};
