use serde::Serialize;

use crate::error::{ensure_len, Result};
use crate::model::GainSeries;

/// Branch rule for the delta-average predictor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Add the average gap when the last gain is below it, otherwise subtract.
    #[default]
    PaperLiteral,
    /// Continue in the direction of the last raw difference.
    Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub gaps: Vec<f64>,
    pub delta_avg: f64,
    pub predicted_gain: f64,
    pub optimum_gain: f64,
    pub optimum_index: usize,
    pub optimum_year: String,
    /// Predicted gain minus the optimum (maximum observed) gain.
    pub normalization_factor: f64,
}

/// Absolute year-over-year differences `|g[i+1] - g[i]|`.
pub fn delta_gaps(series: &GainSeries) -> Result<Vec<f64>> {
    ensure_len(series.len(), 2)?;
    Ok(gaps_of(&series.gains()))
}

pub fn delta_avg(series: &GainSeries) -> Result<f64> {
    Ok(mean_gap(&delta_gaps(series)?))
}

fn gaps_of(gains: &[f64]) -> Vec<f64> {
    gains.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

fn mean_gap(gaps: &[f64]) -> f64 {
    gaps.iter().sum::<f64>() / gaps.len() as f64
}

/// Predicts the next gain as the last gain plus or minus the average gap.
///
/// Under [`Policy::PaperLiteral`] the last gain is compared against the
/// average gap itself; a tie takes the subtraction branch. [`Policy::Trend`]
/// adds when the last raw difference is non-negative and needs three points.
pub fn predict_next(series: &GainSeries, policy: Policy) -> Result<DeltaReport> {
    let needed = match policy {
        Policy::PaperLiteral => 2,
        Policy::Trend => 3,
    };
    ensure_len(series.len(), needed)?;

    let gains = series.gains();
    let gaps = gaps_of(&gains);
    let delta_avg = mean_gap(&gaps);
    let n = gains.len();
    let last = gains[n - 1];

    let add = match policy {
        Policy::PaperLiteral => last < delta_avg,
        Policy::Trend => last - gains[n - 2] >= 0.0,
    };
    let predicted_gain = if add {
        last + delta_avg
    } else {
        last - delta_avg
    };

    // first index wins ties
    let (optimum_index, optimum_gain) =
        gains
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, gains[0]),
                |best, (i, g)| if g > best.1 { (i, g) } else { best },
            );

    Ok(DeltaReport {
        gaps,
        delta_avg,
        predicted_gain,
        optimum_gain,
        optimum_index,
        optimum_year: series.entries()[optimum_index].year.clone(),
        normalization_factor: predicted_gain - optimum_gain,
    })
}
