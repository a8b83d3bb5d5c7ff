//! Least-squares estimation of an autoregressive model with intercept.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::forecast::ArModel;
use crate::error::{ensure_len, GainError, Result};
use crate::model::GainSeries;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArFit {
    pub model: ArModel,
    /// Residual sum of squares of the one-step-ahead fit.
    pub rss: f64,
    /// The lagged design was rank-deficient; for a constant series the model
    /// is the constant with zero coefficients.
    pub degenerate: bool,
}

/// Fits `g[t] = c + sum_j phi[j] * g[t-1-j]` by least squares over every
/// target with a full lag window. Needs at least `2 * order + 1` points.
pub fn fit_ar_least_squares(series: &GainSeries, order: usize) -> Result<ArFit> {
    if order == 0 {
        return Err(GainError::Validation("order must be positive".into()));
    }
    ensure_len(series.len(), 2 * order + 1)?;
    let gains = series.gains();

    if gains.iter().all(|&g| g == gains[0]) {
        let model = ArModel::new(gains[0], vec![0.0; order])?;
        return Ok(ArFit {
            model,
            rss: 0.0,
            degenerate: true,
        });
    }

    let rows = gains.len() - order;
    let design = DMatrix::from_fn(rows, order + 1, |r, c| {
        let t = r + order;
        if c == 0 {
            1.0
        } else {
            gains[t - c]
        }
    });
    let target = DVector::from_iterator(rows, gains[order..].iter().copied());

    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let eps = max_sv * f64::EPSILON * (rows.max(order + 1) as f64);
    let rank = svd.rank(eps);
    let solution = svd
        .solve(&target, eps)
        .map_err(|e| GainError::Domain(format!("least-squares solve failed: {e}")))?;

    let residual = &design * &solution - &target;
    let model = ArModel::new(solution[0], solution.iter().skip(1).copied().collect())?;
    Ok(ArFit {
        model,
        rss: residual.norm_squared(),
        degenerate: rank < order + 1,
    })
}
