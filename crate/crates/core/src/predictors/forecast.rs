//! One-step autoregressive and moving-average forecasts.
//!
//! Coefficient `j` multiplies the value `j` steps back from the end of the
//! supplied history, most recent first. Sums run left to right in the order
//! `intercept, c[0]*h[n-1], c[1]*h[n-2], ..., shock` (AR) and
//! `next_shock, t[0]*a[n-1], t[1]*a[n-2], ...` (MA).

use serde::Serialize;

use crate::error::{ensure_len, GainError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArModel {
    pub intercept: f64,
    /// Most recent lag first.
    pub coefficients: Vec<f64>,
}

impl ArModel {
    pub fn new(intercept: f64, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(GainError::Validation(
                "AR model needs at least one coefficient".into(),
            ));
        }
        Ok(ArModel {
            intercept,
            coefficients,
        })
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaModel {
    /// Most recent shock first; `q + 1` entries.
    pub coefficients: Vec<f64>,
}

impl MaModel {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(GainError::Validation(
                "MA model needs at least one coefficient".into(),
            ));
        }
        Ok(MaModel { coefficients })
    }

    /// Index of the oldest shock used, so `q + 1` shocks are consumed.
    pub fn q(&self) -> usize {
        self.coefficients.len() - 1
    }
}

fn lagged_sum(start: f64, coefficients: &[f64], history: &[f64]) -> f64 {
    coefficients
        .iter()
        .zip(history.iter().rev())
        .fold(start, |acc, (c, v)| acc + c * v)
}

pub fn ar_forecast(model: &ArModel, history: &[f64], shock: f64) -> Result<f64> {
    ensure_len(history.len(), model.order())?;
    Ok(lagged_sum(model.intercept, &model.coefficients, history) + shock)
}

pub fn ma_forecast(model: &MaModel, shocks: &[f64], next_shock: f64) -> Result<f64> {
    ensure_len(shocks.len(), model.q() + 1)?;
    Ok(lagged_sum(next_shock, &model.coefficients, shocks))
}
