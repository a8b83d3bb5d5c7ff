//! Maximum-likelihood estimate of the expected gain.
//!
//! The likelihood only enters through its log-derivative: the estimate is the
//! root of the summed score `S(ge) = sum_i d/dge log f(g_i, ge)`, located by
//! bisection over a caller-supplied bracket.

use std::fmt;
use std::sync::Arc;

use crate::error::{GainError, Result};

/// Per-observation score `(observation, parameter) -> d/dparam log f`.
///
/// Must be side-effect free; it may be evaluated from several threads.
pub type ScoreFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ScoreFamily {
    /// Normal density with known spread; the parameter is the location.
    NormalLocation {
        sigma: f64,
    },
    /// Exponential density parameterised by its mean.
    ExponentialMean,
    Custom(ScoreFn),
}

impl fmt::Debug for ScoreFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreFamily::NormalLocation { sigma } => f
                .debug_struct("NormalLocation")
                .field("sigma", sigma)
                .finish(),
            ScoreFamily::ExponentialMean => f.write_str("ExponentialMean"),
            ScoreFamily::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl ScoreFamily {
    fn score(&self, observation: f64, param: f64) -> f64 {
        match self {
            ScoreFamily::NormalLocation { sigma } => (observation - param) / (sigma * sigma),
            ScoreFamily::ExponentialMean => -1.0 / param + observation / (param * param),
            ScoreFamily::Custom(score) => score(observation, param),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScoreProblem {
    observations: Vec<f64>,
    family: ScoreFamily,
    bracket: (f64, f64),
}

impl ScoreProblem {
    pub fn new(observations: Vec<f64>, family: ScoreFamily, bracket: (f64, f64)) -> Result<Self> {
        if observations.is_empty() {
            return Err(GainError::EmptyInput);
        }
        if observations.iter().any(|g| !g.is_finite()) {
            return Err(GainError::Validation("observations must be finite".into()));
        }
        let (lo, hi) = bracket;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GainError::Validation(format!(
                "bracket [{lo}, {hi}] must satisfy lo < hi"
            )));
        }
        if let ScoreFamily::NormalLocation { sigma } = family {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(GainError::Validation(format!(
                    "sigma must be > 0, got {sigma}"
                )));
            }
        }
        Ok(ScoreProblem {
            observations,
            family,
            bracket,
        })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn family(&self) -> &ScoreFamily {
        &self.family
    }

    pub fn bracket(&self) -> (f64, f64) {
        self.bracket
    }

    /// Summed score at `param`; errors when any term is not finite.
    pub fn score(&self, param: f64) -> Result<f64> {
        let total: f64 = self
            .observations
            .iter()
            .map(|&g| self.family.score(g, param))
            .sum();
        if total.is_finite() {
            Ok(total)
        } else {
            Err(GainError::Domain(format!("score is not finite at {param}")))
        }
    }
}

/// Bracket containing the root for the built-in families, or `None` for custom scores.
///
/// Both built-in estimates equal the sample mean, which lies within
/// `[min, max]` of the observations; the bracket is widened around that range.
pub fn default_bracket(family: &ScoreFamily, observations: &[f64]) -> Option<(f64, f64)> {
    if observations.is_empty() {
        return None;
    }
    let min = observations.iter().copied().fold(f64::INFINITY, f64::min);
    let max = observations
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    match family {
        ScoreFamily::NormalLocation { .. } => {
            let pad = (max - min) + 1.0;
            Some((min - pad, max + pad))
        }
        ScoreFamily::ExponentialMean if min > 0.0 => Some((min / 2.0, 2.0 * max + 1.0)),
        _ => None,
    }
}

/// Bisection width used when the caller does not pick one: 1e-12 of the bracket.
pub fn default_tolerance(bracket: (f64, f64)) -> f64 {
    1e-12 * (bracket.1 - bracket.0)
}

/// Solves the score equation by bisection until the bracket is narrower than
/// `tol`, then returns the secant point of the final bracket.
pub fn mle_expected_gain(problem: &ScoreProblem, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(GainError::Validation(format!(
            "tolerance must be > 0, got {tol}"
        )));
    }
    let (mut lo, mut hi) = problem.bracket;
    let mut s_lo = problem.score(lo)?;
    let mut s_hi = problem.score(hi)?;
    if s_lo == 0.0 {
        return Ok(lo);
    }
    if s_hi == 0.0 {
        return Ok(hi);
    }
    if s_lo.signum() == s_hi.signum() {
        return Err(GainError::NoRoot { lo, hi });
    }

    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            // bracket is down to adjacent floats
            break;
        }
        let s_mid = problem.score(mid)?;
        if s_mid == 0.0 {
            return Ok(mid);
        }
        if s_mid.signum() == s_lo.signum() {
            lo = mid;
            s_lo = s_mid;
        } else {
            hi = mid;
            s_hi = s_mid;
        }
    }
    // secant point inside the final bracket; exact when the score is linear
    let t = s_lo / (s_lo - s_hi);
    Ok((lo + t * (hi - lo)).clamp(lo, hi))
}
