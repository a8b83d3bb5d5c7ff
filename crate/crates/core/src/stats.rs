//! Expectation over discrete gain distributions, mean identities and mean deviation.

use serde::Serialize;

use crate::error::{ensure_len, GainError, Result};
use crate::model::{parse_number, read_csv};

/// Allowed distance of a probability total from 1 before an input is rejected.
pub const MASS_TOLERANCE: f64 = 1e-9;

fn check_mass(total: f64) -> Result<()> {
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(GainError::Validation(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GainError::Validation(format!(
            "probability {p} is outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(GainError::Validation(format!("{what} must be finite")))
    }
}

/// Gain outcomes with probabilities summing to one.
///
/// Totals within [`MASS_TOLERANCE`] of 1 are renormalized on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteDistribution {
    outcomes: Vec<f64>,
    probabilities: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(outcomes: Vec<f64>, probabilities: Vec<f64>) -> Result<Self> {
        if outcomes.len() != probabilities.len() {
            return Err(GainError::Validation(format!(
                "{} outcomes but {} probabilities",
                outcomes.len(),
                probabilities.len()
            )));
        }
        ensure_len(outcomes.len(), 1)?;
        check_finite(&outcomes, "outcomes")?;
        for &p in &probabilities {
            check_probability(p)?;
        }
        let total: f64 = probabilities.iter().sum();
        check_mass(total)?;
        let probabilities = if total == 1.0 {
            probabilities
        } else {
            probabilities.iter().map(|p| p / total).collect()
        };
        Ok(DiscreteDistribution {
            outcomes,
            probabilities,
        })
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

pub fn expectation(dist: &DiscreteDistribution) -> f64 {
    dist.outcomes
        .iter()
        .zip(&dist.probabilities)
        .map(|(g, p)| g * p)
        .sum()
}

/// Joint mass function of observed gains `g` (rows) and predicted gains `q` (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    g_outcomes: Vec<f64>,
    q_outcomes: Vec<f64>,
    pmf: Vec<Vec<f64>>,
}

impl JointDistribution {
    pub fn new(g_outcomes: Vec<f64>, q_outcomes: Vec<f64>, pmf: Vec<Vec<f64>>) -> Result<Self> {
        ensure_len(g_outcomes.len(), 1)?;
        ensure_len(q_outcomes.len(), 1)?;
        check_finite(&g_outcomes, "g outcomes")?;
        check_finite(&q_outcomes, "q outcomes")?;
        if pmf.len() != g_outcomes.len() || pmf.iter().any(|row| row.len() != q_outcomes.len()) {
            return Err(GainError::Validation(format!(
                "mass matrix must be {}x{}",
                g_outcomes.len(),
                q_outcomes.len()
            )));
        }
        for &p in pmf.iter().flatten() {
            check_probability(p)?;
        }
        let total: f64 = pmf.iter().flatten().sum();
        check_mass(total)?;
        let pmf = if total == 1.0 {
            pmf
        } else {
            pmf.into_iter()
                .map(|row| row.into_iter().map(|p| p / total).collect())
                .collect()
        };
        Ok(JointDistribution {
            g_outcomes,
            q_outcomes,
            pmf,
        })
    }

    pub fn g_outcomes(&self) -> &[f64] {
        &self.g_outcomes
    }

    pub fn q_outcomes(&self) -> &[f64] {
        &self.q_outcomes
    }

    pub fn pmf(&self) -> &[Vec<f64>] {
        &self.pmf
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointExpectation {
    /// `E(G + Q)` from the joint mass directly.
    pub e_sum: f64,
    /// `E(G)` from the row marginal.
    pub e_g: f64,
    /// `E(Q)` from the column marginal.
    pub e_q: f64,
}

pub fn joint_expectation_sum(joint: &JointDistribution) -> JointExpectation {
    let mut e_sum = 0.0;
    for (g, row) in joint.g_outcomes.iter().zip(&joint.pmf) {
        for (q, p) in joint.q_outcomes.iter().zip(row) {
            e_sum += (g + q) * p;
        }
    }
    let e_g = joint
        .g_outcomes
        .iter()
        .zip(&joint.pmf)
        .map(|(g, row)| g * row.iter().sum::<f64>())
        .sum();
    let e_q = joint
        .q_outcomes
        .iter()
        .enumerate()
        .map(|(j, q)| q * joint.pmf.iter().map(|row| row[j]).sum::<f64>())
        .sum();
    JointExpectation { e_sum, e_g, e_q }
}

/// Arithmetic mean, accumulated as offsets from the first value so that a
/// constant input returns that constant exactly.
pub fn arithmetic_mean(values: &[f64]) -> Result<f64> {
    ensure_len(values.len(), 1)?;
    let base = values[0];
    let offset: f64 = values.iter().map(|v| v - base).sum();
    Ok(base + offset / values.len() as f64)
}

pub fn median(values: &[f64]) -> Result<f64> {
    ensure_len(values.len(), 1)?;
    check_finite(values, "values")?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    })
}

/// `exp(mean(ln v))`; every value must be strictly positive.
pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    ensure_len(values.len(), 1)?;
    if let Some(v) = values.iter().find(|&&v| !(v > 0.0 && v.is_finite())) {
        return Err(GainError::Domain(format!(
            "geometric mean needs positive finite values, got {v}"
        )));
    }
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    Ok((log_sum / values.len() as f64).exp())
}

/// `count / sum(1/v)`; zero values are rejected, negative values allowed.
pub fn harmonic_mean(values: &[f64]) -> Result<f64> {
    ensure_len(values.len(), 1)?;
    check_finite(values, "values")?;
    if values.contains(&0.0) {
        return Err(GainError::Domain(
            "harmonic mean is undefined for a zero value".into(),
        ));
    }
    let reciprocal_sum: f64 = values.iter().map(|v| 1.0 / v).sum();
    if reciprocal_sum == 0.0 {
        return Err(GainError::Domain("reciprocals sum to zero".into()));
    }
    Ok(values.len() as f64 / reciprocal_sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MidpointCheck {
    /// `G` evaluated at the interval midpoint.
    pub lhs: f64,
    /// Geometric mean of `G` at the two endpoints.
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `G(t) = scale * base^t` at the midpoint of `[a1, a2]` with the
/// geometric mean of its endpoint values.
pub fn exponential_midpoint_check(
    scale: f64,
    base: f64,
    a1: f64,
    a2: f64,
) -> Result<MidpointCheck> {
    if !(scale > 0.0 && scale.is_finite() && base > 0.0 && base.is_finite()) {
        return Err(GainError::Domain(format!(
            "scale and base must be positive, got {scale} and {base}"
        )));
    }
    if !(a1.is_finite() && a2.is_finite()) {
        return Err(GainError::Domain(
            "interval endpoints must be finite".into(),
        ));
    }
    let growth = |t: f64| scale * base.powf(t);
    let lhs = growth((a1 + a2) / 2.0);
    let rhs = (growth(a1) * growth(a2)).sqrt();
    let holds = (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0);
    Ok(MidpointCheck { lhs, rhs, holds })
}

/// Mean of `|v - center|`.
pub fn mean_deviation(values: &[f64], center: f64) -> Result<f64> {
    ensure_len(values.len(), 1)?;
    let total: f64 = values.iter().map(|v| (v - center).abs()).sum();
    Ok(total / values.len() as f64)
}

pub fn mean_deviation_about_mean(values: &[f64]) -> Result<f64> {
    mean_deviation(values, arithmetic_mean(values)?)
}

/// Parses `outcome,probability` CSV.
pub fn parse_distribution(csv_text: &str) -> Result<DiscreteDistribution> {
    let mut outcomes = Vec::new();
    let mut probabilities = Vec::new();
    for rec in read_csv(csv_text, Some(&["outcome", "probability"]))? {
        outcomes.push(parse_number(&rec.fields[0], rec.line, "outcome")?);
        probabilities.push(parse_number(&rec.fields[1], rec.line, "probability")?);
    }
    DiscreteDistribution::new(outcomes, probabilities)
}

/// Parses long-form `g,q,p` CSV. Outcome values are ordered by first
/// appearance and pairs that never appear get mass 0.
pub fn parse_joint(csv_text: &str) -> Result<JointDistribution> {
    let mut g_outcomes: Vec<f64> = Vec::new();
    let mut q_outcomes: Vec<f64> = Vec::new();
    let mut cells = Vec::new();
    let position = |list: &mut Vec<f64>, v: f64| match list.iter().position(|&x| x == v) {
        Some(i) => i,
        None => {
            list.push(v);
            list.len() - 1
        }
    };
    for rec in read_csv(csv_text, Some(&["g", "q", "p"]))? {
        let g = parse_number(&rec.fields[0], rec.line, "g")?;
        let q = parse_number(&rec.fields[1], rec.line, "q")?;
        let p = parse_number(&rec.fields[2], rec.line, "p")?;
        let cell = (position(&mut g_outcomes, g), position(&mut q_outcomes, q));
        if cells.iter().any(|&(c, _, _)| c == cell) {
            return Err(GainError::Parse {
                line: rec.line,
                message: format!("pair ({g}, {q}) listed twice"),
            });
        }
        cells.push((cell, rec.line, p));
    }
    let mut pmf = vec![vec![0.0; q_outcomes.len()]; g_outcomes.len()];
    for ((i, j), _, p) in cells {
        pmf[i][j] = p;
    }
    JointDistribution::new(g_outcomes, q_outcomes, pmf)
}
