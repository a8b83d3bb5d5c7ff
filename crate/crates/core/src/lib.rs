//! Gain-series analysis toolkit.
//!
//! The crate covers five areas, each in its own module:
//!
//! * [`model`]: shared domain types (gain series, factor vectors, observation
//!   tables) and their CSV ingestion.
//! * [`predictors`]: the delta-average next-gain predictor, the likelihood
//!   score solver, and autoregressive / moving-average forecasting.
//! * [`mining`]: single-level support counts, majority patterns over the
//!   boolean factor encoding, and crisp state enumeration.
//! * [`fuzzy`]: max-union / min-intersection over gain fuzzy sets and the
//!   optimum-gain combinator with year attribution.
//! * [`stats`]: expectation, geometric and harmonic means, mean deviation.
//!
//! Every operation is a pure function over immutable inputs.

pub mod error;
pub mod fuzzy;
pub mod mining;
pub mod model;
pub mod predictors;
pub mod stats;

pub use error::{GainError, Result};
pub use model::{
    Factor, FactorLevel, FactorVector, GainEntry, GainSeries, Level, ObservationRow,
    ObservationTable, SequenceMatrix, SequenceRow,
};
