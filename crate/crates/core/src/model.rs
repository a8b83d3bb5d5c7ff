//! Shared domain types and CSV ingestion.
//!
//! A business is described by five factors: production (P), quality (Q),
//! market competition (M), risk involvement (R) and cost (C). Each factor has
//! two crisp levels, encoded as a bit: Low/Medium is 0, High/Best is 1.

use std::collections::HashSet;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{GainError, Result};

/// One of the five business factors, in canonical order P, Q, M, R, C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Production,
    Quality,
    Market,
    Risk,
    Cost,
}

impl Factor {
    pub const ALL: [Factor; 5] = [
        Factor::Production,
        Factor::Quality,
        Factor::Market,
        Factor::Risk,
        Factor::Cost,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            Factor::Production => 'P',
            Factor::Quality => 'Q',
            Factor::Market => 'M',
            Factor::Risk => 'R',
            Factor::Cost => 'C',
        }
    }

    /// Name of the factor as an element of the fuzzy universe (`x1`..`x5`).
    pub fn element(self) -> &'static str {
        ["x1", "x2", "x3", "x4", "x5"][self.index()]
    }

    /// Accepts `P`..`C` or `x1`..`x5`, case-insensitively.
    pub fn parse(name: &str) -> Option<Factor> {
        let name = name.trim();
        Factor::ALL.into_iter().find(|f| {
            name.eq_ignore_ascii_case(f.element())
                || (name.len() == 1 && name.eq_ignore_ascii_case(&f.letter().to_string()))
        })
    }

    /// Single-letter suffix used for a level of this factor (`L`/`H`, or `M`/`B` for quality).
    fn suffix(self, level: Level) -> char {
        match (self, level) {
            (Factor::Quality, Level::Low) => 'M',
            (Factor::Quality, Level::High) => 'B',
            (_, Level::Low) => 'L',
            (_, Level::High) => 'H',
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Crisp status of a factor. For quality, `Low` is Medium and `High` is Best.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Low,
    High,
}

impl Level {
    pub fn bit(self) -> u8 {
        match self {
            Level::Low => 0,
            Level::High => 1,
        }
    }

    pub fn from_bit(bit: bool) -> Level {
        if bit {
            Level::High
        } else {
            Level::Low
        }
    }
}

/// A factor paired with one of its levels, e.g. `PL` or `QB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorLevel {
    pub factor: Factor,
    pub level: Level,
}

impl FactorLevel {
    /// All ten levels: PL, PH, QM, QB, ML, MH, RL, RH, CL, CH.
    pub fn all() -> impl Iterator<Item = FactorLevel> {
        Factor::ALL.into_iter().flat_map(|factor| {
            [Level::Low, Level::High]
                .into_iter()
                .map(move |level| FactorLevel { factor, level })
        })
    }

    /// Two-letter code such as `MH`.
    pub fn code(self) -> String {
        format!("{}{}", self.factor.letter(), self.short_code())
    }

    pub fn short_code(self) -> char {
        self.factor.suffix(self.level)
    }

    /// Parses a cell for `factor`: the two-letter code or the bare suffix, any case.
    pub fn parse_for(factor: Factor, cell: &str) -> Option<Level> {
        let upper = cell.trim().to_ascii_uppercase();
        let suffix = match upper.len() {
            1 => upper.as_str(),
            2 if upper.starts_with(factor.letter()) => &upper[1..],
            _ => return None,
        };
        [Level::Low, Level::High]
            .into_iter()
            .find(|&level| suffix.starts_with(factor.suffix(level)))
    }
}

impl fmt::Display for FactorLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// Crisp status of all five factors for one year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorVector {
    levels: [Level; 5],
}

impl FactorVector {
    pub fn new(production: Level, quality: Level, market: Level, risk: Level, cost: Level) -> Self {
        FactorVector {
            levels: [production, quality, market, risk, cost],
        }
    }

    pub fn from_levels(levels: [Level; 5]) -> Self {
        FactorVector { levels }
    }

    /// Decodes the low five bits of `code`, production as the most significant bit.
    pub fn from_code(code: u8) -> Self {
        let mut levels = [Level::Low; 5];
        for (i, level) in levels.iter_mut().enumerate() {
            *level = Level::from_bit(code >> (4 - i) & 1 == 1);
        }
        FactorVector { levels }
    }

    pub fn level(&self, factor: Factor) -> Level {
        self.levels[factor.index()]
    }

    pub fn levels(&self) -> [Level; 5] {
        self.levels
    }

    pub fn factor_levels(&self) -> [FactorLevel; 5] {
        Factor::ALL.map(|factor| FactorLevel {
            factor,
            level: self.level(factor),
        })
    }

    pub fn bits(&self) -> [u8; 5] {
        self.levels.map(Level::bit)
    }

    /// Five-bit integer encoding, production as the most significant bit.
    pub fn code(&self) -> u8 {
        self.bits().iter().fold(0, |acc, &b| acc << 1 | b)
    }
}

impl fmt::Display for FactorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<String> = self.factor_levels().iter().map(|fl| fl.code()).collect();
        f.write_str(&codes.join(" "))
    }
}

impl Serialize for FactorVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        for fl in self.factor_levels() {
            map.serialize_entry(&fl.factor.letter(), &fl.short_code())?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainEntry {
    pub year: String,
    pub gain: f64,
}

/// Ordered yearly gain observations with distinct year labels and finite gains.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GainSeries {
    entries: Vec<GainEntry>,
}

impl GainSeries {
    pub fn new(entries: Vec<GainEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(GainError::EmptyInput);
        }
        let mut seen = HashSet::new();
        for entry in &entries {
            if !entry.gain.is_finite() {
                return Err(GainError::Validation(format!(
                    "gain for `{}` is not finite",
                    entry.year
                )));
            }
            if !seen.insert(entry.year.as_str()) {
                return Err(GainError::DuplicateYear(entry.year.clone()));
            }
        }
        Ok(GainSeries { entries })
    }

    /// Builds a series labelled `y1`, `y2`, ...
    pub fn from_gains(gains: &[f64]) -> Result<Self> {
        GainSeries::new(
            gains
                .iter()
                .enumerate()
                .map(|(i, &gain)| GainEntry {
                    year: format!("y{}", i + 1),
                    gain,
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[GainEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gains(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.gain).collect()
    }

    pub fn years(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.year.as_str()).collect()
    }

    /// Renders the series back into the `year,gain` CSV form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,gain\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.year, e.gain));
        }
        out
    }
}

/// Gain column of an observation table: numeric, or a symbolic label like `g1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GainCell {
    Value(f64),
    Label(String),
}

impl GainCell {
    fn parse(cell: &str) -> GainCell {
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => GainCell::Value(v),
            _ => GainCell::Label(cell.to_string()),
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            GainCell::Value(v) => Some(*v),
            GainCell::Label(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            GainCell::Value(v) => v.to_string(),
            GainCell::Label(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservationRow {
    pub year: String,
    pub gain: GainCell,
    pub factors: FactorVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ObservationTable {
    rows: Vec<ObservationRow>,
}

impl ObservationTable {
    pub fn new(rows: Vec<ObservationRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(GainError::EmptyInput);
        }
        let mut seen = HashSet::new();
        for row in &rows {
            if !seen.insert(row.year.as_str()) {
                return Err(GainError::DuplicateYear(row.year.clone()));
            }
        }
        Ok(ObservationTable { rows })
    }

    pub fn rows(&self) -> &[ObservationRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceRow {
    pub label: String,
    pub bits: [u8; 5],
}

/// Boolean encoding of an observation table, one 5-bit row per year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SequenceMatrix {
    rows: Vec<SequenceRow>,
}

impl SequenceMatrix {
    pub fn new(rows: Vec<SequenceRow>) -> Result<Self> {
        if let Some(row) = rows.iter().find(|r| r.bits.iter().any(|&b| b > 1)) {
            return Err(GainError::Validation(format!(
                "row `{}` has a bit outside {{0,1}}",
                row.label
            )));
        }
        Ok(SequenceMatrix { rows })
    }

    pub fn rows(&self) -> &[SequenceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Maps each row's factor vector to its bit row; labels come from the gain column.
pub fn encode_sequence(table: &ObservationTable) -> SequenceMatrix {
    SequenceMatrix {
        rows: table
            .rows()
            .iter()
            .map(|row| SequenceRow {
                label: row.gain.label(),
                bits: row.factors.bits(),
            })
            .collect(),
    }
}

/// A data record together with its 1-based line number in the source text.
pub(crate) struct Record {
    pub line: usize,
    pub fields: Vec<String>,
}

/// Reads comma-separated text whose header must equal `header` (case-insensitive).
/// With `header == None` any single-column header is accepted.
pub(crate) fn read_csv(text: &str, header: Option<&[&str]>) -> Result<Vec<Record>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let found = reader
        .headers()
        .map_err(|e| csv_error(e, 1))?
        .iter()
        .map(str::to_string)
        .collect::<Vec<_>>();
    let header_ok = match header {
        Some(expected) => {
            found.len() == expected.len()
                && found
                    .iter()
                    .zip(expected)
                    .all(|(f, e)| f.eq_ignore_ascii_case(e))
        }
        None => found.len() == 1,
    };
    if !header_ok {
        let wanted = header.map_or("<single column>".to_string(), |h| h.join(","));
        return Err(GainError::Parse {
            line: 1,
            message: format!("expected header `{wanted}`, found `{}`", found.join(",")),
        });
    }

    let mut records = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        records.push(Record {
            line,
            fields: record.iter().map(str::to_string).collect(),
        });
    }
    if records.is_empty() {
        return Err(GainError::EmptyInput);
    }
    Ok(records)
}

fn csv_error(err: csv::Error, fallback_line: usize) -> GainError {
    let line = err.position().map_or(fallback_line, |p| p.line() as usize);
    GainError::Parse {
        line,
        message: err.to_string(),
    }
}

pub(crate) fn parse_number(cell: &str, line: usize, what: &str) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(GainError::Parse {
            line,
            message: format!("{what} `{cell}` is not a finite number"),
        }),
    }
}

/// Parses `year,gain` CSV into a series, keeping file order.
pub fn parse_gain_series(csv_text: &str) -> Result<GainSeries> {
    let entries = read_csv(csv_text, Some(&["year", "gain"]))?
        .into_iter()
        .map(|rec| {
            Ok(GainEntry {
                gain: parse_number(&rec.fields[1], rec.line, "gain")?,
                year: rec.fields[0].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GainSeries::new(entries)
}

/// Parses `year,gain,P,Q,M,R,C` CSV with factor codes such as `PL` or bare `L`.
pub fn parse_observation_table(csv_text: &str) -> Result<ObservationTable> {
    let rows = read_csv(csv_text, Some(&["year", "gain", "P", "Q", "M", "R", "C"]))?
        .into_iter()
        .map(|rec| {
            let mut levels = [Level::Low; 5];
            for factor in Factor::ALL {
                let cell = &rec.fields[2 + factor.index()];
                levels[factor.index()] =
                    FactorLevel::parse_for(factor, cell).ok_or_else(|| GainError::UnknownCode {
                        line: rec.line,
                        column: factor.to_string(),
                        value: cell.clone(),
                    })?;
            }
            Ok(ObservationRow {
                year: rec.fields[0].clone(),
                gain: GainCell::parse(&rec.fields[1]),
                factors: FactorVector::from_levels(levels),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ObservationTable::new(rows)
}

/// Parses a single-column numeric CSV (any header name).
pub fn parse_values(csv_text: &str) -> Result<Vec<f64>> {
    read_csv(csv_text, None)?
        .into_iter()
        .map(|rec| parse_number(&rec.fields[0], rec.line, "value"))
        .collect()
}
