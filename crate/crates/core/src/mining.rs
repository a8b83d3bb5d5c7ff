//! Single-level support counts, column-majority patterns over the boolean
//! factor encoding, crisp state enumeration and gap deviation flags.

use num_rational::Ratio;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{ensure_len, GainError, Result};
use crate::model::{
    Factor, FactorLevel, FactorVector, GainSeries, Level, ObservationTable, SequenceMatrix,
};
use crate::predictors::delta_gaps;

pub type Support = Ratio<usize>;

/// Fraction of rows exhibiting each of the ten factor levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportReport {
    rows: usize,
    /// Rows with the high level, per factor.
    high_counts: [usize; 5],
}

impl SupportReport {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn support(&self, level: FactorLevel) -> Support {
        let high = self.high_counts[level.factor.index()];
        let count = match level.level {
            Level::High => high,
            Level::Low => self.rows - high,
        };
        Ratio::new(count, self.rows)
    }

    /// All ten levels in canonical order with their supports.
    pub fn entries(&self) -> Vec<(FactorLevel, Support)> {
        FactorLevel::all().map(|l| (l, self.support(l))).collect()
    }
}

#[derive(Serialize)]
struct RatioEntry {
    fraction: String,
    decimal: f64,
}

fn ratio_entry(r: Support) -> RatioEntry {
    RatioEntry {
        fraction: format!("{}/{}", r.numer(), r.denom()),
        decimal: *r.numer() as f64 / *r.denom() as f64,
    }
}

fn serialize_supports<S: Serializer>(
    serializer: S,
    entries: &[(FactorLevel, Support)],
) -> std::result::Result<S::Ok, S::Error> {
    let mut map = serializer.serialize_map(Some(entries.len()))?;
    for &(level, support) in entries {
        map.serialize_entry(&level.code(), &ratio_entry(support))?;
    }
    map.end()
}

impl Serialize for SupportReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_supports(serializer, &self.entries())
    }
}

pub fn support_counts(table: &ObservationTable) -> Result<SupportReport> {
    ensure_len(table.len(), 1)?;
    let mut high_counts = [0usize; 5];
    for row in table.rows() {
        for factor in Factor::ALL {
            if row.factors.level(factor) == Level::High {
                high_counts[factor.index()] += 1;
            }
        }
    }
    Ok(SupportReport {
        rows: table.len(),
        high_counts,
    })
}

/// The favourable-level vector, annotated with the observed support of each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimumCondition {
    pub condition: FactorVector,
    pub supports: Vec<(FactorLevel, Support)>,
}

impl Serialize for OptimumCondition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Supports<'a>(&'a [(FactorLevel, Support)]);
        impl Serialize for Supports<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serialize_supports(s, self.0)
            }
        }
        let codes: Vec<String> = self
            .condition
            .factor_levels()
            .iter()
            .map(|l| l.code())
            .collect();
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("condition", &codes)?;
        map.serialize_entry("factors", &self.condition)?;
        map.serialize_entry("support", &Supports(&self.supports))?;
        map.end()
    }
}

/// High production, best quality, high market competition, low risk, low cost.
///
/// The target is a fixed domain rule rather than a per-factor support argmax,
/// so a level can be recommended while its observed support is below 1/2.
pub fn optimum_condition(report: &SupportReport) -> OptimumCondition {
    let condition = FactorVector::new(
        Level::High,
        Level::High,
        Level::High,
        Level::Low,
        Level::Low,
    );
    let supports = condition
        .factor_levels()
        .iter()
        .map(|&l| (l, report.support(l)))
        .collect();
    OptimumCondition {
        condition,
        supports,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    /// Bit 0 held by a strict majority of rows.
    Low,
    /// Bit 1 held by a strict majority of rows.
    High,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorPattern {
    pub factor: char,
    pub dominant: Dominance,
    /// Share of rows with bit 1, reduced.
    #[serde(serialize_with = "serialize_ratio")]
    pub share_high: Support,
}

fn serialize_ratio<S: Serializer>(r: &Support, s: S) -> std::result::Result<S::Ok, S::Error> {
    ratio_entry(*r).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternSummary {
    pub factors: Vec<FactorPattern>,
    pub recommendation: String,
}

impl PatternSummary {
    pub fn dominance(&self, factor: Factor) -> Dominance {
        self.factors[factor.index()].dominant
    }
}

/// Majority bit per factor column; exactly half is reported as a tie.
pub fn dominant_pattern(matrix: &SequenceMatrix) -> Result<PatternSummary> {
    ensure_len(matrix.len(), 1)?;
    let rows = matrix.len();
    let factors: Vec<FactorPattern> = Factor::ALL
        .into_iter()
        .map(|factor| {
            let ones = matrix
                .rows()
                .iter()
                .filter(|r| r.bits[factor.index()] == 1)
                .count();
            let dominant = match (2 * ones).cmp(&rows) {
                std::cmp::Ordering::Greater => Dominance::High,
                std::cmp::Ordering::Less => Dominance::Low,
                std::cmp::Ordering::Equal => Dominance::Tie,
            };
            FactorPattern {
                factor: factor.letter(),
                dominant,
                share_high: Ratio::new(ones, rows),
            }
        })
        .collect();

    let mut dominant = Vec::new();
    let mut ties = Vec::new();
    for (factor, pattern) in Factor::ALL.into_iter().zip(&factors) {
        match pattern.dominant {
            Dominance::High => dominant.push(
                FactorLevel {
                    factor,
                    level: Level::High,
                }
                .code(),
            ),
            Dominance::Low => dominant.push(
                FactorLevel {
                    factor,
                    level: Level::Low,
                }
                .code(),
            ),
            Dominance::Tie => ties.push(factor.letter().to_string()),
        }
    }
    let list = |v: &[String]| {
        if v.is_empty() {
            "none".to_string()
        } else {
            v.join(" ")
        }
    };
    let recommendation = format!("dominant: {}; tie: {}", list(&dominant), list(&ties));

    Ok(PatternSummary {
        factors,
        recommendation,
    })
}

/// All 32 crisp factor states in ascending binary order (production is the high bit).
pub fn enumerate_states() -> Vec<FactorVector> {
    (0..32u8).map(FactorVector::from_code).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationFlag {
    /// Later year of the gap.
    pub year: String,
    pub gap: f64,
    pub flagged: bool,
}

/// Flags every gap strictly larger than `multiplier` times the average gap.
pub fn deviation_flags(series: &GainSeries, multiplier: f64) -> Result<Vec<DeviationFlag>> {
    if !(multiplier.is_finite() && multiplier > 0.0) {
        return Err(GainError::Validation(format!(
            "multiplier must be > 0, got {multiplier}"
        )));
    }
    ensure_len(series.len(), 3)?;
    let gaps = delta_gaps(series)?;
    let threshold = multiplier * (gaps.iter().sum::<f64>() / gaps.len() as f64);
    Ok(series.entries()[1..]
        .iter()
        .zip(gaps)
        .map(|(entry, gap)| DeviationFlag {
            year: entry.year.clone(),
            gap,
            flagged: gap > threshold,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{encode_sequence, parse_observation_table, SequenceRow};

    const TABLE1: &str = "year,gain,P,Q,M,R,C\n\
        y1,g1,PL,QB,MH,RL,CH\n\
        y2,g2,PH,QM,ML,RL,CL\n\
        y3,g3,PH,QB,MH,RH,CH\n\
        y4,g4,PL,QM,MH,RH,CH\n";

    fn code(s: &str) -> FactorLevel {
        FactorLevel::all().find(|l| l.code() == s).unwrap()
    }

    fn table1() -> ObservationTable {
        parse_observation_table(TABLE1).unwrap()
    }

    #[test]
    fn table1_supports() {
        let r = support_counts(&table1()).unwrap();
        let half = Ratio::new(1, 2);
        for c in ["PL", "PH", "QM", "QB", "RL", "RH"] {
            assert_eq!(r.support(code(c)), half, "{c}");
        }
        assert_eq!(r.support(code("MH")), Ratio::new(3, 4));
        assert_eq!(r.support(code("ML")), Ratio::new(1, 4));
        assert_eq!(r.support(code("CH")), Ratio::new(3, 4));
        assert_eq!(r.support(code("CL")), Ratio::new(1, 4));
    }

    #[test]
    fn single_high_row() {
        let t = parse_observation_table("year,gain,P,Q,M,R,C\ny1,1,H,B,H,H,H\n").unwrap();
        let r = support_counts(&t).unwrap();
        for (level, s) in r.entries() {
            let expected = if level.level == Level::High { 1 } else { 0 };
            assert_eq!(s, Ratio::from_integer(expected), "{level}");
        }
    }

    #[test]
    fn support_json_renders_fractions() {
        let r = support_counts(&table1()).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["MH"]["fraction"], "3/4");
        assert_eq!(json["MH"]["decimal"], 0.75);
        assert_eq!(json["PL"]["fraction"], "1/2");
    }

    #[test]
    fn optimum_condition_annotates_supports() {
        let r = support_counts(&table1()).unwrap();
        let o = optimum_condition(&r);
        assert_eq!(o.condition.to_string(), "PH QB MH RL CL");
        let supports: Vec<Support> = o.supports.iter().map(|s| s.1).collect();
        assert_eq!(
            supports,
            vec![
                Ratio::new(1, 2),
                Ratio::new(1, 2),
                Ratio::new(3, 4),
                Ratio::new(1, 2),
                Ratio::new(1, 4)
            ]
        );
    }

    #[test]
    fn optimum_condition_is_fixed() {
        let t = parse_observation_table("year,gain,P,Q,M,R,C\ny1,1,L,M,L,H,H\n").unwrap();
        let o = optimum_condition(&support_counts(&t).unwrap());
        assert_eq!(o.condition.to_string(), "PH QB MH RL CL");
        assert!(o.supports.iter().all(|s| s.1 == Ratio::from_integer(0)));
    }

    #[test]
    fn table2_pattern() {
        let p = dominant_pattern(&encode_sequence(&table1())).unwrap();
        assert_eq!(p.dominance(Factor::Market), Dominance::High);
        assert_eq!(p.dominance(Factor::Cost), Dominance::High);
        for f in [Factor::Production, Factor::Quality, Factor::Risk] {
            assert_eq!(p.dominance(f), Dominance::Tie);
        }
        assert_eq!(p.recommendation, "dominant: MH CH; tie: P Q R");
    }

    #[test]
    fn single_all_high_row() {
        let m = SequenceMatrix::new(vec![SequenceRow {
            label: "g".into(),
            bits: [1; 5],
        }])
        .unwrap();
        let p = dominant_pattern(&m).unwrap();
        assert!(p.factors.iter().all(|f| f.dominant == Dominance::High));
        assert_eq!(p.recommendation, "dominant: PH QB MH RH CH; tie: none");
    }

    #[test]
    fn empty_inputs() {
        let m = SequenceMatrix::new(vec![]).unwrap();
        assert!(dominant_pattern(&m).is_err());
    }

    #[test]
    fn states() {
        let s = enumerate_states();
        assert_eq!(s.len(), 32);
        assert_eq!(s[0].bits(), [0; 5]);
        assert_eq!(s[31].bits(), [1; 5]);
        assert_eq!(s[0b01101].to_string(), "PL QB MH RL CH");
        let distinct: std::collections::HashSet<_> = s.iter().collect();
        assert_eq!(distinct.len(), 32);
    }

    #[test]
    fn flags_examples() {
        let constant = GainSeries::from_gains(&[3.0; 5]).unwrap();
        assert!(deviation_flags(&constant, 2.0)
            .unwrap()
            .iter()
            .all(|f| !f.flagged));

        let jump = GainSeries::from_gains(&[10.0, 10.0, 10.0, 100.0]).unwrap();
        let flags = deviation_flags(&jump, 2.0).unwrap();
        let flagged: Vec<&str> = flags
            .iter()
            .filter(|f| f.flagged)
            .map(|f| f.year.as_str())
            .collect();
        assert_eq!(flagged, vec!["y4"]);
        assert_eq!(flags.len(), 3);

        let ap = GainSeries::from_gains(&[1.0, 3.0, 5.0, 7.0, 9.0]).unwrap();
        assert!(deviation_flags(&ap, 1.0)
            .unwrap()
            .iter()
            .all(|f| !f.flagged));
        assert!(deviation_flags(&ap, 1.5)
            .unwrap()
            .iter()
            .all(|f| !f.flagged));
    }

    #[test]
    fn flags_errors() {
        let s = GainSeries::from_gains(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            deviation_flags(&s, 2.0),
            Err(GainError::TooShort { .. })
        ));
        let s = GainSeries::from_gains(&[1.0, 2.0, 4.0]).unwrap();
        assert!(matches!(
            deviation_flags(&s, 0.0),
            Err(GainError::Validation(_))
        ));
        assert!(deviation_flags(&s, f64::NAN).is_err());
    }
}
