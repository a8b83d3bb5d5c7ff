//! Fuzzy gain sets over the five-factor universe `x1..x5` (P, Q, M, R, C)
//! and the optimum-gain combinator.
//!
//! Union is the pointwise max and intersection the pointwise min. The optimum
//! set takes the union on some factors and the intersection on the rest, and
//! records which input set (and so which year) attains each optimum.

use std::collections::{BTreeMap, HashSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{ensure_len, GainError, Result};
use crate::model::{parse_number, read_csv, Factor};

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGainSet {
    label: String,
    memberships: [f64; 5],
    /// Scalar fuzzy code of the gain itself (e.g. 0.1 for the first gain).
    /// Carried along; no combinator reads it.
    code: Option<f64>,
}

impl FuzzyGainSet {
    pub fn new(label: impl Into<String>, memberships: [f64; 5]) -> Result<Self> {
        let label = label.into();
        for (factor, &mu) in Factor::ALL.iter().zip(&memberships) {
            if !(0.0..=1.0).contains(&mu) {
                return Err(GainError::Validation(format!(
                    "membership of {} in `{label}` is {mu}, outside [0, 1]",
                    factor.element()
                )));
            }
        }
        Ok(FuzzyGainSet {
            label,
            memberships,
            code: None,
        })
    }

    pub fn with_code(mut self, code: f64) -> Self {
        self.code = Some(code);
        self
    }

    pub fn code(&self) -> Option<f64> {
        self.code
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn membership(&self, element: Factor) -> f64 {
        self.memberships[element.index()]
    }

    pub fn memberships(&self) -> [f64; 5] {
        self.memberships
    }
}

impl Serialize for FuzzyGainSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Members<'a>(&'a [f64; 5]);
        impl Serialize for Members<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(5))?;
                for factor in Factor::ALL {
                    map.serialize_entry(factor.element(), &self.0[factor.index()])?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("label", &self.label)?;
        if let Some(code) = self.code {
            map.serialize_entry("code", &code)?;
        }
        map.serialize_entry("memberships", &Members(&self.memberships))?;
        map.end()
    }
}

fn fold_sets(
    sets: &[FuzzyGainSet],
    element: Factor,
    better: fn(f64, f64) -> bool,
) -> Result<(usize, f64)> {
    ensure_len(sets.len(), 1)?;
    let first = sets[0].membership(element);
    Ok(sets
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, first), |best, (i, set)| {
            let mu = set.membership(element);
            if better(mu, best.1) {
                (i, mu)
            } else {
                best
            }
        }))
}

pub fn fuzzy_union_membership(sets: &[FuzzyGainSet], element: Factor) -> Result<f64> {
    fold_sets(sets, element, |a, b| a > b).map(|(_, mu)| mu)
}

pub fn fuzzy_intersection_membership(sets: &[FuzzyGainSet], element: Factor) -> Result<f64> {
    fold_sets(sets, element, |a, b| a < b).map(|(_, mu)| mu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Union,
    Intersection,
}

/// Assignment of each universe element to the union or the intersection rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    rules: [Rule; 5],
}

impl Default for Partition {
    /// Union on P, Q, M; intersection on R, C.
    fn default() -> Self {
        Partition {
            rules: [
                Rule::Union,
                Rule::Union,
                Rule::Union,
                Rule::Intersection,
                Rule::Intersection,
            ],
        }
    }
}

impl Partition {
    /// Both lists together must name every element exactly once.
    pub fn new(union: &[Factor], intersection: &[Factor]) -> Result<Self> {
        let mut rules: [Option<Rule>; 5] = [None; 5];
        for (list, rule) in [(union, Rule::Union), (intersection, Rule::Intersection)] {
            for &factor in list {
                if rules[factor.index()].replace(rule).is_some() {
                    return Err(GainError::Validation(format!(
                        "element {} is assigned more than once",
                        factor.element()
                    )));
                }
            }
        }
        let mut out = [Rule::Union; 5];
        for factor in Factor::ALL {
            out[factor.index()] = rules[factor.index()].ok_or_else(|| {
                GainError::Validation(format!(
                    "element {} is not assigned a rule",
                    factor.element()
                ))
            })?;
        }
        Ok(Partition { rules: out })
    }

    pub fn rule(&self, element: Factor) -> Rule {
        self.rules[element.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realization {
    pub factor: char,
    pub element: &'static str,
    pub rule: Rule,
    pub year: String,
    pub set: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimumGainResult {
    pub memberships: FuzzyGainSet,
    pub realization: Vec<Realization>,
}

/// Combines the gain sets element-wise by `partition` and attributes each
/// optimum to the first input set attaining it.
pub fn optimum_gain(
    sets: &[FuzzyGainSet],
    years: &BTreeMap<String, String>,
    partition: &Partition,
) -> Result<OptimumGainResult> {
    ensure_len(sets.len(), 1)?;
    let mut labels = HashSet::new();
    for set in sets {
        if !labels.insert(set.label()) {
            return Err(GainError::Validation(format!(
                "duplicate set label `{}`",
                set.label()
            )));
        }
        if !years.contains_key(set.label()) {
            return Err(GainError::Validation(format!(
                "no year given for set `{}`",
                set.label()
            )));
        }
    }

    let mut memberships = [0.0; 5];
    let mut realization = Vec::with_capacity(5);
    for element in Factor::ALL {
        let rule = partition.rule(element);
        let better: fn(f64, f64) -> bool = match rule {
            Rule::Union => |a, b| a > b,
            Rule::Intersection => |a, b| a < b,
        };
        let (index, mu) = fold_sets(sets, element, better)?;
        memberships[element.index()] = mu;
        let source = &sets[index];
        realization.push(Realization {
            factor: element.letter(),
            element: element.element(),
            rule,
            year: years[source.label()].clone(),
            set: source.label().to_string(),
        });
    }

    Ok(OptimumGainResult {
        memberships: FuzzyGainSet::new("G_opt", memberships)?,
        realization,
    })
}

/// Parses `label,x1,x2,x3,x4,x5` CSV.
pub fn parse_fuzzy_sets(csv_text: &str) -> Result<Vec<FuzzyGainSet>> {
    read_csv(csv_text, Some(&["label", "x1", "x2", "x3", "x4", "x5"]))?
        .into_iter()
        .map(|rec| {
            let mut mu = [0.0; 5];
            for factor in Factor::ALL {
                mu[factor.index()] =
                    parse_number(&rec.fields[1 + factor.index()], rec.line, factor.element())?;
            }
            FuzzyGainSet::new(rec.fields[0].clone(), mu)
        })
        .collect()
}

/// Parses the `label,year` mapping that attaches a year to each gain set.
pub fn parse_year_map(csv_text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for rec in read_csv(csv_text, Some(&["label", "year"]))? {
        if map
            .insert(rec.fields[0].clone(), rec.fields[1].clone())
            .is_some()
        {
            return Err(GainError::Parse {
                line: rec.line,
                message: format!("label `{}` mapped twice", rec.fields[0]),
            });
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table4() -> Vec<FuzzyGainSet> {
        vec![
            FuzzyGainSet::new("G1", [0.1, 0.6, 0.9, 0.2, 0.8]).unwrap(),
            FuzzyGainSet::new("G2", [0.7, 0.3, 0.5, 0.3, 0.2]).unwrap(),
            FuzzyGainSet::new("G3", [0.8, 0.8, 0.7, 0.7, 0.7]).unwrap(),
            FuzzyGainSet::new("G4", [0.2, 0.1, 0.8, 0.9, 0.8]).unwrap(),
        ]
    }

    fn years() -> BTreeMap<String, String> {
        (1..=4)
            .map(|i| (format!("G{i}"), format!("y{i}")))
            .collect()
    }

    #[test]
    fn union_examples() {
        let sets = table4();
        assert_eq!(
            fuzzy_union_membership(&sets, Factor::Production).unwrap(),
            0.8
        );
        assert_eq!(fuzzy_union_membership(&sets, Factor::Market).unwrap(), 0.9);
        assert_eq!(
            fuzzy_union_membership(&sets[1..2], Factor::Risk).unwrap(),
            0.3
        );
    }

    #[test]
    fn intersection_examples() {
        let sets = table4();
        assert_eq!(
            fuzzy_intersection_membership(&sets, Factor::Risk).unwrap(),
            0.2
        );
        assert_eq!(
            fuzzy_intersection_membership(&sets, Factor::Cost).unwrap(),
            0.2
        );
        assert_eq!(
            fuzzy_intersection_membership(&sets[2..3], Factor::Cost).unwrap(),
            0.7
        );
    }

    #[test]
    fn empty_list() {
        assert_eq!(
            fuzzy_union_membership(&[], Factor::Cost),
            Err(GainError::TooShort { needed: 1, got: 0 })
        );
        assert!(fuzzy_intersection_membership(&[], Factor::Cost).is_err());
    }

    #[test]
    fn optimum_matches_worked_example() {
        let r = optimum_gain(&table4(), &years(), &Partition::default()).unwrap();
        // x3 is the max 0.9 (attained by G1), not the 0.8 printed in the summary line
        assert_eq!(r.memberships.memberships(), [0.8, 0.8, 0.9, 0.2, 0.2]);
        let years: Vec<&str> = r.realization.iter().map(|x| x.year.as_str()).collect();
        assert_eq!(years, ["y3", "y3", "y1", "y1", "y2"]);
    }

    #[test]
    fn identical_sets_realize_first_year() {
        let s = FuzzyGainSet::new("A", [0.3, 0.1, 0.0, 1.0, 0.5]).unwrap();
        let sets = vec![s.clone(), FuzzyGainSet::new("B", s.memberships()).unwrap()];
        let years = [("A", "2001"), ("B", "2002")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let r = optimum_gain(&sets, &years, &Partition::default()).unwrap();
        assert_eq!(r.memberships.memberships(), s.memberships());
        assert!(r.realization.iter().all(|x| x.year == "2001"));
    }

    #[test]
    fn partition_validation() {
        use Factor::*;
        assert!(Partition::new(&[Production, Quality], &[Market, Risk, Cost]).is_ok());
        assert!(Partition::new(&[Production, Quality], &[Market, Risk]).is_err());
        assert!(Partition::new(&[Production, Quality, Market], &[Market, Risk, Cost]).is_err());
        assert_eq!(
            Partition::new(&[Production, Quality, Market], &[Risk, Cost]).unwrap(),
            Partition::default()
        );
    }

    #[test]
    fn missing_year_is_rejected() {
        let mut y = years();
        y.remove("G2");
        assert!(matches!(
            optimum_gain(&table4(), &y, &Partition::default()),
            Err(GainError::Validation(_))
        ));
    }

    #[test]
    fn membership_range_checked() {
        assert!(FuzzyGainSet::new("bad", [0.1, 1.2, 0.0, 0.0, 0.0]).is_err());
        assert!(FuzzyGainSet::new("bad", [f64::NAN, 0.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn parses_csv_inputs() {
        let sets = parse_fuzzy_sets("label,x1,x2,x3,x4,x5\nG1,0.1,0.6,0.9,0.2,0.8\n").unwrap();
        assert_eq!(sets[0], table4()[0]);
        let y = parse_year_map("label,year\nG1,y1\nG2,y2\n").unwrap();
        assert_eq!(y["G2"], "y2");
        assert!(parse_year_map("label,year\nG1,y1\nG1,y2\n").is_err());
        assert!(parse_fuzzy_sets("label,x1,x2,x3,x4,x5\nG1,0.1,0.6,0.9,0.2,1.8\n").is_err());
    }

    #[test]
    fn set_json_shape() {
        let json = serde_json::to_string(&table4()[0]).unwrap();
        assert_eq!(
            json,
            r#"{"label":"G1","memberships":{"x1":0.1,"x2":0.6,"x3":0.9,"x4":0.2,"x5":0.8}}"#
        );
    }
}
