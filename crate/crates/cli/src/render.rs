//! Deterministic rendering of command results.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::CliError;

/// Largest magnitude rendered as a bare integer.
const INTEGER_LIMIT: f64 = 1e15;

/// Rounds a float to 12 significant digits; integral results become integers.
pub fn round_number(x: f64) -> Value {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    if rounded.fract() == 0.0 && rounded.abs() < INTEGER_LIMIT {
        Value::Number(Number::from(rounded as i64))
    } else {
        Number::from_f64(rounded).map_or(Value::Null, Value::Number)
    }
}

fn normalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => round_number(n.as_f64().unwrap_or_default()),
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, normalize(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

/// Serializes `result` with stable key order and rounded numbers.
pub fn to_value<T: Serialize>(result: &T) -> Result<Value, CliError> {
    let value = serde_json::to_value(result).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(normalize(value))
}

pub fn json(value: &Value) -> Result<String, CliError> {
    let mut out =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

/// One compact JSON document per line.
pub fn json_lines(values: &[Value]) -> Result<String, CliError> {
    let mut out = String::new();
    for v in values {
        out.push_str(&serde_json::to_string(v).map_err(|e| CliError::Internal(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

/// Flattens a value into `path<TAB>scalar` lines.
pub fn table(value: &Value) -> String {
    let mut lines = Vec::new();
    flatten("", value, &mut lines);
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn flatten(prefix: &str, value: &Value, lines: &mut Vec<String>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&join(k), v, lines);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            lines.push(format!("{prefix}\t{}", cells.join(" ")));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), v, lines);
            }
        }
        other => lines.push(format!("{prefix}\t{}", scalar(other))),
    }
}

fn scalar(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
