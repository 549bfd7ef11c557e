//! Machine-readable report envelope shared by the CLI commands.
//!
//! Timing lives in its own object so golden-file comparisons can drop it;
//! floats are rounded to 12 significant digits before serialization so
//! reports are byte-stable across runs for fixed inputs.

use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub body: Value,
    pub timing: Timing,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub wall_ms: u128,
}

impl Report {
    pub fn new(command: String, body: Value, wall_ms: u128) -> Self {
        let mut body = body;
        round_floats(&mut body);
        Report { tool_version: TOOL_VERSION, command, body, timing: Timing { wall_ms } }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig12(f)) {
                        *v = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Rounds to 12 significant digits.
pub fn sig12(f: f64) -> f64 {
    if !f.is_finite() || f == 0.0 {
        return f;
    }
    format!("{f:.11e}").parse().unwrap_or(f)
}

/// Serializes any value to a JSON body with floats rounded.
pub fn body_of<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("body serializes");
    round_floats(&mut v);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(1.0), 1.0);
        assert_eq!(sig12(0.0), 0.0);
        let x = 1.2345678901234567;
        let r = sig12(x);
        assert!((r - 1.23456789012).abs() < 1e-11);
    }

    #[test]
    fn report_shape_is_stable() {
        let r1 = Report::new("cmd".into(), serde_json::json!({"a": 0.1 + 0.2}), 5);
        let r2 = Report::new("cmd".into(), serde_json::json!({"a": 0.1 + 0.2}), 900);
        let mut v1: Value = serde_json::from_str(&r1.to_json()).unwrap();
        let mut v2: Value = serde_json::from_str(&r2.to_json()).unwrap();
        v1.as_object_mut().unwrap().remove("timing");
        v2.as_object_mut().unwrap().remove("timing");
        assert_eq!(v1, v2);
    }
}
