//! Number rounding and the three output formats.

use serde::Serialize;
use serde_json::Value;

/// Rounds to 12 significant digits; `-0` prints as `0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest round-trip text of an already rounded value, same as in JSON.
pub fn num(x: f64) -> String {
    serde_json::Number::from_f64(sig12(x)).map(|n| n.to_string()).unwrap_or_else(|| x.to_string())
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

/// Comma-separated rows with a header, LF line endings.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `key: value` lines for a flat JSON object; nested values stay JSON.
pub fn text_lines(value: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = value {
        for (k, v) in map {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}
