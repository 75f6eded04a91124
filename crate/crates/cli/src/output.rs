//! Deterministic text and JSON rendering.

use circlerig::homeo::{CirclePoint, DynClass, FixedPiece};
use circlerig::numeric::{fmt_sig12, round_sig};
use circlerig::rotnum::RotBound;
use serde::Serialize;
use std::io::Write;
use serde_json::Value;

/// Rounds every float in the tree to 12 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0), 12);
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> anyhow::Result<String> {
    let v = round_floats(serde_json::to_value(x)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Writes to stdout; a closed pipe is not an error.
pub fn emit(text: &str) -> anyhow::Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn enclosure(b: &RotBound) -> String {
    match &b.exact {
        Some(q) => format!("= {q} (certified)"),
        None => format!("in [{}, {}]", fmt_sig12(b.lo), fmt_sig12(b.hi)),
    }
}

pub fn point(p: &CirclePoint) -> String {
    match p.as_exact() {
        Some(q) => q.to_string(),
        None => {
            let (x, e) = (p.angle(), p.err());
            format!("[{}, {}]", fmt_sig12(x - e), fmt_sig12(x + e))
        }
    }
}

pub fn class(c: &DynClass) -> String {
    match c {
        DynClass::FixedPointFree => "fixed-point free".into(),
        DynClass::Hyperbolic { attracting, repelling } => {
            format!("hyperbolic, attracting {}, repelling {}", point(attracting), point(repelling))
        }
        DynClass::SingleNeutralFixed { point: p } => format!("single neutral fixed point {}", point(p)),
        DynClass::GeneralFixed { fixed_set } => {
            let parts: Vec<String> = fixed_set
                .iter()
                .map(|f| match f {
                    FixedPiece::Point { at, stability } => format!("{} ({stability:?})", point(at)).to_lowercase(),
                    FixedPiece::Arc { start, end } if start == end => "the whole circle".into(),
                    FixedPiece::Arc { start, end } => format!("arc {} to {}", point(start), point(end)),
                })
                .collect();
            format!("fixed set {}", parts.join(", "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_rounded_and_integers_kept() {
        let v = round_floats(json!({"x": 0.1 + 0.2, "n": 3, "a": [1.0 / 3.0, "s"]}));
        assert_eq!(v.to_string(), r#"{"a":[0.333333333333,"s"],"n":3,"x":0.3}"#);
    }
}
