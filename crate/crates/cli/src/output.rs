use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip form, with `-0` printed as `0`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x == f64::INFINITY {
        "+inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x}")
    }
}

pub fn vector(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn normalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.as_f64() == Some(0.0) && n.is_f64() => *v = Value::from(0),
        Value::Array(items) => items.iter_mut().for_each(normalize),
        Value::Object(map) => map.values_mut().for_each(normalize),
        _ => {}
    }
}

/// Compact JSON with negative zeros normalised.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("output types serialise");
    normalize(&mut v);
    serde_json::to_string(&v).expect("values serialise")
}

/// Indented JSON with negative zeros normalised.
pub fn json_pretty<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("output types serialise");
    normalize(&mut v);
    serde_json::to_string_pretty(&v).expect("values serialise")
}
