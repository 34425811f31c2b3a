//! Deterministic rendering: floats rounded to 12 significant digits before
//! serialization so repeated runs emit byte-identical output.

use serde_json::Value;

/// Round to 12 significant digits through the decimal representation.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse::<f64>().expect("round-trip")
}

/// Recursively round every number in a JSON tree.
pub fn round_json(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig12(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn render_json(value: &mut Value) -> String {
    round_json(value);
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

/// CSV with '.' decimals, comma delimiter, mandatory header.
pub struct Csv {
    buffer: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            buffer: format!("{}\n", header.join(",")),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buffer.push_str(&fields.join(","));
        self.buffer.push('\n');
    }

    pub fn number(x: f64) -> String {
        format!("{}", sig12(x))
    }

    pub fn finish(self) -> String {
        self.buffer
    }
}
