use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// Rounds a dB value to 2 decimals; non-finite values pass through.
pub fn db2(x: f64) -> f64 {
    if x.is_finite() {
        // Adding zero turns -0.0 into 0.0.
        (x * 100.0).round() / 100.0 + 0.0
    } else {
        x
    }
}

/// Rounds every number stored under a key ending in `_db`, at any depth,
/// except inside the echoed `config` object.
pub fn round_db_fields(value: &mut Value) {
    fn walk(v: &mut Value, in_db: bool) {
        match v {
            Value::Number(n) if in_db => {
                if let Some(x) = n.as_f64() {
                    *v = serde_json::json!(db2(x));
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|i| walk(i, in_db)),
            Value::Object(map) => {
                for (k, child) in map.iter_mut() {
                    if k != "config" {
                        walk(child, in_db || k.ends_with("_db"));
                    }
                }
            }
            _ => {}
        }
    }
    walk(value, false);
}

/// Serializes a report with dB fields rounded, to `out` or stdout.
pub fn emit<T: Serialize>(report: &T, out: Option<&Path>) -> Result<()> {
    let mut value = serde_json::to_value(report)?;
    round_db_fields(&mut value);
    let text = serde_json::to_string_pretty(&value)? + "\n";
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing report {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
