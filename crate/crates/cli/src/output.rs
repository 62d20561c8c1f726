//! JSON and CSV rendering with 17 significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

/// 17 significant digits; non-finite values become `NaN`, `inf` or `-inf` in CSV.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}

fn write_value(v: &Value, out: &mut String, indent: usize, pretty: bool) {
    let pad = |n: usize, out: &mut String| {
        if pretty {
            out.push('\n');
            out.push_str(&"  ".repeat(n));
        }
    };
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => out.push_str(&i.to_string()),
            (_, Some(u), _) => out.push_str(&u.to_string()),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&fmt17(f)),
            _ => out.push_str("null"),
        },
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            let flat = items.iter().all(|i| !i.is_array() && !i.is_object());
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                    if flat && pretty {
                        out.push(' ');
                    }
                }
                if !flat {
                    pad(indent + 1, out);
                }
                write_value(item, out, indent + 1, pretty);
            }
            if !flat {
                pad(indent, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                pad(indent + 1, out);
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                if pretty {
                    out.push(' ');
                }
                write_value(item, out, indent + 1, pretty);
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

/// Pretty JSON with floats at 17 significant digits; non-finite floats become null.
pub fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let value = serde_json::to_value(v).map_err(|e| CliError::numerical(e.to_string()))?;
    let mut out = String::new();
    write_value(&value, &mut out, 0, true);
    out.push('\n');
    Ok(out)
}

/// RFC-4180 CSV with a header row.
pub fn to_csv(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::numerical(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::numerical(e.to_string()))
}
