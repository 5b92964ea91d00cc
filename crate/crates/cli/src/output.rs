use std::io::Write;
use std::process::ExitCode;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A JSON number when it fits in i64, otherwise a decimal string.
pub fn integer(b: &BigInt) -> Value {
    i64::try_from(b).map_or_else(|_| json!(b.to_string()), Value::from)
}

pub fn fail(message: &str) -> ExitCode {
    println!("{}", json!({ "error": message }));
    ExitCode::from(1)
}

pub fn emit(value: &Value, format: Format) -> Result<(), Box<dyn std::error::Error>> {
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(value)?)?,
        Format::Csv => write_csv(value, &mut out)?,
    }
    Ok(())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// A list of objects becomes one row per object; anything else becomes
/// `key,value` rows with nested keys joined by dots and arrays by `;`.
fn write_csv(value: &Value, out: &mut impl Write) -> Result<(), Box<dyn std::error::Error>> {
    let mut writer = csv::Writer::from_writer(out);
    match value {
        Value::Array(rows) if rows.iter().all(Value::is_object) => {
            let flat: Vec<Map<String, Value>> = rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    flatten("", r, &mut m);
                    m
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for m in &flat {
                for k in m.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            writer.write_record(&header)?;
            for m in &flat {
                writer.write_record(header.iter().map(|k| m.get(k).map_or(String::new(), scalar)))?;
            }
        }
        other => {
            let mut m = Map::new();
            flatten("", other, &mut m);
            writer.write_record(["key", "value"])?;
            for (k, v) in &m {
                writer.write_record([k.as_str(), &scalar(v)])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}
