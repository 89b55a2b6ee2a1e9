//! Rendering of command results as JSON or CSV.

use std::io::Write;

use rug::{Float, Integer, Rational};
use serde_json::{json, Map, Value};
use tplab_core::hp::Complex;

/// A plain table; `header` is omitted for matrix dumps.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn with_header(cols: &[&str]) -> Self {
        Table {
            header: Some(cols.iter().map(|c| c.to_string()).collect()),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand hands back: the JSON document, an optional table for
/// CSV mode, and a description of any violated assertion.
#[derive(Debug)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub violation: Option<String>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            table: None,
            violation: None,
        }
    }

    pub fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn violated_if(mut self, cond: bool, msg: impl Into<String>) -> Self {
        if cond {
            self.violation = Some(msg.into());
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write(report: &Report, format: Format, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report.json)?;
            writeln!(out)
        }
        Format::Csv => {
            let flat;
            let table = match &report.table {
                Some(t) => t,
                None => {
                    flat = flatten(&report.json);
                    &flat
                }
            };
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(&mut *out);
            if let Some(h) = &table.header {
                w.write_record(h)?;
            }
            for r in &table.rows {
                w.write_record(r)?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

/// `key,value` rows for every leaf of a JSON document; numbers wrapped as
/// `{dec, hex}` collapse to their decimal form.
fn flatten(v: &Value) -> Table {
    let mut t = Table::with_header(&["key", "value"]);
    walk("", v, &mut t);
    t
}

fn walk(path: &str, v: &Value, t: &mut Table) {
    let child = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match v {
        Value::Object(m) if m.contains_key("dec") && m.contains_key("hex") => {
            t.push(vec![path.to_string(), scalar(&m["dec"])]);
        }
        Value::Object(m) => {
            for (k, x) in m {
                walk(&child(k), x, t);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                walk(&child(&i.to_string()), x, t);
            }
        }
        other => t.push(vec![path.to_string(), scalar(other)]),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Decimal digits that round-trip a `prec`-bit mantissa.
fn round_trip_digits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Shortest decimal that still carries every bit: plain notation for
/// moderate exponents, scientific otherwise.
pub fn dec(v: &Float) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if v.is_zero() {
        return "0".into();
    }
    let (neg, digits, exp) = v.to_sign_string_exp(10, Some(round_trip_digits(v.prec())));
    let digits = digits.trim_end_matches('0');
    let exp = exp.expect("finite non-zero") as i64;
    let sign = if neg { "-" } else { "" };
    let len = digits.len() as i64;
    // value = 0.DIGITS × 10^exp
    if (-5..=0).contains(&exp) {
        format!("{sign}0.{}{digits}", "0".repeat((-exp) as usize))
    } else if exp > 0 && exp <= 21 {
        if len <= exp {
            format!("{sign}{digits}{}", "0".repeat((exp - len) as usize))
        } else {
            let (a, b) = digits.split_at(exp as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (a, b) = digits.split_at(1);
        let frac = if b.is_empty() {
            String::new()
        } else {
            format!(".{b}")
        };
        format!("{sign}{a}{frac}e{}", exp - 1)
    }
}

/// Exact hexadecimal form `±0x0.HHHHpE` (E a power of two).
pub fn hex(v: &Float) -> String {
    if !v.is_finite() {
        return dec(v);
    }
    if v.is_zero() {
        return "0x0p0".into();
    }
    let (neg, digits, exp) = v.to_sign_string_exp(16, None);
    let digits = digits.trim_end_matches('0');
    let exp = exp.expect("finite non-zero") as i64;
    format!("{}0x0.{digits}p{}", if neg { "-" } else { "" }, 4 * exp)
}

pub fn num(v: &Float) -> Value {
    json!({ "dec": dec(v), "hex": hex(v) })
}

pub fn cnum(z: &Complex) -> Value {
    json!({ "re": num(&z.re), "im": num(&z.im) })
}

pub fn nums(vs: &[Float]) -> Value {
    Value::Array(vs.iter().map(num).collect())
}

pub fn int(v: &Integer) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

pub fn rat(v: &Rational) -> Value {
    json!(v.to_string())
}

/// Builds an object from `(key, value)` pairs; keys come out sorted.
pub fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}
