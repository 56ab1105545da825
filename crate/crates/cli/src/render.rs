use std::fmt::Write as _;
use std::str::FromStr;

use minimax_core::oracle::{CheckReport, ErrorMetric};
use serde_json::{Map, Value};

use crate::compute::Outcome;
use crate::manifest::ReproEntry;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (table, csv or json)")),
        }
    }
}

/// Ten significant digits, positional between 1e-5 and 1e10 and scientific
/// outside. Non-finite values render as `null`.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..10).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

fn table_num(x: f64) -> String {
    if x.is_finite() && x.abs() >= 1e6 {
        format!("{x:.4e}")
    } else if x.is_finite() {
        format!("{x:.4}")
    } else {
        "-".to_string()
    }
}

/// Pretty JSON with sorted keys and `fmt_sig` floats; integers stay integers.
pub fn write_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => out.push_str(&u.to_string()),
            (None, Some(i)) => out.push_str(&i.to_string()),
            _ => out.push_str(&fmt_sig(n.as_f64().unwrap_or(f64::NAN))),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(k.clone()));
                write_value(v, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push('}');
        }
    }
}

fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn outcome_json(out: &Outcome) -> Value {
    let r = &out.report;
    let mut m = Map::new();
    m.insert("argmax".into(), Value::Object(r.argmax.iter().map(|(k, v)| (k.clone(), float(*v))).collect()));
    m.insert("bound".into(), Value::String(r.bound_id.clone()));
    if let Some(hw) = out.half_width {
        m.insert("half_width".into(), float(hw));
    }
    m.insert("loss".into(), Value::String(r.loss.describe()));
    m.insert("model".into(), Value::String(r.model_id.clone()));
    m.insert("notes".into(), Value::Array(r.notes.iter().cloned().map(Value::String).collect()));
    m.insert("rate".into(), r.rate.map_or(Value::Null, |p| Value::String(p.to_string())));
    m.insert("value".into(), float(r.value));
    Value::Object(m)
}

fn csv_text<F>(fill: F) -> CliResult<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).map_err(|e| CliError::Output(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn render_outcome(out: &Outcome, format: Format) -> CliResult<String> {
    let r = &out.report;
    let rate = r.rate.map_or("-".to_string(), |p| p.to_string());
    match format {
        Format::Json => Ok(write_json(&outcome_json(out))),
        Format::Csv => {
            let args: Vec<String> = r.argmax.iter().map(|(k, v)| format!("{k}={}", fmt_sig(*v))).collect();
            csv_text(|w| {
                w.write_record(["bound", "model", "loss", "value", "half_width", "rate", "argmax"])?;
                w.write_record([
                    r.bound_id.as_str(),
                    &r.model_id,
                    &r.loss.describe(),
                    &fmt_sig(r.value),
                    &out.half_width.map_or(String::new(), fmt_sig),
                    &rate,
                    &args.join(";"),
                ])
            })
        }
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "{:<12}{}", "bound", r.bound_id);
            let _ = writeln!(s, "{:<12}{}", "model", r.model_id);
            let _ = writeln!(s, "{:<12}{}", "loss", r.loss.describe());
            let _ = writeln!(s, "{:<12}{}", "value", table_num(r.value));
            if let Some(hw) = out.half_width {
                let _ = writeln!(s, "{:<12}{hw:.4e}", "half-width");
            }
            let _ = writeln!(s, "{:<12}{rate}", "rate");
            for (k, v) in &r.argmax {
                let _ = writeln!(s, "{:<12}{}", format!("at {k}"), table_num(*v));
            }
            for note in &r.notes {
                let _ = writeln!(s, "{:<12}{note}", "note");
            }
            Ok(s)
        }
    }
}

fn check_json(c: &CheckReport) -> Value {
    let mut m = Map::new();
    m.insert("check".into(), Value::String(c.check_id.clone()));
    m.insert("max_error".into(), float(c.max_error));
    let metric = match c.metric {
        ErrorMetric::Absolute => "absolute",
        ErrorMetric::Relative => "relative",
    };
    m.insert("metric".into(), Value::String(metric.into()));
    m.insert("pass".into(), Value::Bool(c.pass));
    m.insert("samples".into(), Value::from(c.samples as u64));
    m.insert("tolerance".into(), float(c.tolerance));
    Value::Object(m)
}

fn entry_json(e: &ReproEntry) -> Value {
    let mut m = Map::new();
    m.insert("bound".into(), Value::String(e.bound_id.clone()));
    m.insert("computed".into(), float(e.computed));
    m.insert("error".into(), e.error.clone().map_or(Value::Null, Value::String));
    m.insert("expected".into(), float(e.expected));
    m.insert("label".into(), Value::String(e.label.clone()));
    m.insert("loss".into(), Value::String(e.loss.clone()));
    m.insert("model".into(), Value::String(e.model_id.clone()));
    m.insert("pass".into(), Value::Bool(e.pass));
    m.insert("tolerance".into(), float(e.tolerance));
    Value::Object(m)
}

pub fn render_reproduction(checks: &[CheckReport], entries: &[ReproEntry], format: Format) -> CliResult<String> {
    let passed = entries.iter().filter(|e| e.pass).count();
    match format {
        Format::Json => {
            let mut m = Map::new();
            m.insert("checks".into(), Value::Array(checks.iter().map(check_json).collect()));
            m.insert("entries".into(), Value::Array(entries.iter().map(entry_json).collect()));
            m.insert("passed".into(), Value::from(passed as u64));
            m.insert("total".into(), Value::from(entries.len() as u64));
            Ok(write_json(&Value::Object(m)))
        }
        Format::Csv => csv_text(|w| {
            w.write_record([
                "label",
                "model",
                "bound",
                "loss",
                "expected",
                "computed",
                "abs_diff",
                "tolerance",
                "pass",
                "error",
            ])?;
            for e in entries {
                w.write_record([
                    e.label.as_str(),
                    &e.model_id,
                    &e.bound_id,
                    &e.loss,
                    &fmt_sig(e.expected),
                    &fmt_sig(e.computed),
                    &fmt_sig((e.computed - e.expected).abs()),
                    &fmt_sig(e.tolerance),
                    if e.pass { "true" } else { "false" },
                    e.error.as_deref().unwrap_or(""),
                ])?;
            }
            Ok(())
        }),
        Format::Table => {
            let mut s = String::new();
            for c in checks {
                let _ = writeln!(s, "{c}");
            }
            let width = entries.iter().map(|e| e.label.len()).max().unwrap_or(5).max(5);
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "{:<width$}  {:<18} {:<18} {:>9} {:>9} {:>9} {:>9}  status",
                "label", "model", "bound", "expected", "computed", "|diff|", "tol"
            );
            for e in entries {
                let diff = (e.computed - e.expected).abs();
                let tol = if e.tolerance < 1e-4 { format!("{:.0e}", e.tolerance) } else { table_num(e.tolerance) };
                let _ = writeln!(
                    s,
                    "{:<width$}  {:<18} {:<18} {:>9} {:>9} {:>9} {:>9}  {}",
                    e.label,
                    e.model_id,
                    e.bound_id,
                    table_num(e.expected),
                    table_num(e.computed),
                    table_num(diff),
                    tol,
                    if e.pass { "PASS" } else { "FAIL" },
                );
                if let Some(err) = &e.error {
                    let _ = writeln!(s, "{:<width$}  error: {err}", "");
                }
            }
            let _ = writeln!(s, "\n{passed} of {} entries passed", entries.len());
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.3314335954123), "0.3314335954");
        assert_eq!(fmt_sig(-2.5), "-2.500000000");
        assert_eq!(fmt_sig(1234.5), "1234.500000");
        assert_eq!(fmt_sig(1e-7), "1.000000000e-7");
        assert_eq!(fmt_sig(9.99999999996), "10.00000000");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(f64::NAN), "null");
        assert_eq!(fmt_sig(2.0e12), "2.000000000e12");
    }

    #[test]
    fn sig_rendering_is_a_fixed_point() {
        for x in [0.1, 1.0 / 3.0, 2.0e-5, 123456789.987, -7.25e-12, 9.999999999949] {
            let once = fmt_sig(x);
            assert_eq!(fmt_sig(once.parse().unwrap()), once);
        }
    }

    #[test]
    fn json_objects_are_sorted_and_indented() {
        let v: Value = serde_json::from_str(r#"{"b": [1, 2.5, "x"], "a": {}, "c": null}"#).unwrap();
        assert_eq!(
            write_json(&v),
            "{\n  \"a\": {},\n  \"b\": [\n    1,\n    2.500000000,\n    \"x\"\n  ],\n  \"c\": null\n}\n"
        );
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("yaml".parse::<Format>().is_err());
    }
}
