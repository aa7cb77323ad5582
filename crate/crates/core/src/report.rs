//! Uniform result rows and their CSV / JSON encodings.
//!
//! Output is byte-stable: floats use 12 significant digits with a `.`
//! separator, columns keep insertion order, and lines end in `\n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    /// Column not applicable to this row (empty CSV cell, JSON `null`).
    Missing,
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Missing, Into::into)
    }
}

/// Formats like C's `%.12g`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const DIGITS: i32 = 12;
    // Round first so the exponent reflects the printed mantissa.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let mantissa = trim_zeros(mantissa.to_owned());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

impl Value {
    fn csv_cell(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format_float(*v),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => csv_quote(s),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) if v.is_finite() => format_float(*v),
            Value::Float(_) | Value::Missing => "null".into(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serialization"),
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// One output row: the experiment name, its inputs and its outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub experiment: String,
    pub params: Vec<(String, Value)>,
    pub results: Vec<(String, Value)>,
}

impl ReportRecord {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            params: Vec::new(),
            results: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.push((key.to_owned(), value.into()));
        self
    }

    pub fn result(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.results.push((key.to_owned(), value.into()));
        self
    }

    fn columns(&self) -> impl Iterator<Item = &(String, Value)> {
        self.params.iter().chain(&self.results)
    }

    fn keys(&self) -> Vec<&str> {
        self.columns().map(|(k, _)| k.as_str()).collect()
    }

    /// Looks up a column by name.
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.columns().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn check_keys(records: &[ReportRecord]) -> Result<()> {
    for r in records {
        for k in r.keys() {
            let snake = !k.is_empty()
                && k.chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !snake {
                return Err(Error::Internal(format!("column '{k}' is not snake_case")));
            }
        }
    }
    let Some(first) = records.first() else {
        return Ok(());
    };
    let keys = first.keys();
    if let Some(bad) = records.iter().find(|r| r.keys() != keys) {
        return Err(Error::Internal(format!(
            "heterogeneous columns: {:?} vs {:?}",
            keys,
            bad.keys()
        )));
    }
    Ok(())
}

/// CSV (param and result columns; the experiment name is not a column) or
/// a JSON array of objects whose first key is `experiment`.
///
/// `header` names the CSV columns when `records` is empty.
pub fn emit(records: &[ReportRecord], format: Format, header: &[&str]) -> Result<String> {
    check_keys(records)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            let cols: Vec<&str> = records
                .first()
                .map_or_else(|| header.to_vec(), |r| r.keys());
            out.push_str(&cols.join(","));
            out.push('\n');
            for r in records {
                let cells: Vec<String> = r.columns().map(|(_, v)| v.csv_cell()).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            out.push('[');
            for (i, r) in records.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str("\n  {\"experiment\": ");
                out.push_str(&Value::Text(r.experiment.clone()).json());
                for (k, v) in r.columns() {
                    write!(out, ", \"{k}\": {}", v.json()).expect("write to string");
                }
                out.push('}');
            }
            if !records.is_empty() {
                out.push('\n');
            }
            out.push_str("]\n");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.0 / 6.0), "0.166666666667");
        assert_eq!(format_float(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(3.0), "3");
        assert_eq!(format_float(-0.472135954999579), "-0.472135955");
        assert_eq!(format_float(2.067833848461929e-15), "2.06783384846e-15");
        assert_eq!(format_float(1e12), "1e+12");
        assert_eq!(format_float(123456.0), "123456");
        assert_eq!(format_float(0.0001), "0.0001");
        assert_eq!(format_float(0.99999999999999), "1");
        assert_eq!(format_float(0.0), "0");
    }

    fn rec(x: f64) -> ReportRecord {
        ReportRecord::new("demo")
            .param("n", 4usize)
            .result("value", x)
    }

    #[test]
    fn empty_csv_is_header_only() {
        assert_eq!(
            emit(&[], Format::Csv, &["n", "value"]).unwrap(),
            "n,value\n"
        );
        assert_eq!(emit(&[], Format::Json, &["n"]).unwrap(), "[]\n");
    }

    #[test]
    fn one_record_json() {
        let out = emit(&[rec(0.5)], Format::Json, &[]).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(arr[0]["experiment"], "demo");
        assert_eq!(arr[0]["value"], 0.5);
        assert_eq!(arr[0]["n"], 4);
    }

    #[test]
    fn two_records_csv_in_order() {
        let out = emit(&[rec(1.0), rec(2.0)], Format::Csv, &[]).unwrap();
        assert_eq!(out, "n,value\n4,1\n4,2\n");
    }

    #[test]
    fn heterogeneous_keys_are_rejected() {
        let other = ReportRecord::new("demo")
            .param("n", 4usize)
            .result("other", 1.0);
        assert!(matches!(
            emit(&[rec(1.0), other], Format::Csv, &[]),
            Err(Error::Internal(_))
        ));
        let bad = ReportRecord::new("demo").param("Bad-Key", 1usize);
        assert!(emit(&[bad], Format::Csv, &[]).is_err());
    }

    #[test]
    fn quoting_and_missing() {
        let r = ReportRecord::new("x")
            .param("s", "a,b\"c")
            .result("m", Value::Missing);
        assert_eq!(
            emit(std::slice::from_ref(&r), Format::Csv, &[]).unwrap(),
            "s,m\n\"a,b\"\"c\",\n"
        );
        let json = emit(&[r], Format::Json, &[]).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(parsed[0]["m"].is_null());
        assert_eq!(parsed[0]["s"], "a,b\"c");
    }
}
