use std::collections::BTreeMap;
use std::io::Write;

use chains_core::{DenseMatrix, TransitionMatrix};
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Significant digits kept in every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

pub fn num(x: f64) -> Value {
    let r = round_sig(x);
    if r == 0.0 {
        // no negative zero in reports
        return json!(0.0);
    }
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

pub fn vector(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn matrix(m: &DenseMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector(m.row(i))).collect())
}

/// Columns of `m` as separate arrays.
pub fn columns(m: &DenseMatrix) -> Value {
    Value::Array((0..m.cols()).map(|j| vector(&m.column(j))).collect())
}

pub fn complex(c: Complex64) -> Value {
    json!({ "re": num(c.re), "im": num(c.im) })
}

pub fn complex_vector(v: &[Complex64]) -> Value {
    let re: Vec<f64> = v.iter().map(|c| c.re).collect();
    let im: Vec<f64> = v.iter().map(|c| c.im).collect();
    json!({ "re": vector(&re), "im": vector(&im) })
}

pub fn labels(names: &[String], idx: &[usize]) -> Value {
    Value::Array(idx.iter().map(|&i| json!(names[i])).collect())
}

/// A chain in the input document layout, so it can be fed back in.
pub fn chain_document(c: &TransitionMatrix) -> Value {
    json!({ "states": c.labels(), "P": matrix(c.p()) })
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A float cell with the same rounding as the JSON output.
pub fn cell(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        r.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub result: Value,
    pub tolerances: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let tolerances: Map<String, Value> = self.tolerances.iter().map(|(k, &v)| (k.clone(), num(v))).collect();
        let doc = json!({
            "command": self.command,
            "input_digest": self.input_digest,
            "result": self.result,
            "tolerances": tolerances,
            "version": env!("CARGO_PKG_VERSION"),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(0.1 + 0.2), 0.3);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(123456.7890123456), 123456.789012);
        assert_eq!(num(-0.0), json!(0.0));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn keys_are_sorted() {
        let r = Report {
            command: "x".into(),
            input_digest: digest(b""),
            result: json!({ "zeta": 1, "alpha": 2 }),
            tolerances: BTreeMap::from([("row_sum".to_string(), 1e-9)]),
        };
        let text = r.to_json();
        assert!(text.find("\"alpha\"").unwrap() < text.find("\"zeta\"").unwrap());
        assert!(text.find("\"command\"").unwrap() < text.find("\"version\"").unwrap());
        assert!(text.contains("e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"));
    }
}
