use std::fmt::Write;

use erlangen::fixtures::{format_scalar, Report, Trailer};
use erlangen::Scalar;

/// Named values printed one per line, with a summary trailer.
#[derive(Debug, Clone)]
pub struct ValueReport {
    lines: Vec<(String, String)>,
    trailer: Trailer,
}

impl ValueReport {
    pub fn new(verdict: &str) -> Self {
        Self { lines: Vec::new(), trailer: Trailer::new(verdict) }
    }

    pub fn line(mut self, key: &str, value: impl Into<String>) -> Self {
        self.lines.push((key.to_string(), value.into()));
        self
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.trailer = self.trailer.field(key, value);
        self
    }
}

impl Report for ValueReport {
    fn body(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k}: {v}");
        }
        s
    }

    fn trailer(&self) -> Trailer {
        self.trailer.clone()
    }
}

pub fn real(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

pub fn list<'a>(v: impl IntoIterator<Item = &'a Scalar>) -> String {
    let parts: Vec<String> = v.into_iter().map(|z| format_scalar(*z)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn real_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| real(*x)).collect();
    format!("[{}]", parts.join(", "))
}
