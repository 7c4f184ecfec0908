use std::fmt::Write;

use crate::contact::ContactVerdict;
use crate::error::{Error, Result};
use crate::groups::{AxiomReport, Configuration, Element, Transformation, Verdict};
use crate::projective::Scalar;

/// Seventeen significant digits, with an imaginary part only when nonzero.
/// Negative zero prints as zero.
pub fn format_scalar(z: Scalar) -> String {
    let z = Scalar::new(z.re + 0.0, z.im + 0.0);
    if z.im == 0.0 {
        format!("{:.16e}", z.re)
    } else {
        format!("{:.16e}{:+.16e}i", z.re, z.im)
    }
}

fn format_vector<'a>(v: impl IntoIterator<Item = &'a Scalar>) -> String {
    let parts: Vec<String> = v.into_iter().map(|z| format_scalar(*z)).collect();
    format!("({})", parts.join(" : "))
}

fn format_element(e: &Element) -> String {
    match e {
        Element::Point(p) => format!("point {}", format_vector(p.coords().iter())),
        Element::Hyperplane(h) => format!("hyperplane {}", format_vector(h.coeffs().iter())),
        Element::Quadric(q) => {
            let rows: Vec<String> = q.matrix().row_iter().map(|r| format_vector(r.iter())).collect();
            format!("quadric [{}]", rows.join(", "))
        }
    }
}

fn format_configuration(c: &Configuration, out: &mut String) {
    for (k, e) in c.iter().enumerate() {
        let _ = writeln!(out, "  element {k}: {}", format_element(e));
    }
}

fn format_transformation(t: &Transformation, out: &mut String) {
    if let Transformation::Contact(c) = t {
        let _ = writeln!(out, "  transformation: contact map {}", c.name);
        return;
    }
    let Some(a) = t.linear_action() else { return };
    let conj = if a.conjugating { " (acting on conjugates)" } else { "" };
    let _ = writeln!(out, "  transformation: {}{conj}", t.kind());
    for r in a.matrix.row_iter() {
        let _ = writeln!(out, "    {}", format_vector(r.iter()));
    }
}

/// The machine-readable last line of a report:
/// `RESULT: <verdict> key=value ...` with keys in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trailer {
    pub verdict: String,
    pub fields: Vec<(String, String)>,
}

impl Trailer {
    pub fn new(verdict: &str) -> Self {
        Self { verdict: verdict.to_string(), fields: Vec::new() }
    }

    pub fn field(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn trials(&self) -> Option<usize> {
        self.get("trials")?.parse().ok()
    }

    pub fn tolerance(&self) -> Option<f64> {
        self.get("tol")?.parse().ok()
    }

    pub fn witness_seed(&self) -> Option<u64> {
        self.get("witness_seed")?.parse().ok()
    }

    pub fn line(&self) -> String {
        let mut s = format!("RESULT: {}", self.verdict);
        for (k, v) in &self.fields {
            let _ = write!(s, " {k}={v}");
        }
        s
    }
}

/// Recovers the trailer from a serialized report.
pub fn parse_trailer(text: &str) -> Result<Trailer> {
    let (idx, line) = text
        .lines()
        .enumerate()
        .filter(|(_, l)| l.starts_with("RESULT:"))
        .last()
        .ok_or(Error::Parse { line: 0, message: "no RESULT: line".into() })?;
    let mut words = line["RESULT:".len()..].split_whitespace();
    let verdict = words.next().ok_or(Error::Parse { line: idx + 1, message: "missing verdict".into() })?;
    let mut t = Trailer::new(verdict);
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: idx + 1, message: format!("expected key=value, got `{w}`") })?;
        t.fields.push((k.to_string(), v.to_string()));
    }
    Ok(t)
}

/// Something that can be written as a report.
pub trait Report {
    /// Human-readable lines.
    fn body(&self) -> String;
    fn trailer(&self) -> Trailer;
}

/// The body followed by the `RESULT:` line.
pub fn serialize_report(r: &dyn Report) -> String {
    let mut s = r.body();
    s.push_str(&r.trailer().line());
    s.push('\n');
    s
}

impl Report for Verdict {
    fn body(&self) -> String {
        let mut s = String::new();
        match self {
            Verdict::Invariant { trials, skipped, tolerance } => {
                let _ =
                    writeln!(s, "no counterexample in {trials} trials ({skipped} skipped) at tolerance {tolerance:e}");
                let _ = writeln!(s, "this is a statistical verdict, not a proof");
            }
            Verdict::Violated(w) => {
                let _ = writeln!(s, "counterexample at trial {} (seed {})", w.trial, w.seed);
                format_configuration(&w.config, &mut s);
                format_transformation(&w.transformation, &mut s);
                let _ = writeln!(s, "  before: {}", w.before);
                let _ = writeln!(s, "  after: {}", w.after);
            }
        }
        s
    }

    fn trailer(&self) -> Trailer {
        match self {
            Verdict::Invariant { trials, tolerance, .. } => {
                Trailer::new("invariant").field("trials", trials).field("tol", format!("{tolerance:e}"))
            }
            Verdict::Violated(w) => Trailer::new("violated")
                .field("trials", w.trial + 1)
                .field("tol", format!("{:e}", w.tolerance))
                .field("witness_seed", w.seed),
        }
    }
}

impl Report for AxiomReport {
    fn body(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "group {}: {} trials from seed {}", self.group, self.trials, self.seed);
        for (label, list) in [
            ("closure", &self.closure_failures),
            ("inverse", &self.inverse_failures),
            ("identity", &self.identity_failures),
        ] {
            let _ = write!(s, "  {label} failures: {}", list.len());
            if let Some(first) = list.first() {
                let _ = write!(s, " (first seed {first})");
            }
            s.push('\n');
        }
        s
    }

    fn trailer(&self) -> Trailer {
        let t = Trailer::new(if self.passed() { "axioms-hold" } else { "axioms-fail" })
            .field("trials", self.trials)
            .field("tol", format!("{:e}", self.tolerance))
            .field("failures", self.total_failures());
        let first = [&self.closure_failures, &self.inverse_failures, &self.identity_failures]
            .into_iter()
            .find_map(|l| l.first().copied());
        match first {
            Some(seed) => t.field("witness_seed", seed),
            None => t,
        }
    }
}

impl Report for ContactVerdict {
    fn body(&self) -> String {
        let mut s = String::new();
        match self {
            ContactVerdict::Contact { samples, skipped, tolerance, max_residual, factor_range } => {
                let _ = writeln!(
                    s,
                    "contact form preserved on {samples} samples ({skipped} singular) at tolerance {tolerance:e}"
                );
                let _ = writeln!(s, "  max alignment residual: {max_residual:.16e}");
                let _ = writeln!(s, "  factor range: [{:.16e}, {:.16e}]", factor_range.0, factor_range.1);
            }
            ContactVerdict::NotContact(w) => {
                let _ = writeln!(s, "contact form not preserved at sample {} (seed {})", w.sample, w.seed);
                let coords: Vec<String> = w.element.iter().map(|x| format!("{x:.16e}")).collect();
                let _ = writeln!(s, "  element: ({})", coords.join(", "));
                let _ = writeln!(s, "  alignment residual: {:.16e}", w.residual);
            }
        }
        s
    }

    fn trailer(&self) -> Trailer {
        match self {
            ContactVerdict::Contact { samples, tolerance, .. } => {
                Trailer::new("contact").field("trials", samples).field("tol", format!("{tolerance:e}"))
            }
            ContactVerdict::NotContact(w) => Trailer::new("not-contact")
                .field("trials", w.sample + 1)
                .field("tol", format!("{:e}", w.tolerance))
                .field("witness_seed", w.seed),
        }
    }
}
