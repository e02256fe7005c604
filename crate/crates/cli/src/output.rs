//! Output formats, number rendering, and small JSON builders.
//!
//! Plain and CSV modes render floats with Rust's shortest round-trip
//! formatting; JSON mode renders them with 17 significant digits
//! (`{:.16e}`), which also round-trips every double exactly.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Plain,
}

impl OutputFormat {
    pub fn parse_env(value: &str) -> Option<OutputFormat> {
        match value.to_ascii_lowercase().as_str() {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            "plain" => Some(OutputFormat::Plain),
            _ => None,
        }
    }
}

/// A float as a JSON number with 17 significant digits.
pub fn jnum(x: f64) -> String {
    debug_assert!(x.is_finite(), "JSON output must stay finite");
    format!("{x:.16e}")
}

/// A float for plain/CSV output (shortest round-trip form).
pub fn fnum(x: f64) -> String {
    format!("{x}")
}

pub fn jstr(s: &str) -> String {
    // No emitted string needs escaping beyond quotes.
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn jarr<I: IntoIterator<Item = String>>(items: I) -> String {
    let mut out = String::from("[");
    for (i, item) in items.into_iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&item);
    }
    out.push(']');
    out
}

/// A one-level JSON object from pre-rendered values.
pub fn jobj(fields: &[(&str, String)]) -> String {
    let mut out = String::from("{");
    for (i, (key, value)) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}:{}", jstr(key), value);
    }
    out.push('}');
    out
}

pub fn jbool(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}
