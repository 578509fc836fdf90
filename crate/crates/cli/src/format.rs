//! Deterministic number formatting and document assembly.

use serde_json::{Map, Value};

use crate::config::RunConfig;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest round-trip text of `round_sig(x)`: positional in
/// `[1e-5, 1e15)`, scientific outside.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x);
    let a = r.abs();
    if r == 0.0 {
        "0".into()
    } else if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// JSON value for a number; non-finite values become strings.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x))
        .map_or_else(|| Value::String(fmt_num(x)), Value::Number)
}

/// A single top-level JSON object carrying the command, the library version
/// and the config echo alongside `payload`.
pub fn json_document(command: &str, cfg: &RunConfig, payload: Map<String, Value>) -> String {
    let mut doc = Map::new();
    doc.insert("command".into(), Value::String(command.into()));
    doc.insert("version".into(), Value::String(cphi_core::VERSION.into()));
    doc.insert("config".into(), cfg.echo());
    doc.extend(payload);
    let mut text =
        serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// Comma-separated table with a header row and LF line endings.
#[derive(Debug, Default)]
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut t = Self::default();
        t.push_line(&header.join(","));
        t
    }

    pub fn row<I: IntoIterator<Item = String>>(&mut self, cells: I) {
        let line = cells.into_iter().collect::<Vec<_>>().join(",");
        self.push_line(&line);
    }

    /// A `# key,value` trailer line.
    pub fn footer(&mut self, key: &str, value: &str) {
        self.push_line(&format!("# {key},{value}"));
    }

    fn push_line(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
