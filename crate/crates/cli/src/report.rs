//! Ordered key/value results with text, CSV and JSON renderers.
//!
//! All three formats carry the same numeric content: numbers are rounded
//! once (to the configured number of decimals) and the rounded value is
//! what every renderer prints, so machine output is byte-stable.

use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    items: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Report { items: Vec::new() }
    }

    pub fn num(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.items.push((key.into(), Value::Num(value)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.items.push((key.into(), Value::Text(value.into())));
        self
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Text => self.render_text(precision),
            Format::Csv => self.render_csv(precision),
            Format::Json => self.render_json(precision),
        }
    }

    fn render_text(&self, precision: usize) -> String {
        let width = self.items.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (key, value) in &self.items {
            let rendered = match value {
                Value::Num(x) => format_number(*x, precision),
                Value::Text(s) => s.clone(),
            };
            out.push_str(&format!("{key:<width$}  {rendered}\n"));
        }
        out
    }

    fn render_csv(&self, precision: usize) -> String {
        let mut out = String::from("key,value\n");
        for (key, value) in &self.items {
            let rendered = match value {
                Value::Num(x) => format_number(*x, precision),
                Value::Text(s) => csv_quote(s),
            };
            out.push_str(&format!("{},{}\n", csv_quote(key), rendered));
        }
        out
    }

    fn render_json(&self, precision: usize) -> String {
        let mut map = Map::new();
        for (key, value) in &self.items {
            let j = match value {
                Value::Num(x) => {
                    let rounded: f64 = format_number(*x, precision)
                        .parse()
                        .unwrap_or(f64::NAN);
                    Number::from_f64(rounded)
                        .map(Json::Number)
                        .unwrap_or_else(|| Json::String(format_number(*x, precision)))
                }
                Value::Text(s) => Json::String(s.clone()),
            };
            map.insert(key.clone(), j);
        }
        let mut s = serde_json::to_string_pretty(&Json::Object(map)).expect("serializable");
        s.push('\n');
        s
    }
}

/// Fixed-point rendering with `precision` significant fractional digits:
/// leading zeros in the fraction do not count toward the precision, so
/// small probabilities and rates keep their information (0.4849 and
/// 2.01012 both carry four significant decimals). Trailing zeros are
/// trimmed.
pub fn format_number(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    // collapse float noise and normalize -0
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    let fraction = x.abs().fract();
    let leading_zeros = if fraction > 0.0 {
        ((-fraction.log10()).ceil() as isize - 1).max(0) as usize
    } else {
        0
    };
    let decimals = (precision + leading_zeros).min(17);
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}
