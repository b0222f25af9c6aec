//! CSV rendering: `#` manifest header, then a header row and data rows with
//! numbers at nine significant digits.

use std::fmt::Write as _;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `printf("%.9g")`: shortest of fixed or scientific notation at nine
/// significant digits, trailing zeros removed.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, SIGNIFICANT_DIGITS)
}

pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Provenance lines written before the CSV header.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Option<String>,
    pub output: Option<String>,
    pub grid: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            subcommand: subcommand.into(),
            ..Default::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.grid.push((key.into(), value.to_string()));
        self
    }

    /// The timestamp comes from `SOURCE_DATE_EPOCH` and is omitted when the
    /// variable is unset, so identical invocations give identical bytes.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool: brc {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(out, "# subcommand: {}", self.subcommand);
        let _ = writeln!(out, "# config: {}", self.config.as_deref().unwrap_or("-"));
        let _ = writeln!(
            out,
            "# output: {}",
            self.output.as_deref().unwrap_or("stdout")
        );
        for (k, v) in &self.grid {
            let _ = writeln!(out, "# {k}: {v}");
        }
        if let Ok(ts) = std::env::var("SOURCE_DATE_EPOCH") {
            let _ = writeln!(out, "# timestamp: {ts}");
        }
        out
    }
}

/// Accumulates a CSV table below a manifest.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(manifest: &RunManifest, columns: &[&str]) -> Self {
        let mut text = manifest.render();
        text.push_str(&columns.join(","));
        text.push('\n');
        Table { text }
    }

    pub fn row(&mut self, cells: &[Cell]) {
        let rendered: Vec<String> = cells.iter().map(Cell::render).collect();
        self.text.push_str(&rendered.join(","));
        self.text.push('\n');
    }

    pub fn comment(&mut self, line: &str) {
        self.text.push_str("# ");
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_g(*x),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}
