//! Text, CSV and JSON rendering of tabular reports.

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    /// Six significant digits.
    Short,
    /// Shortest representation that round-trips.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(Option<f64>),
    Int(u64),
    Flag(Option<bool>),
}

impl Cell {
    pub fn num(x: f64) -> Cell {
        Cell::Num(Some(x))
    }

    fn text(&self, precision: Precision) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(Some(x)) => format_number(*x, precision),
            Cell::Num(None) | Cell::Flag(None) => "-".to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Flag(Some(true)) => "yes".to_string(),
            Cell::Flag(Some(false)) => "no".to_string(),
        }
    }

    fn csv(&self, precision: Precision) -> String {
        match self {
            Cell::Num(None) | Cell::Flag(None) => String::new(),
            Cell::Flag(Some(b)) => b.to_string(),
            other => other.text(precision),
        }
    }

    fn json(&self, precision: Precision) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(Some(x)) => json_number(*x, precision),
            Cell::Num(None) | Cell::Flag(None) => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Flag(Some(b)) => Value::Bool(*b),
        }
    }
}

pub fn format_number(x: f64, precision: Precision) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        }
        .to_string();
    }
    if precision == Precision::Full {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // The exponent after rounding decides how many decimals keep six digits.
    let sci = format!("{x:.5e}");
    let exponent: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..6).contains(&exponent) {
        format!("{:.*}", (5 - exponent).max(0) as usize, x)
    } else {
        sci
    }
}

fn json_number(x: f64, precision: Precision) -> Value {
    let value = match precision {
        Precision::Full => x,
        Precision::Short => format_number(x, precision).parse().unwrap_or(x),
    };
    serde_json::Number::from_f64(value).map_or(Value::Null, Value::Number)
}

/// Header block, one table and trailing notes.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Report::default()
        }
    }

    pub fn meta(mut self, key: &str, value: Cell) -> Self {
        self.meta.push((key.to_string(), value));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat, precision: Precision) -> CliResult<String> {
        match format {
            OutputFormat::Text => Ok(self.text(precision)),
            OutputFormat::Csv => self.csv(precision),
            OutputFormat::Json => Ok(self.json(precision)),
        }
    }

    fn text(&self, precision: Precision) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            out.push_str(&format!("{key}: {}\n", value.text(precision)));
        }
        if !self.meta.is_empty() {
            out.push('\n');
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(|c| c.text(precision)).collect())
            .collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, name)| {
                cells
                    .iter()
                    .map(|row| row[i].len())
                    .chain([name.len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: Vec<&str>| {
            let padded: Vec<String> = fields
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (f, &w))| {
                    if i == 0 {
                        format!("{f:<w$}")
                    } else {
                        format!("{f:>w$}")
                    }
                })
                .collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(self.columns.iter().map(String::as_str).collect()));
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out
    }

    fn csv(&self, precision: Precision) -> CliResult<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::data("io_error", e.to_string());
        writer.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|c| c.csv(precision)))
                .map_err(fail)?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| CliError::data("io_error", e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    fn json(&self, precision: Precision) -> String {
        let mut root = Map::new();
        for (key, value) in &self.meta {
            root.insert(key.clone(), value.json(precision));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let object: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| (k.clone(), c.json(precision)))
                    .collect();
                Value::Object(object)
            })
            .collect();
        root.insert("rows".to_string(), Value::Array(rows));
        if !self.notes.is_empty() {
            root.insert("notes".to_string(), Value::from(self.notes.clone()));
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("valid json");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        let short = |x| format_number(x, Precision::Short);
        assert_eq!(short(2.782946123), "2.78295");
        assert_eq!(short(100.0), "100.000");
        assert_eq!(short(9.9999996), "10.0000");
        assert_eq!(short(0.000123456789), "0.000123457");
        assert_eq!(short(21953.129), "21953.1");
        assert_eq!(short(-1234567.0), "-1.23457e6");
        assert_eq!(short(997688.4), "997688");
        assert_eq!(short(1.5e20), "1.50000e20");
        assert_eq!(short(0.0), "0");
    }

    #[test]
    fn full_precision_round_trips() {
        let x = 0.1 + 0.2;
        assert_eq!(format_number(x, Precision::Full).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut report =
            Report::new(&["estimator", "mse", "k1"]).meta("label", Cell::Text("d".into()));
        report.push(vec![
            Cell::Text("ratio".into()),
            Cell::num(3.47243),
            Cell::Num(None),
        ]);
        let csv = report.render(OutputFormat::Csv, Precision::Short).unwrap();
        assert_eq!(csv, "estimator,mse,k1\nratio,3.47243,\n");
        let json: Value =
            serde_json::from_str(&report.render(OutputFormat::Json, Precision::Short).unwrap())
                .unwrap();
        assert_eq!(json["label"], "d");
        assert_eq!(json["rows"][0]["mse"], 3.47243);
        assert!(json["rows"][0]["k1"].is_null());
    }
}
