//! Tables, the JSON envelope, and the CSV encoding.
//!
//! Every command builds a list of named [`Table`]s. The JSON and CSV writers
//! render the same cells, so both encodings carry the same numbers: floats
//! are rounded to the requested significant digits once, and that rounded
//! value is what both formats print.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use w1simplex::exact_math::to_fraction_string;
use w1simplex::num_bigint::BigInt;
use w1simplex::Rational;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Exact(Rational),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn int(v: impl Into<BigInt>) -> Self {
        Cell::Int(v.into())
    }

    pub fn text(v: impl Into<String>) -> Self {
        Cell::Text(v.into())
    }

    fn render(&self, digits: usize) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(v) => to_fraction_string(v),
            Cell::Float(v) => format_significant(*v, digits),
            Cell::Text(v) => v.clone(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn to_json(&self, digits: usize) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(v) {
                Ok(small) => Value::from(small),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Exact(v) => Value::String(to_fraction_string(v)),
            Cell::Float(v) => format_significant(*v, digits)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Text(v) => Value::String(v.clone()),
            Cell::Bool(v) => Value::Bool(*v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(name: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    fn to_json(&self, digits: usize) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), v.to_json(digits)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

/// What a command produced, before encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn envelope(&self, digits: usize) -> Envelope {
        let results = self
            .tables
            .iter()
            .map(|t| (t.name.clone(), t.to_json(digits)))
            .collect();
        Envelope {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            format_version: FORMAT_VERSION,
            results: Value::Object(results),
        }
    }

    pub fn write_json<W: Write>(&self, out: &mut W, digits: usize) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.envelope(digits))?;
        writeln!(out)
    }

    /// One CSV block per table, each with its own header row, separated by
    /// a blank line. Single-table commands produce a plain CSV file.
    pub fn write_csv<W: Write>(&self, out: &mut W, digits: usize) -> std::io::Result<()> {
        for (i, table) in self.tables.iter().enumerate() {
            if i > 0 {
                writeln!(out)?;
            }
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&table.columns)?;
            for row in &table.rows {
                w.write_record(row.iter().map(|c| c.render(digits)))?;
            }
            w.flush()?;
        }
        Ok(())
    }
}

/// The JSON document every command emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub format_version: u32,
    pub results: Value,
}

/// Rounds to `digits` significant digits and prints positionally, keeping
/// trailing zeros (`0.6000`, `1.056`, `0.008107`). Very small or very large
/// magnitudes fall back to scientific notation.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("rust float exponent");
    if !(-6..16).contains(&exp) {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use w1simplex::exact_math::ratio;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.923_523, 4), "0.9235");
        assert_eq!(format_significant(1.055_56, 4), "1.056");
        assert_eq!(format_significant(0.6, 4), "0.6000");
        assert_eq!(format_significant(0.008_107_2, 4), "0.008107");
        assert_eq!(format_significant(0.999_96, 4), "1.000");
        assert_eq!(format_significant(12_345.6, 4), "12346");
        assert_eq!(format_significant(0.0, 3), "0.00");
        assert_eq!(format_significant(-0.055_555, 4), "-0.05556");
        assert_eq!(format_significant(1.5e-9, 2), "1.5e-9");
    }

    fn sample() -> Report {
        let mut t = Table::new("rows", &["n", "exact", "float", "ok"]);
        t.push(vec![
            Cell::int(2),
            Cell::Exact(ratio(1, 3)),
            Cell::Float(1.0 / 3.0),
            Cell::Bool(true),
        ]);
        let mut params = Map::new();
        params.insert("n".into(), Value::from(2));
        Report {
            command: "demo".into(),
            parameters: params,
            tables: vec![t],
        }
    }

    #[test]
    fn envelope_round_trips() {
        let env = sample().envelope(4);
        let text = serde_json::to_string(&env).unwrap();
        let back: Envelope = serde_json::from_str(&text).unwrap();
        assert_eq!(back, env);
        assert_eq!(env.results["rows"][0]["exact"], "1/3");
        assert_eq!(env.results["rows"][0]["float"], 0.3333);
    }

    #[test]
    fn csv_has_header_and_same_cells() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,exact,float,ok\n2,1/3,0.3333,true\n");
    }

    #[test]
    fn huge_integers_stay_exact_in_json() {
        let big = BigInt::from(10).pow(30);
        assert_eq!(
            Cell::Int(big.clone()).to_json(4),
            Value::String(big.to_string())
        );
    }
}
