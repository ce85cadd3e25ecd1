//! Result tables and their CSV / JSON renderings.

use serde_json::{json, Map, Value as Json};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Num(f64),
    Bool(bool),
    Int(u64),
    /// Not applicable for this row.
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub key: String,
    /// Unit or log base shown in the CSV header; empty for dimensionless values.
    pub unit: String,
    /// Serialized with an `<key>_infinite` companion flag in JSON.
    pub may_be_infinite: bool,
}

impl Column {
    pub fn new(key: &str, unit: &str) -> Self {
        Self { key: key.into(), unit: unit.into(), may_be_infinite: false }
    }

    pub fn unbounded(key: &str, unit: &str) -> Self {
        Self { may_be_infinite: true, ..Self::new(key, unit) }
    }

    fn header(&self) -> String {
        if self.unit.is_empty() {
            self.key.clone()
        } else {
            format!("{} [{}]", self.key, self.unit)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    pub log_base: Option<&'static str>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Input(format!("--format must be csv or json, got {text:?}"))),
        }
    }
}

/// `%.12g`: twelve significant digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl Table {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json()).expect("tables serialize") + "\n"),
        }
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Input(format!("csv output: {e}"));
        w.write_record(self.columns.iter().map(Column::header)).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| match v {
                Value::Num(x) => format_number(*x),
                Value::Bool(b) => b.to_string(),
                Value::Int(i) => i.to_string(),
                Value::Missing => String::new(),
            }))
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Json {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, v) in self.columns.iter().zip(row) {
                    let value = match v {
                        Value::Num(x) if x.is_finite() => {
                            json!(format_number(*x).parse::<f64>().expect("formatted numbers parse"))
                        }
                        Value::Num(_) | Value::Missing => Json::Null,
                        Value::Bool(b) => json!(b),
                        Value::Int(i) => json!(i),
                    };
                    obj.insert(col.key.clone(), value);
                    if col.may_be_infinite {
                        let inf = matches!(v, Value::Num(x) if x.is_infinite());
                        obj.insert(format!("{}_infinite", col.key), json!(inf));
                    }
                }
                Json::Object(obj)
            })
            .collect();
        json!({
            "command": self.command,
            "log_base": self.log_base,
            "columns": self.columns.iter().map(|c| json!({"key": c.key, "unit": c.unit})).collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}
