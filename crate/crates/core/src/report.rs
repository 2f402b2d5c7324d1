//! Tabular report rows and their text encodings.
//!
//! Every command produces a list of [`ReportRow`]s. The json-lines encoding
//! writes one object per line; the csv encoding uses a header row with the
//! same field names and joins list fields with `;`. Numbers use the shortest
//! round-trip representation.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const FIELDS: [&str; 6] = ["id", "kind", "inputs", "values", "margins", "pass"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Human,
    JsonLines,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "human" => Ok(OutputFormat::Human),
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parameter(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub kind: String,
    /// `key=value` pairs joined by `;`.
    pub inputs: String,
    pub values: Vec<f64>,
    pub margins: Vec<f64>,
    pub pass: Option<bool>,
}

impl ReportRow {
    pub fn new(id: impl Into<String>, kind: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: kind.into(),
            inputs: String::new(),
            values: Vec::new(),
            margins: Vec::new(),
            pass: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        if !self.inputs.is_empty() {
            self.inputs.push(';');
        }
        let _ = write!(self.inputs, "{key}={value}");
        self
    }

    pub fn values(mut self, values: impl IntoIterator<Item = f64>) -> Self {
        self.values.extend(values);
        self
    }

    pub fn margins(mut self, margins: impl IntoIterator<Item = f64>) -> Self {
        self.margins.extend(margins);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }
}

/// Shortest round-trip text, switching to exponent form outside `[1e-5, 1e16)`.
pub fn number(x: f64) -> String {
    let magnitude = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&magnitude) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| number(v)).collect::<Vec<_>>().join(";")
}

fn split(field: &str) -> io::Result<Vec<f64>> {
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|v| v.parse().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e)))
        .collect()
}

fn pass_text(pass: Option<bool>) -> &'static str {
    match pass {
        Some(true) => "true",
        Some(false) => "false",
        None => "",
    }
}

pub fn write_rows<W: Write>(rows: &[ReportRow], format: OutputFormat, mut out: W) -> io::Result<()> {
    match format {
        OutputFormat::Human => {
            for row in rows {
                let mut line = format!("{:<28} {:<20}", row.id, row.kind);
                if !row.inputs.is_empty() {
                    let _ = write!(line, " {}", row.inputs);
                }
                if !row.values.is_empty() {
                    let _ = write!(line, " values=[{}]", join(&row.values).replace(';', ", "));
                }
                if !row.margins.is_empty() {
                    let _ = write!(line, " margins=[{}]", join(&row.margins).replace(';', ", "));
                }
                if let Some(pass) = row.pass {
                    line.push_str(if pass { " PASS" } else { " FAIL" });
                }
                writeln!(out, "{}", line.trim_end())?;
            }
        }
        OutputFormat::JsonLines => {
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(FIELDS)?;
            for row in rows {
                w.write_record([
                    row.id.as_str(),
                    row.kind.as_str(),
                    row.inputs.as_str(),
                    &join(&row.values),
                    &join(&row.margins),
                    pass_text(row.pass),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_json_lines<R: BufRead>(input: R) -> io::Result<Vec<ReportRow>> {
    input
        .lines()
        .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|line| serde_json::from_str(&line?).map_err(io::Error::from))
        .collect()
}

pub fn read_csv<R: io::Read>(input: R) -> io::Result<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or_default();
        rows.push(ReportRow {
            id: field(0).to_string(),
            kind: field(1).to_string(),
            inputs: field(2).to_string(),
            values: split(field(3))?,
            margins: split(field(4))?,
            pass: match field(5) {
                "true" => Some(true),
                "false" => Some(false),
                _ => None,
            },
        });
    }
    Ok(rows)
}
