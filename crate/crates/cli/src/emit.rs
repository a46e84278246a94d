//! Serialization of result tables. Floats use the shortest representation
//! that parses back to the same `f64`.

use serde_json::{Map, Number, Value};

use crate::settings::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn text(self) -> String {
        match self {
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(self) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(n),
            Cell::Bool(b) => Value::Bool(b),
        }
    }
}

/// Rows under a fixed header, plus a note when a sweep stopped early.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub partial: Option<String>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            partial: None,
        }
    }

    /// The `input` column and `column`, for plotting.
    pub fn project(&self, column: &str) -> Result<Table, CliError> {
        let k = self
            .columns
            .iter()
            .position(|c| *c == column)
            .ok_or_else(|| {
                CliError::usage(format!(
                    "unknown plot column `{column}`; available: {}",
                    self.columns[1..].join(", ")
                ))
            })?;
        Ok(Table {
            columns: vec![self.columns[0], self.columns[k]],
            rows: self.rows.iter().map(|r| vec![r[0], r[k]]).collect(),
            partial: self.partial.clone(),
        })
    }
}

pub fn header(columns: &[&str]) -> String {
    columns.join(",")
}

pub fn render(table: &Table, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => render_csv(table, false),
        Format::Json => render_json(table),
    }
}

/// Gnuplot reads `#` lines as comments, so the header is commented out.
pub fn render_plot(table: &Table) -> Result<Vec<u8>, CliError> {
    render_csv(table, true)
}

fn render_csv(table: &Table, comment_header: bool) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    if comment_header {
        buf.extend_from_slice(format!("# {}\n", header(&table.columns)).as_bytes());
    }
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(&mut buf);
        let io = |e: csv::Error| CliError::numerical(format!("CSV serialization failed: {e}"));
        if !comment_header {
            w.write_record(&table.columns).map_err(io)?;
        }
        for row in &table.rows {
            w.write_record(row.iter().map(|c| c.text())).map_err(io)?;
        }
        w.flush()
            .map_err(|e| CliError::numerical(format!("CSV serialization failed: {e}")))?;
    }
    if let Some(note) = &table.partial {
        buf.extend_from_slice(
            format!("# partial output: {}\n", note.replace('\n', " ")).as_bytes(),
        );
    }
    Ok(buf)
}

fn render_json(table: &Table) -> Result<Vec<u8>, CliError> {
    let mut items: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    if let Some(note) = &table.partial {
        let mut obj = Map::new();
        obj.insert("partial".into(), Value::Bool(true));
        obj.insert("error".into(), Value::String(note.clone()));
        items.push(Value::Object(obj));
    }
    let mut text = serde_json::to_string_pretty(&Value::Array(items))
        .map_err(|e| CliError::numerical(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text.into_bytes())
}
