//! Rendering of command results as aligned tables, JSON or CSV.
//!
//! Every command produces one [`Report`]: a JSON value (the machine
//! contract, stamped with `"schema": 1`) plus the tables and notes shown to
//! people. JSON objects use sorted keys, so identical inputs give
//! byte-identical output.

use clap::ValueEnum;
use comfy_table::{presets, Table as Grid};
use serde_json::Value;

/// Version of the JSON layout.
pub const SCHEMA: u64 = 1;

/// Output format selected with `--format`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

/// A titled table of already-rendered cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            title: None,
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    /// Replaces the tables in `table` format (single values).
    pub plain: Option<String>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            tables: Vec::new(),
            notes: Vec::new(),
            plain: None,
        }
    }

    /// A single value: printed bare as a table, one column in CSV.
    pub fn scalar(json: Value, header: &str, value: String) -> Self {
        let mut t = Table::new(&[header]);
        t.push(vec![value.clone()]);
        Report {
            plain: Some(value),
            ..Report::new(json).with_table(t)
        }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => render_json(&self.json),
            Format::Csv => render_csv(&self.tables),
            Format::Table => match &self.plain {
                Some(v) => format!("{v}\n"),
                None => render_tables(&self.tables, &self.notes),
            },
        }
    }
}

/// Pretty JSON with `"schema": 1` added to the top-level object.
pub fn render_json(value: &Value) -> String {
    let stamped = match value {
        Value::Object(map) => {
            let mut map = map.clone();
            map.insert("schema".into(), Value::from(SCHEMA));
            Value::Object(map)
        }
        other => serde_json::json!({ "schema": SCHEMA, "data": other }),
    };
    let mut text = serde_json::to_string_pretty(&stamped).expect("JSON values always serialize");
    text.push('\n');
    text
}

/// RFC-4180 CSV. One table is written as is; several tables sharing a
/// header get a leading `table` column; tables with different headers are
/// written in long form `table,row,column,value`.
pub fn render_csv(tables: &[Table]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let title = |t: &Table| t.title.clone().unwrap_or_default();
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: Vec<String>| w.write_record(rec).expect("in-memory CSV write");
    match tables {
        [] => {}
        [only] => {
            write(&mut w, only.headers.clone());
            for row in &only.rows {
                write(&mut w, row.clone());
            }
        }
        [first, rest @ ..] if rest.iter().all(|t| t.headers == first.headers) => {
            write(&mut w, std::iter::once("table".to_string()).chain(first.headers.clone()).collect());
            for t in tables {
                for row in &t.rows {
                    write(&mut w, std::iter::once(title(t)).chain(row.clone()).collect());
                }
            }
        }
        _ => {
            write(&mut w, ["table", "row", "column", "value"].map(String::from).to_vec());
            for t in tables {
                for (i, row) in t.rows.iter().enumerate() {
                    for (h, cell) in t.headers.iter().zip(row) {
                        write(&mut w, vec![title(t), (i + 1).to_string(), h.clone(), cell.clone()]);
                    }
                }
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory CSV flush")).expect("CSV input is UTF-8")
}

/// Aligned plain-text tables followed by the notes.
pub fn render_tables(tables: &[Table], notes: &[String]) -> String {
    let mut out = String::new();
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        if let Some(title) = &t.title {
            out.push_str(title);
            out.push('\n');
        }
        let mut grid = Grid::new();
        grid.load_preset(presets::ASCII_BORDERS_ONLY_CONDENSED);
        grid.set_header(t.headers.clone());
        for row in &t.rows {
            grid.add_row(row.clone());
        }
        out.push_str(&grid.to_string());
        out.push('\n');
    }
    if !tables.is_empty() && !notes.is_empty() {
        out.push('\n');
    }
    for n in notes {
        out.push_str(n);
        out.push('\n');
    }
    out
}

/// `(a,b,c)`.
pub fn tuple<T: ToString>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}
