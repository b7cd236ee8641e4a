//! Output files. CSV files open with `# ` comment lines naming the tool
//! version, the command, the seed and the fully resolved config; JSON files
//! carry the same under top-level keys next to `data`.

use std::io::Write;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "ps-rydberg";
pub const CONFIG_PREFIX: &str = "# config: ";

/// Provenance shared by every output file. The echoed config omits the
/// output path so a rerun into another file reproduces it byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct Header<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub config: RunConfig,
}

impl<'a> Header<'a> {
    pub fn new(command: &'a str, config: &RunConfig) -> Self {
        let mut config = config.clone();
        config.output.path = None;
        Header { tool: TOOL, version: env!("CARGO_PKG_VERSION"), command, seed: config.simulation.seed, config }
    }

    fn write_csv_comments(&self, w: &mut dyn Write) -> Result<()> {
        writeln!(w, "# {} {}", self.tool, self.version)?;
        writeln!(w, "# command: {}", self.command)?;
        writeln!(w, "# seed: {}", self.seed)?;
        writeln!(w, "{}{}", CONFIG_PREFIX, self.config.to_json())?;
        Ok(())
    }
}

/// A table of numbers with fixed column names plus free-form notes that go
/// into the CSV preamble or the JSON `notes` object.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<(String, serde_json::Value)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.9e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table { columns: columns.iter().map(|c| c.as_ref().to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.notes.push((key.to_string(), serde_json::to_value(value).expect("note serializes")));
    }

    pub fn write(&self, header: &Header<'_>, format: Format, w: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(header, w),
            Format::Json => self.write_json(header, w),
        }
    }

    fn write_csv(&self, header: &Header<'_>, w: &mut dyn Write) -> Result<()> {
        header.write_csv_comments(w)?;
        for (k, v) in &self.notes {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, header: &Header<'_>, w: &mut dyn Write) -> Result<()> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.clone(), serde_json::to_value(v).expect("cell serializes")))
                    .collect()
            })
            .collect();
        let notes: serde_json::Map<String, serde_json::Value> = self.notes.iter().cloned().collect();
        let doc = serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "tool": header.tool,
            "version": header.version,
            "command": header.command,
            "seed": header.seed,
            "config": header.config,
            "notes": notes,
            "columns": self.columns,
            "data": rows,
        });
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["n", "x", "flag"]);
        t.push(vec![3u32.into(), 0.5.into(), true.into()]);
        t.note("marker", 17);
        t
    }

    #[test]
    fn csv_header_embeds_config() {
        let cfg = RunConfig::default();
        let mut buf = Vec::new();
        sample().write(&Header::new("test", &cfg), Format::Csv, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let line = s.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX)).unwrap();
        assert_eq!(RunConfig::from_json(line).unwrap(), cfg);
        assert!(s.contains("n,x,flag\n3,5.000000000e-1,true\n"));
        assert!(s.contains("# marker: 17"));
    }

    #[test]
    fn json_document_is_versioned() {
        let cfg = RunConfig::default();
        let mut buf = Vec::new();
        sample().write(&Header::new("test", &cfg), Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["data"][0]["n"], 3);
        assert_eq!(v["notes"]["marker"], 17);
    }
}
