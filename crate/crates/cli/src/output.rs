use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Formats a float with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Extra `#` lines emitted after the rows.
    pub notes: Vec<String>,
}

pub struct Report {
    pub config: Value,
    pub table: Table,
    pub result: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        let hash = config_hash(&self.config);
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&format!("# config-sha256: {hash}\n"));
                out.push_str(&format!("# config: {}\n", self.config));
                out.push_str(&self.table.header.join(","));
                out.push('\n');
                for row in &self.table.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                for note in &self.table.notes {
                    out.push_str(&format!("# {note}\n"));
                }
                out
            }
            Format::Json => {
                let doc = json!({
                    "config": self.config,
                    "config_sha256": hash,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("serializable report");
                s.push('\n');
                s
            }
        }
    }

    pub fn emit(&self, format: Format, out: Option<&PathBuf>) -> Result<()> {
        let text = self.render(format);
        match out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}
