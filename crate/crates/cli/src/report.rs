use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

use seqspace::attain::AttainmentReport;
use seqspace::norms::AxiomReport;
use seqspace::spaceability::{AvoidanceReport, CatalogEntry, EmbeddingReport, WitnessCertificate};

use crate::args::{CommandKind, Format, RunArgs};

#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    #[serde(flatten)]
    pub args: RunArgs,
}

#[derive(Debug, Serialize)]
pub struct BasisRecord {
    pub space: String,
    pub avoid: String,
    pub m: usize,
    /// First index of each block, where `x_1` sits.
    pub first_indices: Vec<u64>,
    pub independent: bool,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Unavailable {
    pub space: String,
    pub avoid: String,
    pub reason: String,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum Record {
    Basis(BasisRecord),
    Embedding(EmbeddingReport),
    Avoidance(AvoidanceReport),
    Witness(WitnessCertificate),
    Axioms(AxiomReport),
    Catalog(CatalogEntry),
    Attainment(AttainmentReport),
    Unavailable(Unavailable),
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: Vec<Record>,
    pub pass: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => self.csv(),
        }
    }

    /// One row per leaf field: `record, check, field, value`, with nested
    /// fields joined by dots and list positions as indices. Record 0 holds
    /// the configuration and the overall verdict.
    fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["record", "check", "field", "value"])?;
        let mut rows = Vec::new();
        flatten("config", &serde_json::to_value(&self.config)?, &mut rows);
        rows.push(("pass".to_string(), self.pass.to_string()));
        for (field, value) in rows {
            w.write_record(["0", "report", &field, &value])?;
        }
        for (i, rec) in self.results.iter().enumerate() {
            let v = serde_json::to_value(rec)?;
            let check = v
                .get("check")
                .and_then(Value::as_str)
                .unwrap_or("")
                .to_string();
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            for (field, value) in rows.into_iter().filter(|(f, _)| f != "check") {
                w.write_record([(i + 1).to_string(), check.clone(), field, value])?;
            }
        }
        w.flush()?;
        Ok(w.into_inner()?)
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), String::new())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn emit(bytes: &[u8], out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}
