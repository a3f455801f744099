use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::commands::{Outcome, Table};
use crate::{Cli, Format};

pub fn emit(cli: &Cli, outcome: &Outcome) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Json => write_json(&mut out, cli, outcome)?,
        Format::Csv => write_csv(&mut out, outcome)?,
        Format::Text => write_text(&mut out, outcome)?,
    }
    out.flush()
}

fn write_json(out: &mut dyn Write, cli: &Cli, outcome: &Outcome) -> io::Result<()> {
    let mut doc = Map::new();
    doc.insert("command".into(), Value::from(outcome.command));
    doc.insert("seed".into(), Value::from(cli.seed));
    if !cli.reproducible {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        doc.insert("timestamp".into(), Value::from(secs));
    }
    doc.extend(outcome.report.clone());
    serde_json::to_writer_pretty(&mut *out, &Value::Object(doc))?;
    writeln!(out)
}

/// Nested objects become dotted keys, arrays become indexed keys.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn scalar_fields(outcome: &Outcome) -> Vec<(String, String)> {
    let mut fields = Vec::new();
    for (k, v) in &outcome.report {
        // the table carries these
        if outcome.table.is_some() && (k == "rows" || k == "witnesses") {
            continue;
        }
        flatten(k, v, &mut fields);
    }
    fields
}

fn write_csv(out: &mut dyn Write, outcome: &Outcome) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    match &outcome.table {
        Some(Table { headers, rows }) => {
            w.write_record(headers)?;
            for row in rows {
                w.write_record(row)?;
            }
        }
        None => {
            w.write_record(["field", "value"])?;
            for (k, v) in scalar_fields(outcome) {
                w.write_record([k, v])?;
            }
        }
    }
    w.flush()
}

fn write_text(out: &mut dyn Write, outcome: &Outcome) -> io::Result<()> {
    for (k, v) in scalar_fields(outcome) {
        writeln!(out, "{k}: {v}")?;
    }
    if let Some(Table { headers, rows }) = &outcome.table {
        writeln!(out)?;
        writeln!(out, "{}", headers.join(" | "))?;
        for row in rows {
            writeln!(out, "{}", row.join(" | "))?;
        }
    }
    Ok(())
}
