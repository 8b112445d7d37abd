use std::io::{BufRead, Write};

use serde::Serialize;

use crate::{Error, Result};

const HEADER: &str = "# scenario: ";

/// Writes `# scenario: <json>` followed by one value per line. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_dump<W: Write, S: Serialize>(mut w: W, scenario: &S, values: &[f64]) -> Result<()> {
    let json = serde_json::to_string(scenario).map_err(|e| Error::Format(e.to_string()))?;
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(w, "{HEADER}{json}").map_err(io)?;
    for v in values {
        writeln!(w, "{v}").map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn read_dump<R: BufRead>(r: R) -> Result<(serde_json::Value, Vec<f64>)> {
    let mut lines = r.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Format("empty dump".into()))?
        .map_err(|e| Error::Io(e.to_string()))?;
    let json = first
        .strip_prefix(HEADER)
        .ok_or_else(|| Error::Format(format!("missing '{}' header", HEADER.trim_end())))?;
    let scenario = serde_json::from_str(json).map_err(|e| Error::Format(e.to_string()))?;
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let v = line
            .trim()
            .parse::<f64>()
            .map_err(|e| Error::Format(format!("line {}: {e}", i + 2)))?;
        values.push(v);
    }
    Ok((scenario, values))
}
