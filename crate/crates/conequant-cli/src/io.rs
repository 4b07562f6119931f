//! CSV ingestion and atomic output.

use std::io::Write;
use std::path::Path;

use conequant::{DataSet, Vec2};

use crate::error::CliError;

fn parse_row(line: &str) -> Result<Vec2, String> {
    let mut fields = line.split(',');
    let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err("expected two comma-separated values".into());
    };
    let x: f64 = xs
        .trim()
        .parse()
        .map_err(|_| format!("bad x value {:?}", xs.trim()))?;
    let y: f64 = ys
        .trim()
        .parse()
        .map_err(|_| format!("bad y value {:?}", ys.trim()))?;
    if !x.is_finite() || !y.is_finite() {
        return Err("coordinates must be finite".into());
    }
    Ok(Vec2::new(x, y))
}

/// Reads a two-column CSV of points. A single leading header row is allowed
/// and detected by a non-numeric first field; every other row must parse.
/// Points keep file order, which fixes tie-breaking downstream.
pub fn parse_csv(path: &Path) -> Result<DataSet, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut points = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match parse_row(line) {
            Ok(p) => points.push(p),
            Err(message) => {
                let first_field_numeric = line
                    .split(',')
                    .next()
                    .is_some_and(|f| f.trim().parse::<f64>().is_ok());
                if !seen_content && !first_field_numeric {
                    // header row
                } else {
                    return Err(CliError::Parse { line: idx + 1, message });
                }
            }
        }
        seen_content = true;
    }
    if points.is_empty() {
        return Err(CliError::EmptyFile);
    }
    Ok(DataSet::new(points)?)
}

/// Writes to stdout, or to `path` via a temporary file in the same directory
/// renamed into place, so a failed run never leaves partial output.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(content.as_bytes())?;
            tmp.persist(p).map_err(|e| CliError::Io(e.error))?;
            Ok(())
        }
    }
}
