//! CSV and plain-text table writing with fixed float formatting.

use std::path::Path;

use crate::error::{CliError, Result};

/// 17 significant digits, exponent notation: exact round trip for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let to_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Csv {
            path: path.to_path_buf(),
            row: 0,
            msg: format!("{other:?}"),
        },
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(to_err)?;
    w.write_record(header).map_err(to_err)?;
    for r in rows {
        w.write_record(r).map_err(to_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Whitespace-separated columns, one point per line.
pub fn write_dat(path: &Path, comment: &str, points: &[(f64, f64)]) -> Result<()> {
    let mut s = format!("# {comment}\n");
    for (x, y) in points {
        s.push_str(&fmt_f64(*x));
        s.push(' ');
        s.push_str(&fmt_f64(*y));
        s.push('\n');
    }
    std::fs::write(path, s).map_err(|e| CliError::io(path, e))
}

pub fn strings<I, S>(items: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}
