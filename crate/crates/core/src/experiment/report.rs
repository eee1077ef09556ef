use std::path::Path;

use crate::error::{Error, Result};

pub const REPORT_HEADER: [&str; 5] = ["protocol", "cell", "mean_error_pct", "std_error_pct", "mean_runtime_s"];

/// One aggregated cell of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub protocol: String,
    pub cell: String,
    /// `None` when no repetition had a scorable pair.
    pub mean_error: Option<f64>,
    pub std_error: Option<f64>,
    /// Mean wall-clock seconds per matched pair; `None` unless timing is on.
    pub runtime: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ReportTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(REPORT_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.protocol.clone(),
                r.cell.clone(),
                opt(r.mean_error),
                opt(r.std_error),
                opt(r.runtime),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| parse_err(&e))?.clone();
        if header.iter().collect::<Vec<_>>() != REPORT_HEADER {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header `{}`", REPORT_HEADER.join(",")),
            });
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| parse_err(&e))?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            let num = |i: usize| -> Result<Option<f64>> {
                if rec[i].is_empty() {
                    return Ok(None);
                }
                rec[i].parse().map(Some).map_err(|_| Error::Parse {
                    line,
                    message: format!("bad number `{}`", &rec[i]),
                })
            };
            rows.push(ReportRow {
                protocol: rec[0].to_string(),
                cell: rec[1].to_string(),
                mean_error: num(2)?,
                std_error: num(3)?,
                runtime: num(4)?,
            });
        }
        Ok(ReportTable { rows })
    }
}

fn parse_err(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map(|p| p.line() as usize).unwrap_or(0),
        message: e.to_string(),
    }
}

/// Writes the table as CSV for external plotting.
pub fn emit_plot_data(table: &ReportTable, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv()).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}
