//! Trace tables and their CSV/JSON serialization.

use std::io::{self, Read, Write};
use std::path::Path;

use catenary_core::integrator::{Termination, Trace, TraceStats};
use catenary_core::revolution::{clairaut_constant, embed_revolution};
use catenary_core::{CatenaryState, SurfaceSpec};
use serde::Serialize;

pub const BASE_COLUMNS: [&str; 6] = ["s", "u", "v", "phi", "kappa", "residual"];

/// Columns and rows of an emitted trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Builds the table: the base columns, `clairaut_c` on rotationally
/// symmetric metrics, `x,y,z` when `embed` is set and every sample embeds.
pub fn trace_table(trace: &Trace, spec: &SurfaceSpec, alpha: f64, embed: bool) -> Table {
    let mut columns: Vec<String> = BASE_COLUMNS.iter().map(|c| c.to_string()).collect();
    let mut rows: Vec<Vec<f64>> = trace
        .samples
        .iter()
        .map(|s| vec![s.s, s.u, s.v, s.phi, s.kappa, s.residual])
        .collect();

    if spec.is_rotational() {
        let cs: Option<Vec<f64>> = trace
            .samples
            .iter()
            .map(|s| {
                clairaut_constant(
                    spec,
                    alpha,
                    &CatenaryState {
                        u: s.u,
                        v: s.v,
                        phi: s.phi,
                        s: s.s,
                    },
                )
                .ok()
            })
            .collect();
        if let Some(cs) = cs {
            columns.push("clairaut_c".into());
            for (row, c) in rows.iter_mut().zip(cs) {
                row.push(c);
            }
        }
    }

    if embed {
        let points: Result<Vec<[f64; 3]>, _> = trace.samples.iter().map(|s| embed_revolution(spec, s.u, s.v)).collect();
        match points {
            Ok(points) => {
                columns.extend(["x", "y", "z"].map(String::from));
                for (row, p) in rows.iter_mut().zip(points) {
                    row.extend(p);
                }
            }
            Err(e) => log::warn!("embedding columns omitted: {e}"),
        }
    }
    Table { columns, rows }
}

/// 17 significant digits, enough to round-trip every finite `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&x| format_float(x)))?;
    }
    w.flush()
}

pub fn read_csv<R: Read>(input: R) -> io::Result<Table> {
    let mut r = csv::Reader::from_reader(input);
    let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
            })
            .collect::<io::Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

#[derive(Serialize)]
struct JsonTrace<'a> {
    surface: String,
    alpha: f64,
    termination: Termination,
    vertical_tangent: bool,
    stats: TraceStats,
    columns: &'a [String],
    samples: Vec<serde_json::Map<String, serde_json::Value>>,
}

pub fn trace_json(trace: &Trace, spec: &SurfaceSpec, alpha: f64, table: &Table) -> serde_json::Value {
    let samples = table
        .rows
        .iter()
        .map(|row| {
            table
                .columns
                .iter()
                .zip(row)
                .map(|(c, &x)| (c.clone(), serde_json::json!(x)))
                .collect()
        })
        .collect();
    let doc = JsonTrace {
        surface: spec.name(),
        alpha,
        termination: trace.termination,
        vertical_tangent: trace.vertical_tangent,
        stats: trace.stats,
        columns: &table.columns,
        samples,
    };
    serde_json::to_value(doc).expect("trace serializes")
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
