//! Artifact writers.  Both formats are deterministic: the same records and
//! summary always produce byte-identical files, so artifacts can be diffed
//! across machines and stored as golden files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::experiment::{ExperimentSummary, TrajectoryRecord};
use crate::HarnessError;

/// Exact CSV header, one column per [`TrajectoryRecord`] field.
pub const CSV_HEADER: &str = "n,t,l2,h1,kinetic_TK,energy_HK,h1_lower_bound,membership_defect";

/// `{:.16e}` keeps all 17 significant digits a double can need, so the CSV
/// round-trips exactly through `str::parse::<f64>`.
fn cell(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// Write the trajectory table.  Header always present, even for zero rows;
/// inapplicable cells are empty, never `0` or `NaN`.
pub fn write_csv<W: Write>(records: &[TrajectoryRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n,
            cell(r.t),
            cell(r.l2),
            cell(r.h1),
            cell(r.kinetic_tk),
            cell(r.energy_hk),
            optional_cell(r.h1_lower_bound),
            optional_cell(r.membership_defect),
        )?;
    }
    Ok(())
}

/// Parse a file produced by [`write_csv`] back into records.
pub fn read_csv(text: &str) -> Result<Vec<TrajectoryRecord>, HarnessError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(CSV_HEADER) => {}
        other => {
            return Err(HarnessError::Format(format!(
                "bad CSV header: expected {CSV_HEADER:?}, got {other:?}"
            )))
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(HarnessError::Format(format!(
                "row {}: expected 8 fields, got {}",
                i + 1,
                fields.len()
            )));
        }
        let number = |s: &str| -> Result<f64, HarnessError> {
            s.parse()
                .map_err(|e| HarnessError::Format(format!("row {}: {e}: {s:?}", i + 1)))
        };
        let optional = |s: &str| -> Result<Option<f64>, HarnessError> {
            if s.is_empty() { Ok(None) } else { number(s).map(Some) }
        };
        records.push(TrajectoryRecord {
            n: fields[0]
                .parse()
                .map_err(|e| HarnessError::Format(format!("row {}: {e}: {:?}", i + 1, fields[0])))?,
            t: number(fields[1])?,
            l2: number(fields[2])?,
            h1: number(fields[3])?,
            kinetic_tk: number(fields[4])?,
            energy_hk: number(fields[5])?,
            h1_lower_bound: optional(fields[6])?,
            membership_defect: optional(fields[7])?,
        });
    }
    Ok(records)
}

/// Header of the certified-bounds table written by the `bounds` command.
pub const BOUNDS_CSV_HEADER: &str = "n,t,h1_flow_bound,h1_scheme_bound,energy_bound";

/// Write the bound table produced by [`crate::experiment::bound_table`].
pub fn write_bounds_csv<W: Write>(
    rows: &[crate::experiment::BoundRow],
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "{BOUNDS_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            cell(r.t),
            optional_cell(r.h1_flow_bound),
            optional_cell(r.h1_scheme_bound),
            optional_cell(r.energy_bound),
        )?;
    }
    Ok(())
}

pub fn emit_bounds_csv(
    rows: &[crate::experiment::BoundRow],
    path: &Path,
) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_bounds_csv(rows, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Write the run summary as pretty-printed JSON with a trailing newline.
/// Maps are `BTreeMap`s and struct fields serialize in declaration order,
/// so the bytes are a pure function of the summary.
pub fn write_json<W: Write>(summary: &ExperimentSummary, mut out: W) -> Result<(), HarnessError> {
    serde_json::to_writer_pretty(&mut out, summary)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn emit_csv(records: &[TrajectoryRecord], path: &Path) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(records, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn emit_json(summary: &ExperimentSummary, path: &Path) -> Result<(), HarnessError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_json(summary, &mut out)?;
    out.flush()?;
    Ok(())
}
