//! CSV and JSON-lines output.
//!
//! Every CSV starts with `# ` followed by the run's spec as one line of JSON,
//! then optional `# skipped` lines, then a header row and data rows.

use std::io::{BufRead, BufReader, Read, Write};

use serde::Serialize;

use crate::distributions::PhotonDistribution;
use crate::error::Result;
use crate::oracle::VerifyReport;
use crate::sweep::{Curve, CurveRow, RegionMap};

fn header<W: Write, S: Serialize + ?Sized>(out: &mut W, spec: &S) -> Result<()> {
    writeln!(out, "# {}", serde_json::to_string(spec)?)?;
    Ok(())
}

#[derive(Serialize)]
struct RegionRow<'a> {
    kind: &'a str,
    s11: f64,
    s12: f64,
    label: &'a str,
}

/// Grid cells (`kind = cell`) followed by boundary points (`kind = trace`).
pub fn write_region_map<W: Write, S: Serialize + ?Sized>(mut out: W, spec: &S, map: &RegionMap) -> Result<()> {
    header(&mut out, spec)?;
    let mut w = csv::Writer::from_writer(out);
    for c in &map.cells {
        w.serialize(RegionRow {
            kind: "cell",
            s11: c.s11,
            s12: c.s12,
            label: c.label(),
        })?;
    }
    for t in &map.traces {
        w.serialize(RegionRow {
            kind: "trace",
            s11: t.s11,
            s12: t.s12,
            label: t.trace.label(),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve<W: Write, S: Serialize + ?Sized>(mut out: W, spec: &S, curve: &Curve) -> Result<()> {
    header(&mut out, spec)?;
    for s in &curve.skipped {
        writeln!(out, "# skipped {}: {}", s.param, s.reason)?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in &curve.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct WeightRow {
    index: usize,
    weight: f64,
}

pub fn write_weights<W: Write, S: Serialize + ?Sized>(mut out: W, spec: &S, dist: &PhotonDistribution) -> Result<()> {
    header(&mut out, spec)?;
    let mut w = csv::Writer::from_writer(out);
    for (index, weight) in dist.weights().iter().enumerate() {
        w.serialize(WeightRow { index, weight: *weight })?;
    }
    w.flush()?;
    Ok(())
}

/// One JSON object per line.
pub fn write_reports<W: Write>(mut out: W, reports: &[VerifyReport]) -> Result<()> {
    for r in reports {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a curve CSV back: the JSON header line and the rows.
pub fn read_curve<R: Read>(input: R) -> Result<(serde_json::Value, Vec<CurveRow>)> {
    let mut input = BufReader::new(input);
    let mut first = String::new();
    input.read_line(&mut first)?;
    let spec = serde_json::from_str(first.trim_start_matches('#').trim())?;
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<CurveRow>, _>>()?;
    Ok((spec, rows))
}
