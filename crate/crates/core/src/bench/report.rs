//! CSV output for sweep records and profile curves.

use std::io::Write;
use std::path::Path;

use super::{BenchRecord, ProfileCurve, ProfileSample};
use crate::error::{Result, SpgemmError};

pub const RECORD_HEADER: [&str; 21] = [
    "scenario",
    "matrix",
    "algorithm",
    "sorted",
    "nworkers",
    "flop",
    "nnz_c",
    "compression_ratio",
    "setup_s",
    "symbolic_s",
    "numeric_s",
    "total_s",
    "min_total_s",
    "max_total_s",
    "repetitions",
    "gflops",
    "collision_factor",
    "triangles",
    "status",
    "solver",
    "problem",
];

pub const CURVE_HEADER: [&str; 3] = ["solver", "tau", "fraction"];

fn record_row(r: &BenchRecord) -> Vec<String> {
    vec![
        r.scenario.clone(),
        r.matrix.clone(),
        r.algorithm.to_string(),
        r.sorted.to_string(),
        r.nworkers.to_string(),
        r.flop.to_string(),
        r.nnz_c.to_string(),
        format!("{:.6}", r.compression_ratio),
        format!("{:.9}", r.setup_s),
        format!("{:.9}", r.symbolic_s),
        format!("{:.9}", r.numeric_s),
        format!("{:.9}", r.total_s),
        format!("{:.9}", r.min_total_s),
        format!("{:.9}", r.max_total_s),
        r.repetitions.to_string(),
        format!("{:.6}", r.gflops()),
        r.collision_factor.map_or_else(String::new, |c| format!("{c:.6}")),
        r.triangles.map_or_else(String::new, |t| t.to_string()),
        r.status.to_string(),
        r.solver_label(),
        format!("{}:{}:t{}", r.scenario, r.matrix, r.nworkers),
    ]
}

pub fn write_records_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record(record_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curves_csv<W: Write>(out: W, curves: &[ProfileCurve]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CURVE_HEADER)?;
    for c in curves {
        for &(tau, frac) in &c.points {
            w.write_record([c.solver.clone(), format!("{tau:.6}"), format!("{frac:.6}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes records to `path`, or to stdout when `path` is `None`.
pub fn emit_csv(records: &[BenchRecord], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_records_csv(std::fs::File::create(p)?, records),
        None => write_records_csv(std::io::stdout().lock(), records),
    }
}

/// Reads profile samples back from a records CSV written by
/// [`write_records_csv`]. Cells whose status is not `ok` become failed runs.
pub fn read_profile_samples<R: std::io::Read>(input: R) -> Result<Vec<ProfileSample>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| SpgemmError::InvalidArgument(format!("records CSV has no {name:?} column")))
    };
    let (problem, solver, total, status) = (column("problem")?, column("solver")?, column("total_s")?, column("status")?);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let elapsed = if &row[status] == "ok" {
            Some(row[total].parse::<f64>().map_err(|_| SpgemmError::InvalidArgument(format!("bad total_s {:?}", &row[total])))?)
        } else {
            None
        };
        out.push(ProfileSample::new(&row[problem], &row[solver], elapsed));
    }
    Ok(out)
}
