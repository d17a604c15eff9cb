use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use rabi_qpt::experiments::SweepResult;
use rabi_qpt::observables::WignerGrid;
use serde_json::{json, Value};

use crate::config::Settings;

/// 12 significant digits, round-trippable by any float parser.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn unix_time() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

/// Destination chosen by `output` (stdout when unset).
pub fn open(settings: &Settings) -> Result<Box<dyn Write>, String> {
    Ok(match settings.string("output") {
        Some(path) => Box::new(BufWriter::new(File::create(&path).map_err(|e| format!("cannot create {path}: {e}"))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn io_err(e: impl std::fmt::Display) -> String {
    format!("write failed: {e}")
}

/// `# generated_unix_time=...` unless suppressed.
fn csv_preamble(out: &mut dyn Write, timestamp: bool) -> Result<(), String> {
    if timestamp {
        writeln!(out, "# generated_unix_time={}", unix_time()).map_err(io_err)?;
    }
    Ok(())
}

pub fn write_json(out: &mut dyn Write, mut value: Value, timestamp: bool) -> Result<(), String> {
    if timestamp {
        if let Value::Object(map) = &mut value {
            map.insert("generated_unix_time".into(), json!(unix_time()));
        }
    }
    serde_json::to_writer_pretty(&mut *out, &value).map_err(io_err)?;
    writeln!(out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Columns `axis1, axis2, n, quantity, value, flag`; null cells are empty.
pub fn write_sweep_csv(out: &mut dyn Write, result: &SweepResult, timestamp: bool) -> Result<(), String> {
    csv_preamble(out, timestamp)?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["axis1", "axis2", "n", "quantity", "value", "flag"]).map_err(io_err)?;
    for r in &result.rows {
        w.write_record([
            sig12(r.axis1),
            r.axis2.map(sig12).unwrap_or_default(),
            r.n.to_string(),
            r.quantity.name().to_string(),
            r.value.map(sig12).unwrap_or_default(),
            r.flag.name().to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    drop(w);
    out.flush().map_err(io_err)
}

pub fn write_wigner_csv(out: &mut dyn Write, grid: &WignerGrid, timestamp: bool) -> Result<(), String> {
    csv_preamble(out, timestamp)?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["x", "y", "W"]).map_err(io_err)?;
    for (i, x) in grid.x_axis.iter().enumerate() {
        for (j, y) in grid.y_axis.iter().enumerate() {
            w.write_record([sig12(*x), sig12(*y), sig12(grid.values[[i, j]])]).map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)?;
    drop(w);
    out.flush().map_err(io_err)
}

pub fn wigner_json(grid: &WignerGrid) -> Value {
    let rows: Vec<Vec<f64>> = grid.values.rows().into_iter().map(|r| r.to_vec()).collect();
    json!({
        "x": grid.x_axis,
        "y": grid.y_axis,
        "W": rows,
        "cell_area": grid.cell_area,
        "integral": grid.integral(),
    })
}

/// Header plus string records.
pub fn write_records_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>], timestamp: bool) -> Result<(), String> {
    csv_preamble(out, timestamp)?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.flush().map_err(io_err)?;
    drop(w);
    out.flush().map_err(io_err)
}
