//! CSV and JSON writers. Reals carry 17 significant digits; undefined
//! values (density nodes, missing arrivals) are written as `nan`.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

/// Column order of field samples.
pub const SAMPLE_HEADER: [&str; 5] = ["x", "t", "re", "im", "density"];

pub fn real(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// One field sample as a row; `density` is recomputed from the amplitude
/// so the row is self-consistent.
pub fn sample_row(x: f64, t: f64, a: Complex64, omega_av: Option<f64>) -> Vec<f64> {
    let mut row = vec![x, t, a.re, a.im, a.re * a.re + a.im * a.im];
    row.extend(omega_av);
    row
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let cells: Vec<String> = row.iter().map(|v| real(*v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::other)?;
    writeln!(out)?;
    out.flush()
}

/// Output directory, created on demand.
pub fn prepare_dir(dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
