//! Two-column CSV files (`t,omega`, `t,M`, `t,X`).
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading a
//! file back reproduces the values bit for bit.

use std::io::{Read, Write};

use crate::cascade_measure::{MeasurePath, MrwPath};
use crate::gaussian_field::GaussianLogVolPath;

pub fn write_series<W: Write>(out: W, header: [&str; 2], t: &[f64], values: &[f64]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (a, b) in t.iter().zip(values) {
        w.write_record([a.to_string(), b.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Read a two-column numeric CSV; returns the header and both columns.
pub fn read_series<R: Read>(input: R) -> csv::Result<(Vec<String>, Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.iter().map(str::to_owned).collect();
    let mut t = Vec::new();
    let mut v = Vec::new();
    for row in r.records() {
        let row = row?;
        let num = |i: usize| -> csv::Result<f64> {
            row.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad number in column {i}"))))
        };
        t.push(num(0)?);
        v.push(num(1)?);
    }
    Ok((header, t, v))
}

pub fn write_omega<W: Write>(out: W, path: &GaussianLogVolPath) -> csv::Result<()> {
    write_series(out, ["t", "omega"], &path.times(), &path.values)
}

/// `t,M` starting from `(t0, 0)`.
pub fn write_measure<W: Write>(out: W, m: &MeasurePath) -> csv::Result<()> {
    let t: Vec<f64> = (0..=m.grid.n).map(|i| m.grid.time(i)).collect();
    write_series(out, ["t", "M"], &t, &m.with_origin())
}

/// `t,X` starting from `(t0, 0)`.
pub fn write_mrw<W: Write>(out: W, x: &MrwPath) -> csv::Result<()> {
    let t: Vec<f64> = (0..=x.grid.n).map(|i| x.grid.time(i)).collect();
    write_series(out, ["t", "X"], &t, &x.with_origin())
}
