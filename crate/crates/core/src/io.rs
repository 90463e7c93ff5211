//! Field CSV files: header `x[,y],u`, one row per node in row-major order,
//! reals written with 17 significant digits.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{ScalarField, UniformGrid};

/// Formats a real with 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn coord_header(dim: usize) -> Vec<&'static str> {
    ["x", "y"][..dim].to_vec()
}

pub fn write_field_to<W: std::io::Write>(out: W, field: &ScalarField, value_name: &str) -> Result<()> {
    let grid = field.grid();
    let mut w = csv::Writer::from_writer(out);
    let mut header = coord_header(grid.dim());
    header.push(value_name);
    w.write_record(&header)?;
    for (p, &u) in field.values().iter().enumerate() {
        let x = grid.point(p);
        let mut row: Vec<String> = x[..grid.dim()].iter().map(|&c| fmt_real(c)).collect();
        row.push(fmt_real(u));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_field(path: &Path, field: &ScalarField) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_field_to(file, field, "u")
}

/// Reads a field CSV. The grid is inferred from the header and row count,
/// and every coordinate column must match the grid node it stands for.
pub fn read_field(path: &Path) -> Result<ScalarField> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_field_from(file).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::invalid(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn read_field_from<R: std::io::Read>(input: R) -> Result<ScalarField> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let dim = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["x", _] => 1,
        ["x", "y", _] => 2,
        _ => {
            return Err(Error::invalid(format!(
                "field CSV header must be x[,y],<value>, got {header:?}"
            )))
        }
    };
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim + 1 {
            return Err(Error::invalid(format!(
                "row {} has {} columns, expected {}",
                line + 1,
                rec.len(),
                dim + 1
            )));
        }
        let parsed = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::invalid(format!("row {}: cannot parse {s:?}", line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        coords.push(parsed[..dim].to_vec());
        values.push(parsed[dim]);
    }
    let rows = values.len();
    let n = if dim == 1 {
        rows
    } else {
        let n = (rows as f64).sqrt().round() as usize;
        if n * n != rows {
            return Err(Error::invalid(format!("{rows} rows do not form a square 2D grid")));
        }
        n
    };
    let grid = UniformGrid::new(dim, n)?;
    for (p, c) in coords.iter().enumerate() {
        let x = grid.point(p);
        if c.iter().zip(&x[..dim]).any(|(a, b)| (a - b).abs() > 1e-9) {
            return Err(Error::invalid(format!(
                "row {} has coordinates {c:?}, expected {:?} (row-major node order)",
                p + 1,
                &x[..dim]
            )));
        }
    }
    ScalarField::new(grid, values)
}
