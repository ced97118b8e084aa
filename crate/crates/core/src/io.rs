//! File formats: JSON matrices `{"rows", "cols", "data"}` (row-major),
//! vector families with an optional `"half_dim"`, and plain CSV grids
//! (columns are vectors for families).

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::symplectic::{SymplecticSpace, VectorFamily};

#[derive(Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    #[serde(default)]
    half_dim: Option<usize>,
}

fn parse_file(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let mut grid: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|e| {
                        Error::Input(format!("line {}: bad number {cell:?}: {e}", lineno + 1))
                    })
                })
                .collect::<Result<_>>()?;
            grid.push(row);
        }
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        if grid.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("ragged CSV grid".into()));
        }
        Ok(MatrixFile {
            rows,
            cols,
            data: grid.concat(),
            half_dim: None,
        })
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("bad JSON: {e}")))
    }
}

pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let file = parse_file(path)?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Error::Input("matrix must have positive dimensions".into()));
    }
    Matrix::new(file.rows, file.cols, file.data)
}

/// Reads a vector family: the columns of the stored matrix are the
/// vectors. `half_dim` defaults to half the row count.
pub fn read_family(path: &Path) -> Result<VectorFamily> {
    let file = parse_file(path)?;
    if file.rows == 0 || file.cols == 0 {
        return Err(Error::Input("family must have positive dimensions".into()));
    }
    let columns = Matrix::new(file.rows, file.cols, file.data)?;
    let half_dim = match file.half_dim {
        Some(h) => h,
        None if file.rows % 2 == 0 => file.rows / 2,
        None => {
            return Err(Error::Input(
                "odd row count and no half_dim field".into(),
            ))
        }
    };
    if 2 * half_dim != file.rows {
        return Err(Error::Input(format!(
            "half_dim {} does not match {} rows",
            half_dim, file.rows
        )));
    }
    VectorFamily::new(SymplecticSpace::standard(half_dim)?, columns)
}

pub fn write_matrix_json(path: &Path, m: &Matrix) -> Result<()> {
    let value = serde_json::json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "data": m.data(),
    });
    std::fs::write(path, serde_json::to_string_pretty(&value).unwrap())
        .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}
