//! Text formats: `n=<count>`-headed edge lists and plain CSV matrices.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{from_edge_list, Graph};
use crate::matrix::DenseMatrix;
use crate::scalar::Scalar;

/// Reads a 1-based edge list (`n=<count>` header, then `i,j,w` lines).
pub fn read_edge_list<S: Scalar>(path: &Path, threshold: S) -> Result<Graph<S>> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text, threshold)
}

pub fn parse_edge_list<S: Scalar>(text: &str, threshold: S) -> Result<Graph<S>> {
    let mut lines = text.lines().enumerate();
    let (header_line, header) = loop {
        match lines.next() {
            Some((idx, raw)) => {
                let trimmed = raw.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    continue;
                }
                break (idx + 1, trimmed);
            }
            None => {
                return Err(Error::Parse { line: 1, message: "missing n=<count> header".into() })
            }
        }
    };
    let n: usize = header
        .strip_prefix("n=")
        .and_then(|rest| rest.trim().parse().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Parse {
            line: header_line,
            message: format!("expected n=<count> header, got `{header}`"),
        })?;

    let mut edges = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected i,j,w but found {} fields", fields.len()),
            });
        }
        let i: usize = fields[0].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad node index `{}`", fields[0]),
        })?;
        let j: usize = fields[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad node index `{}`", fields[1]),
        })?;
        let w: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad weight `{}`", fields[2]),
        })?;
        edges.push((i, j, S::real(w)));
    }
    from_edge_list(&edges, n, threshold)
}

/// Writes a graph in the edge-list format read by [`read_edge_list`].
pub fn write_edge_list<S: Scalar>(path: &Path, g: &Graph<S>) -> Result<()> {
    let mut out = format!("n={}\n", g.n());
    let a = g.adjacency();
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            let w = a.get(i, j);
            if w != S::zero() {
                out.push_str(&format!("{},{},{}\n", i + 1, j + 1, format_value(w)));
            }
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// Formats one scalar with 17 significant digits, enough to round-trip f64.
pub fn format_value<S: Scalar>(x: S) -> String {
    format!("{:.16e}", x.as_f64())
}

/// Writes a matrix as CSV, one row per line.
pub fn write_matrix_csv<S: Scalar>(path: &Path, m: &DenseMatrix<S>) -> Result<()> {
    fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

pub fn matrix_to_csv<S: Scalar>(m: &DenseMatrix<S>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&x| format_value(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Reads a CSV matrix; every row must have the same number of fields.
pub fn read_matrix_csv<S: Scalar>(path: &Path) -> Result<DenseMatrix<S>> {
    let text = fs::read_to_string(path)?;
    parse_matrix_csv(&text)
}

pub fn parse_matrix_csv<S: Scalar>(text: &str) -> Result<DenseMatrix<S>> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for field in trimmed.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad number `{}`", field.trim()),
            })?;
            row.push(S::real(value));
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", w, row.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse { line: 1, message: "empty matrix".into() });
    }
    let borrowed: Vec<&[S]> = rows.iter().map(Vec::as_slice).collect();
    DenseMatrix::from_rows(&borrowed)
}

/// Writes a vector as a single CSV column.
pub fn write_vector_csv<S: Scalar>(path: &Path, v: &[S]) -> Result<()> {
    let mut out = String::new();
    for &x in v {
        out.push_str(&format_value(x));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a single-column CSV as a vector.
pub fn read_vector_csv<S: Scalar>(path: &Path) -> Result<Vec<S>> {
    let m = read_matrix_csv::<S>(path)?;
    if m.cols() != 1 {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected one column, found {}", m.cols()),
        });
    }
    Ok(m.col(0))
}
