//! Plain-text matrix fixtures.
//!
//! A fixture holds one or more blocks. Each block is a line with the dimension
//! `m` followed by `m` lines of `m` whitespace-separated numbers giving the full
//! dense matrix. Blank lines and lines starting with `#` are ignored.
//!
//! ```text
//! # two 2x2 SPD matrices
//! 2
//! 4 2
//! 2 5
//!
//! 2
//! 1 0
//! 0 1
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tri::{CholeskyFactor, LowerTriangular, SpdMatrix, SymMatrix};

/// A dense matrix as parsed, with the line its header was found on.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseBlock {
    pub line: usize,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_blocks(text: &str) -> Result<Vec<DenseBlock>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut blocks = Vec::new();
    while let Some((line, header)) = lines.next() {
        let dim: usize = header.parse().map_err(|_| Error::Parse {
            line,
            message: format!("expected a dimension, found '{header}'"),
        })?;
        if dim == 0 {
            return Err(Error::Parse { line, message: "dimension must be positive".into() });
        }
        let mut rows = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (row_line, text) = lines.next().ok_or(Error::Parse {
                line,
                message: format!("block declares {dim} rows but input ended"),
            })?;
            let row = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| Error::Parse {
                        line: row_line,
                        message: format!("invalid number '{tok}'"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != dim {
                return Err(Error::Parse {
                    line: row_line,
                    message: format!("expected {dim} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        blocks.push(DenseBlock { line, rows });
    }
    Ok(blocks)
}

fn with_line<T>(block: &DenseBlock, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Parse { line: block.line, message: e.to_string() })
}

pub fn parse_spd_list(text: &str) -> Result<Vec<SpdMatrix>> {
    parse_blocks(text)?.iter().map(|b| with_line(b, SpdMatrix::from_rows(&b.rows))).collect()
}

pub fn parse_sym_list(text: &str) -> Result<Vec<SymMatrix>> {
    parse_blocks(text)?.iter().map(|b| with_line(b, SymMatrix::from_rows(&b.rows))).collect()
}

pub fn parse_lower_list(text: &str) -> Result<Vec<LowerTriangular>> {
    parse_blocks(text)?
        .iter()
        .map(|b| with_line(b, LowerTriangular::from_rows(&b.rows)))
        .collect()
}

pub fn parse_factor_list(text: &str) -> Result<Vec<CholeskyFactor>> {
    parse_blocks(text)?.iter().map(|b| with_line(b, CholeskyFactor::from_rows(&b.rows))).collect()
}

/// Writes symmetric matrices in fixture format. Values use Rust's shortest
/// round-tripping float representation.
pub fn write_sym_list<'a>(ms: impl IntoIterator<Item = &'a SymMatrix>) -> String {
    let mut out = String::new();
    for (k, s) in ms.into_iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        let m = crate::tri::PackedLower::dim(s);
        writeln!(out, "{m}").unwrap();
        for i in 0..m {
            let row: Vec<String> = (0..m).map(|j| s.get(i, j).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
    }
    out
}
