//! Ellipsoid glyphs for external plotting, one JSON object per line.

use std::io::Write;

use logchol::baselines::eig::SymEigen;
use logchol::{PackedLower, SpdMatrix};
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Orthonormality tolerance for emitted eigenvector matrices.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlyphRecord {
    pub i: usize,
    pub j: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Row-major; column `k` is the axis for `eigenvalues[k]`.
    pub eigenvectors: Vec<f64>,
    pub det: f64,
}

impl GlyphRecord {
    pub fn new(i: usize, j: usize, p: &SpdMatrix) -> logchol::Result<Self> {
        let eig = SymEigen::new(p)?;
        eig.require_positive()?;
        let m = p.dim();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| eig.values[b].total_cmp(&eig.values[a]));
        let eigenvalues = order.iter().map(|&k| eig.values[k]).collect();
        let mut eigenvectors = Vec::with_capacity(m * m);
        for r in 0..m {
            eigenvectors.extend(order.iter().map(|&k| eig.vectors[(r, k)]));
        }
        Ok(Self { i, j, eigenvalues, eigenvectors, det: p.det()? })
    }

    /// Checks positivity, ordering and orthonormality.
    pub fn is_valid(&self) -> bool {
        let m = self.eigenvalues.len();
        if self.eigenvectors.len() != m * m {
            return false;
        }
        let sorted = self.eigenvalues.windows(2).all(|w| w[0] >= w[1]);
        let positive = self.eigenvalues.iter().all(|&v| v > 0.0);
        let col = |k: usize| (0..m).map(move |r| self.eigenvectors[r * m + k]);
        let orthonormal = (0..m).all(|a| {
            (0..m).all(|b| {
                let dot: f64 = col(a).zip(col(b)).map(|(x, y)| x * y).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                (dot - target).abs() <= ORTHONORMAL_TOL
            })
        });
        sorted && positive && orthonormal
    }
}

pub fn write_glyphs<W: Write>(mut out: W, glyphs: &[GlyphRecord]) -> Result<()> {
    for g in glyphs {
        serde_json::to_writer(&mut out, g)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_glyphs(text: &str) -> Result<Vec<GlyphRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use logchol::sampling::{random_spd, seeded_rng};

    #[test]
    fn glyphs_are_sorted_and_orthonormal() {
        let p = random_spd(&mut seeded_rng(3), 4);
        let g = GlyphRecord::new(0, 2, &p).unwrap();
        assert!(g.is_valid());
        assert!((g.det - p.det().unwrap()).abs() < 1e-12 * g.det);
        let prod: f64 = g.eigenvalues.iter().product();
        assert!((prod / g.det - 1.0).abs() < 1e-10);
    }

    #[test]
    fn json_lines_round_trip() {
        let p = SpdMatrix::from_diag(&[1.0, 3.0]).unwrap();
        let g = GlyphRecord::new(1, 0, &p).unwrap();
        assert_eq!(g.eigenvalues, vec![3.0, 1.0]);
        let mut buf = Vec::new();
        write_glyphs(&mut buf, &[g.clone(), g.clone()]).unwrap();
        let back = read_glyphs(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, vec![g.clone(), g]);
    }
}
