//! Flat Euclidean geometry on symmetric matrices.

use crate::error::{check_dims, Error, Result};
use crate::geometry::{Geometry, Metric};
use crate::tri::{PackedLower, SpdMatrix, SymMatrix, SymTangent};

/// `(1 - t) P + t Q`.
pub fn euclid_interpolate(p: &SymMatrix, q: &SymMatrix, t: f64) -> Result<SymMatrix> {
    check_dims(p.dim(), q.dim())?;
    Ok(p.scale(1.0 - t).axpy(t, q))
}

/// Arithmetic mean.
pub fn euclid_mean(ps: &[SymMatrix]) -> Result<SymMatrix> {
    let first = ps.first().ok_or(Error::EmptyInput)?;
    let mut acc = SymMatrix::zeros(first.dim());
    for p in ps {
        check_dims(first.dim(), p.dim())?;
        acc = &acc + p;
    }
    Ok(acc.scale(1.0 / ps.len() as f64))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl Geometry for Euclidean {
    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
        check_dims(p.dim(), q.dim())?;
        Ok((p.as_sym() - q.as_sym()).norm())
    }

    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        SpdMatrix::new(euclid_interpolate(p, q, t)?)
    }

    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix> {
        let syms: Vec<SymMatrix> = ps.iter().map(|p| p.as_sym().clone()).collect();
        SpdMatrix::new(euclid_mean(&syms)?)
    }

    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
        check_dims(p.dim(), w.dim())?;
        check_dims(p.dim(), v.dim())?;
        Ok(w.frobenius_dot(v))
    }

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        Ok(q.as_sym() - p.as_sym())
    }

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
        check_dims(p.dim(), w.dim())?;
        SpdMatrix::new(p.as_sym() + w)
    }

    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        check_dims(p.dim(), w.dim())?;
        Ok(w.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_examples() {
        let p = SymMatrix::from_diag(&[2.0, 3.0]);
        assert_eq!(euclid_interpolate(&p, &p, 0.5).unwrap(), p);
        let eps: f64 = 0.1;
        let p1 = SymMatrix::from_diag(&[eps * eps, 1.0]);
        let p2 = SymMatrix::from_diag(&[1.0, eps * eps]);
        let mid = euclid_interpolate(&p1, &p2, 0.5).unwrap();
        assert!((&mid - &SymMatrix::from_diag(&[0.505, 0.505])).norm() < 1e-15);
    }

    #[test]
    fn mean_of_empty_is_error() {
        assert_eq!(euclid_mean(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn exp_map_can_leave_the_cone() {
        let p = SpdMatrix::identity(2);
        assert!(Euclidean.exp_map(&p, &SymMatrix::from_diag(&[-2.0, 0.0])).is_err());
    }
}
