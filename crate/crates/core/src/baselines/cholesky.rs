//! The Cholesky distance: Euclidean geometry on Cholesky factors.

use crate::chol_map::{cholesky_factor, diff_s, diff_s_inv, reconstruct};
use crate::error::{check_dims, Error, Result};
use crate::geometry::{Geometry, Metric};
use crate::tri::{CholeskyFactor, LowerTriangular, PackedLower, SpdMatrix, SymTangent};

/// `||L(P) - L(Q)||_F`.
pub fn cholesky_distance(p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    Ok((cholesky_factor(p)?.as_lower() - cholesky_factor(q)?.as_lower()).norm())
}

/// `{(1 - t) L + t K}{(1 - t) L + t K}^T`.
pub fn cholesky_interpolate(p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_dims(p.dim(), q.dim())?;
    let l = cholesky_factor(p)?;
    let k = cholesky_factor(q)?;
    let combo = l.as_lower().scale(1.0 - t).axpy(t, k.as_lower());
    Ok(reconstruct(&to_factor(combo)?))
}

fn to_factor(l: LowerTriangular) -> Result<CholeskyFactor> {
    for i in 0..l.dim() {
        if !(l.diag_entry(i) > 0.0) {
            return Err(Error::NotSpd { index: i, pivot: l.diag_entry(i) });
        }
    }
    CholeskyFactor::new(l)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CholeskyDistance;

impl Geometry for CholeskyDistance {
    fn metric(&self) -> Metric {
        Metric::Cholesky
    }

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
        cholesky_distance(p, q)
    }

    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        cholesky_interpolate(p, q, t)
    }

    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix> {
        let first = ps.first().ok_or(Error::EmptyInput)?;
        let mut acc = LowerTriangular::zeros(first.dim());
        for p in ps {
            check_dims(first.dim(), p.dim())?;
            acc = &acc + cholesky_factor(p)?.as_lower();
        }
        Ok(reconstruct(&to_factor(acc.scale(1.0 / ps.len() as f64))?))
    }

    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
        let l = cholesky_factor(p)?;
        let x = diff_s_inv(&l, w)?;
        let y = diff_s_inv(&l, v)?;
        Ok(x.packed().iter().zip(y.packed()).map(|(a, b)| a * b).sum())
    }

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        let l = cholesky_factor(p)?;
        let k = cholesky_factor(q)?;
        diff_s(&l, &(k.as_lower() - l.as_lower()))
    }

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
        let l = cholesky_factor(p)?;
        let x = diff_s_inv(&l, w)?;
        Ok(reconstruct(&to_factor(l.as_lower() + &x)?))
    }

    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        let l = cholesky_factor(p)?;
        let k = cholesky_factor(q)?;
        diff_s(&k, &diff_s_inv(&l, w)?)
    }
}
