//! Log-Euclidean geometry: the Euclidean structure of `log P`.
//!
//! Parallel transport maps `W` at `P` to `D_{log Q} exp [ D_P log (W) ]`. The
//! differential of the logarithm is summed as a truncated power series, which
//! is what makes this transport expensive compared with the Log-Cholesky one.

use nalgebra::DMatrix;

use super::eig::{ScalarFn, SymEigen};
use crate::error::{check_dims, Error, Result};
use crate::geometry::{Geometry, Metric};
use crate::tri::{PackedLower, SpdMatrix, SymMatrix, SymTangent};

/// Relative size of a series term below which summation stops.
pub const DLOG_SERIES_TOL: f64 = 1e-12;
/// Hard cap on the number of series terms.
pub const DLOG_SERIES_MAX_TERMS: usize = 500;

fn spd_eigen(p: &SymMatrix) -> Result<SymEigen> {
    let eig = SymEigen::new(p)?;
    eig.require_positive()?;
    Ok(eig)
}

fn log_of(p: &SpdMatrix) -> Result<SymMatrix> {
    Ok(spd_eigen(p)?.apply(ScalarFn::Log))
}

fn exp_of(s: &SymMatrix) -> Result<SpdMatrix> {
    SpdMatrix::new(SymEigen::new(s)?.apply(ScalarFn::Exp))
}

/// `||log P - log Q||_F`.
pub fn logeuclid_dist(p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    Ok((&log_of(p)? - &log_of(q)?).norm())
}

/// `exp((1 - t) log P + t log Q)`.
pub fn logeuclid_interpolate(p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_dims(p.dim(), q.dim())?;
    exp_of(&log_of(p)?.scale(1.0 - t).axpy(t, &log_of(q)?))
}

/// `exp((1/n) sum log P_i)`.
pub fn logeuclid_mean(ps: &[SpdMatrix]) -> Result<SpdMatrix> {
    let first = ps.first().ok_or(Error::EmptyInput)?;
    if ps.len() == 1 {
        return Ok(first.clone());
    }
    let mut acc = SymMatrix::zeros(first.dim());
    for p in ps {
        check_dims(first.dim(), p.dim())?;
        acc = &acc + &log_of(p)?;
    }
    exp_of(&acc.scale(1.0 / ps.len() as f64))
}

/// Outcome of summing the series for the differential of the logarithm.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: SymMatrix,
    pub terms: usize,
    pub converged: bool,
}

/// Differential of the matrix logarithm at `p` applied to `w`, by series.
///
/// With `c = (λ_max + λ_min) / 2` and `B = I - P / c`,
/// `D_P log (W) = (1/c) sum_{k>=1} (1/k) sum_{j<k} B^j W B^{k-1-j}`,
/// which converges at rate `(κ - 1) / (κ + 1)`. The inner sums follow the
/// recurrence `T_{k+1} = B T_k + W B^k`.
pub fn dlog_series(p: &SpdMatrix, w: &SymTangent) -> Result<SeriesSum> {
    check_dims(p.dim(), w.dim())?;
    let eig = spd_eigen(p)?;
    let lmax = eig.values.max();
    let lmin = eig.values.min();
    let c = 0.5 * (lmax + lmin);
    let m = p.dim();
    let b = DMatrix::<f64>::identity(m, m) - p.to_dense() / c;
    let v = w.to_dense() / c;

    let mut t = v.clone();
    let mut b_pow = b.clone();
    let mut sum = v.clone();
    let mut terms = 1;
    let mut converged = sum.norm() == 0.0;
    while !converged && terms < DLOG_SERIES_MAX_TERMS {
        t = &b * &t + &v * &b_pow;
        b_pow = &b_pow * &b;
        terms += 1;
        let term = &t / terms as f64;
        sum += &term;
        converged = term.norm() <= DLOG_SERIES_TOL * sum.norm();
    }
    Ok(SeriesSum { value: SymMatrix::symmetrize(&sum), terms, converged })
}

/// `W -> D_{log Q} exp [ D_P log (W) ]`, failing with
/// [`Error::NoConvergence`] when the series hits its term cap.
pub fn logeuclid_transport(p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
    check_dims(p.dim(), q.dim())?;
    let series = dlog_series(p, w)?;
    if !series.converged {
        return Err(Error::NoConvergence { iterations: series.terms, residual: f64::NAN });
    }
    let log_q = SymEigen::new(&log_of(q)?)?;
    Ok(SymMatrix::symmetrize(&log_q.frechet_derivative(ScalarFn::Exp, &series.value.to_dense())))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LogEuclidean;

impl Geometry for LogEuclidean {
    fn metric(&self) -> Metric {
        Metric::LogEuclidean
    }

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
        logeuclid_dist(p, q)
    }

    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        logeuclid_interpolate(p, q, t)
    }

    fn interpolate_many(&self, p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
        check_dims(p.dim(), q.dim())?;
        let (lp, lq) = (log_of(p)?, log_of(q)?);
        ts.iter().map(|&t| exp_of(&lp.scale(1.0 - t).axpy(t, &lq))).collect()
    }

    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix> {
        logeuclid_mean(ps)
    }

    /// `<D_P log W, D_P log V>_F`, with the exact eigenbasis differential.
    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
        let eig = spd_eigen(p)?;
        let dw = eig.frechet_derivative(ScalarFn::Log, &w.to_dense());
        let dv = eig.frechet_derivative(ScalarFn::Log, &v.to_dense());
        Ok(dw.dot(&dv))
    }

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        let log_p = log_of(p)?;
        let diff = &log_of(q)? - &log_p;
        let eig = SymEigen::new(&log_p)?;
        Ok(SymMatrix::symmetrize(&eig.frechet_derivative(ScalarFn::Exp, &diff.to_dense())))
    }

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
        check_dims(p.dim(), w.dim())?;
        let eig = spd_eigen(p)?;
        let dlog = SymMatrix::symmetrize(&eig.frechet_derivative(ScalarFn::Log, &w.to_dense()));
        exp_of(&(&eig.apply(ScalarFn::Log) + &dlog))
    }

    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
        logeuclid_transport(p, q, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_sym, seeded_rng, spd_with_spectrum};
    use std::f64::consts::E;

    #[test]
    fn examples() {
        let p = SpdMatrix::from_diag(&[2.0, 5.0]).unwrap();
        assert!(logeuclid_dist(&p, &p).unwrap() < 1e-15);
        let mean =
            logeuclid_mean(&[SpdMatrix::identity(2), SpdMatrix::from_diag(&[E * E, E * E]).unwrap()]).unwrap();
        assert!((mean.as_sym() - &SymMatrix::from_diag(&[E, E])).norm() < 1e-14);
    }

    #[test]
    fn series_matches_eigenbasis_differential() {
        let mut rng = seeded_rng(1);
        let p = spd_with_spectrum(&mut rng, &[0.5, 1.0, 3.0]).unwrap();
        let w = random_sym(&mut rng, 3);
        let s = dlog_series(&p, &w).unwrap();
        assert!(s.converged);
        let exact = SymEigen::new(&p).unwrap().frechet_derivative(ScalarFn::Log, &w.to_dense());
        assert!((s.value.to_dense() - &exact).norm() < 1e-11 * exact.norm());
    }

    #[test]
    fn series_reports_cap() {
        let mut rng = seeded_rng(2);
        let p = spd_with_spectrum(&mut rng, &[1e-4, 1.0]).unwrap();
        let w = random_sym(&mut rng, 2);
        let s = dlog_series(&p, &w).unwrap();
        assert!(!s.converged);
        assert_eq!(s.terms, DLOG_SERIES_MAX_TERMS);
        assert!(matches!(logeuclid_transport(&p, &p, &w), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn zero_direction_converges_immediately() {
        let p = SpdMatrix::from_diag(&[1.0, 2.0]).unwrap();
        let s = dlog_series(&p, &SymMatrix::zeros(2)).unwrap();
        assert!(s.converged && s.terms == 1);
    }
}
