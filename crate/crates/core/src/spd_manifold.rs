//! The Log-Cholesky geometry of SPD matrices.
//!
//! Every operation factors its SPD arguments, runs the corresponding
//! Cholesky-space operation from [`crate::chol_manifold`], and maps the result
//! back through `L -> L L^T` or its differential. Tangent vectors at `P = L L^T`
//! are carried across by `W -> L (L^{-1} W L^{-T})_{1/2}` and back by
//! `X -> L X^T + X L^T`.

use crate::chol_manifold::{
    dist_chol, frechet_mean_chol, geodesic_chol, group_inv, group_op, log_chol,
    metric_chol, transport_chol, weighted_frechet_mean_chol,
};
use crate::chol_map::{cholesky_factor, diff_s, diff_s_inv, reconstruct};
use crate::error::{check_dims, Result};
use crate::tri::{CholeskyFactor, PackedLower, SpdMatrix, SymTangent};

fn factors(p: &SpdMatrix, q: &SpdMatrix) -> Result<(CholeskyFactor, CholeskyFactor)> {
    check_dims(p.dim(), q.dim())?;
    Ok((cholesky_factor(p)?, cholesky_factor(q)?))
}

/// Log-Cholesky inner product of two tangent vectors at `p`.
pub fn metric_spd(p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
    let l = cholesky_factor(p)?;
    Ok(metric_chol(&l, &diff_s_inv(&l, w)?, &diff_s_inv(&l, v)?))
}

/// Geodesic through `p` with initial velocity `w`, at time `t`.
pub fn geodesic_spd(p: &SpdMatrix, w: &SymTangent, t: f64) -> Result<SpdMatrix> {
    let l = cholesky_factor(p)?;
    let x = diff_s_inv(&l, w)?;
    Ok(reconstruct(&geodesic_chol(&l, &x, t)))
}

/// Riemannian exponential map at `p`.
pub fn exp_spd(p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
    geodesic_spd(p, w, 1.0)
}

/// Riemannian logarithm at `p` of `q`.
pub fn log_spd(p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
    let (l, k) = factors(p, q)?;
    diff_s(&l, &log_chol(&l, &k))
}

/// Log-Cholesky geodesic distance: the Cholesky-space distance of the factors.
pub fn dist_spd(p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
    let (l, k) = factors(p, q)?;
    Ok(dist_chol(&l, &k))
}

/// `P ⊛ Q = S(L(P) ⊙ L(Q))`.
pub fn group_op_spd(p: &SpdMatrix, q: &SpdMatrix) -> Result<SpdMatrix> {
    let (l, k) = factors(p, q)?;
    Ok(reconstruct(&group_op(&l, &k)))
}

/// Group inverse under ⊛.
pub fn group_inv_spd(p: &SpdMatrix) -> Result<SpdMatrix> {
    Ok(reconstruct(&group_inv(&cholesky_factor(p)?)))
}

/// Parallel transport of `w` from `p` to `q` along the connecting geodesic.
pub fn transport_spd(p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
    let (l, k) = factors(p, q)?;
    let x = diff_s_inv(&l, w)?;
    diff_s(&k, &transport_chol(&l, &k, &x))
}

/// Closed-form Log-Cholesky mean `E E^T` where `E` is the Cholesky-space mean
/// of the factors.
pub fn log_cholesky_mean(ps: &[SpdMatrix]) -> Result<SpdMatrix> {
    let ls = ps.iter().map(cholesky_factor).collect::<Result<Vec<_>>>()?;
    Ok(reconstruct(&frechet_mean_chol(&ls)?))
}

/// Weighted Log-Cholesky mean; `weights` must be non-negative and sum to one.
pub fn weighted_log_cholesky_mean(ps: &[SpdMatrix], weights: &[f64]) -> Result<SpdMatrix> {
    let ls = ps.iter().map(cholesky_factor).collect::<Result<Vec<_>>>()?;
    Ok(reconstruct(&weighted_frechet_mean_chol(&ls, weights)?))
}

/// Points on the geodesic from `p` (t = 0) to `q` (t = 1).
pub fn interpolate_spd(p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
    let (l, k) = factors(p, q)?;
    let x = log_chol(&l, &k);
    Ok(ts.iter().map(|&t| reconstruct(&geodesic_chol(&l, &x, t))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::sampling::{random_spd, random_sym, seeded_rng};
    use crate::tri::SymMatrix;
    use std::f64::consts::{E, SQRT_2};

    fn close(a: &SymMatrix, b: &SymMatrix, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    fn diag(d: &[f64]) -> SpdMatrix {
        SpdMatrix::from_diag(d).unwrap()
    }

    #[test]
    fn metric_examples() {
        let i2 = SpdMatrix::identity(2);
        assert_eq!(metric_spd(&i2, &SymMatrix::identity(2), &SymMatrix::identity(2)).unwrap(), 0.5);
        let mut rng = seeded_rng(1);
        let p = random_spd(&mut rng, 3);
        let v = random_sym(&mut rng, 3);
        assert_eq!(metric_spd(&p, &SymMatrix::zeros(3), &v).unwrap(), 0.0);
    }

    #[test]
    fn geodesic_examples() {
        let mut rng = seeded_rng(2);
        let p = random_spd(&mut rng, 3);
        let w = random_sym(&mut rng, 3);
        assert!(close(&geodesic_spd(&p, &w, 0.0).unwrap(), &p, 1e-14));
        let g = geodesic_spd(&SpdMatrix::identity(2), &SymMatrix::from_diag(&[2.0, 2.0]), 1.0).unwrap();
        assert!(close(&g, &diag(&[E * E, E * E]), 1e-15));
    }

    #[test]
    fn exp_log_examples() {
        let mut rng = seeded_rng(3);
        let p = random_spd(&mut rng, 4);
        let q = random_spd(&mut rng, 4);
        assert!(log_spd(&p, &p).unwrap().norm() < 1e-13 * p.norm());
        assert_eq!(exp_spd(&SpdMatrix::identity(3), &SymMatrix::zeros(3)).unwrap(), SpdMatrix::identity(3));
        let w = log_spd(&diag(&[1.0, 1.0]), &diag(&[E * E, E * E])).unwrap();
        assert!(close(&w, &SymMatrix::from_diag(&[2.0, 2.0]), 1e-15));
        assert!(close(&exp_spd(&p, &log_spd(&p, &q).unwrap()).unwrap(), &q, 1e-12));
    }

    #[test]
    fn dist_examples() {
        let p = random_spd(&mut seeded_rng(4), 3);
        assert_eq!(dist_spd(&p, &p).unwrap(), 0.0);
        let d = dist_spd(&SpdMatrix::identity(2), &diag(&[E * E, E * E])).unwrap();
        assert!((d - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn group_examples() {
        let mut rng = seeded_rng(5);
        let p = random_spd(&mut rng, 3);
        assert!(close(&group_op_spd(&p, &SpdMatrix::identity(3)).unwrap(), &p, 1e-15));
        assert_eq!(group_op_spd(&diag(&[4.0, 9.0]), &diag(&[4.0, 9.0])).unwrap(), diag(&[16.0, 81.0]));
        let inv = group_inv_spd(&p).unwrap();
        assert!(close(&group_op_spd(&p, &inv).unwrap(), &SymMatrix::identity(3), 1e-14));
    }

    #[test]
    fn transport_examples() {
        let mut rng = seeded_rng(6);
        let p = random_spd(&mut rng, 3);
        let w = random_sym(&mut rng, 3);
        assert!(close(&transport_spd(&p, &p, &w).unwrap(), &w, 1e-12));
        let t = transport_spd(&SpdMatrix::identity(2), &diag(&[9.0, 9.0]), &SymMatrix::from_diag(&[2.0, 2.0]))
            .unwrap();
        assert_eq!(t, SymMatrix::from_diag(&[18.0, 18.0]));
    }

    #[test]
    fn mean_examples() {
        assert_eq!(log_cholesky_mean(&[]), Err(Error::EmptyInput));
        let p = random_spd(&mut seeded_rng(7), 3);
        assert_eq!(log_cholesky_mean(std::slice::from_ref(&p)).unwrap(), p);
        let same = log_cholesky_mean(&[p.clone(), p.clone(), p.clone()]).unwrap();
        assert!(close(&same, &p, 1e-14));
        let m = log_cholesky_mean(&[SpdMatrix::identity(2), diag(&[E * E, E * E])]).unwrap();
        assert!(close(&m, &diag(&[E, E]), 1e-15));
    }

    #[test]
    fn interpolation_examples() {
        let mut rng = seeded_rng(8);
        let p = random_spd(&mut rng, 3);
        let q = random_spd(&mut rng, 3);
        let pts = interpolate_spd(&p, &q, &[0.0, 1.0]).unwrap();
        assert!(close(&pts[0], &p, 1e-12));
        assert!(close(&pts[1], &q, 1e-12));
        let mid = &interpolate_spd(&p, &q, &[0.5]).unwrap()[0];
        let expect = (p.det().unwrap() * q.det().unwrap()).sqrt();
        assert!((mid.det().unwrap() / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_mean_endpoints() {
        let mut rng = seeded_rng(9);
        let p = random_spd(&mut rng, 3);
        let q = random_spd(&mut rng, 3);
        let m = weighted_log_cholesky_mean(&[p.clone(), q.clone()], &[0.25, 0.75]).unwrap();
        let g = &interpolate_spd(&p, &q, &[0.75]).unwrap()[0];
        assert!(close(&m, g, 1e-12));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = dist_spd(&SpdMatrix::identity(2), &SpdMatrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }
}
