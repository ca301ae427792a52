//! The Cholesky map between SPD matrices and the Cholesky space, its inverse
//! `L -> L L^T`, and the differentials of both.

use crate::error::{check_dims, Error, Result};
use crate::tri::{
    half_lower, idx, CholeskyFactor, LowerTriangular, PackedLower, SpdMatrix, SymMatrix,
    SymTangent, POSITIVITY_TOL,
};

/// Column-oriented Cholesky factorization of a packed symmetric matrix.
///
/// Fails with [`Error::NotSpd`] as soon as a pivot radicand is not above
/// [`POSITIVITY_TOL`] or is non-finite.
pub(crate) fn factor_packed(s: &SymMatrix) -> Result<LowerTriangular> {
    let m = s.dim();
    let a = s.packed();
    let mut l = vec![0.0; a.len()];
    for j in 0..m {
        let row_j = idx(j, 0);
        let mut pivot = a[idx(j, j)];
        for k in 0..j {
            pivot -= l[row_j + k] * l[row_j + k];
        }
        if !(pivot > POSITIVITY_TOL) || !pivot.is_finite() {
            return Err(Error::NotSpd { index: j, pivot });
        }
        let ljj = pivot.sqrt();
        l[idx(j, j)] = ljj;
        for i in j + 1..m {
            let row_i = idx(i, 0);
            let mut v = a[idx(i, j)];
            for k in 0..j {
                v -= l[row_i + k] * l[row_j + k];
            }
            l[row_i + j] = v / ljj;
        }
    }
    Ok(LowerTriangular::from_raw(m, l))
}

/// The Cholesky factor of an SPD matrix: the unique lower triangular `L` with
/// positive diagonal and `L L^T = P`.
pub fn cholesky_factor(p: &SpdMatrix) -> Result<CholeskyFactor> {
    factor_packed(p.as_sym()).map(CholeskyFactor::from_raw)
}

/// Factorizes an arbitrary symmetric matrix, failing if it is not SPD.
pub fn try_cholesky(s: &SymMatrix) -> Result<CholeskyFactor> {
    factor_packed(s).map(CholeskyFactor::from_raw)
}

/// `L L^T`.
pub fn reconstruct(l: &CholeskyFactor) -> SpdMatrix {
    SpdMatrix::from_raw(l.gram())
}

/// Differential of `L -> L L^T` at `L`, applied to `X`: `L X^T + X L^T`.
pub fn diff_s(l: &CholeskyFactor, x: &LowerTriangular) -> Result<SymTangent> {
    check_dims(l.dim(), x.dim())?;
    Ok(l.sym_product(x))
}

/// Inverse of [`diff_s`]: `L (L^{-1} W L^{-T})_{1/2}`.
///
/// This is also the differential of the Cholesky map at `P = L L^T`.
pub fn diff_s_inv(l: &CholeskyFactor, w: &SymTangent) -> Result<LowerTriangular> {
    check_dims(l.dim(), w.dim())?;
    let z = whiten(l, w);
    Ok(l.matmul(&half_lower(&z)))
}

/// `L^{-1} W L^{-T}` by two forward substitutions, symmetrized.
pub fn whiten(l: &CholeskyFactor, w: &SymMatrix) -> SymMatrix {
    let z = whiten_dense(l, w);
    let m = l.dim();
    SymMatrix::from_fn(m, |i, j| 0.5 * (z[i * m + j] + z[j * m + i]))
}

/// Row-major dense `L^{-1} W L^{-T}` before symmetrization.
pub(crate) fn whiten_dense(l: &CholeskyFactor, w: &SymMatrix) -> Vec<f64> {
    let m = l.dim();
    let lp = l.packed();
    // y = L^{-1} W, column by column
    let mut y = vec![0.0; m * m];
    for c in 0..m {
        for i in 0..m {
            let row = idx(i, 0);
            let mut v = w.get(i, c);
            for k in 0..i {
                v -= lp[row + k] * y[k * m + c];
            }
            y[i * m + c] = v / lp[row + i];
        }
    }
    // z = L^{-1} y^T
    let mut z = vec![0.0; m * m];
    for c in 0..m {
        for i in 0..m {
            let row = idx(i, 0);
            let mut v = y[c * m + i];
            for k in 0..i {
                v -= lp[row + k] * z[k * m + c];
            }
            z[i * m + c] = v / lp[row + i];
        }
    }
    z
}
