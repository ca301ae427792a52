//! Seeded random generators for test inputs and experiments.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tri::{CholeskyFactor, LowerTriangular, SpdMatrix, SymMatrix};

/// Regularization added to `A A^T` by [`random_spd`].
pub const SPD_RIDGE: f64 = 1e-3;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

/// `A A^T + 1e-3 I` with `A` standard normal.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SpdMatrix {
    let a = gaussian_matrix(rng, m, m);
    let mut p = &a * a.transpose();
    for i in 0..m {
        p[(i, i)] += SPD_RIDGE;
    }
    SpdMatrix::new(SymMatrix::symmetrize(&p)).expect("A A^T + ridge is positive definite")
}

/// Haar-distributed orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign of each column fixed by `R`'s diagonal.
pub fn random_orthogonal<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DMatrix<f64> {
    let qr = gaussian_matrix(rng, m, m).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `R diag(eigs) R^T` with a random rotation `R`.
///
/// Fails only if rounding destroys positive definiteness, which can happen for
/// extreme spectra.
pub fn spd_with_spectrum<R: Rng + ?Sized>(rng: &mut R, eigs: &[f64]) -> crate::Result<SpdMatrix> {
    let q = random_orthogonal(rng, eigs.len());
    let d = DMatrix::from_diagonal(&DVector::from_column_slice(eigs));
    SpdMatrix::new(SymMatrix::symmetrize(&(&q * d * q.transpose())))
}

/// Spectrum `1, ..., 1/kappa`, geometrically spaced.
pub fn condition_spectrum(m: usize, kappa: f64) -> Vec<f64> {
    if m == 1 {
        return vec![1.0];
    }
    (0..m).map(|i| kappa.powf(-(i as f64) / (m - 1) as f64)).collect()
}

/// An SPD matrix with condition number `kappa`.
pub fn ill_conditioned_spd<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    kappa: f64,
) -> crate::Result<SpdMatrix> {
    spd_with_spectrum(rng, &condition_spectrum(m, kappa))
}

/// Lower triangular matrix with standard normal entries.
pub fn random_lower<R: Rng + ?Sized>(rng: &mut R, m: usize) -> LowerTriangular {
    LowerTriangular::from_fn(m, |_, _| normal(rng))
}

/// Cholesky factor with log-normal diagonal and a normal strict part of
/// variance `1/m`, which keeps the condition number moderate as `m` grows.
pub fn random_factor<R: Rng + ?Sized>(rng: &mut R, m: usize) -> CholeskyFactor {
    let off_scale = 1.0 / (m as f64).sqrt();
    let l = LowerTriangular::from_fn(m, |i, j| {
        if i == j {
            (0.5 * normal(rng)).exp()
        } else {
            off_scale * normal(rng)
        }
    });
    CholeskyFactor::new(l).expect("exponential diagonal is positive")
}

/// `L L^T` for `L` drawn by [`random_factor`]; better conditioned than
/// [`random_spd`] in higher dimensions.
pub fn random_spd_from_factor<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SpdMatrix {
    crate::chol_map::reconstruct(&random_factor(rng, m))
}

/// Symmetric matrix with standard normal entries in the lower triangle.
pub fn random_sym<R: Rng + ?Sized>(rng: &mut R, m: usize) -> SymMatrix {
    SymMatrix::from_fn(m, |_, _| normal(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_reproducible() {
        let a = random_spd(&mut seeded_rng(9), 4);
        let b = random_spd(&mut seeded_rng(9), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn orthogonal_is_orthogonal() {
        let q = random_orthogonal(&mut seeded_rng(1), 6);
        let e = &q.transpose() * &q - DMatrix::identity(6, 6);
        assert!(e.norm() < 1e-13);
    }

    #[test]
    fn ill_conditioned_has_requested_condition() {
        let p = ill_conditioned_spd(&mut seeded_rng(2), 3, 1e6).unwrap();
        let eig = p.to_dense().symmetric_eigen();
        let max = eig.eigenvalues.max();
        let min = eig.eigenvalues.min();
        assert!((max / min / 1e6 - 1.0).abs() < 1e-6);
    }
}
