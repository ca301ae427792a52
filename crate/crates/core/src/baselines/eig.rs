//! Matrix functions of symmetric matrices through the symmetric
//! eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tri::SymMatrix;

const EIG_EPS: f64 = f64::EPSILON;
const EIG_MAX_ITER: usize = 10_000;

/// `A = U diag(values) U^T`.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

/// Scalar functions with closed-form divided differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarFn {
    Exp,
    Log,
}

impl ScalarFn {
    fn apply(self, x: f64) -> f64 {
        match self {
            ScalarFn::Exp => x.exp(),
            ScalarFn::Log => x.ln(),
        }
    }

    /// `(f(a) - f(b)) / (a - b)`, falling back to `f'` on the diagonal and
    /// written to avoid cancellation for nearby arguments.
    fn divided_difference(self, a: f64, b: f64) -> f64 {
        match self {
            ScalarFn::Exp => {
                let d = a - b;
                if d == 0.0 {
                    b.exp()
                } else {
                    b.exp() * d.exp_m1() / d
                }
            }
            ScalarFn::Log => {
                let d = a - b;
                if d == 0.0 {
                    1.0 / b
                } else if d.abs() < 0.5 * b {
                    (d / b).ln_1p() / d
                } else {
                    (a.ln() - b.ln()) / d
                }
            }
        }
    }
}

impl SymEigen {
    pub fn new(s: &SymMatrix) -> Result<Self> {
        Self::from_dense(s.to_dense())
    }

    pub fn from_dense(a: DMatrix<f64>) -> Result<Self> {
        let eig = SymmetricEigen::try_new(a, EIG_EPS, EIG_MAX_ITER)
            .ok_or_else(|| Error::EigFailure("QR iteration did not converge".into()))?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::EigFailure("non-finite eigenvalue".into()));
        }
        Ok(Self { values: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    /// Fails with [`Error::NotSpd`] unless every eigenvalue is positive.
    pub fn require_positive(&self) -> Result<()> {
        match self.values.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            Some((index, &pivot)) => Err(Error::NotSpd { index, pivot }),
            None => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `U diag(f(values)) U^T` as a dense matrix.
    pub fn map_dense(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (j, &v) in self.values.iter().enumerate() {
            let fv = f(v);
            scaled.column_mut(j).scale_mut(fv);
        }
        scaled * self.vectors.transpose()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        SymMatrix::symmetrize(&self.map_dense(f))
    }

    /// Fréchet derivative of `f` at this matrix in direction `v`:
    /// `U (Γ ∘ (U^T V U)) U^T` with `Γ` the divided differences of `f`.
    pub fn frechet_derivative(&self, f: ScalarFn, v: &DMatrix<f64>) -> DMatrix<f64> {
        let u = &self.vectors;
        let mut inner = u.transpose() * v * u;
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                inner[(i, j)] *= f.divided_difference(self.values[i], self.values[j]);
            }
        }
        u * inner * u.transpose()
    }

    pub fn apply(&self, f: ScalarFn) -> SymMatrix {
        self.map(|x| f.apply(x))
    }
}

/// Principal matrix logarithm of an SPD matrix.
pub fn sym_log(s: &SymMatrix) -> Result<SymMatrix> {
    let eig = SymEigen::new(s)?;
    eig.require_positive()?;
    Ok(eig.apply(ScalarFn::Log))
}

/// Matrix exponential of a symmetric matrix.
pub fn sym_exp(s: &SymMatrix) -> Result<SymMatrix> {
    Ok(SymEigen::new(s)?.apply(ScalarFn::Exp))
}

/// `S^power` for SPD `S`.
pub fn sym_powf(s: &SymMatrix, power: f64) -> Result<SymMatrix> {
    let eig = SymEigen::new(s)?;
    eig.require_positive()?;
    Ok(eig.map(|x| x.powf(power)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_spd, random_sym, seeded_rng};

    #[test]
    fn log_exp_round_trip() {
        let p = random_spd(&mut seeded_rng(1), 4);
        let back = sym_exp(&sym_log(&p).unwrap()).unwrap();
        assert!((&back - p.as_sym()).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn log_rejects_indefinite() {
        let s = SymMatrix::from_diag(&[1.0, -1.0]);
        assert!(matches!(sym_log(&s), Err(Error::NotSpd { .. })));
    }

    #[test]
    fn powf_half_squares_back() {
        let p = random_spd(&mut seeded_rng(2), 3);
        let r = sym_powf(&p, 0.5).unwrap().to_dense();
        assert!((&r * &r - p.to_dense()).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn frechet_derivative_matches_finite_difference() {
        let mut rng = seeded_rng(3);
        let p = random_spd(&mut rng, 3);
        let v = random_sym(&mut rng, 3);
        let h = 1e-6;
        for f in [ScalarFn::Exp, ScalarFn::Log] {
            let base = if f == ScalarFn::Exp { sym_log(&p).unwrap() } else { p.as_sym().clone() };
            let eig = SymEigen::new(&base).unwrap();
            let d = eig.frechet_derivative(f, &v.to_dense());
            let plus = SymEigen::new(&base.axpy(h, &v)).unwrap().apply(f).to_dense();
            let minus = SymEigen::new(&base.axpy(-h, &v)).unwrap().apply(f).to_dense();
            let fd = (plus - minus) / (2.0 * h);
            assert!((&d - &fd).norm() < 1e-6 * d.norm().max(1.0), "{f:?}");
        }
    }

    #[test]
    fn divided_differences_are_continuous() {
        for f in [ScalarFn::Exp, ScalarFn::Log] {
            let a = f.divided_difference(2.0, 2.0);
            let b = f.divided_difference(2.0 + 1e-9, 2.0);
            assert!((a - b).abs() < 1e-8);
        }
    }
}
