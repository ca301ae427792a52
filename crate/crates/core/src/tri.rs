//! Packed lower-triangular and symmetric storage.
//!
//! Both [`LowerTriangular`] and [`SymMatrix`] keep the lower triangle (diagonal
//! included) in row-major packed order: entry `(i, j)` with `j <= i` lives at
//! `i * (i + 1) / 2 + j`. Triangularity and symmetry therefore hold by
//! construction.
//!
//! The elementwise operators every Log-Cholesky formula is written in terms of
//! live here: the strictly lower part ⌊A⌋, the diagonal part 𝔻(A), the
//! half-diagonal operator, diagonal exp/log and the triangular determinant.

use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{check_dims, Error, Result};

/// Smallest diagonal entry accepted for a Cholesky factor or an SPD pivot.
///
/// Any representable positive value passes; numerical quality is judged by the
/// operations, not by the types.
pub const POSITIVITY_TOL: f64 = 1e-300;

/// Number of packed entries for an `m x m` triangle.
#[inline]
pub const fn packed_len(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

#[inline]
pub(crate) const fn idx(i: usize, j: usize) -> usize {
    i * (i + 1) / 2 + j
}

#[inline]
const fn diag_idx(i: usize) -> usize {
    i * (i + 3) / 2
}

fn validate_packed(dim: usize, data: &[f64]) -> Result<()> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    check_dims(packed_len(dim), data.len())?;
    if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite entry at packed index {pos}")));
    }
    Ok(())
}

/// Shared read access to packed lower-triangle storage.
pub trait PackedLower {
    fn dim(&self) -> usize;
    fn packed(&self) -> &[f64];

    /// Diagonal entry `i`.
    #[inline]
    fn diag_entry(&self, i: usize) -> f64 {
        self.packed()[diag_idx(i)]
    }

    /// The diagonal as a vector.
    fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.diag_entry(i)).collect()
    }
}

/// An `m x m` lower triangular matrix. Also the tangent space of the Cholesky
/// space at any point.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular {
    dim: usize,
    data: Vec<f64>,
}

impl PackedLower for LowerTriangular {
    #[inline]
    fn dim(&self) -> usize {
        self.dim
    }
    #[inline]
    fn packed(&self) -> &[f64] {
        &self.data
    }
}

impl LowerTriangular {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        validate_packed(dim, &data)?;
        Ok(Self { dim, data })
    }

    /// Internal constructor for values produced by arithmetic on valid inputs.
    #[inline]
    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), packed_len(dim));
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(dim, vec![0.0; packed_len(dim)])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.data[diag_idx(i)] = d;
        }
        out
    }

    /// Builds from a closure evaluated on `j <= i`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(packed_len(dim));
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self::from_raw(dim, data)
    }

    /// Builds from dense rows, rejecting non-zero entries above the diagonal.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for (i, row) in rows.iter().enumerate() {
            check_dims(dim, row.len())?;
            if let Some(j) = (i + 1..dim).find(|&j| row[j] != 0.0) {
                return Err(Error::Domain(format!(
                    "entry ({i}, {j}) above the diagonal is non-zero"
                )));
            }
        }
        Self::new(dim, Self::from_fn(dim, |i, j| rows[i][j]).data)
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Entry `(i, j)`; zero above the diagonal.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.data[idx(i, j)]
        } else {
            0.0
        }
    }

    /// Sets entry `(i, j)` with `j <= i`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(j <= i, "({i}, {j}) is above the diagonal");
        self.data[idx(i, j)] = value;
    }

    pub fn into_packed(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub(crate) fn diag_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.data[diag_idx(i)]
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|v| a * v).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_raw(
            self.dim,
            self.data.iter().zip(&other.data).map(|(x, y)| x + a * y).collect(),
        )
    }

    /// Product of two lower triangular matrices (lower triangular).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_fn(self.dim, |i, j| {
            (j..=i).map(|k| self.data[idx(i, k)] * other.data[idx(k, j)]).sum()
        })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `L * L^T`, the symmetric product.
    pub fn gram(&self) -> SymMatrix {
        SymMatrix::from_fn(self.dim, |i, j| {
            (0..=j).map(|k| self.data[idx(i, k)] * self.data[idx(j, k)]).sum()
        })
    }

    /// `self * other^T + other * self^T`.
    pub fn sym_product(&self, other: &Self) -> SymMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        SymMatrix::from_fn(self.dim, |i, j| {
            (0..=j)
                .map(|k| {
                    self.data[idx(i, k)] * other.data[idx(j, k)]
                        + other.data[idx(i, k)] * self.data[idx(j, k)]
                })
                .sum()
        })
    }

    /// Transpose as a dense matrix (upper triangular).
    pub fn transpose_dense(&self) -> DMatrix<f64> {
        self.to_dense().transpose()
    }
}

impl Add for &LowerTriangular {
    type Output = LowerTriangular;
    fn add(self, rhs: Self) -> LowerTriangular {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &LowerTriangular {
    type Output = LowerTriangular;
    fn sub(self, rhs: Self) -> LowerTriangular {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<&LowerTriangular> for f64 {
    type Output = LowerTriangular;
    fn mul(self, rhs: &LowerTriangular) -> LowerTriangular {
        rhs.scale(self)
    }
}

impl Neg for &LowerTriangular {
    type Output = LowerTriangular;
    fn neg(self) -> LowerTriangular {
        self.scale(-1.0)
    }
}

/// A point of the Cholesky space: lower triangular with strictly positive
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor(LowerTriangular);

impl CholeskyFactor {
    pub fn new(l: LowerTriangular) -> Result<Self> {
        for i in 0..l.dim() {
            let d = l.diag_entry(i);
            if !(d > POSITIVITY_TOL) {
                return Err(Error::Domain(format!(
                    "diagonal entry {i} of a Cholesky factor must be positive, got {d}"
                )));
            }
        }
        Ok(Self(l))
    }

    #[inline]
    pub(crate) fn from_raw(l: LowerTriangular) -> Self {
        debug_assert!((0..l.dim()).all(|i| l.diag_entry(i) > 0.0));
        Self(l)
    }

    pub fn identity(dim: usize) -> Self {
        Self(LowerTriangular::identity(dim))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(LowerTriangular::from_rows(rows)?)
    }

    pub fn as_lower(&self) -> &LowerTriangular {
        &self.0
    }

    pub fn into_lower(self) -> LowerTriangular {
        self.0
    }
}

impl Deref for CholeskyFactor {
    type Target = LowerTriangular;
    fn deref(&self) -> &LowerTriangular {
        &self.0
    }
}

impl PackedLower for CholeskyFactor {
    fn dim(&self) -> usize {
        self.0.dim
    }
    fn packed(&self) -> &[f64] {
        &self.0.data
    }
}

/// A symmetric `m x m` matrix stored as its packed lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

/// Tangent vectors at an SPD point are symmetric matrices.
pub type SymTangent = SymMatrix;

impl PackedLower for SymMatrix {
    #[inline]
    fn dim(&self) -> usize {
        self.dim
    }
    #[inline]
    fn packed(&self) -> &[f64] {
        &self.data
    }
}

impl SymMatrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        validate_packed(dim, &data)?;
        Ok(Self { dim, data })
    }

    #[inline]
    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), packed_len(dim));
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_raw(dim, vec![0.0; packed_len(dim)])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![1.0; dim])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out.data[diag_idx(i)] = d;
        }
        out
    }

    /// Builds from a closure evaluated on `j <= i`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(packed_len(dim));
        for i in 0..dim {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        Self::from_raw(dim, data)
    }

    /// Builds from dense rows; the two triangles must agree to a relative
    /// tolerance of `1e-12` of the largest entry. The stored value is their
    /// average.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            check_dims(dim, row.len())?;
        }
        let scale = rows.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()));
        for i in 0..dim {
            for j in 0..i {
                if (rows[i][j] - rows[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::Domain(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let s = Self::from_fn(dim, |i, j| 0.5 * (rows[i][j] + rows[j][i]));
        Self::new(dim, s.data)
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
        }
        let rows: Vec<Vec<f64>> = m.row_iter().map(|r| r.iter().copied().collect()).collect();
        Self::from_rows(&rows)
    }

    /// `(A + A^T) / 2` of an arbitrary square matrix.
    pub fn symmetrize(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        Self::from_fn(m.nrows(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.data[idx(i, j)]
        } else {
            self.data[idx(j, i)]
        }
    }

    pub fn into_packed(self) -> Vec<f64> {
        self.data
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_raw(self.dim, self.data.iter().map(|v| a * v).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_raw(
            self.dim,
            self.data.iter().zip(&other.data).map(|(x, y)| x + a * y).collect(),
        )
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.diag_entry(i)).sum()
    }

    /// Frobenius inner product `tr(A B)` of the full matrices.
    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..=i {
                let p = self.data[idx(i, j)] * other.data[idx(i, j)];
                acc += if i == j { p } else { 2.0 * p };
            }
        }
        acc
    }

    /// Frobenius norm of the full matrix.
    pub fn norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: Self) -> SymMatrix {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: Self) -> SymMatrix {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<&SymMatrix> for f64 {
    type Output = SymMatrix;
    fn mul(self, rhs: &SymMatrix) -> SymMatrix {
        rhs.scale(self)
    }
}

/// A symmetric positive definite matrix.
///
/// Validity is decided by attempting a Cholesky factorization: every pivot
/// must exceed [`POSITIVITY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix(SymMatrix);

impl SpdMatrix {
    pub fn new(s: SymMatrix) -> Result<Self> {
        crate::chol_map::factor_packed(&s)?;
        Ok(Self(s))
    }

    #[inline]
    pub(crate) fn from_raw(s: SymMatrix) -> Self {
        Self(s)
    }

    pub fn identity(dim: usize) -> Self {
        Self(SymMatrix::identity(dim))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(SymMatrix::from_diag(diag))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SymMatrix::from_rows(rows)?)
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(SymMatrix::from_dense(m)?)
    }

    pub fn as_sym(&self) -> &SymMatrix {
        &self.0
    }

    pub fn into_sym(self) -> SymMatrix {
        self.0
    }

    /// Determinant, computed as the squared product of the Cholesky diagonal.
    pub fn det(&self) -> Result<f64> {
        let l = crate::chol_map::cholesky_factor(self)?;
        let d = tri_det(&l);
        Ok(d * d)
    }

    /// `log det`, robust against under/overflow of the determinant itself.
    pub fn log_det(&self) -> Result<f64> {
        let l = crate::chol_map::cholesky_factor(self)?;
        Ok(2.0 * l.diagonal().iter().map(|d| d.ln()).sum::<f64>())
    }
}

impl Deref for SpdMatrix {
    type Target = SymMatrix;
    fn deref(&self) -> &SymMatrix {
        &self.0
    }
}

impl PackedLower for SpdMatrix {
    fn dim(&self) -> usize {
        self.0.dim
    }
    fn packed(&self) -> &[f64] {
        &self.0.data
    }
}

/// ⌊A⌋: the strictly lower triangular part.
pub fn strict_lower<A: PackedLower + ?Sized>(a: &A) -> LowerTriangular {
    let mut out = LowerTriangular::from_raw(a.dim(), a.packed().to_vec());
    for i in 0..a.dim() {
        *out.diag_mut(i) = 0.0;
    }
    out
}

/// 𝔻(A): the diagonal part.
pub fn diag_part<A: PackedLower + ?Sized>(a: &A) -> LowerTriangular {
    LowerTriangular::from_diag(&a.diagonal())
}

/// The lower triangle of `S` with its diagonal halved.
pub fn half_lower(s: &SymMatrix) -> LowerTriangular {
    let mut out = LowerTriangular::from_raw(s.dim, s.data.clone());
    for i in 0..s.dim {
        *out.diag_mut(i) *= 0.5;
    }
    out
}

/// `exp` applied to the diagonal of `d`; off-diagonal entries are dropped.
pub fn diag_exp(d: &LowerTriangular) -> LowerTriangular {
    LowerTriangular::from_diag(&d.diagonal().iter().map(|v| v.exp()).collect::<Vec<_>>())
}

/// `log` applied to the diagonal of `d`; off-diagonal entries are dropped.
pub fn diag_log(d: &LowerTriangular) -> Result<LowerTriangular> {
    let diag = d.diagonal();
    if let Some(i) = diag.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::Domain(format!(
            "log of non-positive diagonal entry {} at index {i}",
            diag[i]
        )));
    }
    Ok(LowerTriangular::from_diag(&diag.iter().map(|v| v.ln()).collect::<Vec<_>>()))
}

/// Determinant of a lower triangular matrix: the product of its diagonal.
pub fn tri_det<A: PackedLower + ?Sized>(l: &A) -> f64 {
    (0..l.dim()).map(|i| l.diag_entry(i)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lt(rows: &[&[f64]]) -> LowerTriangular {
        LowerTriangular::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn packed_layout_is_row_major() {
        let l = lt(&[&[1.0, 0.0, 0.0], &[2.0, 3.0, 0.0], &[4.0, 5.0, 6.0]]);
        assert_eq!(l.packed(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(l.diagonal(), vec![1.0, 3.0, 6.0]);
        assert_eq!(l.get(0, 2), 0.0);
    }

    #[test]
    fn strict_lower_examples() {
        assert_eq!(strict_lower(&lt(&[&[2.0, 0.0], &[1.0, 2.0]])), lt(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(strict_lower(&LowerTriangular::identity(2)), LowerTriangular::zeros(2));
        assert_eq!(strict_lower(&lt(&[&[3.0, 0.0], &[5.0, 7.0]])), lt(&[&[0.0, 0.0], &[5.0, 0.0]]));
    }

    #[test]
    fn diag_part_examples() {
        assert_eq!(diag_part(&lt(&[&[2.0, 0.0], &[1.0, 2.0]])), LowerTriangular::from_diag(&[2.0, 2.0]));
        assert_eq!(diag_part(&LowerTriangular::zeros(2)), LowerTriangular::zeros(2));
        let d = LowerTriangular::from_diag(&[1.0, 5.0]);
        assert_eq!(diag_part(&d), d);
    }

    #[test]
    fn half_lower_examples() {
        let s = SymMatrix::from_rows(&[vec![2.0, 4.0], vec![4.0, 6.0]]).unwrap();
        assert_eq!(half_lower(&s), lt(&[&[1.0, 0.0], &[4.0, 3.0]]));
        assert_eq!(half_lower(&SymMatrix::identity(2)), LowerTriangular::from_diag(&[0.5, 0.5]));
        assert_eq!(half_lower(&SymMatrix::zeros(2)), LowerTriangular::zeros(2));
    }

    #[test]
    fn diag_exp_log_examples() {
        assert_eq!(diag_exp(&LowerTriangular::zeros(2)), LowerTriangular::identity(2));
        let e = std::f64::consts::E;
        let l = diag_log(&LowerTriangular::from_diag(&[e, e * e])).unwrap();
        assert!((l.get(0, 0) - 1.0).abs() < 1e-15 && (l.get(1, 1) - 2.0).abs() < 1e-15);

        let d = LowerTriangular::from_diag(&[-3.7, 0.2]);
        let back = diag_log(&diag_exp(&d)).unwrap();
        for (a, b) in back.diagonal().iter().zip(d.diagonal()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn diag_log_rejects_non_positive() {
        assert!(matches!(diag_log(&LowerTriangular::from_diag(&[1.0, 0.0])), Err(Error::Domain(_))));
        assert!(matches!(diag_log(&LowerTriangular::from_diag(&[-1.0, 1.0])), Err(Error::Domain(_))));
    }

    #[test]
    fn tri_det_examples() {
        assert_eq!(tri_det(&lt(&[&[2.0, 0.0], &[1.0, 2.0]])), 4.0);
        assert_eq!(tri_det(&LowerTriangular::identity(4)), 1.0);
        assert_eq!(tri_det(&LowerTriangular::from_diag(&[0.1, 1.0])), 0.1);
    }

    #[test]
    fn constructors_validate() {
        assert!(LowerTriangular::new(2, vec![1.0, 2.0]).is_err());
        assert!(LowerTriangular::new(2, vec![1.0, f64::NAN, 1.0]).is_err());
        assert!(LowerTriangular::new(0, vec![]).is_err());
        assert!(LowerTriangular::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).is_err());
        assert!(CholeskyFactor::new(LowerTriangular::from_diag(&[1.0, 0.0])).is_err());
        assert!(CholeskyFactor::new(LowerTriangular::from_diag(&[1.0, 1e-200])).is_ok());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).is_err());
        assert!(SpdMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(SpdMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).is_ok());
    }

    #[test]
    fn half_lower_reconstructs_symmetric() {
        let s = SymMatrix::from_rows(&[
            vec![3.0, -1.5, 0.25],
            vec![-1.5, 7.0, 2.0],
            vec![0.25, 2.0, -4.0],
        ])
        .unwrap();
        let h = half_lower(&s).to_dense();
        assert_eq!(&h + h.transpose(), s.to_dense());
    }

    #[test]
    fn sym_norm_counts_both_triangles() {
        let s = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert!((s.norm() - s.to_dense().norm()).abs() < 1e-15);
    }
}
