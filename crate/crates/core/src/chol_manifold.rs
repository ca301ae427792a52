//! The Cholesky space as a flat Riemannian manifold and abelian Lie group.
//!
//! The metric treats the strictly lower part Euclidean-ly and each diagonal
//! entry logarithmically:
//!
//! ```text
//! g_L(X, Y) = sum_{i>j} X_ij Y_ij + sum_j X_jj Y_jj / L_jj^2
//! ```
//!
//! Every operation below is a closed form acting separately on ⌊·⌋ and 𝔻(·);
//! diagonal exp/log/reciprocal are evaluated entry by entry on the packed
//! diagonal.
//!
//! Functions in this module panic when their arguments have different
//! dimensions.

use crate::error::{Error, Result};
use crate::tri::{idx, CholeskyFactor, LowerTriangular, PackedLower};

fn assert_same_dim(a: usize, b: usize) {
    assert_eq!(a, b, "dimension mismatch: {a} vs {b}");
}

/// Copies `x` and rewrites its diagonal entries with `f(i, x_ii)`.
fn map_diag(x: &LowerTriangular, mut f: impl FnMut(usize, f64) -> f64) -> LowerTriangular {
    let mut out = x.clone();
    for i in 0..x.dim() {
        let d = out.diag_mut(i);
        *d = f(i, *d);
    }
    out
}

/// A tangent vector together with its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentAtFactor {
    base: CholeskyFactor,
    vec: LowerTriangular,
}

impl TangentAtFactor {
    pub fn new(base: CholeskyFactor, vec: LowerTriangular) -> Result<Self> {
        crate::error::check_dims(base.dim(), vec.dim())?;
        Ok(Self { base, vec })
    }

    pub fn base(&self) -> &CholeskyFactor {
        &self.base
    }

    pub fn vec(&self) -> &LowerTriangular {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        metric_chol(&self.base, &self.vec, &self.vec).sqrt()
    }

    /// Point reached by following the geodesic for unit time.
    pub fn exp(&self) -> CholeskyFactor {
        exp_chol(&self.base, &self.vec)
    }

    /// Parallel transport to `target`.
    pub fn transport_to(&self, target: &CholeskyFactor) -> Self {
        Self { vec: transport_chol(&self.base, target, &self.vec), base: target.clone() }
    }
}

/// Riemannian inner product at `l`.
pub fn metric_chol(l: &CholeskyFactor, x: &LowerTriangular, y: &LowerTriangular) -> f64 {
    assert_same_dim(l.dim(), x.dim());
    assert_same_dim(x.dim(), y.dim());
    let m = l.dim();
    let (xp, yp, lp) = (x.packed(), y.packed(), l.packed());
    let mut strict = 0.0;
    let mut diag = 0.0;
    for i in 0..m {
        for j in 0..i {
            strict += xp[idx(i, j)] * yp[idx(i, j)];
        }
        let k = idx(i, i);
        diag += xp[k] * yp[k] / (lp[k] * lp[k]);
    }
    strict + diag
}

/// The geodesic through `l` with initial velocity `x`, evaluated at `t`:
/// `⌊L⌋ + t⌊X⌋ + 𝔻(L) exp(t 𝔻(X) 𝔻(L)^{-1})`. Defined for every real `t`.
pub fn geodesic_chol(l: &CholeskyFactor, x: &LowerTriangular, t: f64) -> CholeskyFactor {
    assert_same_dim(l.dim(), x.dim());
    let mut out = l.as_lower().axpy(t, x);
    for i in 0..l.dim() {
        let li = l.diag_entry(i);
        *out.diag_mut(i) = li * (t * x.diag_entry(i) / li).exp();
    }
    CholeskyFactor::from_raw(out)
}

/// Riemannian exponential map at `l`.
pub fn exp_chol(l: &CholeskyFactor, x: &LowerTriangular) -> CholeskyFactor {
    geodesic_chol(l, x, 1.0)
}

/// Riemannian logarithm: `⌊K⌋ - ⌊L⌋ + 𝔻(L) log(𝔻(L)^{-1} 𝔻(K))`.
pub fn log_chol(l: &CholeskyFactor, k: &CholeskyFactor) -> LowerTriangular {
    assert_same_dim(l.dim(), k.dim());
    let mut out = k.as_lower().axpy(-1.0, l.as_lower());
    for i in 0..l.dim() {
        let li = l.diag_entry(i);
        *out.diag_mut(i) = li * (k.diag_entry(i) / li).ln();
    }
    out
}

/// Geodesic distance.
pub fn dist_chol(l: &CholeskyFactor, k: &CholeskyFactor) -> f64 {
    assert_same_dim(l.dim(), k.dim());
    let m = l.dim();
    let (lp, kp) = (l.packed(), k.packed());
    let mut acc = 0.0;
    for i in 0..m {
        for j in 0..i {
            let d = lp[idx(i, j)] - kp[idx(i, j)];
            acc += d * d;
        }
        let d = lp[idx(i, i)].ln() - kp[idx(i, i)].ln();
        acc += d * d;
    }
    acc.sqrt()
}

/// The group operation on all lower triangular matrices:
/// `⌊X⌋ + ⌊Y⌋ + 𝔻(X) 𝔻(Y)`.
pub fn group_op_lower(x: &LowerTriangular, y: &LowerTriangular) -> LowerTriangular {
    assert_same_dim(x.dim(), y.dim());
    let mut out = x + y;
    for i in 0..x.dim() {
        *out.diag_mut(i) = x.diag_entry(i) * y.diag_entry(i);
    }
    out
}

/// The group operation restricted to the Cholesky space, which it preserves.
pub fn group_op(l: &CholeskyFactor, k: &CholeskyFactor) -> CholeskyFactor {
    CholeskyFactor::from_raw(group_op_lower(l, k))
}

/// Group inverse `𝔻(L)^{-1} - ⌊L⌋`.
pub fn group_inv(l: &CholeskyFactor) -> CholeskyFactor {
    let neg = -l.as_lower();
    CholeskyFactor::from_raw(map_diag(&neg, |i, _| 1.0 / l.diag_entry(i)))
}

/// Differential of left translation by `a`: `X -> ⌊X⌋ + 𝔻(A) 𝔻(X)`.
/// It does not depend on the point it is taken at.
pub fn left_translation_diff(a: &CholeskyFactor, x: &LowerTriangular) -> LowerTriangular {
    assert_same_dim(a.dim(), x.dim());
    map_diag(x, |i, d| a.diag_entry(i) * d)
}

/// Parallel transport of `x` from `l` to `k`: `⌊X⌋ + 𝔻(K) 𝔻(L)^{-1} 𝔻(X)`.
///
/// The strictly lower block is copied untouched.
pub fn transport_chol(l: &CholeskyFactor, k: &CholeskyFactor, x: &LowerTriangular) -> LowerTriangular {
    assert_same_dim(l.dim(), k.dim());
    assert_same_dim(l.dim(), x.dim());
    map_diag(x, |i, d| k.diag_entry(i) / l.diag_entry(i) * d)
}

/// Closed-form Fréchet mean: `(1/n) sum ⌊L_i⌋ + exp((1/n) sum log 𝔻(L_i))`.
pub fn frechet_mean_chol(ls: &[CholeskyFactor]) -> Result<CholeskyFactor> {
    let first = ls.first().ok_or(Error::EmptyInput)?;
    if ls.len() == 1 {
        return Ok(first.clone());
    }
    let m = first.dim();
    let mut acc = vec![0.0; first.packed().len()];
    for l in ls {
        crate::error::check_dims(m, l.dim())?;
        for i in 0..m {
            for j in 0..i {
                acc[idx(i, j)] += l.packed()[idx(i, j)];
            }
            acc[idx(i, i)] += l.diag_entry(i).ln();
        }
    }
    let n = ls.len() as f64;
    for i in 0..m {
        for j in 0..i {
            acc[idx(i, j)] /= n;
        }
        acc[idx(i, i)] = (acc[idx(i, i)] / n).exp();
    }
    Ok(CholeskyFactor::from_raw(LowerTriangular::from_raw(m, acc)))
}

/// Weighted Fréchet mean with convex weights summing to one.
pub fn weighted_frechet_mean_chol(ls: &[CholeskyFactor], weights: &[f64]) -> Result<CholeskyFactor> {
    let first = ls.first().ok_or(Error::EmptyInput)?;
    validate_weights(weights, ls.len())?;
    let m = first.dim();
    let mut acc = vec![0.0; first.packed().len()];
    for (l, &w) in ls.iter().zip(weights) {
        crate::error::check_dims(m, l.dim())?;
        for i in 0..m {
            for j in 0..i {
                acc[idx(i, j)] += w * l.packed()[idx(i, j)];
            }
            acc[idx(i, i)] += w * l.diag_entry(i).ln();
        }
    }
    for i in 0..m {
        acc[idx(i, i)] = acc[idx(i, i)].exp();
    }
    Ok(CholeskyFactor::from_raw(LowerTriangular::from_raw(m, acc)))
}

pub(crate) fn validate_weights(weights: &[f64], n: usize) -> Result<()> {
    if weights.len() != n {
        return Err(Error::InvalidWeights(format!("expected {n} weights, got {}", weights.len())));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}
