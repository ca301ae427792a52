//! Affine-invariant geometry, `<W, V>_P = tr(P^{-1} W P^{-1} V)`.

use nalgebra::DMatrix;

use super::eig::{ScalarFn, SymEigen};
use super::log_euclidean::logeuclid_mean;
use crate::error::{check_dims, Error, Result};
use crate::geometry::{Geometry, Metric};
use crate::tri::{PackedLower, SpdMatrix, SymMatrix, SymTangent};

/// Karcher iteration stops once the Riemannian gradient norm drops below this.
pub const KARCHER_TOL: f64 = 1e-12;
pub const KARCHER_MAX_ITER: usize = 200;

/// `P^{1/2}` and `P^{-1/2}` from one eigendecomposition.
struct SqrtPair {
    sqrt: DMatrix<f64>,
    inv_sqrt: DMatrix<f64>,
}

impl SqrtPair {
    fn new(p: &SymMatrix) -> Result<Self> {
        let eig = SymEigen::new(p)?;
        eig.require_positive()?;
        Ok(Self { sqrt: eig.map_dense(f64::sqrt), inv_sqrt: eig.map_dense(|x| 1.0 / x.sqrt()) })
    }

    /// `P^{-1/2} A P^{-1/2}`.
    fn whiten(&self, a: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::symmetrize(&(&self.inv_sqrt * a * &self.inv_sqrt))
    }

    /// `P^{1/2} A P^{1/2}`.
    fn color(&self, a: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::symmetrize(&(&self.sqrt * a * &self.sqrt))
    }
}

/// `||log(P^{-1/2} Q P^{-1/2})||_F`.
pub fn affine_dist(p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    let s = SqrtPair::new(p)?;
    let eig = SymEigen::new(&s.whiten(&q.to_dense()))?;
    eig.require_positive()?;
    Ok(eig.values.iter().map(|v| v.ln().powi(2)).sum::<f64>().sqrt())
}

/// `P^{1/2} (P^{-1/2} Q P^{-1/2})^t P^{1/2}`.
pub fn affine_interpolate(p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    Ok(affine_interpolate_many(p, q, &[t])?.remove(0))
}

fn affine_interpolate_many(p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
    check_dims(p.dim(), q.dim())?;
    let s = SqrtPair::new(p)?;
    let eig = SymEigen::new(&s.whiten(&q.to_dense()))?;
    eig.require_positive()?;
    ts.iter()
        .map(|&t| SpdMatrix::new(s.color(&eig.map_dense(|x| x.powf(t)))))
        .collect()
}

/// `E W E^T` with `E = (Q P^{-1})^{1/2} = P^{1/2} (P^{-1/2} Q P^{-1/2})^{1/2} P^{-1/2}`.
pub fn affine_transport(p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
    check_dims(p.dim(), q.dim())?;
    check_dims(p.dim(), w.dim())?;
    let s = SqrtPair::new(p)?;
    let eig = SymEigen::new(&s.whiten(&q.to_dense()))?;
    eig.require_positive()?;
    let e = &s.sqrt * eig.map_dense(f64::sqrt) * &s.inv_sqrt;
    Ok(SymMatrix::symmetrize(&(&e * w.to_dense() * e.transpose())))
}

/// Result of the Karcher fixed-point iteration.
#[derive(Debug, Clone)]
pub struct KarcherMean {
    pub mean: SpdMatrix,
    pub iterations: usize,
    pub gradient_norm: f64,
}

/// Below this gradient norm a step that fails to decrease the Fréchet
/// functional is taken as the roundoff floor rather than as divergence.
const KARCHER_FLOOR: f64 = 1e-9;
const ARMIJO: f64 = 1e-4;

/// Gradient and cost at the current iterate.
struct KarcherState {
    mean: SpdMatrix,
    sqrt: SqrtPair,
    /// `(1/n) sum log(S^{-1/2} P_i S^{-1/2})`, the descent direction expressed
    /// at the identity.
    grad: SymMatrix,
    /// `(1/n) sum d(S, P_i)^2`.
    cost: f64,
    /// Step `2 / (1 + b)`, with `b` the mean upper curvature bound
    /// `(r/2) coth(r/2)`, `r = log cond(S^{-1/2} P_i S^{-1/2})`, of the
    /// squared-distance Hessians. It is 1 when the inputs are close.
    step: f64,
}

impl KarcherState {
    fn new(mean: SpdMatrix, ps: &[SpdMatrix]) -> Result<Self> {
        let sqrt = SqrtPair::new(&mean)?;
        let mut grad = SymMatrix::zeros(mean.dim());
        let mut cost = 0.0;
        let mut bound = 0.0;
        for p in ps {
            let eig = SymEigen::new(&sqrt.whiten(&p.to_dense()))?;
            eig.require_positive()?;
            cost += eig.values.iter().map(|v| v.ln().powi(2)).sum::<f64>();
            let half = 0.5 * (eig.values.max().ln() - eig.values.min().ln());
            bound += if half < 1e-8 { 1.0 } else { half / half.tanh() };
            grad = &grad + &eig.apply(ScalarFn::Log);
        }
        let n = ps.len() as f64;
        let step = 2.0 / (1.0 + bound / n);
        Ok(Self { mean, sqrt, grad: grad.scale(1.0 / n), cost: cost / n, step })
    }

    fn finish(self, iterations: usize) -> KarcherMean {
        let gradient_norm = self.grad.norm();
        KarcherMean { mean: self.mean, iterations, gradient_norm }
    }
}

/// Fréchet mean by the fixed-point iteration
/// `S <- S^{1/2} exp(h (1/n) sum log(S^{-1/2} P_i S^{-1/2})) S^{1/2}`,
/// started from the Log-Euclidean mean.
///
/// `h` is 1 for nearby inputs and shrinks with their spread, where the unit
/// step overshoots and can cycle. A step without sufficient decrease of the
/// Fréchet functional is rejected and retried at half length. Once the
/// gradient norm is under `1e-9`, a rejected step ends the iteration at the
/// current point.
pub fn affine_karcher_mean(ps: &[SpdMatrix]) -> Result<KarcherMean> {
    let first = ps.first().ok_or(Error::EmptyInput)?;
    if ps.len() == 1 {
        return Ok(KarcherMean { mean: first.clone(), iterations: 0, gradient_norm: 0.0 });
    }
    for p in ps {
        check_dims(first.dim(), p.dim())?;
    }
    let mut state = KarcherState::new(logeuclid_mean(ps)?, ps)?;
    let mut damping = 1.0_f64;
    for iter in 0..KARCHER_MAX_ITER {
        let norm = state.grad.norm();
        if norm < KARCHER_TOL {
            return Ok(state.finish(iter));
        }
        let step = damping * state.step;
        let update = SymEigen::new(&state.grad.scale(step))?.map_dense(f64::exp);
        let candidate = KarcherState::new(SpdMatrix::new(state.sqrt.color(&update))?, ps)?;
        // The cost gradient is `-2 G` in whitened coordinates, so the step
        // `h G` should lower the cost by about `2 h |G|^2`. Near the minimum
        // that decrease is lost in rounding and the gradient norm decides.
        let sufficient = candidate.cost <= state.cost - ARMIJO * 2.0 * step * norm * norm;
        if sufficient || candidate.grad.norm() < norm {
            state = candidate;
            damping = (2.0 * damping).min(1.0);
        } else if norm < KARCHER_FLOOR {
            return Ok(state.finish(iter + 1));
        } else {
            damping *= 0.5;
        }
    }
    let norm = state.grad.norm();
    if norm < KARCHER_FLOOR {
        return Ok(state.finish(KARCHER_MAX_ITER));
    }
    Err(Error::NoConvergence { iterations: KARCHER_MAX_ITER, residual: norm })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AffineInvariant;

impl Geometry for AffineInvariant {
    fn metric(&self) -> Metric {
        Metric::AffineInvariant
    }

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
        affine_dist(p, q)
    }

    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        affine_interpolate(p, q, t)
    }

    fn interpolate_many(&self, p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
        affine_interpolate_many(p, q, ts)
    }

    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix> {
        affine_karcher_mean(ps).map(|k| k.mean)
    }

    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
        let s = SqrtPair::new(p)?;
        Ok(s.whiten(&w.to_dense()).frobenius_dot(&s.whiten(&v.to_dense())))
    }

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
        check_dims(p.dim(), q.dim())?;
        let s = SqrtPair::new(p)?;
        let eig = SymEigen::new(&s.whiten(&q.to_dense()))?;
        eig.require_positive()?;
        Ok(s.color(&eig.map_dense(f64::ln)))
    }

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
        check_dims(p.dim(), w.dim())?;
        let s = SqrtPair::new(p)?;
        let eig = SymEigen::new(&s.whiten(&w.to_dense()))?;
        SpdMatrix::new(s.color(&eig.map_dense(f64::exp)))
    }

    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
        affine_transport(p, q, w)
    }
}
