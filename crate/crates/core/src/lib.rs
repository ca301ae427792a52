//! Log-Cholesky geometry of symmetric positive definite matrices.
//!
//! SPD matrices are handled through their Cholesky factors. The Cholesky space
//! (lower triangular matrices with positive diagonal) carries a flat,
//! bi-invariant Riemannian metric and an abelian group law; both are pushed
//! forward to SPD matrices by `L -> L L^T`. Geodesics, exponential and
//! logarithm maps, parallel transport and Fréchet means all have closed forms.
//!
//! Four comparator geometries live in [`baselines`], and all five share the
//! [`Geometry`] interface selected by [`Metric`].

pub mod baselines;
pub mod chol_manifold;
pub mod chol_map;
mod error;
pub mod fixture;
pub mod geometry;
pub mod sampling;
pub mod spd_manifold;
pub mod tri;

pub use error::{Error, Result};
pub use geometry::{Geometry, LogCholesky, Metric};
pub use tri::{
    diag_exp, diag_log, diag_part, half_lower, strict_lower, tri_det, CholeskyFactor,
    LowerTriangular, PackedLower, SpdMatrix, SymMatrix, SymTangent,
};
