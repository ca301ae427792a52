//! Comparator geometries: Euclidean, Cholesky distance, Log-Euclidean and
//! affine-invariant.

mod affine;
mod cholesky;
pub mod eig;
mod euclidean;
mod log_euclidean;

pub use affine::{
    affine_dist, affine_interpolate, affine_karcher_mean, affine_transport, AffineInvariant,
    KarcherMean, KARCHER_MAX_ITER, KARCHER_TOL,
};
pub use cholesky::{cholesky_distance, cholesky_interpolate, CholeskyDistance};
pub use euclidean::{euclid_interpolate, euclid_mean, Euclidean};
pub use log_euclidean::{
    dlog_series, logeuclid_dist, logeuclid_interpolate, logeuclid_mean, logeuclid_transport,
    LogEuclidean, SeriesSum, DLOG_SERIES_MAX_TERMS, DLOG_SERIES_TOL,
};
