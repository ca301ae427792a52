//! A common interface over the five SPD geometries, keyed by metric name.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{AffineInvariant, CholeskyDistance, Euclidean, LogEuclidean};
use crate::error::{Error, Result};
use crate::spd_manifold as lc;
use crate::tri::{SpdMatrix, SymTangent};

/// Metric selector shared by the CLI and configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Euclidean,
    Cholesky,
    LogEuclidean,
    AffineInvariant,
    LogCholesky,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::Euclidean,
        Metric::Cholesky,
        Metric::LogEuclidean,
        Metric::AffineInvariant,
        Metric::LogCholesky,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cholesky => "cholesky",
            Metric::LogEuclidean => "log-euclidean",
            Metric::AffineInvariant => "affine-invariant",
            Metric::LogCholesky => "log-cholesky",
        }
    }

    pub fn geometry(self) -> &'static dyn Geometry {
        match self {
            Metric::Euclidean => &Euclidean,
            Metric::Cholesky => &CholeskyDistance,
            Metric::LogEuclidean => &LogEuclidean,
            Metric::AffineInvariant => &AffineInvariant,
            Metric::LogCholesky => &LogCholesky,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMetric(s.to_string()))
    }
}

/// Distance, interpolation, mean, exp/log and transport under one metric.
pub trait Geometry: Send + Sync {
    fn metric(&self) -> Metric;

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64>;

    /// Point at parameter `t` on the geodesic from `p` (t = 0) to `q` (t = 1).
    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix>;

    /// Fréchet mean of a non-empty list.
    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix>;

    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64>;

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent>;

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix>;

    /// Parallel transport of `w` from `p` to `q` along their geodesic.
    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent>;

    fn interpolate_many(&self, p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
        ts.iter().map(|&t| self.interpolate(p, q, t)).collect()
    }
}

/// The Log-Cholesky geometry behind the [`Geometry`] interface.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogCholesky;

impl Geometry for LogCholesky {
    fn metric(&self) -> Metric {
        Metric::LogCholesky
    }

    fn distance(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<f64> {
        lc::dist_spd(p, q)
    }

    fn interpolate(&self, p: &SpdMatrix, q: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
        Ok(lc::interpolate_spd(p, q, &[t])?.remove(0))
    }

    fn interpolate_many(&self, p: &SpdMatrix, q: &SpdMatrix, ts: &[f64]) -> Result<Vec<SpdMatrix>> {
        lc::interpolate_spd(p, q, ts)
    }

    fn mean(&self, ps: &[SpdMatrix]) -> Result<SpdMatrix> {
        lc::log_cholesky_mean(ps)
    }

    fn inner(&self, p: &SpdMatrix, w: &SymTangent, v: &SymTangent) -> Result<f64> {
        lc::metric_spd(p, w, v)
    }

    fn log_map(&self, p: &SpdMatrix, q: &SpdMatrix) -> Result<SymTangent> {
        lc::log_spd(p, q)
    }

    fn exp_map(&self, p: &SpdMatrix, w: &SymTangent) -> Result<SpdMatrix> {
        lc::exp_spd(p, w)
    }

    fn transport(&self, p: &SpdMatrix, q: &SpdMatrix, w: &SymTangent) -> Result<SymTangent> {
        lc::transport_spd(p, q, w)
    }
}
