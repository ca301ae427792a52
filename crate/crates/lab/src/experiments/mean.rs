use logchol::baselines::affine_karcher_mean;
use logchol::{Metric, PackedLower, SpdMatrix};

use crate::error::{LabError, Result};
use crate::fixtures::Fixture;
use crate::report::{Environment, ExperimentReport, Inputs, Record};

/// Slack allowed in `min det <= det(mean) <= max det`, relative.
pub const DET_BOUNDS_SLACK: f64 = 1e-12;

pub struct MeanConfig {
    pub metric: Metric,
    pub fixture: Fixture,
    pub seed: Option<u64>,
}

/// Tolerance of the determinant identity `det(mean) = geometric mean of
/// dets`, for the metrics where it holds.
pub fn det_identity_tol(metric: Metric) -> Option<f64> {
    match metric {
        Metric::LogCholesky | Metric::LogEuclidean => Some(1e-10),
        Metric::AffineInvariant => Some(1e-8),
        Metric::Euclidean | Metric::Cholesky => None,
    }
}

pub fn run(cfg: &MeanConfig) -> Result<ExperimentReport> {
    let ps = &cfg.fixture.matrices;
    let first = ps.first().ok_or_else(|| LabError::Usage("mean needs at least one input matrix".into()))?;
    let m = first.dim();
    let mut report = ExperimentReport::new(
        "mean",
        vec![cfg.metric.to_string()],
        Inputs { seed: cfg.seed, descriptors: vec![cfg.fixture.descriptor.clone()] },
        Environment { m, reps: ps.len() },
    );
    let mean: SpdMatrix = if cfg.metric == Metric::AffineInvariant {
        let k = affine_karcher_mean(ps)?;
        report.push(Record::number("karcher_iterations", k.iterations as f64, "count"));
        report.push(Record::number("karcher_gradient_norm", k.gradient_norm, "1"));
        k.mean
    } else {
        cfg.metric.geometry().mean(ps)?
    };
    let log_dets = ps.iter().map(|p| p.log_det()).collect::<logchol::Result<Vec<_>>>()?;
    let geo = (log_dets.iter().sum::<f64>() / ps.len() as f64).exp();
    let lo = log_dets.iter().cloned().fold(f64::INFINITY, f64::min).exp();
    let hi = log_dets.iter().cloned().fold(f64::NEG_INFINITY, f64::max).exp();
    let det = mean.det()?;
    let dense = mean.to_dense();
    let entries: Vec<f64> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|ij| dense[ij]).collect();

    let metric = cfg.metric;
    report.push(Record::sequence("mean", entries, "row-major").for_metric(metric));
    report.push(Record::number("det", det, "1").for_metric(metric));
    report.push(Record::number("geometric_mean_det", geo, "1"));
    let mut gap = Record::number("det_gap", (det / geo - 1.0).abs(), "relative").for_metric(metric);
    if let Some(tol) = det_identity_tol(metric) {
        gap = gap.with_tolerance(tol);
    }
    report.push(gap);
    report.push(Record::number("min_input_det", lo, "1"));
    report.push(Record::number("max_input_det", hi, "1"));
    let within = det >= lo * (1.0 - DET_BOUNDS_SLACK) && det <= hi * (1.0 + DET_BOUNDS_SLACK);
    report.push(Record::flag("within_det_bounds", within).for_metric(metric).with_tolerance(DET_BOUNDS_SLACK));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::random_set;

    #[test]
    fn single_input_is_its_own_mean() {
        let p = random_set(1, 3, 5).matrices;
        for metric in Metric::ALL {
            let fixture = Fixture { descriptor: "one".into(), matrices: p.clone() };
            let r = run(&MeanConfig { metric, fixture, seed: None }).unwrap();
            assert!(r.number("det_gap", Some(metric.as_str())).unwrap() < 1e-13, "{metric}");
        }
    }

    #[test]
    fn log_cholesky_gap_is_tiny_on_random_sets() {
        let r = run(&MeanConfig { metric: Metric::LogCholesky, fixture: random_set(20, 4, 8), seed: Some(8) }).unwrap();
        assert!(r.number("det_gap", Some("log-cholesky")).unwrap() <= 1e-10);
        assert_eq!(r.flag("within_det_bounds", Some("log-cholesky")), Some(true));
    }
}
