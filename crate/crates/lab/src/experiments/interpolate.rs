use logchol::{Metric, SpdMatrix};

use crate::error::{LabError, Result};
use crate::fixtures::Fixture;
use crate::glyph::GlyphRecord;
use crate::report::{Environment, ExperimentReport, Inputs, Record};

/// Relative tolerance for the log-linear determinant law of the log-domain
/// metrics.
pub const DET_LAW_TOL: f64 = 1e-8;

pub struct InterpolateConfig {
    pub metrics: Vec<Metric>,
    pub steps: usize,
    pub fixture: Fixture,
}

pub struct InterpolateOutput {
    pub report: ExperimentReport,
    /// Row `i` is the metric index, column `j` the step.
    pub glyphs: Vec<GlyphRecord>,
}

/// Metrics whose interpolated determinant is `det(P)^{1-t} det(Q)^t`.
pub fn has_log_linear_det(metric: Metric) -> bool {
    matches!(metric, Metric::LogCholesky | Metric::LogEuclidean | Metric::AffineInvariant)
}

pub fn parameters(steps: usize) -> Vec<f64> {
    (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect()
}

pub fn run(cfg: &InterpolateConfig) -> Result<InterpolateOutput> {
    if cfg.steps < 2 {
        return Err(LabError::Usage("--steps must be at least 2".into()));
    }
    let [p, q] = cfg.fixture.matrices.as_slice() else {
        return Err(LabError::Usage(format!(
            "interpolation needs exactly two endpoint matrices, got {}",
            cfg.fixture.matrices.len()
        )));
    };
    let ts = parameters(cfg.steps);
    let mut report = ExperimentReport::new(
        "interpolate",
        cfg.metrics.iter().map(|m| m.to_string()).collect(),
        Inputs { seed: None, descriptors: vec![cfg.fixture.descriptor.clone()] },
        Environment { m: logchol::PackedLower::dim(p), reps: cfg.steps },
    );
    report.push(Record::sequence("t", ts.clone(), "1"));
    let (log_p, log_q) = (p.log_det()?, q.log_det()?);
    let mut glyphs = Vec::new();
    for (i, &metric) in cfg.metrics.iter().enumerate() {
        let path: Vec<SpdMatrix> = metric.geometry().interpolate_many(p, q, &ts)?;
        let dets = path.iter().map(|s| s.det()).collect::<logchol::Result<Vec<_>>>()?;
        for (j, s) in path.iter().enumerate() {
            glyphs.push(GlyphRecord::new(i, j, s)?);
        }
        let end_max = dets[0].max(dets[dets.len() - 1]);
        let interior_max = dets[1..dets.len() - 1].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        report.push(Record::sequence("det", dets.clone(), "1").for_metric(metric));
        report.push(Record::flag("swelling", interior_max > end_max).for_metric(metric));
        if has_log_linear_det(metric) {
            let gap = ts
                .iter()
                .zip(&dets)
                .map(|(t, d)| (d / ((1.0 - t) * log_p + t * log_q).exp() - 1.0).abs())
                .fold(0.0, f64::max);
            report.push(Record::number("det_law_gap", gap, "relative").for_metric(metric).with_tolerance(DET_LAW_TOL));
        }
    }
    Ok(InterpolateOutput { report, glyphs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{swelling_pair, tensor_pair};

    #[test]
    fn equal_endpoints_give_constant_determinants() {
        let p = tensor_pair().matrices[0].clone();
        let fixture = Fixture { descriptor: "same".into(), matrices: vec![p.clone(), p] };
        let out = run(&InterpolateConfig { metrics: vec![Metric::Euclidean], steps: 5, fixture }).unwrap();
        let dets = out.report.sequence("det", Some("euclidean")).unwrap();
        assert!(dets.iter().all(|d| (d - dets[0]).abs() < 1e-12));
        assert_eq!(out.glyphs.len(), 5);
    }

    #[test]
    fn cholesky_midpoint_swells_on_diagonal_pair() {
        let cfg = InterpolateConfig { metrics: vec![Metric::Cholesky], steps: 3, fixture: swelling_pair(0.1) };
        let out = run(&cfg).unwrap();
        let dets = out.report.sequence("det", Some("cholesky")).unwrap();
        assert!((dets[1] - 0.09150625).abs() < 1e-12);
        assert_eq!(out.report.flag("swelling", Some("cholesky")), Some(true));
    }

    #[test]
    fn rejects_bad_configuration() {
        let cfg = InterpolateConfig { metrics: vec![Metric::LogCholesky], steps: 1, fixture: tensor_pair() };
        assert!(matches!(run(&cfg), Err(LabError::Usage(_))));
        let mut fixture = tensor_pair();
        fixture.matrices.pop();
        let cfg = InterpolateConfig { metrics: vec![Metric::LogCholesky], steps: 3, fixture };
        assert!(matches!(run(&cfg), Err(LabError::Usage(_))));
    }
}
