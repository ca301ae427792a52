use logchol::baselines::affine_karcher_mean;
use logchol::sampling::{random_spd, seeded_rng};
use logchol::spd_manifold::log_cholesky_mean;
use logchol::Metric;

use crate::error::{LabError, Result};
use crate::fixtures::random_law;
use crate::report::{Environment, ExperimentReport, Inputs, Record};

pub struct MeanGapConfig {
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Average over trials of `|M_LC - M_AI|_F^2 / |M_AI|_F^2` for random sets.
/// Trials where the Karcher iteration fails are recorded and excluded.
pub fn run(cfg: &MeanGapConfig) -> Result<ExperimentReport> {
    if cfg.n < 1 || cfg.m < 1 || cfg.trials < 1 {
        return Err(LabError::Usage("--n, --m and --trials must be positive".into()));
    }
    let mut report = ExperimentReport::new(
        "mean-gap",
        vec![Metric::LogCholesky.to_string(), Metric::AffineInvariant.to_string()],
        Inputs {
            seed: Some(cfg.seed),
            descriptors: vec![format!("{} trials of {}", cfg.trials, random_law(cfg.n, cfg.m, cfg.seed))],
        },
        Environment { m: cfg.m, reps: cfg.trials },
    );
    let mut rng = seeded_rng(cfg.seed);
    let mut gaps = Vec::with_capacity(cfg.trials);
    let mut failed = Vec::new();
    let mut max_iterations = 0;
    for trial in 0..cfg.trials {
        let ps: Vec<_> = (0..cfg.n).map(|_| random_spd(&mut rng, cfg.m)).collect();
        let lc = log_cholesky_mean(&ps)?;
        match affine_karcher_mean(&ps) {
            Ok(ai) => {
                max_iterations = max_iterations.max(ai.iterations);
                let diff = (lc.as_sym() - ai.mean.as_sym()).norm();
                gaps.push((diff / ai.mean.norm()).powi(2));
            }
            Err(e) => failed.push(format!("{trial}: {e}")),
        }
    }
    let mean = if gaps.is_empty() { f64::NAN } else { gaps.iter().sum::<f64>() / gaps.len() as f64 };
    report.push(Record::number("gap_mean", mean, "relative squared Frobenius"));
    report.push(Record::sequence("gap_per_trial", gaps, "relative squared Frobenius"));
    report.push(Record::number("failed_trials", failed.len() as f64, "count"));
    if !failed.is_empty() {
        report.push(Record::text("failures", failed.join("; ")));
    }
    report.push(Record::number("karcher_iterations_max", max_iterations as f64, "count").for_metric(Metric::AffineInvariant));
    Ok(report)
}
