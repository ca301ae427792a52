use logchol::sampling::{condition_spectrum, seeded_rng, spd_with_spectrum, SeededRng};
use logchol::{Metric, PackedLower, SpdMatrix, SymMatrix};

use crate::error::{LabError, Result};
use crate::report::{Environment, ExperimentReport, Inputs, Record};

/// Attempts at drawing a rotated ill-conditioned matrix that still passes
/// the Cholesky test after rounding.
const MAX_DRAWS: usize = 100;

pub struct StabilityConfig {
    pub kappa: f64,
    pub m: usize,
    /// Size of the set averaged by each metric.
    pub n: usize,
    pub seed: u64,
}

/// Log-Cholesky round-trip tolerance at condition number `kappa`.
pub fn log_cholesky_tolerance(kappa: f64) -> f64 {
    if kappa <= 1.0 {
        1e-12
    } else if kappa <= 1e10 {
        1e-6
    } else {
        1e-2
    }
}

fn draw(rng: &mut SeededRng, spectrum: &[f64]) -> Result<SpdMatrix> {
    let mut last = None;
    for _ in 0..MAX_DRAWS {
        match spd_with_spectrum(rng, spectrum) {
            Ok(p) => return Ok(p),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one draw").into())
}

fn rel_error(a: &SymMatrix, b: &SymMatrix) -> f64 {
    (a - b).norm() / b.norm()
}

/// `exp_I(log_I(P))`: the metric's logarithm and exponential at the identity.
fn round_trip(metric: Metric, p: &SpdMatrix) -> logchol::Result<SpdMatrix> {
    let g = metric.geometry();
    let id = SpdMatrix::identity(p.dim());
    g.exp_map(&id, &g.log_map(&id, p)?)
}

/// Runs every metric on synthesized inputs with condition number `kappa`.
/// Numerical failures are recorded in the report, never returned.
pub fn run(cfg: &StabilityConfig) -> Result<ExperimentReport> {
    if !(cfg.kappa >= 1.0) || !cfg.kappa.is_finite() {
        return Err(LabError::Usage("--kappa must be a finite number >= 1".into()));
    }
    if cfg.m < 1 || cfg.n < 1 {
        return Err(LabError::Usage("--m and --n must be positive".into()));
    }
    let spectrum = condition_spectrum(cfg.m, cfg.kappa);
    let true_log_det: f64 = spectrum.iter().map(|x| x.ln()).sum();
    let mut rng = seeded_rng(cfg.seed);
    let p = draw(&mut rng, &spectrum)?;
    let set = (0..cfg.n).map(|_| draw(&mut rng, &spectrum)).collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new(
        "stability",
        Metric::ALL.iter().map(|m| m.to_string()).collect(),
        Inputs {
            seed: Some(cfg.seed),
            descriptors: vec![format!(
                "random: 1 + {} matrices R diag(s) R^T, Haar R, s geometric from 1 to 1/{:e} ({} values)",
                cfg.n, cfg.kappa, cfg.m
            )],
        },
        Environment { m: cfg.m, reps: cfg.n },
    );
    report.push(Record::number("kappa", cfg.kappa, "1"));
    report.push(Record::number("true_log_det", true_log_det, "nats"));

    for metric in Metric::ALL {
        match round_trip(metric, &p) {
            Ok(back) => {
                let mut rec = Record::number("round_trip_error", rel_error(&back, &p), "relative").for_metric(metric);
                if metric == Metric::LogCholesky {
                    rec = rec.with_tolerance(log_cholesky_tolerance(cfg.kappa));
                }
                report.push(rec);
                let ld = match back.log_det() {
                    Ok(ld) => Record::number("log_det_error", (ld - true_log_det).abs(), "nats"),
                    Err(e) => Record::text("log_det_error", format!("failed: {e}")),
                };
                report.push(ld.for_metric(metric));
            }
            Err(e) => report.push(Record::text("round_trip_error", format!("failed: {e}")).for_metric(metric)),
        }
        let mean = metric.geometry().mean(&set).and_then(|s| s.log_det());
        report.push(Record::flag("mean_ok", mean.is_ok()).for_metric(metric));
        match mean {
            // every input has the same determinant, so the geometric mean is known exactly
            Ok(ld) => report.push(Record::number("mean_det_gap", (ld - true_log_det).exp_m1().abs(), "relative").for_metric(metric)),
            Err(e) => report.push(Record::text("mean_det_gap", format!("failed: {e}")).for_metric(metric)),
        }
    }
    Ok(report)
}
