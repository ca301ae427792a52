use logchol::baselines::{affine_transport, dlog_series, logeuclid_transport, DLOG_SERIES_TOL};
use logchol::sampling::{random_sym, seeded_rng, spd_with_spectrum};
use logchol::spd_manifold::transport_spd;
use logchol::{Metric, SpdMatrix, SymMatrix};
use rand::Rng;

use crate::error::{LabError, Result};
use crate::report::{Environment, ExperimentReport, Inputs, Record};
use crate::timing::{median_of_means, BATCHES, WARMUP};

pub const MIN_REPS: usize = 100;
/// Input eigenvalues are `exp(u)`, `u` uniform on this symmetric range.
pub const LOG_EIGEN_RANGE: f64 = 1.5;

pub struct BenchConfig {
    pub m: usize,
    pub reps: usize,
    pub seed: u64,
}

struct Case {
    p: SpdMatrix,
    q: SpdMatrix,
    w: SymMatrix,
}

fn cases(cfg: &BenchConfig) -> Result<Vec<Case>> {
    let mut rng = seeded_rng(cfg.seed);
    let spd = |rng: &mut _| {
        let eigs: Vec<f64> =
            (0..cfg.m).map(|_| Rng::random_range(rng, -LOG_EIGEN_RANGE..LOG_EIGEN_RANGE).exp()).collect();
        spd_with_spectrum(rng, &eigs)
    };
    (0..cfg.reps)
        .map(|_| {
            let p = spd(&mut rng)?;
            let q = spd(&mut rng)?;
            Ok(Case { p, q, w: random_sym(&mut rng, cfg.m) })
        })
        .collect()
}

/// Times parallel transport under the Log-Cholesky, affine-invariant and
/// Log-Euclidean metrics on the same seeded inputs.
pub fn run(cfg: &BenchConfig) -> Result<ExperimentReport> {
    if cfg.m < 2 {
        return Err(LabError::Usage("--m must be at least 2".into()));
    }
    if cfg.reps < MIN_REPS {
        return Err(LabError::Usage(format!("--reps must be at least {MIN_REPS}")));
    }
    let cases = cases(cfg)?;
    let metrics = [Metric::LogCholesky, Metric::AffineInvariant, Metric::LogEuclidean];
    let mut report = ExperimentReport::new(
        "bench-transport",
        metrics.iter().map(|m| m.to_string()).collect(),
        Inputs {
            seed: Some(cfg.seed),
            descriptors: vec![
                format!(
                    "random: {} triples (P, Q, W), P and Q = R diag(exp(u)) R^T with u ~ U(-{r}, {r}), \
                     Haar R, W symmetric standard normal",
                    cfg.reps,
                    r = LOG_EIGEN_RANGE
                ),
                format!("timing: monotonic clock, {WARMUP} warm-up calls, median of {BATCHES} batch means"),
            ],
        },
        Environment { m: cfg.m, reps: cfg.reps },
    );

    let terms = cases.iter().map(|c| dlog_series(&c.p, &c.w)).collect::<logchol::Result<Vec<_>>>()?;
    let converged = terms.iter().all(|s| s.converged);
    let mean_terms = terms.iter().map(|s| s.terms as f64).sum::<f64>() / terms.len() as f64;
    report.push(Record::number("series_tolerance", DLOG_SERIES_TOL, "relative").for_metric(Metric::LogEuclidean));
    report.push(Record::number("series_terms_mean", mean_terms, "count").for_metric(Metric::LogEuclidean));
    report.push(
        Record::number("series_terms_max", terms.iter().map(|s| s.terms).max().unwrap_or(0) as f64, "count")
            .for_metric(Metric::LogEuclidean),
    );
    report.push(Record::flag("series_converged", converged).for_metric(Metric::LogEuclidean));

    // Each closure is checked once untimed so failures surface as errors
    // rather than as suspiciously fast timings.
    for c in &cases {
        transport_spd(&c.p, &c.q, &c.w)?;
        affine_transport(&c.p, &c.q, &c.w)?;
        logeuclid_transport(&c.p, &c.q, &c.w)?;
    }
    let lc = median_of_means(cfg.reps, |k| transport_spd(&cases[k].p, &cases[k].q, &cases[k].w));
    let ai = median_of_means(cfg.reps, |k| affine_transport(&cases[k].p, &cases[k].q, &cases[k].w));
    let le = median_of_means(cfg.reps, |k| logeuclid_transport(&cases[k].p, &cases[k].q, &cases[k].w));
    report.push(Record::timing_ns("transport_time", lc).for_metric(Metric::LogCholesky));
    report.push(Record::timing_ns("transport_time", ai).for_metric(Metric::AffineInvariant));
    report.push(Record::timing_ns("transport_time", le).for_metric(Metric::LogEuclidean));
    report.push(Record { timing: true, ..Record::number("ratio_le_lc", le / lc, "ratio") });
    report.push(Record { timing: true, ..Record::number("ratio_ai_lc", ai / lc, "ratio") });
    report.push(Record { timing: true, ..Record::flag("ordering_lc_ai_le", lc < ai && ai < le) });
    Ok(report)
}
