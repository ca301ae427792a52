//! Wall-clock measurement on the monotonic clock.

use std::hint::black_box;
use std::time::Instant;

pub const WARMUP: usize = 10;
pub const BATCHES: usize = 10;

/// Median over [`BATCHES`] batches of the mean time per call, in nanoseconds.
///
/// Each batch calls `f(k)` for `k in 0..reps`, after [`WARMUP`] untimed
/// calls.
pub fn median_of_means<T>(reps: usize, mut f: impl FnMut(usize) -> T) -> f64 {
    assert!(reps > 0, "need at least one repetition");
    for k in 0..WARMUP {
        black_box(f(k % reps));
    }
    let mut means: Vec<f64> = (0..BATCHES)
        .map(|_| {
            let start = Instant::now();
            for k in 0..reps {
                black_box(f(k));
            }
            start.elapsed().as_nanos() as f64 / reps as f64
        })
        .collect();
    means.sort_by(f64::total_cmp);
    0.5 * (means[BATCHES / 2 - 1] + means[BATCHES / 2])
}
