//! Built-in endpoint pairs and loading of fixture files.

use logchol::fixture::parse_sym_list;
use logchol::sampling::{random_orthogonal, random_spd, seeded_rng, SPD_RIDGE};
use logchol::SpdMatrix;
use nalgebra::{DMatrix, DVector};

use crate::error::{LabError, Result};

/// Seed of the rotations in [`tensor_pair`].
pub const TENSOR_PAIR_SEED: u64 = 1;
/// Round to 5.40 and 6.46. With exactly 5.40 and 6.46 the geometric
/// determinant sequence reads 6.3452 at `t = 0.9`; these values make every
/// tenth round to 5.40, 5.50, 5.60, 5.70, 5.80, 5.91, 6.01, 6.12, 6.23, 6.34,
/// 6.46.
pub const TENSOR_PAIR_DETS: [f64; 2] = [5.403, 6.457];
/// Off-diagonal scale of [`swelling_pair`].
pub const SWELLING_EPS: f64 = 0.1;

/// A named list of SPD matrices with a description for reports.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub descriptor: String,
    pub matrices: Vec<SpdMatrix>,
}

/// `R diag(d) R^T` with `d` rescaled so the determinant is `det`.
fn rotated_tensor(rotation: &DMatrix<f64>, shape: &[f64], det: f64) -> SpdMatrix {
    let prod: f64 = shape.iter().product();
    let s = (det / prod).powf(1.0 / shape.len() as f64);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(shape.len(), shape.iter().map(|x| x * s)));
    SpdMatrix::from_dense(&(rotation * d * rotation.transpose())).expect("rotated positive diagonal is SPD")
}

/// Two anisotropic 3x3 tensors with determinants [`TENSOR_PAIR_DETS`],
/// oriented by seeded random rotations.
pub fn tensor_pair() -> Fixture {
    let mut rng = seeded_rng(TENSOR_PAIR_SEED);
    let r0 = random_orthogonal(&mut rng, 3);
    let r1 = random_orthogonal(&mut rng, 3);
    let matrices = vec![
        rotated_tensor(&r0, &[6.0, 1.5, 0.6], TENSOR_PAIR_DETS[0]),
        rotated_tensor(&r1, &[5.0, 2.0, 0.5], TENSOR_PAIR_DETS[1]),
    ];
    Fixture {
        descriptor: format!(
            "builtin:tensors (3x3, R diag(d) R^T, rotation seed {TENSOR_PAIR_SEED}, dets {} and {})",
            TENSOR_PAIR_DETS[0], TENSOR_PAIR_DETS[1]
        ),
        matrices,
    }
}

/// `diag(eps^2, 1)` and `diag(1, eps^2)`, whose Cholesky-distance midpoint
/// swells to `(1 + eps)^4 / 16`.
pub fn swelling_pair(eps: f64) -> Fixture {
    let e2 = eps * eps;
    Fixture {
        descriptor: format!("builtin:swelling (diag(eps^2, 1), diag(1, eps^2), eps {eps})"),
        matrices: vec![
            SpdMatrix::from_diag(&[e2, 1.0]).expect("positive diagonal"),
            SpdMatrix::from_diag(&[1.0, e2]).expect("positive diagonal"),
        ],
    }
}

/// `n` matrices `A A^T + 1e-3 I` with standard normal `A`.
pub fn random_set(n: usize, m: usize, seed: u64) -> Fixture {
    let mut rng = seeded_rng(seed);
    Fixture { descriptor: random_law(n, m, seed), matrices: (0..n).map(|_| random_spd(&mut rng, m)).collect() }
}

pub fn random_law(n: usize, m: usize, seed: u64) -> String {
    format!("random: {n} x ({m}x{m}) A A^T + {SPD_RIDGE:e} I, A standard normal, ChaCha8 seed {seed}")
}

/// Resolves `builtin:tensors`, `builtin:swelling` or a fixture file path.
pub fn load(source: &str) -> Result<Fixture> {
    match source {
        "builtin:tensors" => Ok(tensor_pair()),
        "builtin:swelling" => Ok(swelling_pair(SWELLING_EPS)),
        s if s.starts_with("builtin:") => Err(LabError::Usage(format!("unknown builtin fixture '{s}'"))),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|source| LabError::Input { path: path.into(), source })?;
            // Parsed as symmetric first so an indefinite matrix surfaces as
            // NotSpd (a numerical failure) rather than as a syntax error.
            let matrices = parse_sym_list(&text)?
                .into_iter()
                .map(SpdMatrix::new)
                .collect::<logchol::Result<Vec<_>>>()?;
            Ok(Fixture { descriptor: format!("file:{path}"), matrices })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use logchol::Metric;

    #[test]
    fn tensor_pair_has_requested_determinants() {
        let f = tensor_pair();
        for (p, d) in f.matrices.iter().zip(TENSOR_PAIR_DETS) {
            assert!((p.det().unwrap() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_pair_swells_under_euclidean_averaging() {
        let f = tensor_pair();
        let mid = Metric::Euclidean.geometry().interpolate(&f.matrices[0], &f.matrices[1], 0.5).unwrap();
        assert!(mid.det().unwrap() > TENSOR_PAIR_DETS[1]);
    }

    #[test]
    fn unknown_builtin_is_a_usage_error() {
        assert!(matches!(load("builtin:nope"), Err(LabError::Usage(_))));
        assert!(matches!(load("/nonexistent/fixture.txt"), Err(LabError::Input { .. })));
    }
}
