//! Properties of the packed triangular algebra and the Cholesky map, checked
//! against dense nalgebra arithmetic.

use logchol::chol_map::{cholesky_factor, diff_s, diff_s_inv, reconstruct, try_cholesky, whiten};
use logchol::sampling::{random_factor, random_lower, random_spd, random_sym, seeded_rng};
use logchol::{diag_part, half_lower, strict_lower, LowerTriangular, PackedLower, SymMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strict_plus_diag_is_exact(seed in any::<u64>(), m in 1usize..8) {
        let x = random_lower(&mut seeded_rng(seed), m);
        prop_assert_eq!(&strict_lower(&x) + &diag_part(&x), x);
    }

    #[test]
    fn diag_part_is_multiplicative(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let x = random_lower(&mut rng, 5);
        let y = random_lower(&mut rng, 5);
        let lhs = diag_part(&x.matmul(&y));
        let rhs = diag_part(&x).matmul(&diag_part(&y));
        prop_assert!((&lhs - &rhs).norm() <= 1e-14 * rhs.norm().max(1.0));
    }

    #[test]
    fn diag_of_inverse_is_inverse_of_diag(seed in any::<u64>(), m in 1usize..8) {
        let l = random_factor(&mut seeded_rng(seed), m);
        let inv = l.to_dense().try_inverse().unwrap();
        for i in 0..m {
            let expect = 1.0 / l.diag_entry(i);
            prop_assert!((inv[(i, i)] - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    #[test]
    fn half_lower_reconstructs(seed in any::<u64>(), m in 1usize..8) {
        let s = random_sym(&mut seeded_rng(seed), m);
        let h = half_lower(&s).to_dense();
        prop_assert_eq!(&h + h.transpose(), s.to_dense());
    }

    #[test]
    fn matmul_matches_dense(seed in any::<u64>(), m in 1usize..8) {
        let mut rng = seeded_rng(seed);
        let x = random_lower(&mut rng, m);
        let y = random_lower(&mut rng, m);
        let dense = x.to_dense() * y.to_dense();
        prop_assert!(rel(&x.matmul(&y).to_dense(), &dense) < 1e-14);
    }

    #[test]
    fn cholesky_is_a_bijection(seed in any::<u64>(), m in 1usize..10) {
        let mut rng = seeded_rng(seed);
        let p = random_spd(&mut rng, m);
        let l = cholesky_factor(&p).unwrap();
        prop_assert!(rel(&reconstruct(&l).to_dense(), &p.to_dense()) < 1e-12);

        let k = random_factor(&mut rng, m);
        let back = try_cholesky(&reconstruct(&k)).unwrap();
        prop_assert!(rel(&back.to_dense(), &k.to_dense()) < 1e-12);
    }

    #[test]
    fn diff_s_matches_dense_formula(seed in any::<u64>(), m in 1usize..8) {
        let mut rng = seeded_rng(seed);
        let l = random_factor(&mut rng, m);
        let x = random_lower(&mut rng, m);
        let (ld, xd) = (l.to_dense(), x.to_dense());
        let dense = &ld * xd.transpose() + &xd * ld.transpose();
        prop_assert!(rel(&diff_s(&l, &x).unwrap().to_dense(), &dense) < 1e-14);
    }

    #[test]
    fn diff_s_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut rng = seeded_rng(seed);
        let l = random_factor(&mut rng, 4);
        let x = random_lower(&mut rng, 4);
        let y = random_lower(&mut rng, 4);
        let lhs = diff_s(&l, &x.scale(a).axpy(b, &y)).unwrap();
        let rhs = diff_s(&l, &x).unwrap().scale(a).axpy(b, &diff_s(&l, &y).unwrap());
        prop_assert!((&lhs - &rhs).norm() <= 1e-13 * rhs.norm().max(1.0));
    }

    #[test]
    fn diff_s_inv_round_trips(seed in any::<u64>(), m in 1usize..8) {
        let mut rng = seeded_rng(seed);
        let l = random_factor(&mut rng, m);
        let w = random_sym(&mut rng, m);
        let x = diff_s_inv(&l, &w).unwrap();
        let back = diff_s(&l, &x).unwrap();
        prop_assert!((&back - &w).norm() <= 1e-12 * w.norm().max(1.0));
    }

    #[test]
    fn whitening_matches_dense_inverse(seed in any::<u64>(), m in 1usize..8) {
        let mut rng = seeded_rng(seed);
        let l = random_factor(&mut rng, m);
        let w = random_sym(&mut rng, m);
        let inv = l.to_dense().try_inverse().unwrap();
        let dense = &inv * w.to_dense() * inv.transpose();
        prop_assert!(rel(&whiten(&l, &w).to_dense(), &dense) < 1e-10);
    }
}

#[test]
fn diff_s_matches_central_differences() {
    let mut rng = seeded_rng(2024);
    let h = 1e-6;
    for _ in 0..100 {
        let l = random_factor(&mut rng, 4);
        let x = random_lower(&mut rng, 4);
        let plus = l.as_lower().axpy(h, &x).gram();
        let minus = l.as_lower().axpy(-h, &x).gram();
        let fd: SymMatrix = (&plus - &minus).scale(0.5 / h);
        let exact = diff_s(&l, &x).unwrap();
        assert!((&fd - &exact).norm() <= 1e-6 * exact.norm());
    }
}

#[test]
fn diff_s_inv_is_differential_of_cholesky_map() {
    let mut rng = seeded_rng(77);
    let h = 1e-6;
    for _ in 0..20 {
        let p = random_spd(&mut rng, 4);
        let w = random_sym(&mut rng, 4);
        let plus = try_cholesky(&p.as_sym().axpy(h, &w)).unwrap();
        let minus = try_cholesky(&p.as_sym().axpy(-h, &w)).unwrap();
        let fd: LowerTriangular = (plus.as_lower() - minus.as_lower()).scale(0.5 / h);
        let exact = diff_s_inv(&cholesky_factor(&p).unwrap(), &w).unwrap();
        assert!((&fd - &exact).norm() <= 1e-5 * exact.norm().max(1.0));
    }
}
