mod common;

use proptest::prelude::*;

use common::{gaussian, oracle_sigma_sq, orthonormality_error};
use softnull::numerics::{
    default_rank_tol, pseudoinverse, random_orthonormal_columns, svd, ComplexMatrix,
};

fn rel_err(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE)
}

fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.matmul(b).unwrap()
}

#[test]
fn full_row_rank_pseudoinverse_is_right_inverse() {
    let a = gaussian(2, 4, 11);
    let p = pseudoinverse(&a, default_rank_tol(2, 4)).unwrap();
    let err = product(&a, &p).sub(&ComplexMatrix::identity(2)).unwrap().max_abs();
    assert!(err < 1e-9, "{err}");
}

#[test]
fn seeded_reconstruction() {
    let a = gaussian(5, 3, 7);
    let s = svd(&a).unwrap();
    assert!(rel_err(&s.reconstruct(), &a) < 1e-10);
}

fn shape() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=12, 1usize..=12, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn singular_values_match_independent_svd((r, c, seed) in shape()) {
        let a = gaussian(r, c, seed);
        let s = svd(&a).unwrap();
        let oracle = oracle_sigma_sq(&a, r.min(c));
        for (mine, theirs) in s.sigma.iter().zip(&oracle) {
            prop_assert!((mine * mine - theirs).abs() <= 1e-10 * oracle[0]);
        }
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn factors_are_orthonormal_and_reconstruct((r, c, seed) in shape()) {
        let a = gaussian(r, c, seed);
        let s = svd(&a).unwrap();
        prop_assert!(orthonormality_error(&s.u) < 1e-10);
        prop_assert!(orthonormality_error(&s.v) < 1e-10);
        prop_assert!(rel_err(&s.reconstruct(), &a) < 1e-10);
    }

    #[test]
    fn singular_energy_equals_frobenius_norm((r, c, seed) in shape()) {
        let a = gaussian(r, c, seed);
        let energy: f64 = svd(&a).unwrap().sigma.iter().map(|s| s * s).sum();
        let f = a.frobenius_norm_sq();
        prop_assert!((energy - f).abs() <= 1e-9 * f);
    }

    #[test]
    fn rank_deficient_products_have_numerical_rank((m, n, k, seed) in (2usize..=10, 2usize..=10, 1usize..=3, any::<u64>())) {
        let k = k.min(m).min(n);
        let a = product(&gaussian(m, k, seed), &gaussian(k, n, seed ^ 1));
        let s = svd(&a).unwrap();
        prop_assert_eq!(s.rank(default_rank_tol(m, n)), k);
    }

    #[test]
    fn unitary_invariance((m, r, c, seed) in (1usize..=10, 1usize..=10, 1usize..=10, any::<u64>())) {
        let m = m.max(r);
        let q = random_orthonormal_columns(m, r, seed).unwrap();
        let a = gaussian(r, c, seed ^ 7);
        let qa = product(&q, &a);
        prop_assert!((qa.frobenius_norm() - a.frobenius_norm()).abs() <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn moore_penrose_conditions((r, c, rank, seed) in (1usize..=8, 1usize..=8, 1usize..=8, any::<u64>())) {
        let rank = rank.min(r).min(c);
        let a = product(&gaussian(r, rank, seed), &gaussian(rank, c, seed ^ 3));
        let p = pseudoinverse(&a, default_rank_tol(r, c)).unwrap();
        let ap = product(&a, &p);
        let pa = product(&p, &a);
        let scale_a = a.frobenius_norm();
        let scale_p = p.frobenius_norm();
        prop_assert!(product(&ap, &a).sub(&a).unwrap().frobenius_norm() <= 1e-9 * scale_a);
        prop_assert!(product(&pa, &p).sub(&p).unwrap().frobenius_norm() <= 1e-9 * scale_p);
        prop_assert!(ap.sub(&ap.adjoint()).unwrap().frobenius_norm() <= 1e-9 * ap.frobenius_norm());
        prop_assert!(pa.sub(&pa.adjoint()).unwrap().frobenius_norm() <= 1e-9 * pa.frobenius_norm());
    }

    #[test]
    fn double_pseudoinverse_restores_full_rank_input((r, c, seed) in shape()) {
        let a = gaussian(r, c, seed);
        let tol = default_rank_tol(r, c);
        let back = pseudoinverse(&pseudoinverse(&a, tol).unwrap(), tol).unwrap();
        prop_assert!(rel_err(&back, &a) < 1e-8);
    }

    #[test]
    fn orthonormal_draws((m, d, seed) in (1usize..=16, 1usize..=16, any::<u64>())) {
        let d = d.min(m);
        let q = random_orthonormal_columns(m, d, seed).unwrap();
        prop_assert!(orthonormality_error(&q) < 1e-10);
        prop_assert_eq!(q, random_orthonormal_columns(m, d, seed).unwrap());
    }
}
