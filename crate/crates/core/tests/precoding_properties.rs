mod common;

use proptest::prelude::*;

use common::{gaussian, oracle_sigma_sq, orthonormality_error, rel_close};
use softnull::numerics::{seeded_rng, Complex64, ComplexMatrix};
use softnull::numerics::random::{complex_gaussian_matrix, sample_orthonormal_columns};
use softnull::precoding::{
    decorrelator, effective_channel, matched_filter_precoder, softnull_precoder, suppression_db, zf_precoder,
    SoftNullBasis,
};

fn objective(h: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    h.matmul(q).unwrap().frobenius_norm_sq()
}

fn projector(p: &ComplexMatrix) -> ComplexMatrix {
    p.matmul(&p.adjoint()).unwrap()
}

fn smallest_sum(sigma_sq_desc: &[f64], d: usize) -> f64 {
    sigma_sq_desc[sigma_sq_desc.len() - d..].iter().sum()
}

#[test]
fn seeded_six_by_six_beats_sampled_bases() {
    let h = gaussian(6, 6, 3);
    let pre = softnull_precoder(&h, 2).unwrap();
    let oracle = oracle_sigma_sq(&h, 6);
    assert!(rel_close(pre.residual_power, oracle[4] + oracle[5], 1e-9));
    assert!(rel_close(objective(&h, &pre.p_self), pre.residual_power, 1e-9));
    let slack = 1e-12 * h.frobenius_norm_sq();
    let mut rng = seeded_rng(0x5eed);
    for _ in 0..100_000 {
        let q = sample_orthonormal_columns(&mut rng, 6, 2).unwrap();
        assert!(pre.residual_power <= objective(&h, &q) + slack);
    }
}

#[test]
fn seeded_effective_channel_matches_direct_product() {
    let h_down = gaussian(3, 6, 5);
    let p = gaussian(6, 4, 5 ^ 0xff);
    let h_eff = effective_channel(&h_down, &p).unwrap();
    let direct = ComplexMatrix::from_fn(3, 4, |r, c| (0..6).map(|k| h_down[(r, k)] * p[(k, c)]).sum());
    assert!(h_eff.sub(&direct).unwrap().max_abs() < 1e-12);
}

#[test]
fn seeded_zero_forcing_nulls_and_meets_power() {
    let h = gaussian(2, 4, 9);
    let p = zf_precoder(&h, 3.5).unwrap();
    let g = h.matmul(&p).unwrap();
    let diag = g[(0, 0)].norm();
    assert!(g[(0, 1)].norm() < 1e-9 * diag && g[(1, 0)].norm() < 1e-9 * diag);
    assert!(rel_close(p.frobenius_norm_sq(), 3.5, 1e-9));
}

#[test]
fn seeded_decorrelator_inverts_uplink() {
    let h = gaussian(6, 3, 13);
    let w = decorrelator(&h).unwrap();
    let err = w.matmul(&h).unwrap().sub(&ComplexMatrix::identity(3)).unwrap().max_abs();
    assert!(err < 1e-10, "{err}");
}

#[test]
fn matched_filter_gain_beats_sampled_beams() {
    let h = gaussian(3, 8, 21);
    let p = matched_filter_precoder(&h, 1.0).unwrap();
    let mut rng = seeded_rng(77);
    for user in 0..3 {
        let row = ComplexMatrix::from_fn(1, 8, |_, c| h[(user, c)]);
        let beam = ComplexMatrix::from_fn(8, 1, |r, _| p[(r, user)]);
        let beam = beam.scale_real(1.0 / beam.frobenius_norm());
        let gain = row.matmul(&beam).unwrap()[(0, 0)].norm_sqr();
        for _ in 0..10_000 {
            let q = complex_gaussian_matrix(&mut rng, 8, 1, 1.0);
            let q = q.scale_real(1.0 / q.frobenius_norm());
            assert!(row.matmul(&q).unwrap()[(0, 0)].norm_sqr() <= gain * (1.0 + 1e-12));
        }
    }
}

fn instance() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=7, 1usize..=7, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn precoder_is_optimal_over_sampled_bases((m_rx, m_tx, seed) in instance(), d_seed in any::<usize>()) {
        let h = gaussian(m_rx, m_tx, seed);
        let d = 1 + d_seed % m_tx;
        let pre = softnull_precoder(&h, d).unwrap();
        prop_assert!(orthonormality_error(&pre.p_self) < 1e-10);
        let oracle = oracle_sigma_sq(&h, m_tx);
        let expected = smallest_sum(&oracle, d);
        let scale = h.frobenius_norm_sq();
        prop_assert!((pre.residual_power - expected).abs() <= 1e-9 * expected.max(1e-12 * scale));
        let slack = 1e-12 * scale;
        let mut rng = seeded_rng(seed ^ 0xabc);
        for _ in 0..500 {
            let q = sample_orthonormal_columns(&mut rng, m_tx, d).unwrap();
            prop_assert!(pre.residual_power <= objective(&h, &q) + slack);
        }
    }

    #[test]
    fn residual_grows_and_suppression_falls_with_d((m_rx, m_tx, seed) in instance()) {
        let h = gaussian(m_rx, m_tx, seed);
        let basis = SoftNullBasis::new(&h).unwrap();
        let mut last_res = -1.0;
        let mut last_db = f64::INFINITY;
        for d in 1..=m_tx {
            let pre = basis.precoder(d).unwrap();
            let db = suppression_db(&h, &pre, m_rx).unwrap();
            prop_assert!(pre.residual_power >= last_res);
            prop_assert!(db <= last_db);
            last_res = pre.residual_power;
            last_db = db;
        }
    }

    #[test]
    fn scaling_keeps_the_column_space((m_rx, m_tx, seed) in instance(), d_seed in any::<usize>(), c_re in -5.0f64..5.0, c_im in -5.0f64..5.0) {
        prop_assume!(Complex64::new(c_re, c_im).norm() > 1e-3);
        let h = gaussian(m_rx, m_tx, seed);
        let d = 1 + d_seed % m_tx;
        let a = softnull_precoder(&h, d).unwrap();
        let b = softnull_precoder(&h.scale(Complex64::new(c_re, c_im)), d).unwrap();
        let diff = projector(&a.p_self).sub(&projector(&b.p_self)).unwrap().frobenius_norm();
        prop_assert!(diff < 1e-9, "{}", diff);
    }

    #[test]
    fn zero_forcing_cancels_inter_user_terms((k, extra, seed) in (1usize..=5, 0usize..=4, any::<u64>()), power in 0.01f64..100.0) {
        let h = gaussian(k, k + extra, seed);
        let p = zf_precoder(&h, power).unwrap();
        let g = h.matmul(&p).unwrap();
        let diag = g[(0, 0)].norm();
        for r in 0..k {
            prop_assert!((g[(r, r)].norm() - diag).abs() <= 1e-9 * diag);
            for c in (0..k).filter(|&c| c != r) {
                prop_assert!(g[(r, c)].norm() <= 1e-9 * diag);
            }
        }
        prop_assert!((p.frobenius_norm_sq() - power).abs() <= 1e-9 * power);
    }

    #[test]
    fn decorrelator_is_a_left_inverse((k, extra, seed) in (1usize..=5, 0usize..=4, any::<u64>())) {
        let h = gaussian(k + extra, k, seed);
        let w = decorrelator(&h).unwrap();
        prop_assert!(w.matmul(&h).unwrap().sub(&ComplexMatrix::identity(k)).unwrap().max_abs() < 1e-9);
    }
}
