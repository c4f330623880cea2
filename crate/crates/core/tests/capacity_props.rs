use proptest::prelude::*;

use pswf_mimo::capacity::{
    check_spectral_dominance, epsilon_dof, equipower_rate, pswf_capacity_bound, waterfill_capacity,
};
use pswf_mimo::channel::Interval;
use pswf_mimo::linalg::singular_values;
use pswf_mimo::rng::{complex_normal_matrix, stream_rng};
use pswf_mimo::{CMatrix, C64};

/// Random contraction: Gaussian matrix rescaled to operator norm `scale ≤ 1`.
fn contraction(seed: u64, rows: usize, cols: usize, scale: f64) -> CMatrix {
    let m = complex_normal_matrix(&mut stream_rng(seed, 7), rows, cols);
    let norm = singular_values(&m)[0];
    m * C64::new(scale / norm, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn contractions_never_help(
        seed in any::<u64>(),
        m in 1usize..=8, n in 1usize..=8, k in 1usize..=8, l in 1usize..=8,
        sp in 0.05f64..=1.0, sq in 0.05f64..=1.0,
    ) {
        let a = complex_normal_matrix(&mut stream_rng(seed, 0), m, n);
        let p = contraction(seed ^ 1, n, k, sp);
        let q = contraction(seed ^ 2, l, m, sq);
        prop_assert!(check_spectral_dominance(&a, &p, &q).unwrap());
        let s_a = singular_values(&a);
        let s_b = singular_values(&(&q * &a * &p));
        for eps in [0.1, 0.5, 0.9] {
            prop_assert!(epsilon_dof(&s_b, eps).unwrap() <= epsilon_dof(&s_a, eps).unwrap());
        }
        for snr in [0.1, 1.0, 10.0] {
            let ca = waterfill_capacity(&s_a, snr).unwrap().capacity_nats;
            let cb = waterfill_capacity(&s_b, snr).unwrap().capacity_nats;
            prop_assert!(cb <= ca + 1e-10);
        }
    }

    #[test]
    fn waterfilling_kkt(sv in prop::collection::vec(0.0f64..3.0, 1..12), snr in 0.01f64..100.0) {
        let r = waterfill_capacity(&sv, snr).unwrap();
        let noise = 1.0 / snr;
        let mu = r.allocation.water_level;
        prop_assert!((r.allocation.total - 1.0).abs() < 1e-10 || sv.iter().all(|&s| s == 0.0));
        for (&s, &p) in sv.iter().zip(&r.allocation.powers) {
            prop_assert!(p >= 0.0);
            if p > 0.0 {
                prop_assert!((noise / (s * s) + p - mu).abs() < 1e-10 * (1.0 + mu));
            } else if s > 0.0 {
                prop_assert!(noise / (s * s) >= mu - 1e-10 * (1.0 + mu));
            }
        }
    }

    #[test]
    fn equal_power_never_beats_waterfilling(seed in any::<u64>(), n in 1usize..=6, snr in 0.01f64..100.0) {
        let h = complex_normal_matrix(&mut stream_rng(seed, 3), n + 1, n);
        let wf = waterfill_capacity(&singular_values(&h), snr).unwrap().capacity_nats;
        prop_assert!(equipower_rate(&h, snr).unwrap() <= wf + 1e-10);
    }
}

#[test]
fn bound_monotone_in_aperture() {
    let support = Interval::new(-0.45, 0.45).unwrap();
    let mut last = 0.0;
    for i in 1..=30 {
        let lbar = i as f64;
        let b = pswf_capacity_bound(support, 0.05, lbar, 10.0).unwrap();
        assert!(b >= last - 1e-12, "L̄={lbar}: {b} < {last}");
        last = b;
    }
}

#[test]
fn contraction_dof_bounded_by_rank() {
    let p = contraction(4, 6, 3, 1.0);
    let s = singular_values(&p);
    assert!(epsilon_dof(&s, 0.999_999).unwrap() <= 3);
    assert!(epsilon_dof(&s, 1.0).is_err());
}
