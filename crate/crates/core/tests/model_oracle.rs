//! Closed-form fidelity algebra against the exact density-matrix circuits.

mod support;

use proptest::prelude::*;
use qncsim::kernel::make_werner;
use qncsim::model::{chain_fidelity, decay, distill_fidelity, swap_fidelity, FidelityParams};
use qncsim::protocols::{distill_analysis, swap_werner};

fn fidelity_grid() -> Vec<f64> {
    // Five evenly spaced points spanning the Werner range.
    (0..5).map(|i| 0.25 + 0.75 * i as f64 / 4.0).collect()
}

#[test]
fn swap_closed_form_matches_density_matrix_on_grid() {
    for &f1 in &fidelity_grid() {
        for &f2 in &fidelity_grid() {
            let oracle = swap_werner(f1, f2).unwrap().fidelity_to_bell().unwrap();
            let closed = swap_fidelity(f1, f2).unwrap();
            assert!(
                (closed - oracle).abs() < 1e-10,
                "swap({f1}, {f2}): closed {closed} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn distill_closed_form_matches_density_matrix_on_grid() {
    for &f1 in &fidelity_grid() {
        for &f2 in &fidelity_grid() {
            let analysis = distill_analysis(&make_werner(f1).unwrap(), &make_werner(f2).unwrap()).unwrap();
            let (f_closed, p_closed) = distill_fidelity(f1, f2).unwrap();
            assert!(
                (f_closed - analysis.output_fidelity).abs() < 1e-10,
                "distill({f1}, {f2}) fidelity: closed {f_closed} vs oracle {}",
                analysis.output_fidelity
            );
            assert!(
                (p_closed - analysis.p_success).abs() < 1e-10,
                "distill({f1}, {f2}) success: closed {p_closed} vs oracle {}",
                analysis.p_success
            );
        }
    }
}

#[test]
fn decay_matches_depolarizing_channel_on_twenty_time_points() {
    let coherence = 8.0;
    let params = FidelityParams::new(coherence, None).unwrap();
    for &f0 in &[0.6, 1.0] {
        for k in 0..20 {
            let elapsed = k as f64 * 0.4 * coherence;
            let closed = decay(f0, elapsed, &params).unwrap();
            let mut dm = make_werner(f0).unwrap();
            dm.depolarize((-elapsed / coherence).exp()).unwrap();
            let oracle = dm.fidelity_to_bell().unwrap();
            assert!(
                (closed - oracle).abs() < 1e-10,
                "decay({f0}, {elapsed}): closed {closed} vs oracle {oracle}"
            );
        }
    }
}

#[test]
fn swap_never_exceeds_the_weaker_link() {
    // Equality exactly when one link is perfect or the weaker link is
    // already maximally mixed.
    let dense: Vec<f64> = (0..31).map(|i| 0.25 + 0.75 * i as f64 / 30.0).collect();
    for &f1 in &dense {
        for &f2 in &dense {
            let s = swap_fidelity(f1, f2).unwrap();
            let min = f1.min(f2);
            assert!(s <= min + 1e-12, "swap({f1}, {f2}) = {s} above min");
            let boundary = f1.max(f2) >= 1.0 - 1e-12 || min <= 0.25 + 1e-12;
            if boundary {
                assert!((s - min).abs() < 1e-12, "expected equality at ({f1}, {f2})");
            } else {
                assert!(s < min - 1e-9, "expected strict inequality at ({f1}, {f2})");
            }
        }
    }
}

#[test]
fn distill_gains_exactly_above_one_half() {
    for f in [0.3, 0.4, 0.5] {
        let (out, _) = distill_fidelity(f, f).unwrap();
        assert!(out <= f + 1e-12, "distill({f}) = {out} should not improve");
    }
    for i in 0..9 {
        let f = 0.55 + 0.05 * i as f64;
        let (out, _) = distill_fidelity(f, f).unwrap();
        assert!(out > f, "distill({f}) = {out} should improve");
    }
}

#[test]
fn chain_fidelity_is_fold_of_swaps() {
    let links = [0.9, 0.85, 0.99, 0.7];
    let mut acc = links[0];
    for &f in &links[1..] {
        acc = swap_fidelity(acc, f).unwrap();
    }
    assert_eq!(chain_fidelity(&links).unwrap(), acc);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn swap_is_symmetric_and_associative(
        a in 0.25f64..=1.0,
        b in 0.25f64..=1.0,
        c in 0.25f64..=1.0,
    ) {
        prop_assert!((swap_fidelity(a, b).unwrap() - swap_fidelity(b, a).unwrap()).abs() < 1e-12);
        let left = swap_fidelity(swap_fidelity(a, b).unwrap(), c).unwrap();
        let right = swap_fidelity(a, swap_fidelity(b, c).unwrap()).unwrap();
        prop_assert!((left - right).abs() < 1e-12);
    }

    #[test]
    fn decay_is_a_semigroup(
        f in 0.25f64..=1.0,
        a in 0.0f64..40.0,
        b in 0.0f64..40.0,
        t in 0.5f64..50.0,
    ) {
        let params = FidelityParams::new(t, None).unwrap();
        let two_step = decay(decay(f, a, &params).unwrap(), b, &params).unwrap();
        let one_step = decay(f, a + b, &params).unwrap();
        prop_assert!((two_step - one_step).abs() < 1e-12);
    }

    #[test]
    fn decay_is_monotone_toward_the_floor(
        f in 0.25f64..=1.0,
        d1 in 0.0f64..20.0,
        d2 in 0.0f64..20.0,
    ) {
        let params = FidelityParams::new(5.0, None).unwrap();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let early = decay(f, lo, &params).unwrap();
        let late = decay(f, hi, &params).unwrap();
        prop_assert!(late <= early + 1e-15);
        prop_assert!(late >= 0.25);
    }
}
