use proptest::prelude::*;
use wavefront_core::lattice::{annulus_count, error_term, gauss_count, gauss_count_rows, theorem1_rectangle_check, wavefront_return_oracle};

#[test]
fn methods_agree_on_integers() {
    for t in 0..=200 {
        assert_eq!(gauss_count(t as f64).unwrap(), gauss_count_rows(t as f64).unwrap(), "t={t}");
    }
}

#[test]
fn bounds_hold_to_200() {
    for t in 1..=200 {
        let e = error_term(t as f64).unwrap();
        assert!(e.within_gauss_bound, "t={t}");
        assert!(e.within_envelope, "t={t}");
    }
}

#[test]
fn rectangle_check_passes_on_grid() {
    for t in [10.0, 25.0, 100.0, 400.0, 1000.0] {
        let r = theorem1_rectangle_check(t).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.a < r.b && r.b < 0.0);
        assert!(r.increment_max <= r.slope_max + 1e-12);
    }
    assert!(theorem1_rectangle_check(400.0).unwrap().projected_covering_radius <= 0.15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_agree_on_reals(t in 0.0..300.0f64) {
        prop_assert_eq!(gauss_count(t).unwrap(), gauss_count_rows(t).unwrap());
    }

    #[test]
    fn annulus_is_difference(t in 0.1..200.0f64, h in 0.0..3.0f64) {
        let a = annulus_count(t, h).unwrap();
        prop_assert_eq!(a.count, gauss_count(t + h).unwrap() - gauss_count(t).unwrap());
        prop_assert!(gauss_count(t + h).unwrap() >= gauss_count(t).unwrap());
    }

    #[test]
    fn oracle_matches_enumeration(t in 0.1..40.0f64) {
        let r = t.ceil() as i64 + 2;
        let mut best = f64::INFINITY;
        for m in -r..=r {
            for n in -r..=r {
                best = best.min(((m as f64).hypot(n as f64) - t).abs());
            }
        }
        prop_assert!((wavefront_return_oracle(t, 0.1).unwrap().min_distance - best).abs() < 1e-12);
    }
}
