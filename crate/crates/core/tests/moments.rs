mod common;

use bivbeta::moments::{TableRow, TABLE_COLUMNS};
use bivbeta::{
    central_moment, correlation, correlation_table, mixed_moment, moment_vector, pdf_at,
    MomentVector, SquarePoint,
};
use common::*;
use proptest::prelude::*;

fn close4(a: f64, b: f64) -> bool {
    (a - b).abs() < 5e-5
}

#[test]
fn worked_example_moments() {
    let m = moment_vector(&alpha([4.7, 3.5, 2.1, 3.7]));
    let want = [0.5857, 0.4857, 0.0162, 0.0167, 0.0034];
    for (g, w) in m.to_array().iter().zip(want) {
        assert!(close4(*g, w), "{g} vs {w}");
    }
    assert!(close4(
        central_moment(&alpha([4.7, 3.5, 2.1, 3.7]), 1, 1),
        0.0034
    ));
}

#[test]
fn all_ones_moments() {
    let m = moment_vector(&alpha([1.0; 4]));
    assert_eq!(m.to_array(), [0.5, 0.5, 0.05, 0.05, 0.0]);
    assert_eq!(correlation(&alpha([1.0; 4])), 0.0);
    assert!((mixed_moment(&alpha([1.0; 4]), 1, 1) - 0.25).abs() < 1e-15);
    assert!(central_moment(&alpha([1.0; 4]), 3, 0).abs() < 1e-16);
}

#[test]
fn covariance_denominator() {
    let m = moment_vector(&alpha([10.0, 0.1, 0.1, 10.0]));
    let want = (100.0 - 0.01) / (20.2f64.powi(2) * 21.2);
    assert!((m.m11 - want).abs() < 1e-15);
    assert!((m.correlation() - 0.980).abs() < 5e-4);
}

#[test]
fn reference_correlations() {
    for (a, rho) in [
        ([10.0, 0.1, 0.1, 10.0], 0.980),
        ([5.0, 1.0, 1.0, 2.0], 0.500),
        ([1.0; 4], 0.0),
    ] {
        assert!((correlation(&alpha(a)) - rho).abs() < 5e-4, "{a:?}");
    }
}

#[test]
fn raw_and_central_moment_identities() {
    let a = alpha([4.7, 3.5, 2.1, 3.7]);
    let m = moment_vector(&a);
    assert_eq!(mixed_moment(&a, 0, 0), 1.0);
    assert!((mixed_moment(&a, 2, 0) - (m.m20 + m.m10 * m.m10)).abs() < 1e-12);
    assert!((mixed_moment(&a, 0, 2) - (m.m02 + m.m01 * m.m01)).abs() < 1e-12);
    assert_eq!(central_moment(&a, 1, 0), 0.0);
    assert_eq!(central_moment(&a, 0, 1), 0.0);
    assert!((central_moment(&a, 2, 0) - m.m20).abs() < 1e-14);
    assert!((central_moment(&a, 1, 1) - m.m11).abs() < 1e-14);
}

#[test]
fn marginal_raw_moments_match_beta() {
    // E[X^r] for X ~ Beta(p, q) is (p)_r / (p+q)_r
    let a = alpha([0.7, 2.2, 1.4, 3.3]);
    let (p, total) = (0.7 + 2.2, a.total());
    for r in 0..14u32 {
        let want = (0..r).fold(1.0, |acc, k| acc * (p + k as f64) / (total + k as f64));
        assert!(rel_diff(mixed_moment(&a, r, 0), want) < 1e-12, "r = {r}");
    }
}

#[test]
fn mixed_moments_match_density_integral() {
    let a = alpha([1.7, 2.4, 1.3, 3.1]);
    for (r, s) in [(1, 1), (2, 1), (1, 3), (3, 3), (5, 4)] {
        let f = |pt: &SquarePoint| {
            pt.x().powi(r as i32) * pt.y().powi(s as i32) * pdf_at(&a, pt, 1e-10).unwrap().value
        };
        let want = integrate_square(&f, 1.0 / 8.0);
        assert!(rel_diff(mixed_moment(&a, r, s), want) < 1e-9, "({r}, {s})");
    }
}

#[test]
fn table_layout_and_spot_values() {
    let table: Vec<TableRow> = correlation_table();
    assert_eq!(table.len(), 28);
    assert_eq!(TABLE_COLUMNS, [10.0, 5.0, 2.0, 1.0, 0.5, 0.1]);
    let find = |a11: f64, a10: f64, a01: f64| {
        table
            .iter()
            .find(|r| (r.a11, r.a10, r.a01) == (a11, a10, a01))
            .unwrap()
            .values
    };
    assert!(find(10.0, 10.0, 5.0)[1].abs() < 5e-4);
    assert!((find(0.1, 10.0, 5.0)[5] - -0.970).abs() < 5e-4);
    assert!(find(2.0, 10.0, 2.0)[0].abs() < 5e-4);
}

#[test]
fn moment_vector_validation() {
    assert!(MomentVector::new(0.5, 0.5, 0.05, 0.05, 0.0).is_ok());
    assert!(MomentVector::new(0.0, 0.5, 0.05, 0.05, 0.0).is_err());
    assert!(MomentVector::new(0.5, 1.0, 0.05, 0.05, 0.0).is_err());
    assert!(MomentVector::new(0.5, 0.5, 0.0, 0.05, 0.0).is_err());
    assert!(MomentVector::new(0.5, 0.5, 0.05, 0.05, 0.06).is_err());
    assert!(MomentVector::new(0.5, 0.5, 0.05, f64::NAN, 0.0).is_err());
    let j = serde_json::to_string(&moment_vector(&alpha([1.0; 4]))).unwrap();
    assert_eq!(
        j,
        r#"{"m10":0.5,"m01":0.5,"m20":0.05,"m02":0.05,"m11":0.0}"#
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn correlation_is_bounded_and_swap_invariant(a in prop::array::uniform4(0.01f64..50.0)) {
        let r = correlation(&alpha(a));
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert!((correlation(&alpha(a).swap()) - r).abs() < 1e-14);
        let m = moment_vector(&alpha(a));
        prop_assert!((m.correlation() - r).abs() < 1e-12);
        prop_assert!(m.validate().is_ok());
    }

    #[test]
    fn covariance_sign_follows_cross_ratio(a in prop::array::uniform4(0.05f64..20.0)) {
        let m = moment_vector(&alpha(a));
        let cross = a[0] * a[3] - a[1] * a[2];
        prop_assert!(m.m11 == 0.0 || m.m11.signum() == cross.signum());
    }

    #[test]
    fn exact_and_log_gamma_paths_agree(a in prop::array::uniform4(0.1f64..10.0), r in 0u32..7, s in 0u32..7) {
        // r + s crosses the switch between exact products and log-gamma
        let m = mixed_moment(&alpha(a), r, s);
        let lower = mixed_moment(&alpha(a), r + 1, s);
        prop_assert!(m > 0.0 && m <= 1.0);
        prop_assert!(lower < m);
    }

    #[test]
    fn central_second_order_matches_raw(a in prop::array::uniform4(0.1f64..10.0)) {
        let al = alpha(a);
        let m = moment_vector(&al);
        let raw = mixed_moment(&al, 1, 1) - m.m10 * m.m01;
        prop_assert!((central_moment(&al, 1, 1) - raw).abs() < 1e-13);
        prop_assert!((m.m11 - raw).abs() < 1e-13);
    }
}
