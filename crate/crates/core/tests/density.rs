mod common;

use bivbeta::{
    classify_region, pdf, pdf_closed_form, pdf_closed_form_at, pdf_grid, pdf_quadrature,
    DensityValue, Error, Method, Region, SquarePoint,
};
use common::*;
use proptest::prelude::*;

#[test]
fn region_examples() {
    assert_eq!(classify_region(0.2, 0.3), Region::Abp);
    assert_eq!(classify_region(0.3, 0.2), Region::Apd);
    assert_eq!(classify_region(0.4, 0.8), Region::Bcp);
    assert_eq!(classify_region(0.8, 0.4), Region::Cdp);
    assert_eq!(classify_region(0.3, 0.3), Region::LineAp);
    assert_eq!(classify_region(0.7, 0.7), Region::LinePc);
    assert_eq!(classify_region(0.25, 0.75), Region::LineBp);
    assert_eq!(classify_region(0.75, 0.25), Region::LinePd);
    assert_eq!(classify_region(0.5, 0.5), Region::CenterP);
    assert_eq!(classify_region(1.0, 0.5), Region::OutOfDomain);
    assert_eq!(classify_region(0.5, 0.0), Region::OutOfDomain);
    assert_eq!(classify_region(f64::NAN, 0.5), Region::OutOfDomain);
    assert_eq!(Region::CenterP.tag(), "CENTER_P");
}

#[test]
fn all_ones_density_is_piecewise_linear() {
    let a = alpha([1.0; 4]);
    let exact = |x: f64, y: f64| 6.0 * (x.min(y) - (x + y - 1.0).max(0.0));
    for (x, y) in [
        (0.5, 0.5),
        (0.25, 0.5),
        (0.2, 0.3),
        (0.9, 0.15),
        (0.6, 0.7),
        (0.3, 0.3),
    ] {
        let v = pdf(&a, x, y, 1e-10).unwrap().value;
        assert!((v - exact(x, y)).abs() < 1e-12, "({x}, {y}): {v}");
        let q = pdf_quadrature(&a, x, y, 1e-10).unwrap().value;
        assert!((q - exact(x, y)).abs() < 1e-12);
    }
}

#[test]
fn centre_value_by_midpoint_rule() {
    // f(1/2, 1/2) for α = (2,2,2,2): 1/B(α) ∫_0^{1/2} u^2 (1/2 - u)^2 du
    let panels = 1_000_000;
    let h = 0.5 / panels as f64;
    let sum: f64 = (0..panels)
        .map(|i| {
            let u = (i as f64 + 0.5) * h;
            u * u * (0.5 - u) * (0.5 - u)
        })
        .sum();
    let oracle = sum * h * 5040.0;
    let a = alpha([2.0; 4]);
    let v = pdf(&a, 0.5, 0.5, 1e-10).unwrap();
    assert_eq!(v.method, Method::ClosedForm);
    assert!(rel_diff(v.value, oracle) < 1e-8);
    assert!(rel_diff(pdf_quadrature(&a, 0.5, 0.5, 1e-10).unwrap().value, oracle) < 1e-8);
}

/// High-precision references for the defining integral.
const REFERENCE: [([f64; 4], (f64, f64), f64); 5] = [
    ([2.0, 3.0, 1.5, 2.5], (0.2, 0.3), 0.466_916_119_593_442_4),
    ([4.7, 3.5, 2.1, 3.7], (0.3, 0.6), 0.384_392_803_806_926_3),
    ([0.5, 1.5, 1.5, 0.5], (0.7, 0.6), 1.084_612_112_527_668_7),
    ([10.0, 0.1, 0.1, 10.0], (0.4, 0.45), 2.109_577_257_491_787_4),
    ([0.7, 0.4, 0.9, 1.3], (0.6, 0.2), 0.594_382_649_888_098_4),
];

#[test]
fn reference_values_both_methods() {
    for (a, (x, y), want) in REFERENCE {
        let c = pdf_closed_form(&alpha(a), x, y).unwrap().value;
        let q = pdf_quadrature(&alpha(a), x, y, 1e-12).unwrap().value;
        assert!(rel_diff(c, want) < 1e-9, "{a:?} closed form {c}");
        assert!(rel_diff(q, want) < 1e-9, "{a:?} quadrature {q}");
    }
}

#[test]
fn closed_form_matches_gauss_legendre_oracle() {
    let a = [2.0, 3.0, 1.5, 2.5];
    for (x, y) in [
        (0.2, 0.3),
        (0.3, 0.2),
        (0.6, 0.8),
        (0.8, 0.6),
        (0.3, 0.3),
        (0.8, 0.8),
        (0.1, 0.9),
    ] {
        let c = pdf_closed_form(&alpha(a), x, y).unwrap().value;
        let o = density_by_gauss_legendre(a, x, y);
        assert!(rel_diff(c, o) < 1e-9, "({x}, {y}): {c} vs {o}");
    }
}

#[test]
fn diagonal_formula_is_limit_of_regions() {
    let a = alpha([2.0; 4]);
    let on = pdf_closed_form(&a, 0.3, 0.3).unwrap().value;
    for eps in [1e-7, 1e-9] {
        let above = pdf_closed_form(&a, 0.3 - eps, 0.3 + eps).unwrap().value;
        let below = pdf_closed_form(&a, 0.3 + eps, 0.3 - eps).unwrap().value;
        assert!(rel_diff(above, on) < 1e-6 && rel_diff(below, on) < 1e-6);
    }
}

#[test]
fn regions_agree_across_lines() {
    // both sides of each line, with exact offsets so the points straddle it
    let a = alpha([1.7, 2.4, 1.3, 3.1]);
    let eps = 1e-10;
    for s in [0.1, 0.27, 0.44] {
        let pairs = [
            (
                SquarePoint::from_parts(
                    s,
                    s + eps,
                    1.0 - s,
                    1.0 - s - eps,
                    -eps,
                    1.0 - 2.0 * s - eps,
                ),
                SquarePoint::from_parts(
                    s + eps,
                    s,
                    1.0 - s - eps,
                    1.0 - s,
                    eps,
                    1.0 - 2.0 * s - eps,
                ),
            ),
            (
                SquarePoint::from_parts(
                    s,
                    1.0 - s - eps,
                    1.0 - s,
                    s + eps,
                    2.0 * s - 1.0 + eps,
                    eps,
                ),
                SquarePoint::from_parts(
                    s,
                    1.0 - s + eps,
                    1.0 - s,
                    s - eps,
                    2.0 * s - 1.0 - eps,
                    -eps,
                ),
            ),
        ];
        for (p, q) in pairs {
            let (p, q) = (p.unwrap(), q.unwrap());
            assert_ne!(p.region(), q.region());
            let vp = pdf_closed_form_at(&a, &p, 1e-12).unwrap().value;
            let vq = pdf_closed_form_at(&a, &q, 1e-12).unwrap().value;
            assert!(
                rel_diff(vp, vq) < 1e-6,
                "{:?} {vp} / {:?} {vq}",
                p.region(),
                q.region()
            );
        }
    }
}

#[test]
fn divergent_lines_give_infinity_marker() {
    let a = alpha([0.5; 4]);
    for (x, y) in [(0.3, 0.3), (0.8, 0.8), (0.25, 0.75), (0.5, 0.5)] {
        assert!(pdf(&a, x, y, 1e-10).unwrap().is_infinite(), "({x}, {y})");
    }
    assert!(pdf_quadrature(&a, 0.3, 0.3, 1e-10).unwrap().is_infinite());
    // only the diagonal diverges here
    let b = alpha([2.0, 0.3, 0.4, 2.0]);
    assert!(pdf(&b, 0.3, 0.3, 1e-10).unwrap().is_infinite());
    assert!(pdf(&b, 0.25, 0.75, 1e-10).unwrap().value.is_finite());
}

#[test]
fn off_square_is_domain_error() {
    let a = alpha([1.0; 4]);
    for (x, y) in [
        (0.0, 0.5),
        (1.0, 0.5),
        (0.5, -0.1),
        (0.5, 1.2),
        (f64::NAN, 0.5),
    ] {
        assert!(matches!(pdf(&a, x, y, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(
            pdf_quadrature(&a, x, y, 1e-10),
            Err(Error::Domain(_))
        ));
        assert!(matches!(pdf_closed_form(&a, x, y), Err(Error::Domain(_))));
    }
}

#[test]
fn grid_layout_and_values() {
    let g = pdf_grid(&alpha([1.0; 4]), 2).unwrap();
    let coords: Vec<(f64, f64)> = g.iter().map(|p| (p.x, p.y)).collect();
    assert_eq!(
        coords,
        vec![(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)]
    );
    assert!(g.iter().all(|p| (p.density.value - 1.5).abs() < 1e-12));
}

#[test]
fn grid_mass_is_one() {
    let r = 200;
    let g = pdf_grid(&alpha([4.7, 3.5, 2.1, 3.7]), r).unwrap();
    let mass: f64 = g.iter().map(|p| p.density.value).sum::<f64>() / (r * r) as f64;
    assert!((mass - 1.0).abs() < 1e-3, "{mass}");
}

#[test]
fn density_value_serialization() {
    let inf = serde_json::to_value(DensityValue::infinite(Method::ClosedForm)).unwrap();
    assert_eq!(inf["value"], "inf");
    assert_eq!(inf["method"], "closed_form");
    let v = pdf_quadrature(&alpha([1.0; 4]), 0.2, 0.3, 1e-10).unwrap();
    let j = serde_json::to_value(v).unwrap();
    assert_eq!(j["method"], "quadrature");
    assert!(j["value"].as_f64().is_some());
}

fn interior() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_is_exclusive(x in interior(), y in interior()) {
        let r = classify_region(x, y);
        let expected_upper = x < y;
        match r {
            Region::Abp | Region::Bcp => prop_assert!(expected_upper),
            Region::Apd | Region::Cdp => prop_assert!(x > y),
            Region::LineAp | Region::LinePc | Region::CenterP => prop_assert_eq!(x, y),
            Region::LineBp | Region::LinePd => prop_assert!(x != y),
            Region::OutOfDomain => prop_assert!(false),
        }
    }

    #[test]
    fn swap_symmetry(a in prop::array::uniform4(0.3f64..6.0), x in interior(), y in interior()) {
        let l = pdf(&alpha(a), x, y, 1e-10).unwrap();
        let r = pdf(&alpha(a).swap(), y, x, 1e-10).unwrap();
        prop_assert!(rel_diff(l.value, r.value) < 1e-9);
    }

    #[test]
    fn reflection_symmetry(a in prop::array::uniform4(0.3f64..6.0), x in 0.01f64..0.99, y in 0.01f64..0.99) {
        // (X, Y) -> (1-X, 1-Y) exchanges a11 with a00 and a10 with a01
        let l = pdf(&alpha(a), x, y, 1e-10).unwrap();
        let r = pdf(&alpha([a[3], a[2], a[1], a[0]]), 1.0 - x, 1.0 - y, 1e-10).unwrap();
        prop_assert!(rel_diff(l.value, r.value) < 1e-8, "{} {}", l.value, r.value);
    }

    #[test]
    fn matches_oracle_for_bounded_integrands(a in prop::array::uniform4(1.0f64..6.0), x in 0.02f64..0.98, y in 0.02f64..0.98) {
        let got = pdf(&alpha(a), x, y, 1e-12).unwrap().value;
        let want = density_by_gauss_legendre(a, x, y);
        prop_assert!(rel_diff(got, want) < 1e-9, "{} {}", got, want);
    }

    #[test]
    fn density_is_non_negative(a in prop::array::uniform4(0.1f64..10.0), x in interior(), y in interior()) {
        let v = pdf(&alpha(a), x, y, 1e-10).unwrap().value;
        prop_assert!(v >= 0.0);
    }
}
