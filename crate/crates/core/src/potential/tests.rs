use super::*;
use proptest::prelude::*;

fn units() -> UnitsConfig {
    UnitsConfig::default()
}

fn piecewise(a: f64, d: f64, h: f64, v_right: f64) -> DoubleWellPotential {
    let l = WellParams::new(-a, 1.0, 0.0, d, units()).unwrap();
    let r = WellParams::new(a, 1.0, v_right, d, units()).unwrap();
    build_piecewise_parabolic(l, r, (d, d), h, units()).unwrap()
}

#[test]
fn symmetric_quartic_wells() {
    let p = build_biased_quartic(4.0, 1.0 / 128.0, 0.0, units()).unwrap();
    assert!((p.left().a + 4.0).abs() < 1e-10 && (p.right().a - 4.0).abs() < 1e-10);
    assert!((p.left().omega - 1.0).abs() < 1e-6 && (p.right().omega - 1.0).abs() < 1e-6);
    assert!(p.left().v_min.abs() < 1e-20);
    let (x_top, v_top) = barrier_top(&p);
    assert!(x_top.abs() < 1e-12 && (v_top - 2.0).abs() < 1e-12);
    assert_eq!(p.c(), x_top);
}

#[test]
fn located_wells_match_closed_form() {
    let p = build_biased_quartic(4.0, 1.0 / 128.0, 0.0, units()).unwrap();
    let (l, r) = locate_wells(&p).unwrap();
    assert!((l.a + 4.0).abs() < 1e-10 && (r.a - 4.0).abs() < 1e-10);
    assert!((l.omega - 1.0).abs() < 1e-6);
}

#[test]
fn biased_quartic_tilts_floors_and_curvatures() {
    let p = build_biased_quartic(4.0, 1.0 / 128.0, 0.01, units()).unwrap();
    let gap = p.left().v_min - p.right().v_min;
    assert!((gap + 0.08).abs() < 1e-3, "gap {gap}");
    assert!((p.left().omega - p.right().omega).abs() > 1e-4);
    assert!((p.left().omega - p.right().omega).abs() < 0.05);
    let (x_top, _) = barrier_top(&p);
    assert!(x_top != 0.0 && x_top.abs() < 0.1);
}

#[test]
fn oversized_bias_is_rejected() {
    assert!(matches!(build_biased_quartic(4.0, 1.0 / 128.0, 5.0, units()), Err(Error::Construction(_))));
}

#[test]
fn piecewise_is_exactly_parabolic_in_wells() {
    let p = piecewise(5.0, 3.0, 6.0, 0.0);
    assert_eq!(p.value(-5.0), 0.0);
    assert!((p.second_derivative(-5.0) - 1.0).abs() < 1e-8);
    for i in 0..=60 {
        let x = -8.0 + 0.1 * i as f64;
        assert!((p.value(x) - 0.5 * (x + 5.0) * (x + 5.0)).abs() < 1e-12);
    }
    assert_eq!(p.left().parabolic_extent, 3.0);
    assert_eq!(barrier_top(&p).1, 6.0);
}

#[test]
fn piecewise_round_trip() {
    let l = WellParams::new(-3.0, 1.0, 0.2, 2.0, units()).unwrap();
    let r = WellParams::new(4.0, 2.0, 0.0, 1.5, units()).unwrap();
    let p = build_piecewise_parabolic(l, r, (2.0, 1.5), 5.0, units()).unwrap();
    let (l2, r2) = locate_wells(&p).unwrap();
    for (a, b) in [(l, l2), (r, r2)] {
        assert!((a.a - b.a).abs() < 1e-10);
        assert!((a.omega - b.omega).abs() < 1e-10);
        assert!((a.v_min - b.v_min).abs() < 1e-10);
        assert!((a.l - b.l).abs() < 1e-10);
        assert_eq!(a.parabolic_extent, b.parabolic_extent);
    }
}

#[test]
fn asymmetric_frequencies_set_lengths() {
    let l = WellParams::new(-5.0, 1.0, 0.0, 3.0, units()).unwrap();
    let r = WellParams::new(5.0, 2.0, 0.0, 2.0, units()).unwrap();
    let p = build_piecewise_parabolic(l, r, (3.0, 2.0), 9.0, units()).unwrap();
    assert!((p.left().l - 1.0).abs() < 1e-12);
    assert!((p.right().l - 0.5f64.sqrt()).abs() < 1e-10);
}

#[test]
fn overlapping_joins_rejected() {
    let l = WellParams::new(-2.0, 1.0, 0.0, 3.0, units()).unwrap();
    let r = WellParams::new(2.0, 1.0, 0.0, 3.0, units()).unwrap();
    assert!(matches!(build_piecewise_parabolic(l, r, (2.5, 2.0), 6.0, units()), Err(Error::Construction(_))));
}

#[test]
fn low_barrier_rejected() {
    let l = WellParams::new(-3.0, 1.0, 0.0, 2.0, units()).unwrap();
    let r = WellParams::new(3.0, 1.0, 0.0, 2.0, units()).unwrap();
    assert!(build_piecewise_parabolic(l, r, (2.0, 2.0), 1.9, units()).is_err());
}

#[test]
fn cap_is_c1_and_monotone() {
    for (a, d, h) in [(5.0, 3.0, 6.0), (3.0, 2.0, 3.0), (4.0, 1.0, 2.0), (8.0, 5.0, 14.0)] {
        let p = piecewise(a, d, h, 0.0);
        let eps = 1e-9;
        for x in [-a + d, a - d] {
            let (v0, d0) = p.eval(x - eps);
            let (v1, d1) = p.eval(x + eps);
            assert!((v0 - v1).abs() < 1e-7 && (d0 - d1).abs() < 1e-6, "join at {x}");
        }
        let n = 2000;
        let mut prev = p.value(-a + d);
        let mut max = prev;
        for i in 1..=n {
            let x = -a + d + (2.0 * (a - d)) * i as f64 / n as f64;
            let v = p.value(x);
            max = max.max(v);
            if x <= barrier_top(&p).0 {
                assert!(v >= prev - 1e-12, "not monotone at {x}");
            } else {
                assert!(v <= prev + 1e-12, "not monotone at {x}");
            }
            prev = v;
        }
        assert!((max - h).abs() < 1e-12);
    }
}

#[test]
fn turning_points_examples() {
    let p = piecewise(5.0, 3.0, 6.0, 0.0);
    let t = turning_points(&p, 0.5).unwrap();
    assert!((t.a_nu_l + 4.0).abs() < 1e-12);
    assert!((t.a_nu_l + t.a_nu_r).abs() < 1e-12);
    let q = build_biased_quartic(4.0, 1.0 / 128.0, 0.0, units()).unwrap();
    let t = turning_points(&q, 0.5).unwrap();
    assert!((t.a_nu_l + 8f64.sqrt()).abs() < 1e-12);
    assert!((t.a_nu_r - 8f64.sqrt()).abs() < 1e-12);
}

#[test]
fn turning_point_errors() {
    let p = piecewise(5.0, 3.0, 6.0, 0.0);
    assert!(matches!(turning_points(&p, 6.5), Err(Error::NoBarrier { .. })));
    assert!(matches!(turning_points(&p, -0.1), Err(Error::Domain(_))));
}

#[test]
fn c_must_lie_between_minima() {
    let p = piecewise(5.0, 3.0, 6.0, 0.0);
    assert!(p.with_c(0.7).is_ok());
    assert!(p.with_c(-6.0).is_err());
}

#[test]
fn quartic_extent_tracks_tolerance() {
    let p = build_biased_quartic(5.0, 1.0 / 200.0, 0.0, units()).unwrap();
    let d = p.left().parabolic_extent;
    // Residual is y^3 / (2a) + y^4 / (8 a^2) for this quartic.
    let r = d.powi(3) / 10.0 + d.powi(4) / 200.0;
    assert!((r - DEFAULT_PARABOLIC_TOLERANCE).abs() < 1e-9);
    let looser = p.with_parabolic_tolerance(1e-2).unwrap();
    assert!(looser.left().parabolic_extent > d);
}

#[test]
fn tabulated_potential_from_csv() {
    let path = std::env::temp_dir().join(format!("asymwell-table-{}.csv", std::process::id()));
    let mut text = String::from("x,V\n");
    for i in 0..=800 {
        let x = -10.0 + 0.025 * i as f64;
        let v = (x * x - 16.0f64).powi(2) / 128.0;
        text.push_str(&format!("{x},{v}\n"));
    }
    std::fs::write(&path, text).unwrap();
    let p = DoubleWellPotential::from_csv_path(&path, units()).unwrap();
    std::fs::remove_file(&path).ok();
    assert!((p.left().a + 4.0).abs() < 1e-4);
    assert!((p.right().omega - 1.0).abs() < 1e-3);
    assert!(barrier_top(&p).0.abs() < 1e-6);
}

#[test]
fn single_well_table_is_a_shape_error() {
    let xs: Vec<f64> = (0..100).map(|i| -5.0 + 0.1 * i as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|x| x * x).collect();
    assert!(matches!(DoubleWellPotential::from_table(xs, vs, units()), Err(Error::Shape(_))));
}

#[test]
fn custom_evaluator() {
    let p = DoubleWellPotential::from_fn(
        |x| {
            let u = x * x - 9.0;
            (u * u / 72.0, 4.0 * x * u / 72.0)
        },
        (-12.0, 12.0),
        units(),
    )
    .unwrap();
    assert!((p.left().a + 3.0).abs() < 1e-10);
    assert!((p.left().omega - 1.0).abs() < 1e-8);
}

proptest! {
    #[test]
    fn turning_points_straddle_top(a in 2.5f64..6.0, frac in 0.3f64..0.8, h in 0.3f64..0.9, bias in -0.3f64..0.3, e_frac in 0.01f64..0.99) {
        let d = frac * a;
        let l = WellParams::new(-a, 1.0, 0.0, d, units()).unwrap();
        let r = WellParams::new(a, 1.3, bias, d, units()).unwrap();
        let v_join = 0.5 * (1.3f64 * d).powi(2) + bias.abs() + 0.5 * d * d;
        let height = v_join + 1.0 + h;
        let p = build_piecewise_parabolic(l, r, (d, d), height, units()).unwrap();
        let floor = p.left().v_min.max(p.right().v_min);
        let (x_top, v_top) = barrier_top(&p);
        let e = floor + e_frac * (v_top - floor);
        let t = turning_points(&p, e).unwrap();
        prop_assert!(t.a_nu_l < x_top && x_top < t.a_nu_r);
        prop_assert!((p.value(t.a_nu_l) - e).abs() < 1e-10);
        prop_assert!((p.value(t.a_nu_r) - e).abs() < 1e-10);
        for i in 0..=50 {
            let x = -a - d + 2.0 * d * i as f64 / 50.0;
            prop_assert!((p.value(x) - p.left().quadratic_model(x, units())).abs() <= 1e-9 * units().hbar);
        }
    }

    #[test]
    fn symmetric_quartic_is_even(x in -12.0f64..12.0, a in 2.0f64..7.0) {
        let p = build_biased_quartic(a, 1.0 / (8.0 * a * a), 0.0, units()).unwrap();
        prop_assert!((p.value(x) - p.value(-x)).abs() <= 1e-12 * (1.0 + p.value(x).abs()));
        let (lo, hi) = p.domain();
        prop_assert!((lo + hi).abs() < 1e-12);
    }
}
