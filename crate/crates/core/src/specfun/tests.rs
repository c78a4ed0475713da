use super::*;
use crate::numerics::{gamma, sin_pi};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn elementary_orders() {
    let d = pcf_d(0.0, 2.0).unwrap();
    assert!(rel(d.value, (-1f64).exp()) < 1e-14);
    assert_eq!(d.regime, PcfRegime::Series);
    assert!(rel(pcf_d(1.0, 1.0).unwrap().value, (-0.25f64).exp()) < 1e-14);
    assert!((pcf_d(0.5, 0.0).unwrap().value - 0.581_368_317_019_119).abs() < 1e-14);
}

#[test]
fn value_at_origin_matches_gamma_form() {
    let (d0, d1) = pcf_d_at_zero(0.5);
    let want = 2f64.powf(0.25) / std::f64::consts::PI.sqrt() * gamma(0.75) * (std::f64::consts::PI / 4.0).cos();
    assert!(rel(d0, want) < 1e-15);
    assert!(d1 > 0.0);
    assert_eq!(pcf_d_at_zero(1.0).0, 0.0);
    assert_eq!(pcf_d_at_zero(2.0).1, 0.0);
}

#[test]
fn envelope_is_enforced() {
    assert!(matches!(pcf_d(12.5, 0.0), Err(crate::Error::Range(_))));
    assert!(matches!(pcf_d(1.0, 40.5), Err(crate::Error::Range(_))));
    assert!(matches!(pcf_d_ode(1.0, 15.5), Err(crate::Error::Range(_))));
    assert!(matches!(pcf_d_asymptotic(0.5, -5.0), Err(crate::Error::Range(_))));
}

#[test]
fn regimes_are_tagged() {
    assert_eq!(pcf_d(0.3, 9.0).unwrap().regime, PcfRegime::Asymptotic);
    assert_eq!(pcf_d(0.3, 5.0).unwrap().regime, PcfRegime::Ode);
    assert_eq!(pcf_d(0.3, -5.0).unwrap().regime, PcfRegime::Series);
    assert_eq!(pcf_d(3.0, 5.0).unwrap().regime, PcfRegime::Series);
}

#[test]
fn two_term_form_ground_and_first_order() {
    let a = pcf_d_asymptotic(0.0, -8.0).unwrap().value;
    assert!(rel(a, pcf_d(0.0, -8.0).unwrap().value) < 1e-10);
    let b = pcf_d_asymptotic(1.0, -8.0).unwrap().value;
    assert!(rel(b, -8.0 * (-16f64).exp()) < 1e-14);
}

#[test]
fn two_term_form_at_its_truncation_accuracy() {
    // The next correction is a few 1e-4 here; the printed two-term form cannot do better.
    let asym = pcf_d_asymptotic(0.25, -10.0).unwrap();
    let reference = pcf_d_ode(0.25, -10.0).unwrap().value;
    let err = (asym.value - reference).abs();
    assert!(err <= 2.0 * asym.error_estimate, "err {err:e} vs estimate {:e}", asym.error_estimate);
    assert!(rel(asym.value, reference) < 1e-3);
}

#[test]
fn ode_reference_examples() {
    assert!(pcf_d_ode(2.0, 1.0).unwrap().value.abs() < 1e-12);
    assert!(rel(pcf_d_ode(0.0, 3.0).unwrap().value, 0.105_399_224_561_864_33) < 1e-10);
    let a = pcf_d_ode(0.5, 2.0).unwrap().value;
    assert!(rel(pcf_d(0.5, 2.0).unwrap().value, a) < 1e-8);
}

#[test]
fn ode_reference_error_estimate_small() {
    for &(nu, z) in &[(0.25, 12.0), (4.75, -12.0), (2.5, 7.0), (0.0, -15.0)] {
        let r = pcf_d_ode(nu, z).unwrap();
        assert!(r.error_estimate <= 1e-9 * r.value.abs(), "nu {nu} z {z}: {r:?}");
    }
}

#[test]
fn series_and_reference_agree_on_grid() {
    for i in 0..=20 {
        let nu = 0.25 * i as f64;
        for j in 0..=48 {
            let z = -12.0 + 0.5 * j as f64;
            let got = pcf_d(nu, z).unwrap().value;
            let want = pcf_d_ode(nu, z).unwrap().value;
            let floor = if z.abs() <= 6.0 { 1e-12 } else { 0.0 };
            assert!((got - want).abs() <= 1e-8 * want.abs() + floor, "nu {nu} z {z}: {got} vs {want}");
        }
    }
}

#[test]
fn regime_boundaries_are_continuous() {
    for &nu in &[0.1, 0.5, 1.7, 3.3, 6.6, 11.9] {
        let r = switch_radius(nu);
        for &z in &[r, -r] {
            let inside = pcf_d(nu, z * (1.0 - 1e-12)).unwrap().value;
            let outside = pcf_d(nu, z * (1.0 + 1e-12)).unwrap().value;
            assert!(rel(inside, outside) < 1e-9, "nu {nu} z {z}: {inside} vs {outside}");
        }
        let inside = pcf_d(nu, 2.0).unwrap().value;
        let outside = pcf_d(nu, 2.0 + 1e-12).unwrap().value;
        assert!(rel(inside, outside) < 1e-10);
    }
}

#[test]
fn hermite_reduction() {
    let (l, r) = pcf_hermite_identity(0, 1.3).unwrap();
    assert!((l - 0.655_406_254_5).abs() < 1e-9 && (r - 0.655_406_254_5).abs() < 1e-9);
    let (l, r) = pcf_hermite_identity(1, -2.0).unwrap();
    assert!(rel(l, -2.0 * (-1f64).exp()) < 1e-14 && rel(r, -2.0 * (-1f64).exp()) < 1e-14);
    for n in 0..=8 {
        for j in 0..=40 {
            let z = -10.0 + 0.5 * j as f64;
            let (l, r) = pcf_hermite_identity(n, z).unwrap();
            assert!((l - r).abs() <= 1e-10 * r.abs() + 1e-14, "n {n} z {z}: {l} vs {r}");
        }
    }
}

#[test]
fn hermite_gaussian_examples() {
    assert!((hermite_gaussian(0, 0.0, 1.0, 0.0).unwrap() - 0.751_125_5).abs() < 1e-7);
    assert_eq!(hermite_gaussian(1, 0.4, 1.0, 0.4).unwrap(), 0.0);
    let n = 4001;
    let h = 20.0 / (n - 1) as f64;
    let mut s = 0.0;
    for i in 0..n {
        let x = -10.0 + i as f64 * h;
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        s += w * hermite_gaussian(3, 0.0, 1.0, x).unwrap().powi(2);
    }
    assert!((s * h - 1.0).abs() < 1e-8);
}

#[test]
fn integer_order_norm() {
    let mut fact = 1.0;
    for n in 0..=5u32 {
        if n > 0 {
            fact *= n as f64;
        }
        let q = crate::numerics::tanh_sinh(|z| pcf_d(n as f64, z).unwrap().value.powi(2), -30.0, 30.0, 1e-13)
            .unwrap();
        let want = (2.0 * std::f64::consts::PI).sqrt() * fact;
        assert!(rel(q.value, want) < 1e-8, "n {n}");
    }
}

#[test]
fn g_factor_values() {
    assert!((g_factor(0.0).unwrap() - 1.075_047_7).abs() < 1e-6);
    assert!((g_factor(1.0).unwrap() - 1.027_507_735_027_19).abs() < 1e-13);
    let g50 = g_factor(50.0).unwrap();
    assert!(g50 > 1.0 && g50 < 1.002);
    assert!(matches!(g_factor(-0.1), Err(crate::Error::Domain(_))));
    assert!(g_factor_extended(-0.1).unwrap() > g_factor(0.0).unwrap());
    assert!(g_factor_extended(-0.5).is_err());
}

#[test]
fn g_factor_monotone_above_one() {
    let mut prev = f64::INFINITY;
    for i in 0..=500 {
        let g = g_factor(0.1 * i as f64).unwrap();
        assert!(g < prev && g > 1.0);
        prev = g;
    }
}

#[test]
fn growing_branch_sign() {
    for &nu in &[0.1, 0.4, 0.9] {
        for &z in &[-8.0, -10.0, -20.0] {
            assert!(pcf_d(nu, z).unwrap().value < 0.0);
            assert!(pcf_d_asymptotic(nu, z).unwrap().value < 0.0);
            assert!(sin_pi(nu) > 0.0);
        }
    }
}

proptest! {
    #[test]
    fn satisfies_recurrence(nu in 0.0f64..10.0, z in -9.0f64..9.0) {
        // D_{nu+1}(z) - z D_nu(z) + nu D_{nu-1}(z) = 0.
        prop_assume!(nu >= 0.5);
        let a = pcf_d(nu + 1.0, z).unwrap().value;
        let b = pcf_d(nu, z).unwrap().value;
        let c = pcf_d(nu - 1.0, z).unwrap().value;
        let scale = a.abs() + (z * b).abs() + (nu * c).abs();
        prop_assert!((a - z * b + nu * c).abs() <= 1e-9 * scale);
    }

    #[test]
    fn g_factor_positive(nu in 0.0f64..60.0) {
        let g = g_factor(nu).unwrap();
        prop_assert!(g >= 1.0 && g.is_finite());
    }
}
