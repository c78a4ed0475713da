use super::*;
use crate::potential::{build_piecewise_parabolic, WellParams};
use crate::quantize::splitting_degenerate;

fn piecewise(a: f64, d: f64, h: f64, v_right: f64) -> DoubleWellPotential {
    let u = UnitsConfig::default();
    let l = WellParams::new(-a, 1.0, 0.0, d, u).unwrap();
    let r = WellParams::new(a, 1.0, v_right, d, u).unwrap();
    build_piecewise_parabolic(l, r, (d, d), h, u).unwrap()
}

fn harmonic() -> HarmonicPotential {
    HarmonicPotential::new(1.0, 0.0, 0.0, UnitsConfig::default()).unwrap()
}

fn sign_changes(v: &[f64]) -> usize {
    let peak = v.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let signif: Vec<f64> = v.iter().copied().filter(|y| y.abs() > 1e-8 * peak).collect();
    signif.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

#[test]
fn grid_spec_validation() {
    assert!(GridSpec::new(0.0, 1.0, 500).is_err());
    assert!(GridSpec::new(1.0, 0.0, 1001).is_err());
    let g = GridSpec::new(-1.0, 1.0, 501).unwrap();
    assert_eq!(g.step(), 2.0 / 500.0);
    assert_eq!(g.xs().len(), 501);
}

#[test]
fn harmonic_spectrum() {
    let g = GridSpec::new(-10.0, 10.0, DEFAULT_GRID_POINTS).unwrap();
    for scheme in [Scheme::ThreePoint, Scheme::Numerov] {
        let s = solve_spectrum(&harmonic(), &g, 3, SolveOptions { scheme, richardson: true }).unwrap();
        for (k, e) in s.eigenvalues.iter().enumerate() {
            assert!((e - (k as f64 + 0.5)).abs() <= 1e-6, "{scheme:?} {k}: {e}");
            assert!(s.error_estimates[k] < 1e-5);
        }
    }
}

#[test]
fn convergence_orders() {
    for (scheme, min_order) in [(Scheme::ThreePoint, 1.9), (Scheme::Numerov, 3.8)] {
        let e: Vec<f64> = [501, 1001, 2001]
            .iter()
            .map(|&n| {
                let g = GridSpec::new(-10.0, 10.0, n).unwrap();
                solve_spectrum(&harmonic(), &g, 1, SolveOptions { scheme, richardson: false }).unwrap().eigenvalues[0]
            })
            .collect();
        let order = ((e[0] - e[1]) / (e[1] - e[2])).log2();
        assert!(order >= min_order, "{scheme:?}: {order}");
    }
}

#[test]
fn eigenvectors_are_orthonormal_with_sturm_nodes() {
    let p = piecewise(3.0, 2.0, 3.0, 0.03);
    let g = GridSpec::auto(&p, 4001, 6).unwrap();
    let s = solve_spectrum(&p, &g, 6, SolveOptions::default()).unwrap();
    let h = g.step();
    for (i, a) in s.eigenvectors.iter().enumerate() {
        assert_eq!(sign_changes(a), i);
        for (j, b) in s.eigenvectors.iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h;
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((dot - expect).abs() <= 1e-8, "({i},{j}): {dot}");
        }
    }
    assert!(s.eigenvalues.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn first_significant_component_is_positive() {
    let g = GridSpec::new(-10.0, 10.0, 1001).unwrap();
    let s = solve_spectrum(&harmonic(), &g, 4, SolveOptions::default()).unwrap();
    for v in &s.eigenvectors {
        let peak = v.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        assert!(*v.iter().find(|y| y.abs() > 1e-8 * peak).unwrap() > 0.0);
    }
}

#[test]
fn symmetric_well_pairs_and_parity() {
    let p = piecewise(3.0, 2.0, 3.0, 0.0);
    let g = GridSpec::auto(&p, 4001, 4).unwrap();
    let s = solve_spectrum(&p, &g, 4, SolveOptions::default()).unwrap();
    let d0 = pair_splitting(&s, 0).unwrap();
    let d1 = pair_splitting(&s, 1).unwrap();
    assert!(d0 > 0.0 && d0 < 1e-2);
    assert!(d1 > d0);
    assert!(s.eigenvalues[2] - s.eigenvalues[1] > 0.5);
    let n = g.n_points;
    for (k, v) in s.eigenvectors.iter().enumerate() {
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let peak = v.iter().fold(0.0f64, |m, y| m.max(y.abs()));
        for i in 0..n / 2 {
            assert!((v[i] - parity * v[n - 1 - i]).abs() < 1e-6 * peak);
        }
        let (l, r) = probability_split(v, &g, 0.0).unwrap();
        assert!((l - 0.5).abs() <= 1e-6);
        assert!((l + r - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn oracle_splitting_is_close_to_semiclassical() {
    let p = piecewise(3.0, 2.0, 3.0, 0.0);
    let g = GridSpec::auto(&p, 4001, 2).unwrap();
    let s = solve_spectrum(&p, &g, 2, SolveOptions::default()).unwrap();
    let d = splitting_degenerate(&p, 0, 0).unwrap();
    assert!((d / pair_splitting(&s, 0).unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn harmonic_pair_gap_is_one_quantum() {
    let g = GridSpec::new(-10.0, 10.0, 2001).unwrap();
    let s = solve_spectrum(&harmonic(), &g, 2, SolveOptions::default()).unwrap();
    assert!((pair_splitting(&s, 0).unwrap() - 1.0).abs() < 1e-6);
    assert!(pair_splitting(&s, 1).is_err());
}

#[test]
fn displaced_oscillator_is_left_localized() {
    let u = UnitsConfig::default();
    let hp = HarmonicPotential::new(1.0, -7.0, 0.0, u).unwrap();
    let g = GridSpec::new(-17.0, 3.0, 2001).unwrap();
    let s = solve_spectrum(&hp, &g, 1, SolveOptions::default()).unwrap();
    let (l, _) = probability_split(&s.eigenvectors[0], &g, -1.0).unwrap();
    assert!(l >= 1.0 - 1e-6);
    assert!(probability_split(&s.eigenvectors[0], &g, 5.0).is_err());
}

#[test]
fn strongly_biased_ground_state_sits_in_deeper_well() {
    let p = piecewise(3.0, 2.0, 3.0, 0.2);
    let g = GridSpec::auto(&p, 4001, 2).unwrap();
    let s = solve_spectrum(&p, &g, 2, SolveOptions::default()).unwrap();
    let (l, _) = probability_split(&s.eigenvectors[0], &g, p.c()).unwrap();
    assert!(l >= 0.99);
}

#[test]
fn coverage_is_checked() {
    let g = GridSpec::new(-2.0, 2.0, 1001).unwrap();
    assert!(matches!(solve_spectrum(&harmonic(), &g, 3, SolveOptions::default()), Err(Error::Coverage(_))));
    let g = GridSpec::new(-10.0, 10.0, 1001).unwrap();
    assert!(matches!(solve_spectrum(&harmonic(), &g, 21, SolveOptions::default()), Err(Error::Input(_))));
}

#[test]
fn grid_halving_is_consistent_with_error_bound() {
    let p = piecewise(3.0, 2.0, 3.0, 0.0);
    let g1 = GridSpec::auto(&p, 2001, 2).unwrap();
    let g2 = GridSpec { n_points: 4001, ..g1 };
    let opts = SolveOptions { scheme: Scheme::ThreePoint, richardson: false };
    let a = solve_spectrum(&p, &g1, 2, opts).unwrap();
    let b = solve_spectrum(&p, &g2, 2, opts).unwrap();
    for k in 0..2 {
        assert!((a.eigenvalues[k] - b.eigenvalues[k]).abs() <= 4.0 * a.error_estimates[k]);
    }
}

#[test]
fn pair_classification() {
    let sym = piecewise(3.0, 2.0, 3.0, 0.0);
    let delta = splitting_degenerate(&sym, 0, 0).unwrap();
    let classify = |bias: f64| {
        let p = piecewise(3.0, 2.0, 3.0, bias);
        let g = GridSpec::auto(&p, 4001, 4).unwrap();
        let s = solve_spectrum(&p, &g, 4, SolveOptions::default()).unwrap();
        resolve_pair_or_single(&s, &p, 0, 0).unwrap()
    };
    let c0 = classify(0.0);
    assert_eq!(c0.kind, PairKind::TunnelingPair);
    assert_eq!(c0.indices, (0, 1));
    assert_eq!(classify(-10.0 * delta).kind, PairKind::LocalizedSingles);
    assert_eq!(classify(-delta).kind, PairKind::TunnelingPair);
}

#[test]
fn csv_export() {
    let g = GridSpec::new(-10.0, 10.0, 501).unwrap();
    let s = solve_spectrum(&harmonic(), &g, 2, SolveOptions::default()).unwrap();
    let mut buf = Vec::new();
    s.write_eigenvalues_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("index,eigenvalue,error_estimate\n0,"));
    assert_eq!(text.lines().count(), 3);
    let mut buf = Vec::new();
    s.write_eigenvectors_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("x,psi_0,psi_1\n"));
    assert_eq!(text.lines().count(), 502);
}
