//! Fixtures shared by the benchmarks.

use asymwell::{build_biased_quartic, build_piecewise_parabolic, DoubleWellPotential, UnitsConfig, WellParams};

/// Piecewise-parabolic wells at -+3 with unit frequency; `bias` raises the right floor.
pub fn piecewise(bias: f64) -> DoubleWellPotential {
    let u = UnitsConfig::default();
    let l = WellParams::new(-3.0, 1.0, 0.0, 2.0, u).expect("valid left well");
    let r = WellParams::new(3.0, 1.0, bias, 2.0, u).expect("valid right well");
    build_piecewise_parabolic(l, r, (2.0, 2.0), 3.0, u).expect("valid piecewise potential")
}

/// Quartic double well with unit well frequency at zero bias.
pub fn quartic(a: f64, bias: f64) -> DoubleWellPotential {
    build_biased_quartic(a, 1.0 / (8.0 * a * a), bias, UnitsConfig::default()).expect("valid quartic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert!(piecewise(0.01).energy_scale() > 0.0);
        assert!(quartic(5.0, 0.0).energy_scale() > 0.0);
    }
}
