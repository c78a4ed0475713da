//! Parabolic cylinder functions, the Stirling-type g factor, and Hermite-Gaussian helpers.

mod hermite;
mod pcf;
mod weber;

pub use hermite::{hermite_gaussian, hermite_h, pcf_hermite_identity, MAX_HERMITE_INDEX};
pub use pcf::{
    pcf_d, pcf_d_asymptotic, pcf_d_at_zero, pcf_d_ode, switch_radius, PcfEvaluation, PcfRegime,
    NU_MAX, NU_MIN, ODE_Z_MAX, Z_MAX,
};

use crate::error::{Error, Result};
use crate::numerics::ln_gamma;
use std::f64::consts::PI;

/// g_nu = sqrt(2 pi) / Gamma(nu + 1) * (nu + 1/2)^(nu + 1/2) * exp(-nu - 1/2), for nu >= 0.
pub fn g_factor(nu: f64) -> Result<f64> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::Domain(format!("g factor needs nu >= 0, got {nu}")));
    }
    Ok(g_unchecked(nu))
}

/// Same expression continued to -1/2 < nu < 0, used where energies dip just below a zero-point level.
pub fn g_factor_extended(nu: f64) -> Result<f64> {
    if !(nu > -0.5) || !nu.is_finite() {
        return Err(Error::Domain(format!("g factor needs nu > -1/2, got {nu}")));
    }
    Ok(g_unchecked(nu))
}

fn g_unchecked(nu: f64) -> f64 {
    let h = nu + 0.5;
    (0.5 * (2.0 * PI).ln() - ln_gamma(nu + 1.0) + h * h.ln() - h).exp()
}

#[cfg(test)]
mod tests;
