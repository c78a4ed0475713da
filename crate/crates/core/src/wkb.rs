//! Barrier action integrals and matching of the WKB barrier solution to the well solutions.

use crate::error::{Error, Result};
use crate::numerics::{cos_pi, ln_gamma, sin_pi, tanh_sinh};
use crate::potential::{turning_points, DoubleWellPotential, WellParams};
use crate::specfun::g_factor_extended;
use serde::Serialize;
use std::f64::consts::PI;

const QUAD_TOL: f64 = 1e-14;
/// Analytic treatment within this many oscillator lengths of a turning point.
const TURNING_CAP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionIntegrals {
    pub total: f64,
    pub left_to_c: f64,
    pub c_to_right: f64,
    pub energy: f64,
    pub c_used: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Amplitudes fixed from the left well; C_L/C_R from the decaying-branch equality.
    LeftAnchored,
    /// Amplitudes fixed from the right well; C_L/C_R from the growing-branch equality.
    RightAnchored,
}

/// Size of 1/|sin(nu pi)| relative to the barrier: moderate, or the Hermite-Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SinRegime {
    Moderate,
    HermiteGaussian,
}

impl std::fmt::Display for SinRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SinRegime::Moderate => "moderate",
            SinRegime::HermiteGaussian => "hermite_gaussian",
        })
    }
}

/// Moderate when 1/|sin(nu pi)| <= exp(S/2).
pub fn sin_regime(nu: f64, total_action: f64) -> SinRegime {
    let s = sin_pi(nu).abs();
    if s > 0.0 && (1.0 / s).ln() <= 0.5 * total_action {
        SinRegime::Moderate
    } else {
        SinRegime::HermiteGaussian
    }
}

/// Barrier amplitudes A (growing from c) and B (decaying from c) fixed by one well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatchingCoefficients {
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub c_left: Option<f64>,
    pub c_right: Option<f64>,
    pub branch: Branch,
    /// Order of the anchoring well's parabolic cylinder function.
    pub nu: f64,
}

impl MatchingCoefficients {
    /// Validity regime of the anchoring well for a barrier of total action `total_action`.
    ///
    /// In the moderate regime the coefficient carried by the well's growing term is reliable;
    /// in the Hermite-Gaussian limit only the decaying one is.
    pub fn regime(&self, total_action: f64) -> SinRegime {
        sin_regime(self.nu, total_action)
    }
}

pub(crate) fn momentum(potential: &DoubleWellPotential, e: f64, x: f64) -> f64 {
    (2.0 * potential.units().mass * (potential.value(x) - e).max(0.0)).sqrt()
}

/// Integral of p/hbar over [lo, hi] inside the forbidden region, split at shape breakpoints.
pub(crate) fn forbidden_integral(potential: &DoubleWellPotential, e: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let hbar = potential.units().hbar;
    let mut knots = vec![a];
    // Breakpoints hugging an endpoint would only create slivers below rounding level.
    let guard = 1e-10 * (b - a);
    knots.extend(potential.shape().breakpoints().into_iter().filter(|&x| x > a + guard && x < b - guard));
    knots.push(b);
    let mut total = 0.0;
    for w in knots.windows(2) {
        let q = tanh_sinh(|x| momentum(potential, e, x) / hbar, w[0], w[1], QUAD_TOL)?;
        total += q.value;
    }
    Ok(sign * total)
}

/// Integral of p/hbar from turning point `a_t` to `to`, with the first stretch done analytically.
fn action_from_turning(potential: &DoubleWellPotential, e: f64, a_t: f64, to: f64, l: f64) -> Result<f64> {
    let span = (to - a_t).abs();
    let delta = (TURNING_CAP * l).min(0.5 * span);
    let dir = (to - a_t).signum();
    let units = potential.units();
    // V - E ~ |V'| y + V'' y^2 / 2 for the distance y into the barrier.
    let slope = potential.eval(a_t).1.abs();
    let curv = potential.second_derivative(a_t);
    let cap = (2.0 * units.mass * slope).sqrt() / units.hbar
        * (2.0 / 3.0 * delta.powf(1.5) + curv / (4.0 * slope) * 0.4 * delta.powf(2.5));
    let rest = forbidden_integral(potential, e, a_t + dir * delta, to)?;
    Ok(cap + rest.abs())
}

/// Barrier action at energy `e`, split at the matching point `c`.
pub fn barrier_action(potential: &DoubleWellPotential, e: f64, c: f64) -> Result<ActionIntegrals> {
    let tp = turning_points(potential, e)?;
    if !(c > tp.a_nu_l && c < tp.a_nu_r) {
        return Err(Error::Domain(format!(
            "c = {c} is not strictly between the turning points {} and {}",
            tp.a_nu_l, tp.a_nu_r
        )));
    }
    let left_to_c = action_from_turning(potential, e, tp.a_nu_l, c, potential.left().l)?;
    let c_to_right = action_from_turning(potential, e, tp.a_nu_r, c, potential.right().l)?;
    Ok(ActionIntegrals { total: left_to_c + c_to_right, left_to_c, c_to_right, energy: e, c_used: c })
}

/// Action in a parabolic region in oscillator units, with its large-argument form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticAction {
    /// Integral of sqrt(z^2 - 2 nu - 1) from sqrt(2 nu + 1) to z_upper.
    pub exact: f64,
    /// z^2/2 - (nu + 1/2)/2 - (nu + 1/2) ln(sqrt(2) z / sqrt(nu + 1/2)).
    pub asymptotic: f64,
}

pub fn quadratic_action(nu: f64, z_upper: f64) -> Result<QuadraticAction> {
    if !(nu > -0.5) {
        return Err(Error::Domain(format!("order must exceed -1/2, got {nu}")));
    }
    let b2 = 2.0 * nu + 1.0;
    let b = b2.sqrt();
    if !(z_upper >= b * (1.0 - 1e-15)) {
        return Err(Error::Domain(format!("upper limit {z_upper} is below the turning coordinate {b}")));
    }
    let z = z_upper.max(b);
    let root = (z * z - b2).max(0.0).sqrt();
    let exact = 0.5 * z * root - 0.5 * b2 * ((z + root) / b).ln();
    let h = nu + 0.5;
    let asymptotic = 0.5 * z * z - 0.5 * h - h * (2f64.sqrt() * z / h.sqrt()).ln();
    Ok(QuadraticAction { exact, asymptotic })
}

fn sqrt_factorial(nu: f64) -> f64 {
    (0.5 * ln_gamma(nu + 1.0)).exp()
}

/// Amplitudes fixed by the left well with amplitude `c_left`.
pub fn match_left(c_left: f64, nu_l: f64, action_left_to_c: f64, well: &WellParams) -> Result<MatchingCoefficients> {
    if !action_left_to_c.is_finite() {
        return Err(Error::Domain("action must be finite".into()));
    }
    let g = g_factor_extended(nu_l)?;
    let sf = sqrt_factorial(nu_l);
    let l = well.l;
    let a = -sin_pi(nu_l) * 2f64.sqrt() * sf / (PI.powf(0.25) * (l * g).sqrt()) * action_left_to_c.exp() * c_left;
    let b = cos_pi(nu_l) * sf * g.sqrt() / ((4.0 * PI).powf(0.25) * l.sqrt()) * (-action_left_to_c).exp() * c_left;
    Ok(MatchingCoefficients {
        a_coeff: a,
        b_coeff: b,
        c_left: Some(c_left),
        c_right: None,
        branch: Branch::LeftAnchored,
        nu: nu_l,
    })
}

/// Amplitudes fixed by the right well with amplitude `c_right`.
pub fn match_right(c_right: f64, nu_r: f64, action_c_to_right: f64, well: &WellParams) -> Result<MatchingCoefficients> {
    if !action_c_to_right.is_finite() {
        return Err(Error::Domain("action must be finite".into()));
    }
    let g = g_factor_extended(nu_r)?;
    let sf = sqrt_factorial(nu_r);
    let l = well.l;
    let a = cos_pi(nu_r) * sf * g.sqrt() / ((4.0 * PI).powf(0.25) * l.sqrt()) * (-action_c_to_right).exp() * c_right;
    let b = -sin_pi(nu_r) * 2f64.sqrt() * sf / (PI.powf(0.25) * (l * g).sqrt()) * action_c_to_right.exp() * c_right;
    Ok(MatchingCoefficients {
        a_coeff: a,
        b_coeff: b,
        c_left: None,
        c_right: Some(c_right),
        branch: Branch::RightAnchored,
        nu: nu_r,
    })
}

/// C_L/C_R from the well orders, oscillator lengths and total barrier action.
///
/// `LeftAnchored` equates the decaying amplitudes and suits nu_L near an integer;
/// `RightAnchored` equates the growing amplitudes and suits nu_R near an integer.
pub fn lr_ratio(nu_l: f64, nu_r: f64, l_l: f64, l_r: f64, total_action: f64, branch: Branch) -> Result<f64> {
    let g_l = g_factor_extended(nu_l)?;
    let g_r = g_factor_extended(nu_r)?;
    let common = (0.5 * (ln_gamma(nu_r + 1.0) - ln_gamma(nu_l + 1.0))).exp() * (l_l / l_r).sqrt();
    match branch {
        Branch::LeftAnchored => {
            let den = cos_pi(nu_l);
            if den == 0.0 {
                return Err(Error::Singular(format!("cos(pi nu_L) vanishes at nu_L = {nu_l}")));
            }
            Ok(-2.0 * sin_pi(nu_r) / den * common / (g_l * g_r).sqrt() * total_action.exp())
        }
        Branch::RightAnchored => {
            let den = sin_pi(nu_l);
            if den == 0.0 {
                return Err(Error::Singular(format!("sin(pi nu_L) vanishes at nu_L = {nu_l}")));
            }
            Ok(-cos_pi(nu_r) / (2.0 * den) * common * (g_l * g_r).sqrt() * (-total_action).exp())
        }
    }
}

/// C_L/C_R at an eigenvalue of a near-degenerate pair in the small-splitting limit.
///
/// `upper` selects the higher member of the pair.
pub fn lr_ratio_pair_limit(n_l: u32, n_r: u32, l_l: f64, l_r: f64, upper: bool) -> f64 {
    let parity = if (n_l + n_r).is_multiple_of(2) { 1.0 } else { -1.0 };
    let sign = if upper { -1.0 } else { 1.0 };
    let mag = (0.5 * (ln_gamma(n_r as f64 + 1.0) - ln_gamma(n_l as f64 + 1.0))).exp() * (l_r / l_l).sqrt();
    sign * parity * mag
}

/// C_L/C_R with the orders and action that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeRatio {
    pub ratio: f64,
    pub branch: Branch,
    pub nu_l: f64,
    pub nu_r: f64,
    pub action: ActionIntegrals,
    pub regime_l: SinRegime,
    pub regime_r: SinRegime,
}

/// Orders of the two wells at energy `e`.
pub fn well_orders(potential: &DoubleWellPotential, e: f64) -> (f64, f64) {
    let hbar = potential.units().hbar;
    let nu = |w: &WellParams| (e - w.v_min) / (hbar * w.omega) - 0.5;
    (nu(potential.left()), nu(potential.right()))
}

pub fn amplitude_ratio(potential: &DoubleWellPotential, e: f64, branch: Branch) -> Result<AmplitudeRatio> {
    let (nu_l, nu_r) = well_orders(potential, e);
    let action = barrier_action(potential, e, potential.c())?;
    let ratio = lr_ratio(nu_l, nu_r, potential.left().l, potential.right().l, action.total, branch)?;
    Ok(AmplitudeRatio {
        ratio,
        branch,
        nu_l,
        nu_r,
        action,
        regime_l: sin_regime(nu_l, action.total),
        regime_r: sin_regime(nu_r, action.total),
    })
}

/// Both wells' matching coefficients at energy `e` with C_L = 1 and C_R from the chosen ratio.
pub fn match_both(
    potential: &DoubleWellPotential,
    e: f64,
    branch: Branch,
) -> Result<(MatchingCoefficients, MatchingCoefficients)> {
    let r = amplitude_ratio(potential, e, branch)?;
    let left = match_left(1.0, r.nu_l, r.action.left_to_c, potential.left())?;
    let right = match_right(1.0 / r.ratio, r.nu_r, r.action.c_to_right, potential.right())?;
    Ok((left, right))
}

/// A sqrt(hbar/p) e^{+int_c^x p/hbar} + B sqrt(hbar/p) e^{-int_c^x p/hbar} inside the barrier.
pub fn wkb_wavefunction(
    potential: &DoubleWellPotential,
    e: f64,
    coeffs: &MatchingCoefficients,
    x: f64,
) -> Result<f64> {
    let tp = turning_points(potential, e)?;
    let lo = tp.a_nu_l + 0.5 * potential.left().l;
    let hi = tp.a_nu_r - 0.5 * potential.right().l;
    if !(x >= lo && x <= hi) {
        return Err(Error::Validity(format!(
            "x = {x} is within half an oscillator length of a turning point or outside the barrier"
        )));
    }
    let c = potential.c();
    if !(c > tp.a_nu_l && c < tp.a_nu_r) {
        return Err(Error::Domain(format!("matching point c = {c} is outside the barrier at E = {e}")));
    }
    let hbar = potential.units().hbar;
    let phase = forbidden_integral(potential, e, c, x)?;
    let pref = (hbar / momentum(potential, e, x)).sqrt();
    Ok(pref * (coeffs.a_coeff * phase.exp() + coeffs.b_coeff * (-phase).exp()))
}
