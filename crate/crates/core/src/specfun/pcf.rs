//! Parabolic cylinder function D_nu(z) for real order and argument.

use super::weber::{rk4_integrate, taylor_integrate};
use crate::error::{Error, Result};
use crate::numerics::{cos_pi, gamma, sin_pi};
use serde::Serialize;
use std::f64::consts::PI;

pub const NU_MIN: f64 = -0.5;
pub const NU_MAX: f64 = 12.0;
pub const Z_MAX: f64 = 40.0;
/// Largest |z| accepted by the reference ODE integrator.
pub const ODE_Z_MAX: f64 = 15.0;
/// Positive arguments up to this value use the power series even for non-integer order.
const POSITIVE_SERIES_LIMIT: f64 = 2.0;
const TAYLOR_STEP: f64 = 0.25;
const RK4_STEPS_PER_UNIT: f64 = 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PcfRegime {
    Series,
    Asymptotic,
    Ode,
}

impl std::fmt::Display for PcfRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PcfRegime::Series => "series",
            PcfRegime::Asymptotic => "asymptotic",
            PcfRegime::Ode => "ode",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcfEvaluation {
    pub value: f64,
    pub error_estimate: f64,
    pub regime: PcfRegime,
}

/// Radius beyond which the large-|z| expansion is used.
pub fn switch_radius(nu: f64) -> f64 {
    f64::max(8.0, 3.0 * (2.0 * nu + 1.0).max(0.0).sqrt())
}

fn check_envelope(nu: f64, z: f64, z_max: f64) -> Result<()> {
    if !nu.is_finite() || !z.is_finite() {
        return Err(Error::Range(format!("non-finite argument (nu = {nu}, z = {z})")));
    }
    if !(NU_MIN..=NU_MAX).contains(&nu) {
        return Err(Error::Range(format!("order nu = {nu} outside [{NU_MIN}, {NU_MAX}]")));
    }
    if z.abs() > z_max {
        return Err(Error::Range(format!("|z| = {} exceeds {z_max}", z.abs())));
    }
    Ok(())
}

fn is_integer(nu: f64) -> bool {
    nu == nu.trunc()
}

/// D_nu(0) and D'_nu(0).
pub fn pcf_d_at_zero(nu: f64) -> (f64, f64) {
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    let c = cos_pi(0.5 * nu);
    let s = sin_pi(0.5 * nu);
    let d0 = if c == 0.0 {
        0.0
    } else {
        2f64.powf(0.5 * nu) * inv_sqrt_pi * gamma(0.5 * (nu + 1.0)) * c
    };
    let d1 = if s == 0.0 {
        0.0
    } else {
        2f64.powf(0.5 * (nu + 1.0)) * inv_sqrt_pi * gamma(0.5 * nu + 1.0) * s
    };
    (d0, d1)
}

/// Parabolic cylinder function with an error estimate and the regime used.
///
/// Valid for nu in [-1/2, 12] and |z| <= 40.
pub fn pcf_d(nu: f64, z: f64) -> Result<PcfEvaluation> {
    check_envelope(nu, z, Z_MAX)?;
    let r = switch_radius(nu);
    if z.abs() > r {
        let (value, err) = asymptotic_full(nu, z);
        return Ok(PcfEvaluation { value, error_estimate: err, regime: PcfRegime::Asymptotic });
    }
    if z <= POSITIVE_SERIES_LIMIT || is_integer(nu) {
        let (value, err) = kummer_series(nu, z)?;
        return Ok(PcfEvaluation { value, error_estimate: err, regime: PcfRegime::Series });
    }
    let (value, err) = inward_taylor(nu, z, r);
    Ok(PcfEvaluation { value, error_estimate: err, regime: PcfRegime::Ode })
}

struct SeriesSum {
    sum: f64,
    abs_sum: f64,
}

/// Confluent hypergeometric M(a, b, x) for x >= 0.
fn kummer_m(a: f64, b: f64, x: f64) -> Result<SeriesSum> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut quiet = 0;
    for k in 0..5000 {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        if term == 0.0 {
            return Ok(SeriesSum { sum, abs_sum });
        }
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= 1e-17 * sum.abs() && kf + a > 0.0 {
            quiet += 1;
            if quiet >= 3 {
                return Ok(SeriesSum { sum, abs_sum });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Solver(format!("Kummer series did not converge (a = {a}, x = {x})")))
}

fn kummer_series(nu: f64, z: f64) -> Result<(f64, f64)> {
    let (d0, d1) = pcf_d_at_zero(nu);
    let x = 0.5 * z * z;
    let envelope = (-0.25 * z * z).exp();
    let (mut even, mut even_abs) = (0.0, 0.0);
    if d0 != 0.0 {
        let m = kummer_m(-0.5 * nu, 0.5, x)?;
        even = d0 * m.sum;
        even_abs = (d0 * m.abs_sum).abs();
    }
    let (mut odd, mut odd_abs) = (0.0, 0.0);
    if d1 != 0.0 {
        let m = kummer_m(0.5 * (1.0 - nu), 1.5, x)?;
        odd = d1 * z * m.sum;
        odd_abs = (d1 * z * m.abs_sum).abs();
    }
    let value = envelope * (even + odd);
    let err = 8.0 * f64::EPSILON * envelope * (even_abs + odd_abs) + 4.0 * f64::EPSILON * value.abs();
    Ok((value, err))
}

/// Optimally truncated sum of t_0 = 1, t_{s+1} = t_s * ratio(s). Returns (sum, first omitted |term|, terms used).
fn truncated_series(ratio: impl Fn(usize) -> f64) -> (f64, f64, Vec<f64>) {
    let mut terms = vec![1.0];
    let mut sum = 1.0;
    let mut term: f64 = 1.0;
    for s in 0..400 {
        let next = term * ratio(s);
        if next == 0.0 {
            return (sum, 0.0, terms);
        }
        if next.abs() >= term.abs() {
            return (sum, next.abs(), terms);
        }
        if next.abs() <= 1e-17 * sum.abs() {
            return (sum, next.abs(), terms);
        }
        sum += next;
        terms.push(next);
        term = next;
    }
    (sum, term.abs(), terms)
}

/// Decaying large-|z| series factor and its termwise terms at x = |z|.
fn decaying_series(nu: f64, x: f64) -> (f64, f64, Vec<f64>) {
    let inv = 1.0 / (2.0 * x * x);
    truncated_series(|s| {
        let sf = s as f64;
        -(-nu + 2.0 * sf) * (-nu + 2.0 * sf + 1.0) / (sf + 1.0) * inv
    })
}

fn growing_series(nu: f64, x: f64) -> (f64, f64) {
    let inv = 1.0 / (2.0 * x * x);
    let (sum, err, _) = truncated_series(|s| {
        let sf = s as f64;
        (nu + 1.0 + 2.0 * sf) * (nu + 2.0 + 2.0 * sf) / (sf + 1.0) * inv
    });
    (sum, err)
}

/// Full large-|z| expansion, both branches on the negative axis.
fn asymptotic_full(nu: f64, z: f64) -> (f64, f64) {
    let x = z.abs();
    let dec_pref = (nu * x.ln() - 0.25 * x * x).exp();
    let (dsum, derr, _) = decaying_series(nu, x);
    if z > 0.0 {
        let value = dec_pref * dsum;
        return (value, dec_pref * derr + 4.0 * f64::EPSILON * value.abs());
    }
    let c = cos_pi(nu);
    let s = sin_pi(nu);
    let mut value = c * dec_pref * dsum;
    let mut err = (c * dec_pref * derr).abs();
    if s != 0.0 {
        let grow_pref =
            (2.0 / PI).sqrt() * gamma(nu + 1.0) * ((-nu - 1.0) * x.ln() + 0.25 * x * x).exp();
        let (gsum, gerr) = growing_series(nu, x);
        value -= s * grow_pref * gsum;
        err += (s * grow_pref * gerr).abs();
    }
    (value, err + 4.0 * f64::EPSILON * value.abs())
}

/// Value and derivative of the decaying expansion at z > 0.
fn asymptotic_positive_with_derivative(nu: f64, z: f64) -> (f64, f64, f64) {
    let pref = (nu * z.ln() - 0.25 * z * z).exp();
    let (sum, err, terms) = decaying_series(nu, z);
    let mut dsum = 0.0;
    for (s, t) in terms.iter().enumerate() {
        dsum += t * ((nu - 2.0 * s as f64) / z - 0.5 * z);
    }
    (pref * sum, pref * dsum, pref * err)
}

fn inward_taylor(nu: f64, z: f64, r: f64) -> (f64, f64) {
    let (y0, dy0, seed_err) = asymptotic_positive_with_derivative(nu, r);
    let (coarse, _) = taylor_integrate(nu, r, z, y0, dy0, TAYLOR_STEP);
    let (fine, _) = taylor_integrate(nu, r, z, y0, dy0, 0.5 * TAYLOR_STEP);
    let rel_seed = if y0 != 0.0 { (seed_err / y0).abs() } else { 0.0 };
    let err = (fine - coarse).abs() + rel_seed * fine.abs() + 8.0 * f64::EPSILON * fine.abs();
    (fine, err)
}

/// Leading two-term large-|z| form of D_nu(z), valid for |z| >= max(6, 3 sqrt(2 nu + 1)).
///
/// The error estimate is the size of the first omitted correction.
pub fn pcf_d_asymptotic(nu: f64, z: f64) -> Result<PcfEvaluation> {
    check_envelope(nu, z, Z_MAX)?;
    let threshold = f64::max(6.0, 3.0 * (2.0 * nu + 1.0).max(0.0).sqrt());
    if z.abs() < threshold {
        return Err(Error::Range(format!(
            "|z| = {} is below the asymptotic threshold {threshold}",
            z.abs()
        )));
    }
    let x = z.abs();
    let x2 = x * x;
    let dec_pref = (nu * x.ln() - 0.25 * x2).exp();
    let dec_c1 = -nu * (nu - 1.0) / (2.0 * x2);
    let dec_c2 = nu * (nu - 1.0) * (nu - 2.0) * (nu - 3.0) / (8.0 * x2 * x2);
    if z > 0.0 {
        let value = dec_pref * (1.0 + dec_c1);
        return Ok(PcfEvaluation {
            value,
            error_estimate: (dec_pref * dec_c2).abs(),
            regime: PcfRegime::Asymptotic,
        });
    }
    let grow_pref = (2.0 / PI).sqrt() * gamma(nu + 1.0) * ((-nu - 1.0) * x.ln() + 0.25 * x2).exp();
    let grow_c1 = (nu + 1.0) * (nu + 2.0) / (2.0 * x2);
    let grow_c2 = (nu + 1.0) * (nu + 2.0) * (nu + 3.0) * (nu + 4.0) / (8.0 * x2 * x2);
    let (c, s) = (cos_pi(nu), sin_pi(nu));
    let value = c * dec_pref * (1.0 + dec_c1) - s * grow_pref * (1.0 + grow_c1);
    let err = (c * dec_pref * dec_c2).abs() + (s * grow_pref * grow_c2).abs();
    Ok(PcfEvaluation { value, error_estimate: err, regime: PcfRegime::Asymptotic })
}

/// Reference value of D_nu(z) by direct integration of Weber's equation.
///
/// Positive arguments follow the recessive solution inward from far out and are scaled at the
/// origin; negative arguments integrate outward from the origin data. Accepts |z| <= 15.
pub fn pcf_d_ode(nu: f64, z: f64) -> Result<PcfEvaluation> {
    check_envelope(nu, z, ODE_Z_MAX)?;
    if z == 0.0 {
        let value = pcf_d_at_zero(nu).0;
        return Ok(PcfEvaluation { value, error_estimate: 0.0, regime: PcfRegime::Ode });
    }
    let run = |steps_per_unit: f64| -> f64 {
        let (d0, d1) = pcf_d_at_zero(nu);
        if z >= 0.0 || is_integer(nu) {
            let x = z.abs();
            let far = (x * x + 80.0).sqrt();
            let seed_slope = -(0.5 * far - nu / far);
            let n1 = ((far - x) * steps_per_unit).ceil().max(1.0) as usize;
            let (yx, dyx) = rk4_integrate(nu, far, x, 1.0, seed_slope, n1);
            let (y0, dy0) = if x > 0.0 {
                let n2 = (x * steps_per_unit).ceil().max(1.0) as usize;
                rk4_integrate(nu, x, 0.0, yx, dyx, n2)
            } else {
                (yx, dyx)
            };
            let scale = if cos_pi(0.5 * nu).abs() >= sin_pi(0.5 * nu).abs() {
                d0 / y0
            } else {
                d1 / dy0
            };
            let positive = scale * yx;
            if z < 0.0 {
                let n = nu as i64;
                if n % 2 == 0 {
                    positive
                } else {
                    -positive
                }
            } else {
                positive
            }
        } else {
            let n = (z.abs() * steps_per_unit).ceil().max(1.0) as usize;
            rk4_integrate(nu, 0.0, z, d0, d1, n).0
        }
    };
    let coarse = run(RK4_STEPS_PER_UNIT);
    let fine = run(2.0 * RK4_STEPS_PER_UNIT);
    let value = fine + (fine - coarse) / 15.0;
    if !value.is_finite() {
        return Err(Error::Range(format!("integration overflow at nu = {nu}, z = {z}")));
    }
    Ok(PcfEvaluation {
        value,
        error_estimate: (fine - coarse).abs() / 15.0 + 8.0 * f64::EPSILON * value.abs(),
        regime: PcfRegime::Ode,
    })
}
