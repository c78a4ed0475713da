//! Double-exponential (tanh-sinh) quadrature on finite intervals.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

const MAX_LEVEL: usize = 12;
const MIN_LEVEL: usize = 3;

/// Integral estimate with the difference between the last two refinement levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Integrates `f` over [a, b]; `rel_tol` is relative to the integral of |f|.
///
/// Nodes never touch the endpoints, so integrable endpoint singularities are allowed.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("tanh-sinh needs finite limits".into()));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    if half <= 8.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
        // Too narrow to place distinct nodes; use the midpoint rule.
        let value = sign * 2.0 * half * f(mid);
        return Ok(Quadrature { value, error: value.abs(), evaluations: 1 });
    }
    let mut evaluations = 0usize;

    // Weighted sample (and its absolute value) at parameter t >= 0; None once nodes reach the ends.
    let mut pair = |t: f64, evaluations: &mut usize| -> Option<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cu * cu);
        if t == 0.0 {
            *evaluations += 1;
            let v = f(mid);
            return Some((w * v, w * v.abs()));
        }
        // Distance of the node from the nearest endpoint, computed without cancellation.
        let gap = half * (-u).exp() / cu;
        let xl = lo + gap;
        let xr = hi - gap;
        let left_ok = xl > lo;
        let right_ok = xr < hi;
        if !(left_ok || right_ok) || w < 1e-300 {
            return None;
        }
        let (mut s, mut sa) = (0.0, 0.0);
        if left_ok {
            *evaluations += 1;
            let v = f(xl);
            s += v;
            sa += v.abs();
        }
        if right_ok {
            *evaluations += 1;
            let v = f(xr);
            s += v;
            sa += v.abs();
        }
        Some((w * s, w * sa))
    };

    let mut h = 1.0;
    let (mut sum, mut abs_sum) = pair(0.0, &mut evaluations).unwrap_or((0.0, 0.0));
    let mut j = 1;
    while let Some((s, sa)) = pair(j as f64 * h, &mut evaluations) {
        sum += s;
        abs_sum += sa;
        j += 1;
        if j > 64 {
            break;
        }
    }
    let mut estimate = half * h * sum;
    let mut last_diff = f64::INFINITY;
    let mut last_scale = 0.0;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let mut j = 1;
        let (mut added, mut added_abs) = (0.0, 0.0);
        loop {
            let t = j as f64 * h;
            match pair(t, &mut evaluations) {
                Some((s, sa)) => {
                    added += s;
                    added_abs += sa;
                }
                None => break,
            }
            j += 2;
            if t > 8.0 {
                break;
            }
        }
        sum += added;
        abs_sum += added_abs;
        let scale = half * h * abs_sum;
        let next = half * h * sum;
        let diff = (next - estimate).abs();
        estimate = next;
        last_diff = diff;
        if !estimate.is_finite() {
            return Err(Error::Solver("non-finite integrand in tanh-sinh".into()));
        }
        // Tolerance is relative to the integral of |f| so cancelling integrands can converge.
        last_scale = scale;
        if level >= MIN_LEVEL && diff <= rel_tol * scale {
            return Ok(Quadrature { value: sign * estimate, error: diff, evaluations });
        }
    }
    if last_diff <= 1e3 * rel_tol * last_scale || last_diff <= f64::MIN_POSITIVE {
        return Ok(Quadrature { value: sign * estimate, error: last_diff, evaluations });
    }
    Err(Error::Solver(format!(
        "tanh-sinh did not converge on [{a}, {b}]: last change {last_diff:e} vs value {estimate:e}"
    )))
}
