use crate::error::{Error, Result};
use crate::specfun::pcf_d;
use std::f64::consts::PI;

/// Largest oscillator index served by the Hermite helpers.
pub const MAX_HERMITE_INDEX: u32 = 12;

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
pub fn hermite_h(n: u32, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Normalized harmonic-oscillator eigenfunction of index `n`, centred at `center`, length `l`.
pub fn hermite_gaussian(n: u32, center: f64, l: f64, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_INDEX {
        return Err(Error::Range(format!("oscillator index {n} exceeds {MAX_HERMITE_INDEX}")));
    }
    if !(l > 0.0) {
        return Err(Error::Domain(format!("oscillator length must be positive, got {l}")));
    }
    let xi = (x - center) / l;
    // Normalized recurrence avoids the large factorials of the explicit form.
    let mut p0 = PI.powf(-0.25) * (-0.5 * xi * xi).exp();
    if n == 0 {
        return Ok(p0 / l.sqrt());
    }
    let mut p1 = 2f64.sqrt() * xi * p0;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (2.0 / (kf + 1.0)).sqrt() * xi * p1 - (kf / (kf + 1.0)).sqrt() * p0;
        p0 = p1;
        p1 = p2;
    }
    Ok(p1 / l.sqrt())
}

/// Both sides of D_n(z) = 2^(-n/2) e^(-z^2/4) H_n(z / sqrt 2).
pub fn pcf_hermite_identity(n: u32, z: f64) -> Result<(f64, f64)> {
    if n > MAX_HERMITE_INDEX {
        return Err(Error::Range(format!("oscillator index {n} exceeds {MAX_HERMITE_INDEX}")));
    }
    let lhs = pcf_d(n as f64, z)?.value;
    let rhs = 2f64.powf(-0.5 * n as f64) * (-0.25 * z * z).exp() * hermite_h(n, z / 2f64.sqrt());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tanh_sinh;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite_h(3, 2.0), 8.0 * 8.0 - 12.0 * 2.0);
        assert_eq!(hermite_h(4, 1.0), 16.0 - 48.0 + 12.0);
    }

    #[test]
    fn hermite_gaussians_are_orthonormal() {
        for (i, j) in [(0u32, 0u32), (3, 3), (2, 4), (1, 2), (7, 7)] {
            let q = tanh_sinh(
                |x| hermite_gaussian(i, 0.3, 1.7, x).unwrap() * hermite_gaussian(j, 0.3, 1.7, x).unwrap(),
                -25.0,
                25.0,
                1e-13,
            )
            .unwrap();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((q.value - want).abs() < 1e-12, "({i},{j}) -> {}", q.value);
        }
    }

    #[test]
    fn index_limit() {
        assert!(matches!(hermite_gaussian(13, 0.0, 1.0, 0.0), Err(Error::Range(_))));
    }
}
