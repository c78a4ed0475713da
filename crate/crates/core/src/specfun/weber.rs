//! Integrators for Weber's equation y'' = (z^2/4 - nu - 1/2) y.

/// One Taylor step of length `h` from `z0`, returning (y, y') at `z0 + h`.
pub(crate) fn taylor_step(nu: f64, z0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let q0 = 0.25 * z0 * z0 - nu - 0.5;
    let q1 = 0.5 * z0;
    let q2 = 0.25;
    // c[k] are Taylor coefficients scaled by h^k.
    let mut c = [0.0f64; 96];
    c[0] = y;
    c[1] = dy * h;
    let h2 = h * h;
    let mut value = c[0] + c[1];
    let mut deriv = c[1];
    let scale = y.abs() + (dy * h).abs();
    let mut small = 0;
    for k in 0..c.len() - 2 {
        let mut acc = q0 * c[k];
        if k >= 1 {
            acc += q1 * h * c[k - 1];
        }
        if k >= 2 {
            acc += q2 * h2 * c[k - 2];
        }
        let next = acc * h2 / ((k + 2) as f64 * (k + 1) as f64);
        c[k + 2] = next;
        value += next;
        deriv += (k + 2) as f64 * next;
        if next.abs() <= 1e-18 * scale.max(value.abs()) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (value, deriv / h)
}

/// Taylor integration from `z_from` to `z_to` with steps no longer than `max_step`.
pub(crate) fn taylor_integrate(
    nu: f64,
    z_from: f64,
    z_to: f64,
    y: f64,
    dy: f64,
    max_step: f64,
) -> (f64, f64) {
    let span = z_to - z_from;
    let steps = (span.abs() / max_step).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let (mut y, mut dy) = (y, dy);
    for i in 0..steps {
        let z0 = z_from + i as f64 * h;
        (y, dy) = taylor_step(nu, z0, y, dy, h);
    }
    (y, dy)
}

/// Classical fourth-order Runge-Kutta with a fixed number of steps.
pub(crate) fn rk4_integrate(nu: f64, z_from: f64, z_to: f64, y: f64, dy: f64, steps: usize) -> (f64, f64) {
    let h = (z_to - z_from) / steps as f64;
    let q = |z: f64| 0.25 * z * z - nu - 0.5;
    let (mut y, mut v) = (y, dy);
    for i in 0..steps {
        let z = z_from + i as f64 * h;
        let k1y = v;
        let k1v = q(z) * y;
        let k2y = v + 0.5 * h * k1v;
        let k2v = q(z + 0.5 * h) * (y + 0.5 * h * k1y);
        let k3y = v + 0.5 * h * k2v;
        let k3v = q(z + 0.5 * h) * (y + 0.5 * h * k2y);
        let k4y = v + h * k3v;
        let k4v = q(z + h) * (y + h * k3y);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    (y, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_state_gaussian_is_reproduced() {
        // nu = 0 solution is exp(-z^2/4).
        let (y, dy) = taylor_integrate(0.0, 0.0, 3.0, 1.0, 0.0, 0.25);
        let exact = (-9.0f64 / 4.0).exp();
        assert!((y / exact - 1.0).abs() < 1e-13);
        assert!((dy / (-1.5 * exact) - 1.0).abs() < 1e-13);
        let (y, _) = rk4_integrate(0.0, 0.0, 3.0, 1.0, 0.0, 3000);
        assert!((y / exact - 1.0).abs() < 1e-11);
    }
}
