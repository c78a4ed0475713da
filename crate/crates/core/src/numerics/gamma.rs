//! Gamma function (Lanczos, g = 7, nine coefficients) and exact-at-integer trigonometry in units of pi.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// Gamma function for real arguments. Poles return infinity.
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    let y = x - 1.0;
    let t = y + LANCZOS_G + 0.5;
    // Split the power to keep t^(y + 1/2) finite for arguments near the overflow limit.
    let half = t.powf(0.5 * (y + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * lanczos_sum(y)
}

/// Natural log of |Gamma(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    let y = x - 1.0;
    let t = y + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (y + 0.5) * t.ln() - t + lanczos_sum(y).ln()
}

/// Returns (n mod 4, f) with x = n/2 + f and |f| <= 1/4.
fn reduce_half(x: f64) -> (i64, f64) {
    let n = (2.0 * x).round();
    let f = x - 0.5 * n;
    (n.rem_euclid(4.0) as i64, f)
}

/// sin(pi x), exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let (q, f) = reduce_half(x);
    let (s, c) = (PI * f).sin_cos();
    match q {
        0 => s,
        1 => c,
        2 => -s,
        _ => -c,
    }
}

/// cos(pi x), exactly zero at half-integers.
pub fn cos_pi(x: f64) -> f64 {
    let (q, f) = reduce_half(x);
    let (s, c) = (PI * f).sin_cos();
    match q {
        0 => c,
        1 => -s,
        2 => -c,
        _ => s,
    }
}

/// tan(pi x); infinite at half-integers.
pub fn tan_pi(x: f64) -> f64 {
    sin_pi(x) / cos_pi(x)
}
