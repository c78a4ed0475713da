//! Two-level reduction of a near-degenerate pair: WKB tail normalizations, the tunneling
//! matrix element, the 2x2 Hamiltonian, its mixing angle, and the flux (Wronskian) identity.

use crate::error::{Error, Result};
use crate::numerics::tanh_sinh;
use crate::potential::{turning_points, DoubleWellPotential, UnitsConfig};
use crate::quantize::{epsilon_level, reference_energy};
use crate::specfun::{g_factor, hermite_gaussian};
use crate::wkb::{barrier_action, forbidden_integral, match_left, momentum};
use serde::Serialize;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

fn parity(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// sqrt(g_n / 2 pi) / l * exp(-action).
pub fn wkb_norm_from_action(n: u32, l: f64, action: f64) -> Result<f64> {
    Ok((g_factor(n as f64)? / (2.0 * PI)).sqrt() / l * (-action).exp())
}

/// Left tail normalization at an explicit energy, with the action taken from the left turning point to c.
pub fn wkb_norm_left_at(potential: &DoubleWellPotential, n_l: u32, c: f64, energy: f64) -> Result<f64> {
    let act = barrier_action(potential, energy, c)?;
    wkb_norm_from_action(n_l, potential.left().l, act.left_to_c)
}

/// Right tail normalization at an explicit energy; carries the sign (-1)^n_r.
pub fn wkb_norm_right_at(potential: &DoubleWellPotential, n_r: u32, c: f64, energy: f64) -> Result<f64> {
    let act = barrier_action(potential, energy, c)?;
    Ok(parity(n_r) * wkb_norm_from_action(n_r, potential.right().l, act.c_to_right)?)
}

/// Left tail normalization at the level energy eps_L.
pub fn wkb_norm_left(potential: &DoubleWellPotential, n_l: u32, c: f64) -> Result<f64> {
    let e = epsilon_level(potential.left(), n_l, potential.units())?;
    wkb_norm_left_at(potential, n_l, c, e)
}

/// Right tail normalization at the level energy eps_R.
pub fn wkb_norm_right(potential: &DoubleWellPotential, n_r: u32, c: f64) -> Result<f64> {
    let e = epsilon_level(potential.right(), n_r, potential.units())?;
    wkb_norm_right_at(potential, n_r, c, e)
}

/// (-1)^n_r (2 hbar^2 / m) N_L N_R with both norms at the pair midpoint energy.
pub fn tilde_delta(potential: &DoubleWellPotential, n_l: u32, n_r: u32, c: f64) -> Result<f64> {
    let e0 = reference_energy(potential, n_l, n_r)?;
    let u = potential.units();
    let nl = wkb_norm_left_at(potential, n_l, c, e0)?;
    let nr = wkb_norm_right_at(potential, n_r, c, e0)?;
    Ok(parity(n_r) * 2.0 * u.hbar * u.hbar / u.mass * nl * nr)
}

/// Diagonal (eps_L, eps_R), off-diagonal (-1)^(n_r+1) tilde_delta / 2.
pub fn two_level_hamiltonian(eps_l: f64, eps_r: f64, tilde_delta: f64, n_r: u32) -> [[f64; 2]; 2] {
    let off = -parity(n_r) * 0.5 * tilde_delta;
    [[eps_l, off], [off, eps_r]]
}

/// Ascending eigenvalues of a real symmetric 2x2 matrix.
pub fn symmetric_eigenvalues(h: [[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (h[0][0] + h[1][1]);
    let r = (0.5 * (h[0][0] - h[1][1])).hypot(h[0][1]);
    (mean - r, mean + r)
}

/// Angle with cos = d_eps / r and sin = (-1)^(n_r+1) tilde_delta / r, r = hypot(d_eps, tilde_delta).
///
/// The result lies in (-pi, pi]; it is inside (-pi/2, pi/2) whenever d_eps > 0.
pub fn mixing_angle(delta_eps: f64, tilde_delta: f64, n_r: u32) -> Result<f64> {
    if delta_eps == 0.0 && tilde_delta == 0.0 {
        return Err(Error::UndefinedAngle);
    }
    Ok((-parity(n_r) * tilde_delta).atan2(delta_eps))
}

/// Coefficients on (left, right) localized states of the upper and lower eigenstates.
pub fn two_level_states(theta: f64, n_r: u32) -> ([f64; 2], [f64; 2]) {
    let (s, c) = (0.5 * theta).sin_cos();
    let p = parity(n_r);
    ([c, s], [-p * s, p * c])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelModel {
    pub wkb_norm_left: f64,
    /// Includes the sign (-1)^n_r.
    pub wkb_norm_right: f64,
    pub tilde_delta: f64,
    pub eps_l: f64,
    pub eps_r: f64,
    pub theta: f64,
    pub n_l: u32,
    pub n_r: u32,
    /// Energy at which the tail norms are evaluated.
    pub energy: f64,
}

impl TwoLevelModel {
    /// Builds the model at the pair midpoint with the potential's own matching point.
    pub fn new(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<Self> {
        let u = potential.units();
        let e0 = reference_energy(potential, n_l, n_r)?;
        let c = potential.c();
        let eps_l = epsilon_level(potential.left(), n_l, u)?;
        let eps_r = epsilon_level(potential.right(), n_r, u)?;
        let nl = wkb_norm_left_at(potential, n_l, c, e0)?;
        let nr = wkb_norm_right_at(potential, n_r, c, e0)?;
        let td = parity(n_r) * 2.0 * u.hbar * u.hbar / u.mass * nl * nr;
        Ok(Self {
            wkb_norm_left: nl,
            wkb_norm_right: nr,
            tilde_delta: td,
            eps_l,
            eps_r,
            theta: mixing_angle(eps_l - eps_r, td, n_r)?,
            n_l,
            n_r,
            energy: e0,
        })
    }

    pub fn delta_eps(&self) -> f64 {
        self.eps_l - self.eps_r
    }

    pub fn hamiltonian(&self) -> [[f64; 2]; 2] {
        two_level_hamiltonian(self.eps_l, self.eps_r, self.tilde_delta, self.n_r)
    }

    /// (lower, upper) eigenvalues.
    pub fn energies(&self) -> (f64, f64) {
        symmetric_eigenvalues(self.hamiltonian())
    }

    /// (upper, lower) state coefficients.
    pub fn states(&self) -> ([f64; 2], [f64; 2]) {
        two_level_states(self.theta, self.n_r)
    }
}

/// (-1)^n_r (hbar^2 / m) W(c) with W = psi_L psi_R' - psi_R psi_L'.
///
/// Each tail returns (value, derivative) at a point or an error where it is not valid.
pub fn flux_splitting<L, R>(left_tail: L, right_tail: R, c: f64, n_r: u32, units: UnitsConfig) -> Result<f64>
where
    L: Fn(f64) -> Result<(f64, f64)>,
    R: Fn(f64) -> Result<(f64, f64)>,
{
    let (l, dl) = left_tail(c)?;
    let (r, dr) = right_tail(c)?;
    Ok(parity(n_r) * units.hbar * units.hbar / units.mass * (l * dr - r * dl))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

/// Analytic WKB tail N / sqrt(kappa) exp(-+ integral of kappa from the anchor) inside the barrier.
#[derive(Debug, Clone, Copy)]
pub struct WkbTail<'a> {
    potential: &'a DoubleWellPotential,
    energy: f64,
    anchor: f64,
    norm: f64,
    side: TailSide,
    turning: (f64, f64),
}

impl<'a> WkbTail<'a> {
    /// Tails of levels n_l and n_r at the pair midpoint energy, normalized at the potential's c.
    pub fn pair(potential: &'a DoubleWellPotential, n_l: u32, n_r: u32) -> Result<(Self, Self)> {
        let e0 = reference_energy(potential, n_l, n_r)?;
        let c = potential.c();
        let tp = turning_points(potential, e0)?;
        let turning = (tp.a_nu_l, tp.a_nu_r);
        let nl = wkb_norm_left_at(potential, n_l, c, e0)?;
        let nr = wkb_norm_right_at(potential, n_r, c, e0)?;
        let make = |norm, side| Self { potential, energy: e0, anchor: c, norm, side, turning };
        Ok((make(nl, TailSide::Left), make(nr, TailSide::Right)))
    }

    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let (a, b) = self.turning;
        let guard = 0.5 * self.potential.left().l.min(self.potential.right().l);
        if !(x > a + guard && x < b - guard) {
            return Err(Error::Domain(format!("x = {x} is outside the barrier interior ({a}, {b})")));
        }
        let u = self.potential.units();
        let kappa = momentum(self.potential, self.energy, x) / u.hbar;
        let dkappa = u.mass * self.potential.eval(x).1 / (u.hbar * u.hbar * kappa);
        let integral = forbidden_integral(self.potential, self.energy, self.anchor, x)?;
        let (sign, exponent) = match self.side {
            TailSide::Left => (-1.0, -integral),
            TailSide::Right => (1.0, integral),
        };
        let value = self.norm / kappa.sqrt() * exponent.exp();
        Ok((value, value * (sign * kappa - 0.5 * dkappa / kappa)))
    }
}

/// Samples on a uniform grid, evaluated by cubic interpolation with five-point derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTail {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl GridTail {
    pub fn new(x0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || values.len() < 9 {
            return Err(Error::Input("grid tail needs h > 0 and at least 9 samples".into()));
        }
        Ok(Self { x0, h, values })
    }

    fn derivative_at(&self, i: usize) -> f64 {
        let v = &self.values;
        (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * self.h)
    }

    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let s = (x - self.x0) / self.h;
        let j = s.floor();
        if !(j >= 3.0 && (j as usize) + 4 < self.values.len()) {
            return Err(Error::Domain(format!("x = {x} is too close to the grid ends")));
        }
        let j = j as usize;
        let t = s - j as f64;
        // Cubic Lagrange weights for nodes j-1..j+2.
        let w = [
            -t * (t - 1.0) * (t - 2.0) / 6.0,
            (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0,
            (t + 1.0) * t * (t - 1.0) / 6.0,
        ];
        let value: f64 = (0..4).map(|k| w[k] * self.values[j - 1 + k]).sum();
        let deriv: f64 = (0..4).map(|k| w[k] * self.derivative_at(j - 1 + k)).sum();
        Ok((value, deriv))
    }
}

/// Localized combinations (a +- b)/sqrt(2) of two eigenvectors of a pair, on a uniform grid.
///
/// The combination with more weight left of c is the left tail. Signs are fixed so that the left
/// tail is positive at c and the right tail has sign (-1)^n_r there.
pub fn localized_grid_tails(
    x0: f64,
    h: f64,
    psi_a: &[f64],
    psi_b: &[f64],
    c: f64,
    n_r: u32,
) -> Result<(GridTail, GridTail)> {
    if psi_a.len() != psi_b.len() {
        return Err(Error::Input("eigenvectors have different lengths".into()));
    }
    let plus: Vec<f64> = psi_a.iter().zip(psi_b).map(|(a, b)| (a + b) * FRAC_1_SQRT_2).collect();
    let minus: Vec<f64> = psi_a.iter().zip(psi_b).map(|(a, b)| (a - b) * FRAC_1_SQRT_2).collect();
    let split = (((c - x0) / h).max(0.0) as usize).min(psi_a.len());
    let left_weight = |v: &[f64]| v[..split].iter().map(|y| y * y).sum::<f64>();
    let (mut left, mut right) =
        if left_weight(&plus) >= left_weight(&minus) { (plus, minus) } else { (minus, plus) };
    let mut left = GridTail::new(x0, h, std::mem::take(&mut left))?;
    let mut right = GridTail::new(x0, h, std::mem::take(&mut right))?;
    if left.eval(c)?.0 < 0.0 {
        left.values.iter_mut().for_each(|y| *y = -*y);
    }
    if right.eval(c)?.0 * parity(n_r) < 0.0 {
        right.values.iter_mut().for_each(|y| *y = -*y);
    }
    Ok((left, right))
}

/// Which member of the pair the order offsets belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMember {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbRatioCheck {
    /// B / A of the left matching at the shifted order.
    pub lhs: f64,
    /// -+(-1)^n_r N_L / N_R.
    pub rhs: f64,
}

/// Compares the barrier coefficient ratio B/A at nu_L = n_L +- Delta/(2 hbar omega_L) with the tail norms.
pub fn ab_ratio_check(potential: &DoubleWellPotential, n_l: u32, n_r: u32, member: PairMember) -> Result<AbRatioCheck> {
    let e0 = reference_energy(potential, n_l, n_r)?;
    let c = potential.c();
    let u = potential.units();
    let td = tilde_delta(potential, n_l, n_r, c)?;
    let sign = match member {
        PairMember::Upper => 1.0,
        PairMember::Lower => -1.0,
    };
    let nu_l = n_l as f64 + sign * td / (2.0 * u.hbar * potential.left().omega);
    let act = barrier_action(potential, e0, c)?;
    let m = match_left(1.0, nu_l, act.left_to_c, potential.left())?;
    let nl = wkb_norm_left_at(potential, n_l, c, e0)?;
    let nr = wkb_norm_right_at(potential, n_r, c, e0)?;
    Ok(AbRatioCheck { lhs: m.b_coeff / m.a_coeff, rhs: -sign * parity(n_r) * nl / nr })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapDiagnostic {
    /// Overlap of the truncated oscillator states, which the two-level model sets to zero.
    pub overlap: f64,
    /// Interval where both truncated states are nonzero.
    pub window: (f64, f64),
}

/// Overlap of the oscillator eigenfunctions of each well, each cut off at the far well's parabolic edge.
pub fn overlap_diagnostic(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<OverlapDiagnostic> {
    let (wl, wr) = (potential.left(), potential.right());
    let lo = wl.a + wl.parabolic_extent;
    let hi = wr.a - wr.parabolic_extent;
    if !(lo < hi) {
        return Ok(OverlapDiagnostic { overlap: 0.0, window: (lo, lo) });
    }
    let mut failure = None;
    let q = tanh_sinh(
        |x| {
            let l = hermite_gaussian(n_l, wl.a, wl.l, x);
            let r = hermite_gaussian(n_r, wr.a, wr.l, x);
            match (l, r) {
                (Ok(l), Ok(r)) => l * r,
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        lo,
        hi,
        1e-12,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(OverlapDiagnostic { overlap: q.value, window: (lo, hi) }),
    }
}
