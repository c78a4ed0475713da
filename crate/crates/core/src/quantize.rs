//! Level bookkeeping, the quantization condition, pair solvers, splittings and localization.

use crate::error::{Error, Result};
use crate::numerics::{brent, tan_pi, tanh_sinh};
use crate::potential::{barrier_top, DoubleWellPotential, UnitsConfig, WellParams};
use crate::specfun::{g_factor, g_factor_extended, pcf_d};
use crate::wkb::{amplitude_ratio, barrier_action, Branch};
use serde::Serialize;
use std::f64::consts::PI;

/// Highest oscillator index accepted for level pairs.
pub const MAX_LEVEL: u32 = 6;
/// Pairs need |eps_L - eps_R| below this fraction of hbar * min(omega).
pub const NEAR_DEGENERACY_FRACTION: f64 = 0.25;
/// Root search half-window as a fraction of hbar * min(omega).
pub const WINDOW_FRACTION: f64 = 1.0 / 3.0;
const SCAN_POINTS: usize = 200;

pub fn nu_of_energy(well: &WellParams, e: f64, units: UnitsConfig) -> f64 {
    (e - well.v_min) / (units.hbar * well.omega) - 0.5
}

pub fn epsilon_level(well: &WellParams, n: u32, units: UnitsConfig) -> Result<f64> {
    if n > MAX_LEVEL {
        return Err(Error::Precondition(format!("level index {n} exceeds {MAX_LEVEL}")));
    }
    Ok(well.v_min + (n as f64 + 0.5) * units.hbar * well.omega)
}

/// Splits an energy into the well orders and their offsets from the levels n_L, n_R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyDecomposition {
    pub energy: f64,
    pub nu_l: f64,
    pub nu_r: f64,
    pub n_l: u32,
    pub n_r: u32,
    pub delta_nl: f64,
    pub delta_nr: f64,
    pub delta_l: f64,
    pub eps_l: f64,
    pub eps_r: f64,
    pub delta_eps: f64,
}

impl EnergyDecomposition {
    /// The level offsets are referred to the midpoint (eps_L + eps_R)/2, so that
    /// delta_L = (E - midpoint) / (hbar omega_L).
    pub fn new(potential: &DoubleWellPotential, e: f64, n_l: u32, n_r: u32) -> Result<Self> {
        let u = potential.units();
        let (wl, wr) = (potential.left(), potential.right());
        let eps_l = epsilon_level(wl, n_l, u)?;
        let eps_r = epsilon_level(wr, n_r, u)?;
        let mid = 0.5 * (eps_l + eps_r);
        Ok(Self {
            energy: e,
            nu_l: nu_of_energy(wl, e, u),
            nu_r: nu_of_energy(wr, e, u),
            n_l,
            n_r,
            delta_nl: (mid - eps_l) / (u.hbar * wl.omega),
            delta_nr: (mid - eps_r) / (u.hbar * wr.omega),
            delta_l: (e - mid) / (u.hbar * wl.omega),
            eps_l,
            eps_r,
            delta_eps: eps_l - eps_r,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMethod {
    RootExact,
    QuadraticApprox,
}

impl std::fmt::Display for PairMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairMethod::RootExact => "root_exact",
            PairMethod::QuadraticApprox => "quadratic_approx",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairSolution {
    pub e_plus: f64,
    pub e_minus: f64,
    /// Tunnel splitting at degeneracy.
    pub delta_split: f64,
    pub delta_e: f64,
    pub method: PairMethod,
    pub decomposition_plus: EnergyDecomposition,
    pub decomposition_minus: EnergyDecomposition,
}

impl PairSolution {
    pub fn eps_l(&self) -> f64 {
        self.decomposition_plus.eps_l
    }

    pub fn eps_r(&self) -> f64 {
        self.decomposition_plus.eps_r
    }

    pub fn delta_eps(&self) -> f64 {
        self.decomposition_plus.delta_eps
    }

    /// e_plus + e_minus - (eps_L + eps_R).
    pub fn sum_rule_defect(&self) -> f64 {
        self.e_plus + self.e_minus - (self.eps_l() + self.eps_r())
    }
}

/// tan(pi nu) for the well at energy e, with nu reduced against the nearest level so that
/// tan vanishes exactly at the level energies.
fn well_tan(well: &WellParams, e: f64, units: UnitsConfig) -> Result<f64> {
    let nu = nu_of_energy(well, e, units);
    let n = nu.round();
    let level = well.v_min + (n + 0.5) * units.hbar * well.omega;
    let offset = (e - level) / (units.hbar * well.omega);
    if offset.abs() == 0.5 {
        return Err(Error::Singular(format!("nu = {nu} is a half-integer")));
    }
    Ok(tan_pi(offset))
}

/// tan(pi nu_L) tan(pi nu_R) - g_{nu_L} g_{nu_R} exp(-2 S) / 4 at energy e.
pub fn quantization_residual(potential: &DoubleWellPotential, e: f64) -> Result<f64> {
    let u = potential.units();
    let (wl, wr) = (potential.left(), potential.right());
    let nu_l = nu_of_energy(wl, e, u);
    let nu_r = nu_of_energy(wr, e, u);
    let g_l = g_factor_extended(nu_l)?;
    let g_r = g_factor_extended(nu_r)?;
    let t_l = well_tan(wl, e, u)?;
    let t_r = well_tan(wr, e, u)?;
    let s = barrier_action(potential, e, potential.c())?.total;
    Ok(t_l * t_r - 0.25 * g_l * g_r * (-2.0 * s).exp())
}

/// Midpoint (eps_L + eps_R)/2 of a near-degenerate level pair, after checking the pair is admissible.
pub fn reference_energy(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<f64> {
    let u = potential.units();
    let (wl, wr) = (potential.left(), potential.right());
    let eps_l = epsilon_level(wl, n_l, u)?;
    let eps_r = epsilon_level(wr, n_r, u)?;
    let limit = NEAR_DEGENERACY_FRACTION * u.hbar * wl.omega.min(wr.omega);
    if (eps_l - eps_r).abs() >= limit {
        return Err(Error::Precondition(format!(
            "levels are not near-degenerate: |eps_L - eps_R| = {} >= {limit}",
            (eps_l - eps_r).abs()
        )));
    }
    let (_, v_top) = barrier_top(potential);
    if eps_l.max(eps_r) >= v_top {
        return Err(Error::NoBarrier { energy: eps_l.max(eps_r), barrier_top: v_top });
    }
    Ok(0.5 * (eps_l + eps_r))
}

/// Tunnel splitting (hbar/pi) sqrt(g_nL g_nR omega_L omega_R) exp(-S), with S at the pair midpoint.
pub fn splitting_degenerate(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<f64> {
    let e0 = reference_energy(potential, n_l, n_r)?;
    let s = barrier_action(potential, e0, potential.c())?.total;
    splitting_from_action(potential, n_l, n_r, s)
}

fn splitting_from_action(potential: &DoubleWellPotential, n_l: u32, n_r: u32, s: f64) -> Result<f64> {
    let u = potential.units();
    let g = g_factor(n_l as f64)? * g_factor(n_r as f64)?;
    let w = potential.left().omega * potential.right().omega;
    Ok(u.hbar / PI * (g * w).sqrt() * (-s).exp())
}

/// The two roots of the quantization condition near a level pair.
pub fn solve_pair_exact(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<PairSolution> {
    let e0 = reference_energy(potential, n_l, n_r)?;
    let u = potential.units();
    let (wl, wr) = (potential.left(), potential.right());
    let eps_l = epsilon_level(wl, n_l, u)?;
    let eps_r = epsilon_level(wr, n_r, u)?;
    let half = WINDOW_FRACTION * u.hbar * wl.omega.min(wr.omega);
    let mut nodes: Vec<f64> = (0..SCAN_POINTS)
        .map(|i| e0 - half + 2.0 * half * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect();
    nodes.push(eps_l);
    nodes.push(eps_r);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let samples: Vec<(f64, Option<f64>)> =
        nodes.iter().map(|&e| (e, quantization_residual(potential, e).ok())).collect();
    let pole_index = |e: f64| {
        let (a, b) = (nu_of_energy(wl, e, u), nu_of_energy(wr, e, u));
        ((a + 0.5).floor(), (b + 0.5).floor())
    };
    let xtol = 1e-15 * e0.abs().max(u.hbar * wl.omega.min(wr.omega));
    let mut roots = Vec::new();
    for (i, &(e, f)) in samples.iter().enumerate() {
        if f == Some(0.0) {
            roots.push(e);
            continue;
        }
        let Some((e1, Some(f1))) = samples.get(i + 1).copied() else { continue };
        let Some(f0) = f else { continue };
        if f1 == 0.0 || f0.signum() == f1.signum() || pole_index(e) != pole_index(e1) {
            continue;
        }
        roots.push(brent(|x| quantization_residual(potential, x), e, e1, xtol)?);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= xtol);
    if roots.len() < 2 {
        return Err(Error::DegeneracyStructure { found: roots.len() });
    }
    // Keep the root pair closest to the midpoint on either side of it.
    if roots.len() > 2 {
        roots.sort_by(|a, b| (a - e0).abs().total_cmp(&(b - e0).abs()));
        roots.truncate(2);
        roots.sort_by(f64::total_cmp);
    }
    let (e_minus, e_plus) = (roots[0], roots[1]);
    Ok(PairSolution {
        e_plus,
        e_minus,
        delta_split: splitting_degenerate(potential, n_l, n_r)?,
        delta_e: e_plus - e_minus,
        method: PairMethod::RootExact,
        decomposition_plus: EnergyDecomposition::new(potential, e_plus, n_l, n_r)?,
        decomposition_minus: EnergyDecomposition::new(potential, e_minus, n_l, n_r)?,
    })
}

/// Pair energies from the small-offset quadratic form of the quantization condition.
pub fn solve_pair_quadratic(potential: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<PairSolution> {
    let e0 = reference_energy(potential, n_l, n_r)?;
    let u = potential.units();
    let (wl, wr) = (potential.left(), potential.right());
    let s = barrier_action(potential, e0, potential.c())?.total;
    let d = EnergyDecomposition::new(potential, e0, n_l, n_r)?;
    let rho = wr.omega / wl.omega;
    let g = g_factor(n_l as f64)? * g_factor(n_r as f64)?;
    let amp = g.sqrt() / (2.0 * PI) * (-s).exp();
    let rhs = rho * amp * amp;
    let b = rho * d.delta_nr + d.delta_nl;
    let c = rho * d.delta_nr * d.delta_nl - rhs;
    let disc = b * b - 4.0 * c;
    if !(disc >= 0.0) {
        return Err(Error::Internal(format!("quadratic pair equation has complex roots (disc = {disc})")));
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let (r1, r2) = if q != 0.0 { (q, c / q) } else { (0.0, 0.0) };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    let hw = u.hbar * wl.omega;
    let e_minus = e0 + hw * lo;
    let e_plus = e0 + hw * hi;
    Ok(PairSolution {
        e_plus,
        e_minus,
        delta_split: splitting_from_action(potential, n_l, n_r, s)?,
        delta_e: hw * sq,
        method: PairMethod::QuadraticApprox,
        decomposition_plus: EnergyDecomposition::new(potential, e_plus, n_l, n_r)?,
        decomposition_minus: EnergyDecomposition::new(potential, e_minus, n_l, n_r)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationReport {
    /// Left-to-right probability ratio.
    pub ratio_r: f64,
    pub amp_ratio_sq: f64,
    pub branch: Branch,
    pub nu_l: f64,
    pub nu_r: f64,
    pub left_prob: Option<f64>,
    pub right_prob: Option<f64>,
}

impl LocalizationReport {
    /// Attaches reference probabilities for the two sides of the barrier.
    pub fn with_probabilities(mut self, left: f64, right: f64) -> Self {
        self.left_prob = Some(left);
        self.right_prob = Some(right);
        self
    }

    /// |ln R_ref - ln R| / |ln R_ref| when reference probabilities are attached.
    pub fn log_disagreement(&self) -> Option<f64> {
        let (l, r) = (self.left_prob?, self.right_prob?);
        let reference = (l / r).ln();
        Some((reference - self.ratio_r.ln()).abs() / reference.abs())
    }
}

/// Integral of D_nu(z)^2 over the allowed window |z| <= sqrt(4 nu + 2).
pub fn allowed_window_norm(nu: f64) -> Result<f64> {
    let w = (4.0 * nu + 2.0).sqrt();
    let mut failure = None;
    let q = tanh_sinh(
        |z| match pcf_d(nu, z) {
            Ok(v) => v.value * v.value,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        -w,
        w,
        1e-12,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

/// R = |C_L/C_R|^2 (l_L/l_R) * window norm(nu_L) / window norm(nu_R).
pub fn localization_ratio(amp_ratio: f64, nu_l: f64, nu_r: f64, l_l: f64, l_r: f64) -> Result<f64> {
    Ok(amp_ratio * amp_ratio * (l_l / l_r) * allowed_window_norm(nu_l)? / allowed_window_norm(nu_r)?)
}

pub fn localization_report(potential: &DoubleWellPotential, e: f64, branch: Branch) -> Result<LocalizationReport> {
    let r = amplitude_ratio(potential, e, branch)?;
    let ratio_r = localization_ratio(r.ratio, r.nu_l, r.nu_r, potential.left().l, potential.right().l)?;
    Ok(LocalizationReport {
        ratio_r,
        amp_ratio_sq: r.ratio * r.ratio,
        branch,
        nu_l: r.nu_l,
        nu_r: r.nu_r,
        left_prob: None,
        right_prob: None,
    })
}
