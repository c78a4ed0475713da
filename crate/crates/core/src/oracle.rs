//! Finite-difference eigensolver for the 1D Schrodinger equation on a uniform Dirichlet grid.

use crate::error::{Error, Result};
use crate::numerics::SymTridiagonal;
use crate::potential::{DoubleWellPotential, UnitsConfig};
use crate::quantize::epsilon_level;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Smallest accepted grid size.
pub const MIN_GRID_POINTS: usize = 501;
/// Default grid size.
pub const DEFAULT_GRID_POINTS: usize = 8001;
/// Largest number of eigenpairs per solve.
pub const MAX_COUNT: usize = 20;
/// Required V(edge) - E_max in units of the energy scale.
pub const EDGE_ENERGY_MARGIN: f64 = 5.0;
/// Forbidden margin beyond the outermost turning point, in oscillator lengths.
pub const EDGE_LENGTH_MARGIN: f64 = 6.0;

/// What the eigensolver needs from a potential.
pub trait Potential1d {
    fn value(&self, x: f64) -> f64;
    /// Typical level spacing, used for coverage checks.
    fn energy_scale(&self) -> f64;
    fn units(&self) -> UnitsConfig;
}

impl Potential1d for DoubleWellPotential {
    fn value(&self, x: f64) -> f64 {
        DoubleWellPotential::value(self, x)
    }

    fn energy_scale(&self) -> f64 {
        DoubleWellPotential::energy_scale(self)
    }

    fn units(&self) -> UnitsConfig {
        DoubleWellPotential::units(self)
    }
}

/// V = v0 + m omega^2 (x - center)^2 / 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPotential {
    pub omega: f64,
    pub center: f64,
    pub v0: f64,
    pub units: UnitsConfig,
}

impl HarmonicPotential {
    pub fn new(omega: f64, center: f64, v0: f64, units: UnitsConfig) -> Result<Self> {
        units.validate()?;
        if !(omega > 0.0 && omega.is_finite() && center.is_finite() && v0.is_finite()) {
            return Err(Error::Construction("harmonic potential needs omega > 0 and finite center, offset".into()));
        }
        Ok(Self { omega, center, v0, units })
    }

    pub fn oscillator_length(&self) -> f64 {
        self.units.oscillator_length(self.omega)
    }
}

impl Potential1d for HarmonicPotential {
    fn value(&self, x: f64) -> f64 {
        let d = x - self.center;
        self.v0 + 0.5 * self.units.mass * self.omega * self.omega * d * d
    }

    fn energy_scale(&self) -> f64 {
        self.units.hbar * self.omega
    }

    fn units(&self) -> UnitsConfig {
        self.units
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64, n_points: usize) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::Input(format!("grid needs finite x_lo < x_hi, got [{x_lo}, {x_hi}]")));
        }
        if n_points < MIN_GRID_POINTS {
            return Err(Error::Input(format!("grid needs at least {MIN_GRID_POINTS} points, got {n_points}")));
        }
        Ok(Self { x_lo, x_hi, n_points })
    }

    /// Grid covering both wells and the `count` lowest states with the standard margins.
    pub fn auto(potential: &DoubleWellPotential, n_points: usize, count: usize) -> Result<Self> {
        let u = potential.units();
        let (wl, wr) = (potential.left(), potential.right());
        let l_max = wl.l.max(wr.l);
        let n_top = (count / 2) as u32;
        let reach = ((2 * n_top + 1) as f64).sqrt() + EDGE_LENGTH_MARGIN;
        let mut lo = wl.a - reach * l_max;
        let mut hi = wr.a + reach * l_max;
        let e_est = (wl.v_min + (n_top as f64 + 0.5) * u.hbar * wl.omega)
            .max(wr.v_min + (n_top as f64 + 0.5) * u.hbar * wr.omega);
        let need = e_est + EDGE_ENERGY_MARGIN * potential.energy_scale();
        for _ in 0..40 {
            let ok_lo = potential.value(lo) >= need;
            let ok_hi = potential.value(hi) >= need;
            if ok_lo && ok_hi {
                return Self::new(lo, hi, n_points);
            }
            if !ok_lo {
                lo -= 0.25 * l_max;
            }
            if !ok_hi {
                hi += 0.25 * l_max;
            }
        }
        Err(Error::Coverage("potential does not rise enough to bound the requested states".into()))
    }

    pub fn step(&self) -> f64 {
        (self.x_hi - self.x_lo) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_lo + i as f64 * self.step()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Second-order three-point Laplacian.
    #[default]
    ThreePoint,
    /// Fourth-order Numerov discretization.
    Numerov,
}

impl Scheme {
    pub fn order(&self) -> i32 {
        match self {
            Scheme::ThreePoint => 2,
            Scheme::Numerov => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub scheme: Scheme,
    /// Extrapolate eigenvalues against a grid with twice the spacing.
    pub richardson: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { scheme: Scheme::ThreePoint, richardson: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Estimated discretization error of each eigenvalue.
    pub error_estimates: Vec<f64>,
    /// Full-grid samples (zero at both ends), unit trapezoid norm.
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid: GridSpec,
    pub options: SolveOptions,
}

impl SpectrumResult {
    /// CSV with columns index, eigenvalue, error_estimate.
    pub fn write_eigenvalues_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["index", "eigenvalue", "error_estimate"]).map_err(csv_err)?;
        for (i, (e, err)) in self.eigenvalues.iter().zip(&self.error_estimates).enumerate() {
            w.write_record([i.to_string(), format!("{e:.16e}"), format!("{err:.3e}")]).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Input(e.to_string()))
    }

    /// CSV with columns x, psi_0, psi_1, ...
    pub fn write_eigenvectors_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["x".to_string()];
        header.extend((0..self.eigenvectors.len()).map(|k| format!("psi_{k}")));
        w.write_record(&header).map_err(csv_err)?;
        for i in 0..self.grid.n_points {
            let mut row = vec![format!("{:.16e}", self.grid.x(i))];
            row.extend(self.eigenvectors.iter().map(|v| format!("{:.16e}", v[i])));
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Input(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Input(e.to_string())
}

/// Interior matrix pieces: kinetic coefficient hbar^2/(2 m h^2) and interior potential samples.
fn interior(potential: &impl Potential1d, grid: &GridSpec) -> (f64, Vec<f64>) {
    let u = potential.units();
    let h = grid.step();
    let kin = u.hbar * u.hbar / (2.0 * u.mass * h * h);
    let v = (1..grid.n_points - 1).map(|i| potential.value(grid.x(i))).collect();
    (kin, v)
}

fn three_point_matrix(kin: f64, v: &[f64]) -> Result<SymTridiagonal> {
    let diag = v.iter().map(|vi| 2.0 * kin + vi).collect();
    SymTridiagonal::new(diag, vec![-kin; v.len() - 1])
}

/// Number of Numerov eigenvalues below `e`, from the pivots of the tridiagonal pencil
/// -kin [1 -2 1] + [1 10 1]/12 (V - e).
fn numerov_count(kin: f64, v: &[f64], e: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = 2.0 * kin + 10.0 / 12.0 * (v[0] - e);
    if q < 0.0 {
        count += 1;
    }
    for i in 1..v.len() {
        if q == 0.0 {
            q = tiny;
        }
        let up = -kin + (v[i] - e) / 12.0;
        let down = -kin + (v[i - 1] - e) / 12.0;
        q = 2.0 * kin + 10.0 / 12.0 * (v[i] - e) - up * down / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn numerov_eigenvalue(kin: f64, v: &[f64], k: usize, guess: f64, scale: f64) -> Result<f64> {
    let mut lo = guess - scale;
    let mut hi = guess + scale;
    let mut width = scale;
    for _ in 0..60 {
        if numerov_count(kin, v, lo) <= k {
            break;
        }
        width *= 2.0;
        lo = guess - width;
    }
    width = scale;
    for _ in 0..60 {
        if numerov_count(kin, v, hi) > k {
            break;
        }
        width *= 2.0;
        hi = guess + width;
    }
    if numerov_count(kin, v, lo) > k || numerov_count(kin, v, hi) <= k {
        return Err(Error::Solver(format!("could not bracket Numerov eigenvalue {k}")));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if numerov_count(kin, v, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn eigenvalues_on(potential: &impl Potential1d, grid: &GridSpec, count: usize, scheme: Scheme) -> Result<(Vec<f64>, SymTridiagonal)> {
    let (kin, v) = interior(potential, grid);
    let t = three_point_matrix(kin, &v)?;
    let three: Vec<f64> = (0..count).map(|k| t.eigenvalue_bisect(k)).collect::<Result<_>>()?;
    let values = match scheme {
        Scheme::ThreePoint => three,
        Scheme::Numerov => {
            let scale = potential.energy_scale() * 1e-2;
            three
                .iter()
                .enumerate()
                .map(|(k, &g)| numerov_eigenvalue(kin, &v, k, g, scale))
                .collect::<Result<_>>()?
        }
    };
    Ok((values, t))
}

/// Lowest `count` eigenpairs of -hbar^2/(2m) psi'' + V psi = E psi with psi = 0 at the grid ends.
pub fn solve_spectrum(
    potential: &impl Potential1d,
    grid: &GridSpec,
    count: usize,
    options: SolveOptions,
) -> Result<SpectrumResult> {
    if count == 0 || count > MAX_COUNT {
        return Err(Error::Input(format!("count must be in 1..={MAX_COUNT}, got {count}")));
    }
    let grid = GridSpec::new(grid.x_lo, grid.x_hi, grid.n_points)?;
    let (fine, t) = eigenvalues_on(potential, &grid, count, options.scheme)?;
    if fine.iter().any(|e| !e.is_finite()) {
        return Err(Error::Solver("non-finite eigenvalue".into()));
    }
    let e_max = *fine.last().expect("count >= 1");
    let need = e_max + EDGE_ENERGY_MARGIN * potential.energy_scale();
    let (v_lo, v_hi) = (potential.value(grid.x_lo), potential.value(grid.x_hi));
    if v_lo < need || v_hi < need {
        return Err(Error::Coverage(format!(
            "edge potentials ({v_lo}, {v_hi}) are below E_max + {EDGE_ENERGY_MARGIN} energy scales = {need}"
        )));
    }

    // Coarse grids with every other node (plus one if the interval count is odd).
    let coarse = halved(&grid);
    let (rough, _) = eigenvalues_on(potential, &coarse, count, options.scheme)?;
    let p = options.scheme.order();
    let extrapolate = |f: &[f64], r: &[f64], fine: &GridSpec, rough: &GridSpec| -> Vec<f64> {
        let denom = (rough.step() / fine.step()).powi(p) - 1.0;
        f.iter().zip(r).map(|(a, b)| a + (a - b) / denom).collect()
    };
    let first = extrapolate(&fine, &rough, &grid, &coarse);
    let (eigenvalues, error_estimates) = if options.richardson {
        // The extrapolated error is judged against the same extrapolation one level coarser.
        let coarser = halved(&coarse);
        let (roughest, _) = eigenvalues_on(potential, &coarser, count, options.scheme)?;
        let second = extrapolate(&rough, &roughest, &coarse, &coarser);
        let denom = 2f64.powi(p + 2) - 1.0;
        let err = first.iter().zip(&second).map(|(a, b)| (a - b).abs() / denom).collect();
        (first, err)
    } else {
        let err = first.iter().zip(&fine).map(|(a, b)| (a - b).abs()).collect();
        (fine.clone(), err)
    };

    let h = grid.step();
    let inner = t.eigenvectors(&fine_three_point(&t, &fine, options.scheme)?);
    let eigenvectors = inner
        .into_iter()
        .map(|w| {
            let mut v = Vec::with_capacity(grid.n_points);
            v.push(0.0);
            v.extend(w);
            v.push(0.0);
            let norm = (v.iter().map(|y| y * y).sum::<f64>() * h).sqrt();
            let peak = v.iter().fold(0.0f64, |m, y| m.max(y.abs()));
            let first = v.iter().find(|y| y.abs() > 1e-8 * peak).copied().unwrap_or(1.0);
            let s = if first < 0.0 { -1.0 / norm } else { 1.0 / norm };
            v.iter_mut().for_each(|y| *y *= s);
            v
        })
        .collect();
    Ok(SpectrumResult { eigenvalues, error_estimates, eigenvectors, grid, options })
}

fn halved(grid: &GridSpec) -> GridSpec {
    GridSpec { n_points: grid.n_points.div_ceil(2), ..*grid }
}

/// Eigenvalues to use for inverse iteration on the three-point matrix.
fn fine_three_point(t: &SymTridiagonal, fine: &[f64], scheme: Scheme) -> Result<Vec<f64>> {
    match scheme {
        Scheme::ThreePoint => Ok(fine.to_vec()),
        Scheme::Numerov => (0..fine.len()).map(|k| t.eigenvalue_bisect(k)).collect(),
    }
}

/// E_{2k+1} - E_{2k}.
pub fn pair_splitting(spectrum: &SpectrumResult, pair_index: usize) -> Result<f64> {
    let e = &spectrum.eigenvalues;
    if 2 * pair_index + 1 >= e.len() {
        return Err(Error::Input(format!("pair {pair_index} needs {} eigenvalues, have {}", 2 * pair_index + 2, e.len())));
    }
    Ok(e[2 * pair_index + 1] - e[2 * pair_index])
}

/// Trapezoid probabilities of |psi|^2 left and right of c.
pub fn probability_split(eigenvector: &[f64], grid: &GridSpec, c: f64) -> Result<(f64, f64)> {
    if eigenvector.len() != grid.n_points {
        return Err(Error::Input("eigenvector length does not match the grid".into()));
    }
    if !(c >= grid.x_lo && c <= grid.x_hi) {
        return Err(Error::Domain(format!("c = {c} is outside the grid [{}, {}]", grid.x_lo, grid.x_hi)));
    }
    let h = grid.step();
    let sq: Vec<f64> = eigenvector.iter().map(|y| y * y).collect();
    let total: f64 = sq.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
    let s = ((c - grid.x_lo) / h).min((grid.n_points - 1) as f64);
    let j = (s.floor() as usize).min(grid.n_points - 2);
    let t = s - j as f64;
    let mut left: f64 = sq[..=j].windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum();
    // Partial cell with linear interpolation of |psi|^2.
    let at_c = sq[j] + t * (sq[j + 1] - sq[j]);
    left += 0.5 * t * h * (sq[j] + at_c);
    let p_left = left / total;
    Ok((p_left, 1.0 - p_left))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    TunnelingPair,
    LocalizedSingles,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairClassification {
    pub kind: PairKind,
    /// Indices of the two eigenstates closest to the level midpoint, ascending.
    pub indices: (usize, usize),
    pub energies: (f64, f64),
    /// Probability left of the potential's matching point for each state.
    pub left_probs: (f64, f64),
}

/// Minimum minority-side probability for both states to count as a tunneling pair.
pub const PAIR_PROBABILITY_THRESHOLD: f64 = 0.05;

/// Classifies the eigenstates nearest the levels (n_l, n_r) as a delocalized pair or two localized states.
pub fn resolve_pair_or_single(
    spectrum: &SpectrumResult,
    potential: &DoubleWellPotential,
    n_l: u32,
    n_r: u32,
) -> Result<PairClassification> {
    let u = potential.units();
    let e0 = 0.5 * (epsilon_level(potential.left(), n_l, u)? + epsilon_level(potential.right(), n_r, u)?);
    let e = &spectrum.eigenvalues;
    if e.len() < 2 {
        return Err(Error::Input("need at least two eigenvalues".into()));
    }
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| (e[a] - e0).abs().total_cmp(&(e[b] - e0).abs()));
    let (i, j) = (order[0].min(order[1]), order[0].max(order[1]));
    let c = potential.c();
    let (pi, _) = probability_split(&spectrum.eigenvectors[i], &spectrum.grid, c)?;
    let (pj, _) = probability_split(&spectrum.eigenvectors[j], &spectrum.grid, c)?;
    let minority = |p: f64| p.min(1.0 - p);
    let kind = if minority(pi) >= PAIR_PROBABILITY_THRESHOLD && minority(pj) >= PAIR_PROBABILITY_THRESHOLD {
        PairKind::TunnelingPair
    } else {
        PairKind::LocalizedSingles
    };
    Ok(PairClassification { kind, indices: (i, j), energies: (e[i], e[j]), left_probs: (pi, pj) })
}

#[cfg(test)]
mod tests;
