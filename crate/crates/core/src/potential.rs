//! Double-well potentials: built-in families, tabulated input, well extraction and turning points.

use crate::error::{Error, Result};
use crate::numerics::{brent, CubicSpline};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

/// Default quadratic-residual tolerance, in units of the well's hbar*omega.
pub const DEFAULT_PARABOLIC_TOLERANCE: f64 = 1e-3;
const SCAN_POINTS: usize = 4001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsConfig {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for UnitsConfig {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl UnitsConfig {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let u = Self { hbar, mass };
        u.validate()?;
        Ok(u)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite() && self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Construction(format!(
                "hbar and mass must be positive and finite (hbar = {}, mass = {})",
                self.hbar, self.mass
            )));
        }
        Ok(())
    }

    pub fn oscillator_length(&self, omega: f64) -> f64 {
        (self.hbar / (self.mass * omega)).sqrt()
    }
}

/// Parabolic description of one well: V ~ v_min + m omega^2 (x - a)^2 / 2 within `parabolic_extent` of `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WellParams {
    pub a: f64,
    pub omega: f64,
    pub v_min: f64,
    pub l: f64,
    pub parabolic_extent: f64,
}

impl WellParams {
    pub fn new(a: f64, omega: f64, v_min: f64, parabolic_extent: f64, units: UnitsConfig) -> Result<Self> {
        if !(a.is_finite() && v_min.is_finite()) {
            return Err(Error::Construction("well position and floor must be finite".into()));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Construction(format!("well frequency must be positive, got {omega}")));
        }
        if !(parabolic_extent > 0.0) {
            return Err(Error::Construction(format!(
                "parabolic extent must be positive, got {parabolic_extent}"
            )));
        }
        Ok(Self { a, omega, v_min, l: units.oscillator_length(omega), parabolic_extent })
    }

    pub fn hbar_omega(&self, units: UnitsConfig) -> f64 {
        units.hbar * self.omega
    }

    pub fn quadratic_model(&self, x: f64, units: UnitsConfig) -> f64 {
        let y = x - self.a;
        self.v_min + 0.5 * units.mass * self.omega * self.omega * y * y
    }
}

/// Classical turning points bounding the barrier at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPair {
    pub a_nu_l: f64,
    pub a_nu_r: f64,
    pub energy: f64,
}

/// Two parabolas joined by a C1 cap of cubic Hermite pieces, with a flat top when the gap is wide.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseParabolic {
    left: (f64, f64, f64),
    right: (f64, f64, f64),
    mass: f64,
    join_l: f64,
    join_r: f64,
    top_lo: f64,
    top_hi: f64,
    height: f64,
    join_values: (f64, f64),
    join_slopes: (f64, f64),
}

impl PiecewiseParabolic {
    fn parabola(&self, side: (f64, f64, f64), x: f64) -> (f64, f64) {
        let (a, omega, v) = side;
        let k = self.mass * omega * omega;
        let y = x - a;
        (v + 0.5 * k * y * y, k * y)
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        if x <= self.join_l {
            self.parabola(self.left, x)
        } else if x >= self.join_r {
            self.parabola(self.right, x)
        } else if x < self.top_lo {
            hermite(x, self.join_l, self.top_lo, self.join_values.0, self.join_slopes.0, self.height, 0.0)
        } else if x > self.top_hi {
            hermite(x, self.top_hi, self.join_r, self.height, 0.0, self.join_values.1, self.join_slopes.1)
        } else {
            (self.height, 0.0)
        }
    }

    /// Midpoint of the flat top (the cap maximum when there is no plateau).
    fn top(&self) -> f64 {
        0.5 * (self.top_lo + self.top_hi)
    }
}

/// Cubic Hermite interpolant on [x0, x1] with end values and slopes; returns (value, slope).
fn hermite(x: f64, x0: f64, x1: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> (f64, f64) {
    let w = x1 - x0;
    let t = (x - x0) / w;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let d00 = 6.0 * t2 - 6.0 * t;
    let d10 = 3.0 * t2 - 4.0 * t + 1.0;
    let d01 = -6.0 * t2 + 6.0 * t;
    let d11 = 3.0 * t2 - 2.0 * t;
    let v = y0 * h00 + w * m0 * h10 + y1 * h01 + w * m1 * h11;
    let dv = (y0 * d00 + w * m0 * d10 + y1 * d01 + w * m1 * d11) / w;
    (v, dv)
}

/// Potential shape evaluator returning (V, V').
#[derive(Clone)]
pub enum Shape {
    BiasedQuartic { half_separation: f64, barrier_scale: f64, bias: f64 },
    PiecewiseParabolic(PiecewiseParabolic),
    Tabulated(CubicSpline),
    Custom(Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>),
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::BiasedQuartic { half_separation, barrier_scale, bias } => f
                .debug_struct("BiasedQuartic")
                .field("half_separation", half_separation)
                .field("barrier_scale", barrier_scale)
                .field("bias", bias)
                .finish(),
            Shape::PiecewiseParabolic(p) => f.debug_tuple("PiecewiseParabolic").field(p).finish(),
            Shape::Tabulated(s) => f.debug_tuple("Tabulated").field(&s.range()).finish(),
            Shape::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Shape {
    /// Abscissae where V'' may jump; quadratures split there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Shape::PiecewiseParabolic(p) => {
                let mut b = vec![p.join_l, p.top_lo];
                if p.top_hi > p.top_lo {
                    b.push(p.top_hi);
                }
                b.push(p.join_r);
                b
            }
            _ => Vec::new(),
        }
    }

    pub fn eval(&self, x: f64) -> (f64, f64) {
        match self {
            Shape::BiasedQuartic { half_separation: a, barrier_scale: k, bias } => {
                let u = x * x - a * a;
                (k * u * u + bias * x, 4.0 * k * x * u + bias)
            }
            Shape::PiecewiseParabolic(p) => p.eval(x),
            Shape::Tabulated(s) => s.eval(x),
            Shape::Custom(f) => f(x),
        }
    }
}

/// A potential with two parabolic minima separated by a classically forbidden barrier.
#[derive(Debug, Clone)]
pub struct DoubleWellPotential {
    shape: Shape,
    units: UnitsConfig,
    left: WellParams,
    right: WellParams,
    c: f64,
    x_top: f64,
    v_top: f64,
    domain: (f64, f64),
    parabolic_tolerance: f64,
}

impl DoubleWellPotential {
    pub fn value(&self, x: f64) -> f64 {
        self.shape.eval(x).0
    }

    /// (V(x), V'(x)).
    pub fn eval(&self, x: f64) -> (f64, f64) {
        self.shape.eval(x)
    }

    /// V''(x) by a central difference of V'.
    pub fn second_derivative(&self, x: f64) -> f64 {
        let h = 1e-4 * self.left.l.min(self.right.l);
        (self.shape.eval(x + h).1 - self.shape.eval(x - h).1) / (2.0 * h)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn units(&self) -> UnitsConfig {
        self.units
    }

    pub fn left(&self) -> &WellParams {
        &self.left
    }

    pub fn right(&self) -> &WellParams {
        &self.right
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn parabolic_tolerance(&self) -> f64 {
        self.parabolic_tolerance
    }

    /// Largest hbar*omega of the two wells.
    pub fn energy_scale(&self) -> f64 {
        self.units.hbar * self.left.omega.max(self.right.omega)
    }

    /// Returns a copy with a different matching point inside the barrier.
    pub fn with_c(&self, c: f64) -> Result<Self> {
        if !(c > self.left.a && c < self.right.a) {
            return Err(Error::Construction(format!(
                "matching point c = {c} must lie between the minima {} and {}",
                self.left.a, self.right.a
            )));
        }
        if self.value(c) <= self.left.v_min.max(self.right.v_min) {
            return Err(Error::Construction(format!("V(c) at c = {c} does not exceed both well floors")));
        }
        let mut out = self.clone();
        out.c = c;
        Ok(out)
    }

    /// Re-runs the parabolic certification with a different tolerance (units of hbar*omega).
    pub fn with_parabolic_tolerance(&self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::Construction("parabolic tolerance must be positive".into()));
        }
        let mut out = self.clone();
        out.parabolic_tolerance = tolerance;
        let (l, r) = locate_wells(&out)?;
        out.left = l;
        out.right = r;
        Ok(out)
    }

    /// Samples (x, V, V') at `n` evenly spaced points of the domain.
    pub fn tabulate(&self, n: usize) -> Vec<(f64, f64, f64)> {
        let (lo, hi) = self.domain;
        let n = n.max(2);
        (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                let (v, dv) = self.eval(x);
                (x, v, dv)
            })
            .collect()
    }

    fn assemble(shape: Shape, units: UnitsConfig, domain: (f64, f64), left: WellParams, right: WellParams, top: (f64, f64)) -> Result<Self> {
        let (x_top, v_top) = top;
        if !(left.a < x_top && x_top < right.a) {
            return Err(Error::Shape("barrier maximum does not lie between the minima".into()));
        }
        let zero_point = (left.v_min + 0.5 * units.hbar * left.omega).max(right.v_min + 0.5 * units.hbar * right.omega);
        if v_top <= zero_point {
            return Err(Error::Construction(format!(
                "barrier top {v_top} does not exceed the zero-point energy {zero_point}"
            )));
        }
        Ok(Self {
            shape,
            units,
            left,
            right,
            c: x_top,
            x_top,
            v_top,
            domain,
            parabolic_tolerance: DEFAULT_PARABOLIC_TOLERANCE,
        })
    }

    /// Builds from an arbitrary (V, V') evaluator on `domain`; wells and barrier are located numerically.
    pub fn from_fn<F>(f: F, domain: (f64, f64), units: UnitsConfig) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Self::from_shape(Shape::Custom(Arc::new(f)), domain, units)
    }

    /// Builds from tabulated (x, V) samples interpolated by a natural cubic spline.
    pub fn from_table(xs: Vec<f64>, vs: Vec<f64>, units: UnitsConfig) -> Result<Self> {
        let spline = CubicSpline::new(xs, vs)?;
        let domain = spline.range();
        Self::from_shape(Shape::Tabulated(spline), domain, units)
    }

    /// Reads a two-column CSV (header row, then x and V) and builds a tabulated potential.
    pub fn from_csv_path(path: &Path, units: UnitsConfig) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let (mut xs, mut vs) = (Vec::new(), Vec::new());
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            if record.len() < 2 {
                return Err(Error::Input(format!("row {} has fewer than two columns", i + 1)));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Input(format!("row {}: cannot parse {s:?}: {e}", i + 1)))
            };
            xs.push(parse(&record[0])?);
            vs.push(parse(&record[1])?);
        }
        Self::from_table(xs, vs, units)
    }

    fn from_shape(shape: Shape, domain: (f64, f64), units: UnitsConfig) -> Result<Self> {
        units.validate()?;
        if !(domain.0 < domain.1) {
            return Err(Error::Construction("domain must have x_lo < x_hi".into()));
        }
        let (left, right) = locate_wells_raw(&shape, domain, units, DEFAULT_PARABOLIC_TOLERANCE, None)?;
        let top = locate_top(&shape, left.a, right.a)?;
        Self::assemble(shape, units, domain, left, right, top)
    }
}

/// V = k (x^2 - a^2)^2 + bias * x, with minima located numerically.
pub fn build_biased_quartic(
    half_separation: f64,
    barrier_scale: f64,
    bias: f64,
    units: UnitsConfig,
) -> Result<DoubleWellPotential> {
    units.validate()?;
    let (a, k) = (half_separation, barrier_scale);
    if !(a > 0.0 && a.is_finite() && k > 0.0 && k.is_finite() && bias.is_finite()) {
        return Err(Error::Construction(
            "half_separation and barrier_scale must be positive, bias finite".into(),
        ));
    }
    let shape = Shape::BiasedQuartic { half_separation: a, barrier_scale: k, bias };
    let dv = |x: f64| Ok(shape.eval(x).1);
    // V' has local extrema at +-a/sqrt(3); three real critical points need a sign change across each.
    let s = a / 3f64.sqrt();
    if !(dv(-s)? > 0.0 && dv(s)? < 0.0) {
        return Err(Error::Construction(format!(
            "bias {bias} is too large: the quartic has a single minimum"
        )));
    }
    let far = 2.0 * a + (bias.abs() / k).cbrt() + 1.0;
    let tol = 1e-15 * a;
    let x_l = brent(dv, -far, -s, tol)?;
    let x_top = brent(dv, -s, s, tol)?;
    let x_r = brent(dv, s, far, tol)?;
    let curvature = |x: f64| 4.0 * k * (3.0 * x * x - a * a);
    let omega_l = (curvature(x_l) / units.mass).sqrt();
    let omega_r = (curvature(x_r) / units.mass).sqrt();
    let l_max = units.oscillator_length(omega_l.min(omega_r));
    let margin = (2.0 * a).max(10.0 * l_max);
    let domain = (x_l - margin, x_r + margin);
    let v_top = shape.eval(x_top).0;
    let hw = units.hbar * omega_l.max(omega_r);
    let depth = v_top - shape.eval(x_l).0.max(shape.eval(x_r).0);
    if depth < 3.0 * hw {
        log::warn!("barrier depth {depth} is only {:.2} hbar*omega; semiclassical results will be rough", depth / hw);
    }
    let well = |x: f64, omega: f64| -> Result<WellParams> {
        let v = shape.eval(x).0;
        let probe = WellParams::new(x, omega, v, 1.0, units)?;
        let extent = certify_extent(&shape, &probe, units, DEFAULT_PARABOLIC_TOLERANCE, (x_l, x_r), x_top, domain)?;
        WellParams::new(x, omega, v, extent, units)
    };
    let left = well(x_l, omega_l)?;
    let right = well(x_r, omega_r)?;
    DoubleWellPotential::assemble(shape, units, domain, left, right, (x_top, v_top))
}

/// Two exact parabolas joined by a C1 barrier cap reaching `barrier_height`.
///
/// The parabolic extents of the returned wells equal `join_half_widths`.
pub fn build_piecewise_parabolic(
    left: WellParams,
    right: WellParams,
    join_half_widths: (f64, f64),
    barrier_height: f64,
    units: UnitsConfig,
) -> Result<DoubleWellPotential> {
    units.validate()?;
    let (d_l, d_r) = join_half_widths;
    if !(d_l > 0.0 && d_r > 0.0) {
        return Err(Error::Construction("join half-widths must be positive".into()));
    }
    if !(left.a < right.a) {
        return Err(Error::Construction("left minimum must lie left of the right minimum".into()));
    }
    let join_l = left.a + d_l;
    let join_r = right.a - d_r;
    if join_l >= join_r {
        return Err(Error::Construction(format!(
            "joins overlap: a_L + d_L = {join_l} >= a_R - d_R = {join_r}"
        )));
    }
    let k_l = units.mass * left.omega * left.omega;
    let k_r = units.mass * right.omega * right.omega;
    let v1 = left.v_min + 0.5 * k_l * d_l * d_l;
    let v2 = right.v_min + 0.5 * k_r * d_r * d_r;
    let s1 = k_l * d_l;
    let s2 = -k_r * d_r;
    let h = barrier_height;
    if !(h > v1 && h > v2) {
        return Err(Error::Construction(format!(
            "barrier height {h} must exceed the potential at both joins ({v1}, {v2})"
        )));
    }
    // A Hermite piece rising by dV with end slopes (s, 0) over width w is monotone iff s w / dV <= 3.
    // Natural widths use s w / dV = 2 (a parabolic cap); they are stretched to fill the gap, capped at 3,
    // and any remaining gap becomes a flat top.
    let w_l0 = 2.0 * (h - v1) / s1;
    let w_r0 = 2.0 * (h - v2) / s2.abs();
    let gap = join_r - join_l;
    let stretch = (gap / (w_l0 + w_r0)).min(1.5);
    let w_l = stretch * w_l0;
    let w_r = stretch * w_r0;
    let plateau = gap - w_l - w_r;
    let top_lo = join_l + w_l;
    let top_hi = if plateau > 0.0 { top_lo + plateau } else { top_lo };
    let pp = PiecewiseParabolic {
        left: (left.a, left.omega, left.v_min),
        right: (right.a, right.omega, right.v_min),
        mass: units.mass,
        join_l,
        join_r,
        top_lo,
        top_hi: if plateau > 0.0 { top_hi } else { top_lo },
        height: h,
        join_values: (v1, v2),
        join_slopes: (s1, s2),
    };
    let x_top = pp.top();
    let l_max = units.oscillator_length(left.omega.min(right.omega));
    let margin = (right.a - left.a).max(10.0 * l_max);
    let domain = (left.a - margin, right.a + margin);
    let shape = Shape::PiecewiseParabolic(pp);
    // The scan certifies the construction; the exact parameters are then kept as given.
    locate_wells_raw(&shape, domain, units, DEFAULT_PARABOLIC_TOLERANCE, Some((d_l, d_r)))?;
    let left_w = WellParams { parabolic_extent: d_l, ..left };
    let right_w = WellParams { parabolic_extent: d_r, ..right };
    DoubleWellPotential::assemble(shape, units, domain, left_w, right_w, (x_top, h))
}

/// Re-extracts both wells of an existing potential numerically.
pub fn locate_wells(potential: &DoubleWellPotential) -> Result<(WellParams, WellParams)> {
    let certificate = match potential.shape() {
        Shape::PiecewiseParabolic(p) => Some((p.join_l - p.left.0, p.right.0 - p.join_r)),
        _ => None,
    };
    locate_wells_raw(
        potential.shape(),
        potential.domain(),
        potential.units(),
        potential.parabolic_tolerance(),
        certificate,
    )
}

/// Minima from sign changes of V', curvature from a Richardson second difference, and certified extents.
fn locate_wells_raw(
    shape: &Shape,
    domain: (f64, f64),
    units: UnitsConfig,
    tolerance: f64,
    certificate: Option<(f64, f64)>,
) -> Result<(WellParams, WellParams)> {
    let (lo, hi) = domain;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..SCAN_POINTS)
        .map(|i| {
            let x = lo + step * i as f64;
            (x, shape.eval(x).1)
        })
        .filter(|(_, d)| *d != 0.0)
        .collect();
    let mut minima = Vec::new();
    for w in samples.windows(2) {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        if d0 < 0.0 && d1 > 0.0 {
            let x = brent(|x| Ok(shape.eval(x).1), x0, x1, 1e-15 * (hi - lo))?;
            minima.push(x);
        }
    }
    if minima.len() != 2 {
        return Err(Error::Shape(format!("expected exactly two minima, found {}", minima.len())));
    }
    let (x_l, x_r) = (minima[0], minima[1]);
    let (x_top, _) = locate_top(shape, x_l, x_r)?;
    let mut wells = Vec::with_capacity(2);
    for (i, &x) in [x_l, x_r].iter().enumerate() {
        let v = shape.eval(x).0;
        let omega = curvature_omega(shape, x, units, step)?;
        let probe = WellParams::new(x, omega, v, 1.0, units)?;
        let extent = match certificate {
            Some((d_l, d_r)) => {
                let d = if i == 0 { d_l } else { d_r };
                verify_certificate(shape, &probe, units, d, tolerance)?;
                d
            }
            None => certify_extent(shape, &probe, units, tolerance, (x_l, x_r), x_top, domain)?,
        };
        wells.push(WellParams::new(x, omega, v, extent, units)?);
    }
    Ok((wells[0], wells[1]))
}

fn second_difference(shape: &Shape, x: f64, h: f64) -> f64 {
    (shape.eval(x + h).0 - 2.0 * shape.eval(x).0 + shape.eval(x - h).0) / (h * h)
}

fn curvature_omega(shape: &Shape, x: f64, units: UnitsConfig, scan_step: f64) -> Result<f64> {
    let rough = second_difference(shape, x, scan_step);
    if !(rough > 0.0) {
        return Err(Error::Shape(format!("non-positive curvature at the minimum x = {x}")));
    }
    let l = units.oscillator_length((rough / units.mass).sqrt());
    let h = l / 100.0;
    let k = (4.0 * second_difference(shape, x, 0.5 * h) - second_difference(shape, x, h)) / 3.0;
    if !(k > 0.0) {
        return Err(Error::Shape(format!("non-positive curvature at the minimum x = {x}")));
    }
    Ok((k / units.mass).sqrt())
}

fn residual(shape: &Shape, well: &WellParams, units: UnitsConfig, x: f64) -> f64 {
    (shape.eval(x).0 - well.quadratic_model(x, units)).abs()
}

fn verify_certificate(shape: &Shape, well: &WellParams, units: UnitsConfig, d: f64, tolerance: f64) -> Result<()> {
    let limit = tolerance * well.hbar_omega(units);
    for i in 0..=200 {
        let y = d * (i as f64 / 100.0 - 1.0);
        let r = residual(shape, well, units, well.a + y);
        if r > limit {
            return Err(Error::Shape(format!(
                "quadratic residual {r:e} exceeds {limit:e} inside the declared parabolic region"
            )));
        }
    }
    Ok(())
}

/// Largest half-width d (toward the barrier and outward) with residual below `tolerance * hbar*omega`.
fn certify_extent(
    shape: &Shape,
    well: &WellParams,
    units: UnitsConfig,
    tolerance: f64,
    minima: (f64, f64),
    x_top: f64,
    domain: (f64, f64),
) -> Result<f64> {
    let limit = tolerance * well.hbar_omega(units);
    let toward_top = (x_top - well.a).abs();
    let outward = if well.a <= minima.0 { well.a - domain.0 } else { domain.1 - well.a };
    let d_max = toward_top.min(outward);
    let exceeds = |d: f64| residual(shape, well, units, well.a - d).max(residual(shape, well, units, well.a + d)) > limit;
    let mut d = 1e-3 * well.l;
    if exceeds(d) {
        return Err(Error::Shape(format!("no parabolic neighbourhood around x = {}", well.a)));
    }
    let mut last_ok = d;
    loop {
        let next = (d * 1.25).min(d_max);
        if exceeds(next) {
            let (mut a, mut b) = (last_ok, next);
            while b - a > 1e-12 * b {
                let m = 0.5 * (a + b);
                if exceeds(m) {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Ok(a);
        }
        last_ok = next;
        if next >= d_max {
            return Ok(d_max);
        }
        d = next;
    }
}

/// Interior maximum between the minima; a flat top resolves to its midpoint.
fn locate_top(shape: &Shape, x_l: f64, x_r: f64) -> Result<(f64, f64)> {
    if let Shape::PiecewiseParabolic(p) = shape {
        return Ok((p.top(), p.height));
    }
    let n = 2001;
    let step = (x_r - x_l) / (n - 1) as f64;
    let (mut best_i, mut best_v) = (0, f64::NEG_INFINITY);
    for i in 1..n - 1 {
        let v = shape.eval(x_l + step * i as f64).0;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let a = x_l + step * (best_i as f64 - 1.0);
    let b = x_l + step * (best_i as f64 + 1.0);
    let (da, db) = (shape.eval(a).1, shape.eval(b).1);
    let x = if da > 0.0 && db < 0.0 {
        brent(|x| Ok(shape.eval(x).1), a, b, 1e-15 * (x_r - x_l))?
    } else {
        x_l + step * best_i as f64
    };
    Ok((x, shape.eval(x).0))
}

/// Barrier maximum (x_top, V(x_top)).
pub fn barrier_top(potential: &DoubleWellPotential) -> (f64, f64) {
    (potential.x_top, potential.v_top)
}

/// Classical turning points at energy `e` on either side of the barrier maximum.
pub fn turning_points(potential: &DoubleWellPotential, e: f64) -> Result<TurningPair> {
    let (x_top, v_top) = barrier_top(potential);
    if !e.is_finite() {
        return Err(Error::Domain(format!("energy must be finite, got {e}")));
    }
    if e >= v_top {
        return Err(Error::NoBarrier { energy: e, barrier_top: v_top });
    }
    let floor = potential.left.v_min.max(potential.right.v_min);
    if e <= floor {
        return Err(Error::Domain(format!("energy {e} does not exceed both well floors (max floor {floor})")));
    }
    let tol = 1e-14 * (potential.right.a - potential.left.a);
    let g = |x: f64| Ok(potential.value(x) - e);
    let a_nu_l = brent(g, potential.left.a, x_top, tol)?;
    let a_nu_r = brent(g, x_top, potential.right.a, tol)?;
    Ok(TurningPair { a_nu_l, a_nu_r, energy: e })
}

#[cfg(test)]
mod tests;
