//! Run configuration: a single JSON document, validated before any computation.

use crate::error::CliError;
use asymwell::oracle::{GridSpec, Scheme, SolveOptions, DEFAULT_GRID_POINTS};
use asymwell::{build_biased_quartic, build_piecewise_parabolic, DoubleWellPotential, UnitsConfig, WellParams};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable consulted when no config path is given.
pub const CONFIG_ENV: &str = "ASYMWELL_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub units: UnitsConfig,
    pub potential: PotentialConfig,
    /// (n_l, n_r) level pairs.
    #[serde(default = "default_levels")]
    pub levels: Vec<(u32, u32)>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub c_override: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

fn default_levels() -> Vec<(u32, u32)> {
    vec![(0, 0)]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WellConfig {
    pub a: f64,
    pub omega: f64,
    pub v_min: f64,
    /// Half-width of the region where the well is exactly parabolic.
    pub parabolic_extent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialConfig {
    PiecewiseParabolic { left: WellConfig, right: WellConfig, barrier_height: f64 },
    BiasedQuartic {
        half_separation: f64,
        barrier_scale: f64,
        #[serde(default)]
        bias: f64,
    },
    /// Two-column CSV of (x, V); relative paths resolve against the config file.
    Table { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Both ends or neither; when absent the grid is sized from the wells.
    #[serde(default)]
    pub x_lo: Option<f64>,
    #[serde(default)]
    pub x_hi: Option<f64>,
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default = "default_true")]
    pub richardson: bool,
}

fn default_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_true() -> bool {
    true
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { x_lo: None, x_hi: None, n_points: DEFAULT_GRID_POINTS, scheme: Scheme::ThreePoint, richardson: true }
    }
}

impl GridConfig {
    pub fn options(&self) -> SolveOptions {
        SolveOptions { scheme: self.scheme, richardson: self.richardson }
    }

    pub fn resolve(&self, potential: &DoubleWellPotential, count: usize) -> Result<GridSpec, CliError> {
        match (self.x_lo, self.x_hi) {
            (Some(lo), Some(hi)) => Ok(GridSpec::new(lo, hi, self.n_points)?),
            (None, None) => Ok(GridSpec::auto(potential, self.n_points, count)?),
            _ => Err(CliError::Config("grid: give both x_lo and x_hi or neither".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// Aligned human-readable table.
    Table,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    #[serde(default)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    /// Number of points, endpoints included.
    pub steps: usize,
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        if self.steps == 0 || !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Config("sweep: steps must be >= 1 and limits finite".into()));
        }
        if self.steps == 1 {
            return Ok(vec![self.from]);
        }
        let n = (self.steps - 1) as f64;
        Ok((0..self.steps).map(|i| self.from + (self.to - self.from) * i as f64 / n).collect())
    }
}

impl RunConfig {
    /// Symmetric piecewise-parabolic wells at -+3 with a barrier of height 3.
    pub fn symmetric_default() -> Self {
        let well = |a| WellConfig { a, omega: 1.0, v_min: 0.0, parabolic_extent: 2.0 };
        Self {
            units: UnitsConfig::default(),
            potential: PotentialConfig::PiecewiseParabolic { left: well(-3.0), right: well(3.0), barrier_height: 3.0 },
            levels: default_levels(),
            grid: GridConfig::default(),
            c_override: None,
            output: OutputConfig::default(),
            sweep: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; table paths are made relative to its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_json(&text)?;
        if let PotentialConfig::Table { path: table } = &mut cfg.potential {
            if table.is_relative() {
                if let Some(dir) = path.parent() {
                    *table = dir.join(&*table);
                }
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.units.validate()?;
        if self.levels.is_empty() {
            return Err(CliError::Config("levels: at least one (n_l, n_r) pair is required".into()));
        }
        if let Some(&(l, r)) = self.levels.iter().find(|(l, r)| *l > asymwell::quantize::MAX_LEVEL || *r > asymwell::quantize::MAX_LEVEL) {
            return Err(CliError::Config(format!(
                "levels: ({l}, {r}) exceeds the maximum index {}",
                asymwell::quantize::MAX_LEVEL
            )));
        }
        if let Some(c) = self.c_override {
            if !c.is_finite() {
                return Err(CliError::Config("c_override must be finite".into()));
            }
        }
        if let Some(s) = &self.sweep {
            s.values()?;
            let probe = self.potential.with_parameter(&s.parameter, s.from)?;
            drop(probe);
        }
        Ok(())
    }

    /// Builds the potential, applying the matching-point override.
    pub fn build_potential(&self) -> Result<DoubleWellPotential, CliError> {
        let p = self.potential.build(self.units)?;
        Ok(match self.c_override {
            Some(c) => p.with_c(c)?,
            None => p,
        })
    }

    /// Highest oracle state index needed for the configured levels, plus one.
    pub fn oracle_count(&self) -> usize {
        let top = self.levels.iter().map(|&(l, r)| l.max(r)).max().unwrap_or(0) as usize;
        (2 * top + 4).min(asymwell::oracle::MAX_COUNT)
    }
}

impl PotentialConfig {
    pub fn build(&self, units: UnitsConfig) -> Result<DoubleWellPotential, CliError> {
        Ok(match self {
            PotentialConfig::PiecewiseParabolic { left, right, barrier_height } => {
                let l = WellParams::new(left.a, left.omega, left.v_min, left.parabolic_extent, units)?;
                let r = WellParams::new(right.a, right.omega, right.v_min, right.parabolic_extent, units)?;
                build_piecewise_parabolic(l, r, (left.parabolic_extent, right.parabolic_extent), *barrier_height, units)?
            }
            PotentialConfig::BiasedQuartic { half_separation, barrier_scale, bias } => {
                build_biased_quartic(*half_separation, *barrier_scale, *bias, units)?
            }
            PotentialConfig::Table { path } => DoubleWellPotential::from_csv_path(path, units)?,
        })
    }

    /// Parameter names accepted by sweeps for this family.
    pub fn sweep_parameters(&self) -> &'static [&'static str] {
        match self {
            PotentialConfig::PiecewiseParabolic { .. } => &["bias", "barrier_height", "left_omega", "right_omega"],
            PotentialConfig::BiasedQuartic { .. } => &["bias", "half_separation", "barrier_scale"],
            PotentialConfig::Table { .. } => &[],
        }
    }

    /// Copy with one named parameter replaced. For piecewise wells `bias` is the right floor.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self, CliError> {
        let mut out = self.clone();
        match &mut out {
            PotentialConfig::PiecewiseParabolic { left, right, barrier_height } => match name {
                "bias" => right.v_min = value,
                "barrier_height" => *barrier_height = value,
                "left_omega" => left.omega = value,
                "right_omega" => right.omega = value,
                _ => return Err(unknown_parameter(name, self)),
            },
            PotentialConfig::BiasedQuartic { half_separation, barrier_scale, bias } => match name {
                "bias" => *bias = value,
                "half_separation" => *half_separation = value,
                "barrier_scale" => *barrier_scale = value,
                _ => return Err(unknown_parameter(name, self)),
            },
            PotentialConfig::Table { .. } => return Err(unknown_parameter(name, self)),
        }
        Ok(out)
    }
}

fn unknown_parameter(name: &str, p: &PotentialConfig) -> CliError {
    CliError::Config(format!(
        "sweep: parameter {name:?} is not one of {:?} for this potential family",
        p.sweep_parameters()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_round_trips() {
        let cfg = RunConfig::symmetric_default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn missing_field_is_named() {
        let text = r#"{"potential": {"family": "piecewise_parabolic",
            "left": {"a": -3, "v_min": 0, "parabolic_extent": 2},
            "right": {"a": 3, "omega": 1, "v_min": 0, "parabolic_extent": 2}, "barrier_height": 3}}"#;
        let err = RunConfig::from_json(text).unwrap_err().to_string();
        assert!(err.contains("omega"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"potential": {"family": "biased_quartic", "half_separation": 4, "barrier_scale": 0.0078125},
            "colour": "blue"}"#;
        assert!(RunConfig::from_json(text).unwrap_err().to_string().contains("colour"));
        let text = r#"{"potential": {"family": "biased_quartic", "half_separation": 4, "barrier_scale": 0.0078125, "tilt": 1}}"#;
        assert!(RunConfig::from_json(text).is_err());
    }

    #[test]
    fn sweep_values_and_parameters() {
        let s = SweepConfig { parameter: "bias".into(), from: 0.0, to: 1.0, steps: 5 };
        assert_eq!(s.values().unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let cfg = RunConfig::symmetric_default();
        assert!(cfg.potential.with_parameter("tilt", 1.0).is_err());
        match cfg.potential.with_parameter("bias", 0.1).unwrap() {
            PotentialConfig::PiecewiseParabolic { right, .. } => assert_eq!(right.v_min, 0.1),
            _ => unreachable!(),
        }
    }

    #[test]
    fn grid_needs_both_ends() {
        let g = GridConfig { x_lo: Some(-10.0), ..GridConfig::default() };
        let p = RunConfig::symmetric_default().build_potential().unwrap();
        assert!(matches!(g.resolve(&p, 2), Err(CliError::Config(_))));
    }
}
