//! Subcommand implementations. Each writes its report and returns the process exit code.

use crate::config::{Format, RunConfig};
use crate::error::{CliError, EXIT_OK};
use crate::report::{oracle_for, rows_for_potential, write_records, ReportRow, ROW_TABLE_COLUMNS};
use asymwell::potential::{barrier_top, turning_points};
use asymwell::quantize::{reference_energy, solve_pair_exact, solve_pair_quadratic, splitting_degenerate};
use asymwell::specfun::{pcf_d, pcf_d_asymptotic, pcf_d_ode};
use asymwell::twolevel::{flux_splitting, tilde_delta, WkbTail};
use asymwell::oracle::resolve_pair_or_single;
use asymwell::DoubleWellPotential;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Shared runtime switches that are not part of the config.
#[derive(Debug, Clone, Copy)]
pub struct RunFlags {
    pub jobs: usize,
    pub timings: bool,
}

pub fn spectrum<W: Write>(cfg: &RunConfig, flags: RunFlags, out: W) -> Result<i32, CliError> {
    let potential = cfg.build_potential()?;
    let rows = rows_for_potential(cfg, &potential, "spectrum", None, true, flags.timings)?;
    write_records(out, cfg.output.format, "spectrum", cfg, &rows, ROW_TABLE_COLUMNS)?;
    Ok(EXIT_OK)
}

pub fn sweep<W: Write>(cfg: &RunConfig, flags: RunFlags, out: W) -> Result<i32, CliError> {
    let s = cfg.sweep.as_ref().ok_or_else(|| CliError::Config("sweep: the config has no sweep block".into()))?;
    let values = s.values()?;
    let point = |(i, &v): (usize, &f64)| -> Result<Vec<ReportRow>, CliError> {
        let experiment = format!("sweep-{i}");
        log::debug!("{experiment}: {} = {v}", s.parameter);
        let pc = cfg.potential.with_parameter(&s.parameter, v)?;
        let built = pc.build(cfg.units).and_then(|p| match cfg.c_override {
            Some(c) => p.with_c(c).map_err(CliError::from),
            None => Ok(p),
        });
        match built {
            Ok(p) => rows_for_potential(cfg, &p, &experiment, Some((&s.parameter, v)), false, flags.timings),
            Err(e) => Ok(cfg
                .levels
                .iter()
                .map(|&(n_l, n_r)| ReportRow {
                    experiment: experiment.clone(),
                    parameter: Some(s.parameter.clone()),
                    parameter_value: Some(v),
                    n_l,
                    n_r,
                    error: Some(e.to_string()),
                    ..ReportRow::default()
                })
                .collect()),
        }
    };
    let chunks: Vec<Result<Vec<ReportRow>, CliError>> = if flags.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(flags.jobs)
            .build()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
        pool.install(|| values.par_iter().enumerate().map(point).collect())
    } else {
        values.iter().enumerate().map(point).collect()
    };
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    write_records(out, cfg.output.format, "sweep", cfg, &rows, ROW_TABLE_COLUMNS)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct PcfReport {
    pub nu: f64,
    pub z: f64,
    pub value: f64,
    pub error_estimate: f64,
    pub regime: String,
    pub ode_value: Option<f64>,
    pub asymptotic_value: Option<f64>,
    pub asymptotic_error_estimate: Option<f64>,
}

pub fn pcf<W: Write>(nu: f64, z: f64, format: Format, mut out: W) -> Result<i32, CliError> {
    let v = pcf_d(nu, z)?;
    let ode = pcf_d_ode(nu, z).ok();
    let asym = pcf_d_asymptotic(nu, z).ok();
    let report = PcfReport {
        nu,
        z,
        value: v.value,
        error_estimate: v.error_estimate,
        regime: v.regime.to_string(),
        ode_value: ode.map(|o| o.value),
        asymptotic_value: asym.map(|a| a.value),
        asymptotic_error_estimate: asym.map(|a| a.error_estimate),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.serialize(&report)?;
            w.flush()?;
        }
        Format::Table => {
            let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |x| format!("{x:.11e}"));
            writeln!(out, "D_nu(z)        nu = {nu}, z = {z}")?;
            writeln!(out, "value          {:.11e}", report.value)?;
            writeln!(out, "error estimate {:.3e}", report.error_estimate)?;
            writeln!(out, "regime         {}", report.regime)?;
            writeln!(out, "ode reference  {}", opt(report.ode_value))?;
            writeln!(out, "two-term form  {} (error ~ {})", opt(report.asymptotic_value), opt(report.asymptotic_error_estimate))?;
            if let Some(a) = report.asymptotic_value {
                writeln!(out, "difference     {:.3e}", (a - report.value).abs())?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub n_l: u32,
    pub n_r: u32,
    pub observed: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub detail: Option<String>,
}

/// Thresholds used by `verify`.
pub mod thresholds {
    pub const IDENTITY: f64 = 1e-12;
    pub const C_INVARIANCE: f64 = 1e-9;
    pub const SUM_RULE: f64 = 1e-6;
    pub const FLUX: f64 = 1e-12;
    pub const ORACLE_CONVERGENCE: f64 = 1e-8;
    pub const PLACEMENT: f64 = 0.05;
    pub const SPLITTING: f64 = 0.15;
    /// Matching points span this fraction of the barrier width on either side of the top.
    pub const C_SPAN: f64 = 0.2;
}

fn check(name: &str, levels: (u32, u32), observed: Result<f64, CliError>, threshold: f64) -> Check {
    match observed {
        Ok(v) => Check {
            name: name.into(),
            n_l: levels.0,
            n_r: levels.1,
            observed: Some(v),
            threshold,
            pass: v.is_finite() && v <= threshold,
            detail: None,
        },
        Err(e) => Check {
            name: name.into(),
            n_l: levels.0,
            n_r: levels.1,
            observed: None,
            threshold,
            pass: false,
            detail: Some(e.to_string()),
        },
    }
}

fn c_values(p: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<Vec<f64>, CliError> {
    let e0 = reference_energy(p, n_l, n_r)?;
    let tp = turning_points(p, e0)?;
    let width = tp.a_nu_r - tp.a_nu_l;
    let (x_top, _) = barrier_top(p);
    Ok([-1.0, -0.5, 0.0, 0.5, 1.0].iter().map(|f| x_top + f * thresholds::C_SPAN * width).collect())
}

fn c_invariance(p: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<f64, CliError> {
    let mut base: Option<[f64; 3]> = None;
    let mut worst = 0.0f64;
    for c in c_values(p, n_l, n_r)? {
        let q = p.with_c(c)?;
        let s = solve_pair_exact(&q, n_l, n_r)?;
        let vals = [s.e_plus, s.e_minus, s.delta_split];
        match base {
            None => base = Some(vals),
            Some(b) => vals.iter().zip(b).for_each(|(x, y)| worst = worst.max((x / y - 1.0).abs())),
        }
    }
    Ok(worst)
}

fn flux_consistency(p: &DoubleWellPotential, n_l: u32, n_r: u32) -> Result<f64, CliError> {
    let td = tilde_delta(p, n_l, n_r, p.c())?;
    let (l, r) = WkbTail::pair(p, n_l, n_r)?;
    let mut worst = 0.0f64;
    for c in c_values(p, n_l, n_r)? {
        let f = flux_splitting(|x| l.eval(x), |x| r.eval(x), c, n_r, p.units())?;
        worst = worst.max((f / td - 1.0).abs());
    }
    Ok(worst)
}

pub fn verify<W: Write>(cfg: &RunConfig, out: W) -> Result<i32, CliError> {
    let p = cfg.build_potential()?;
    let hw = p.energy_scale();
    let spectrum = oracle_for(cfg, &p);
    let mut checks = Vec::new();
    for &(n_l, n_r) in &cfg.levels {
        let lv = (n_l, n_r);
        let identity = (|| Ok((tilde_delta(&p, n_l, n_r, p.c())? / splitting_degenerate(&p, n_l, n_r)? - 1.0).abs()))();
        checks.push(check("identity_tilde_delta", lv, identity, thresholds::IDENTITY));
        checks.push(check("c_invariance", lv, c_invariance(&p, n_l, n_r), thresholds::C_INVARIANCE));
        let exact = solve_pair_exact(&p, n_l, n_r).map_err(CliError::from);
        let quad = solve_pair_quadratic(&p, n_l, n_r).map_err(CliError::from);
        checks.push(check(
            "sum_rule_exact",
            lv,
            exact.as_ref().map(|s| s.sum_rule_defect().abs() / hw).map_err(clone_err),
            thresholds::SUM_RULE,
        ));
        checks.push(check(
            "sum_rule_quadratic",
            lv,
            quad.as_ref().map(|s| s.sum_rule_defect().abs() / hw).map_err(clone_err),
            thresholds::SUM_RULE,
        ));
        checks.push(check("flux_consistency", lv, flux_consistency(&p, n_l, n_r), thresholds::FLUX));
        let oracle = spectrum.as_ref().map_err(clone_err).and_then(|s| {
            let cls = resolve_pair_or_single(s, &p, n_l, n_r)?;
            Ok((s, cls))
        });
        checks.push(check(
            "oracle_convergence",
            lv,
            oracle.as_ref().map_err(clone_err).map(|(s, cls)| {
                s.error_estimates[cls.indices.0].max(s.error_estimates[cls.indices.1]) / hw
            }),
            thresholds::ORACLE_CONVERGENCE,
        ));
        checks.push(check(
            "placement",
            lv,
            match (&oracle, &exact) {
                (Ok((_, cls)), Ok(s)) => {
                    Ok((s.e_minus - cls.energies.0).abs().max((s.e_plus - cls.energies.1).abs()) / hw)
                }
                (Err(e), _) | (_, Err(e)) => Err(clone_err(e)),
            },
            thresholds::PLACEMENT,
        ));
        checks.push(check(
            "splitting_vs_oracle",
            lv,
            match (&oracle, &quad) {
                (Ok((_, cls)), Ok(q)) => {
                    let gap = cls.energies.1 - cls.energies.0;
                    Ok((q.delta_e - gap).abs() / gap)
                }
                (Err(e), _) | (_, Err(e)) => Err(clone_err(e)),
            },
            thresholds::SPLITTING,
        ));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    write_records(
        out,
        cfg.output.format,
        "verify",
        cfg,
        &checks,
        &["name", "n_l", "n_r", "observed", "threshold", "pass", "detail"],
    )?;
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed });
    }
    Ok(EXIT_OK)
}

fn clone_err(e: &CliError) -> CliError {
    match e {
        CliError::Core(c) => CliError::Core(c.clone()),
        other => CliError::Output(other.to_string()),
    }
}

#[derive(Debug, Clone, Serialize)]
struct PotentialSample {
    x: f64,
    v: f64,
    dv_dx: f64,
}

pub fn export_potential<W: Write>(cfg: &RunConfig, points: usize, out: W) -> Result<i32, CliError> {
    if points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let p = cfg.build_potential()?;
    let samples: Vec<PotentialSample> =
        p.tabulate(points).into_iter().map(|(x, v, dv_dx)| PotentialSample { x, v, dv_dx }).collect();
    write_records(out, cfg.output.format, "export-potential", cfg, &samples, &["x", "v", "dv_dx"])?;
    Ok(EXIT_OK)
}
