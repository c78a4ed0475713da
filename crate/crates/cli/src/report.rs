//! Per-level comparison rows and their CSV, JSON and table renderings.

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use asymwell::oracle::{resolve_pair_or_single, solve_spectrum, PairKind, SpectrumResult};
use asymwell::quantize::{localization_report, solve_pair_exact, solve_pair_quadratic, splitting_degenerate};
use asymwell::wkb::{sin_regime, well_orders, barrier_action};
use asymwell::{Branch, DoubleWellPotential, TwoLevelModel};
use serde::Serialize;
use std::io::Write;
use std::time::Instant;

/// One level pair of one experiment. Unavailable quantities are empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ReportRow {
    pub experiment: String,
    pub parameter: Option<String>,
    pub parameter_value: Option<f64>,
    pub n_l: u32,
    pub n_r: u32,
    pub c: Option<f64>,
    pub eps_l: Option<f64>,
    pub eps_r: Option<f64>,
    pub delta_eps: Option<f64>,
    pub delta: Option<f64>,
    pub action: Option<f64>,
    pub theta: Option<f64>,
    pub e_minus_exact: Option<f64>,
    pub e_plus_exact: Option<f64>,
    pub delta_e_exact: Option<f64>,
    pub e_minus_quadratic: Option<f64>,
    pub e_plus_quadratic: Option<f64>,
    pub delta_e_quadratic: Option<f64>,
    pub oracle_e_lower: Option<f64>,
    pub oracle_e_upper: Option<f64>,
    pub oracle_gap: Option<f64>,
    pub oracle_error_estimate: Option<f64>,
    pub oracle_left_prob_lower: Option<f64>,
    pub oracle_left_prob_upper: Option<f64>,
    pub oracle_pair_kind: Option<String>,
    pub abs_error_minus: Option<f64>,
    pub abs_error_plus: Option<f64>,
    pub rel_error_minus: Option<f64>,
    pub rel_error_plus: Option<f64>,
    pub localization_ratio_lower: Option<f64>,
    pub regime_l: Option<String>,
    pub regime_r: Option<String>,
    pub timing_ms: Option<f64>,
    pub error: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Oracle spectrum sized for the configured levels.
pub fn oracle_for(cfg: &RunConfig, potential: &DoubleWellPotential) -> Result<SpectrumResult, CliError> {
    let count = cfg.oracle_count();
    let grid = cfg.grid.resolve(potential, count)?;
    Ok(solve_spectrum(potential, &grid, count, cfg.grid.options())?)
}

/// Fills a row; the first failing step aborts it with the error returned.
pub fn fill_row(
    row: &mut ReportRow,
    potential: &DoubleWellPotential,
    spectrum: &SpectrumResult,
    n_l: u32,
    n_r: u32,
) -> Result<(), CliError> {
    row.n_l = n_l;
    row.n_r = n_r;
    row.c = Some(potential.c());
    let model = TwoLevelModel::new(potential, n_l, n_r)?;
    row.eps_l = Some(model.eps_l);
    row.eps_r = Some(model.eps_r);
    row.delta_eps = Some(model.delta_eps());
    row.delta = Some(splitting_degenerate(potential, n_l, n_r)?);
    row.action = Some(barrier_action(potential, model.energy, potential.c())?.total);
    row.theta = Some(model.theta);

    let cls = resolve_pair_or_single(spectrum, potential, n_l, n_r)?;
    let (lo, hi) = cls.energies;
    row.oracle_e_lower = Some(lo);
    row.oracle_e_upper = Some(hi);
    row.oracle_gap = Some(hi - lo);
    row.oracle_error_estimate =
        Some(spectrum.error_estimates[cls.indices.0].max(spectrum.error_estimates[cls.indices.1]));
    row.oracle_left_prob_lower = Some(cls.left_probs.0);
    row.oracle_left_prob_upper = Some(cls.left_probs.1);
    row.oracle_pair_kind = Some(
        match cls.kind {
            PairKind::TunnelingPair => "tunneling_pair",
            PairKind::LocalizedSingles => "localized_singles",
        }
        .to_string(),
    );

    let q = solve_pair_quadratic(potential, n_l, n_r)?;
    row.e_minus_quadratic = Some(q.e_minus);
    row.e_plus_quadratic = Some(q.e_plus);
    row.delta_e_quadratic = Some(q.delta_e);

    let ex = solve_pair_exact(potential, n_l, n_r)?;
    row.e_minus_exact = Some(ex.e_minus);
    row.e_plus_exact = Some(ex.e_plus);
    row.delta_e_exact = Some(ex.delta_e);
    row.abs_error_minus = Some((ex.e_minus - lo).abs());
    row.abs_error_plus = Some((ex.e_plus - hi).abs());
    row.rel_error_minus = finite((ex.e_minus - lo).abs() / lo.abs());
    row.rel_error_plus = finite((ex.e_plus - hi).abs() / hi.abs());

    let (nu_l, nu_r) = well_orders(potential, ex.e_plus);
    let s = row.action.unwrap_or(f64::INFINITY);
    row.regime_l = Some(sin_regime(nu_l, s).to_string());
    row.regime_r = Some(sin_regime(nu_r, s).to_string());
    row.localization_ratio_lower = finite(localization_report(potential, ex.e_minus, Branch::LeftAnchored)?.ratio_r);
    Ok(())
}

/// Rows for every configured level on one potential. Errors abort when `strict`, else land in the row.
pub fn rows_for_potential(
    cfg: &RunConfig,
    potential: &DoubleWellPotential,
    experiment: &str,
    parameter: Option<(&str, f64)>,
    strict: bool,
    timings: bool,
) -> Result<Vec<ReportRow>, CliError> {
    let start = Instant::now();
    let spectrum = match oracle_for(cfg, potential) {
        Ok(s) => Some(s),
        Err(e) if !strict => {
            log::warn!("{experiment}: oracle failed: {e}");
            return Ok(cfg
                .levels
                .iter()
                .map(|&(n_l, n_r)| ReportRow {
                    experiment: experiment.to_string(),
                    parameter: parameter.map(|p| p.0.to_string()),
                    parameter_value: parameter.map(|p| p.1),
                    n_l,
                    n_r,
                    error: Some(e.to_string()),
                    ..ReportRow::default()
                })
                .collect());
        }
        Err(e) => return Err(e),
    };
    let spectrum = spectrum.expect("handled above");
    let mut rows = Vec::new();
    for &(n_l, n_r) in &cfg.levels {
        let t = Instant::now();
        let mut row = ReportRow {
            experiment: experiment.to_string(),
            parameter: parameter.map(|p| p.0.to_string()),
            parameter_value: parameter.map(|p| p.1),
            ..ReportRow::default()
        };
        if let Err(e) = fill_row(&mut row, potential, &spectrum, n_l, n_r) {
            if strict {
                return Err(e);
            }
            row.error = Some(e.to_string());
        }
        if timings {
            let shared = if rows.is_empty() { start.elapsed() } else { t.elapsed() };
            row.timing_ms = Some(shared.as_secs_f64() * 1e3);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Header comment lines echoing every config field.
pub fn header_block(command: &str, cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let value = serde_json::to_value(cfg)?;
    let mut lines = vec![format!("# asymwell {command} {}", env!("CARGO_PKG_VERSION"))];
    if let serde_json::Value::Object(map) = value {
        for key in ["units", "potential", "levels", "grid", "c_override", "output", "sweep"] {
            let v = map.get(key).cloned().unwrap_or(serde_json::Value::Null);
            lines.push(format!("# config.{key} = {v}"));
        }
    }
    Ok(lines)
}

/// Writes serializable records as CSV (with header block), JSON, or an aligned table.
pub fn write_records<T: Serialize, W: Write>(
    mut out: W,
    format: Format,
    command: &str,
    cfg: &RunConfig,
    records: &[T],
    table_columns: &[&str],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            for line in header_block(command, cfg)? {
                writeln!(out, "{line}")?;
            }
            let mut w = csv::Writer::from_writer(&mut out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = serde_json::json!({ "command": command, "config": cfg, "rows": records });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Table => write_table(&mut out, records, table_columns)?,
    }
    Ok(())
}

fn cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => "-".into(),
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.11e}"),
            _ => n.to_string(),
        },
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_table<T: Serialize, W: Write>(out: &mut W, records: &[T], columns: &[&str]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let v = serde_json::to_value(r)?;
            Ok(columns.iter().map(|c| cell(v.get(*c).unwrap_or(&serde_json::Value::Null))).collect())
        })
        .collect::<Result<_, CliError>>()?;
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| rows.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
    };
    writeln!(out, "{}", line(columns.iter().map(|c| c.to_string()).collect()))?;
    for r in rows {
        writeln!(out, "{}", line(r))?;
    }
    Ok(())
}

/// Columns shown by the human table for comparison rows.
pub const ROW_TABLE_COLUMNS: &[&str] = &[
    "parameter_value",
    "n_l",
    "n_r",
    "delta_eps",
    "delta",
    "e_minus_exact",
    "e_plus_exact",
    "e_minus_quadratic",
    "e_plus_quadratic",
    "oracle_e_lower",
    "oracle_e_upper",
    "abs_error_minus",
    "abs_error_plus",
    "error",
];
