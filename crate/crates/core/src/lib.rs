//! Low-lying spectra of asymmetric one-dimensional double wells.
//!
//! Parabolic-cylinder solutions in each well are matched through a WKB barrier solution,
//! giving a transcendental quantization condition, tunneling splittings, localization
//! ratios and an equivalent two-level model. A finite-difference eigensolver serves as
//! ground truth for every semiclassical quantity.

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numerics;
pub mod oracle;
pub mod potential;
pub mod quantize;
pub mod specfun;
pub mod twolevel;
pub mod wkb;

pub use error::{Error, Result};
pub use oracle::{GridSpec, HarmonicPotential, Potential1d, Scheme, SolveOptions, SpectrumResult};
pub use potential::{
    build_biased_quartic, build_piecewise_parabolic, DoubleWellPotential, UnitsConfig, WellParams,
};
pub use quantize::{LocalizationReport, PairMethod, PairSolution};
pub use specfun::{PcfEvaluation, PcfRegime};
pub use twolevel::TwoLevelModel;
pub use wkb::{Branch, MatchingCoefficients};
