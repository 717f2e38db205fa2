//! Numerical maximization of `B1` and of general linear functionals.

pub mod functional;
pub mod nelder_mead;
pub mod params;
pub mod qubit;
pub mod qudit;

use serde::{Deserialize, Serialize};

pub use functional::{maximize_linear_functional, monotonicity_sweep};
pub use params::{QubitEffectParams, QuditEffectParams};
pub use qubit::maximize_b1_qubit;
pub use qudit::maximize_b1_qudit_maxmixed;

/// Agreement required between the qubit search and the closed form.
pub const QUBIT_TOL: f64 = 1e-6;
/// Agreement required for the qudit and functional searches.
pub const SEARCH_TOL: f64 = 1e-5;
/// Slack allowed when checking that a search never beats a proven bound.
pub const SOUNDNESS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub closed_form: Option<f64>,
    /// `closed_form - best_value`.
    pub gap: Option<f64>,
    pub restarts: usize,
    pub seed: u64,
}

impl OptimizationReport {
    pub fn new(best_value: f64, best_params: Vec<f64>, closed_form: Option<f64>, restarts: usize, seed: u64) -> Self {
        Self { best_value, best_params, closed_form, gap: closed_form.map(|c| c - best_value), restarts, seed }
    }

    pub fn within(&self, tol: f64) -> Option<bool> {
        self.gap.map(|g| g.abs() <= tol)
    }
}
