//! States, effects and measure-and-prepare instruments on small Hilbert spaces.

pub mod bloch;
pub mod concurrence;
pub mod effect;
pub mod linalg;
pub mod state;

pub use bloch::{bloch_length_from_purity, bloch_to_density, density_to_bloch, BlochState};
pub use concurrence::wootters_concurrence;
pub use effect::{BinaryMeasurement, Effect};
pub use state::{random_density, random_density_with, DensityMatrix, Subsystem};

/// Tolerance for equality-type invariants (Hermiticity, trace, unit vectors).
pub const EQ_TOL: f64 = 1e-12;
/// Slack allowed below zero for positive semi-definiteness.
pub const PSD_TOL: f64 = 1e-10;

/// `tr(rho^2)`, clamped to `[1/d, 1]`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

pub fn partial_trace(rho: &DensityMatrix, traced: Subsystem) -> crate::Result<DensityMatrix> {
    rho.partial_trace(traced)
}
