//! `B1` on a maximally mixed qudit, searched over the block-structured
//! effects `a (1_2 + b c . sigma) (+) 1_{d-2}` with pure post-measurement
//! states inside the distinguished qubit subspace.

use num_complex::Complex64;

use super::nelder_mead::{multistart, Bounds, NelderMead};
use super::params::{xz_direction, QuditEffectParams, THETA_RANGE};
use super::OptimizationReport;
use crate::error::{Error, Result};
use crate::quantum::bloch::normalize_or_default;
use crate::quantum::linalg::{self, scale3, sub3};
use crate::quantum::{BinaryMeasurement, DensityMatrix, Effect};
use crate::sequence::{self, ProtocolPair};

pub const SUPPORTED_DIMS: [usize; 4] = [3, 4, 5, 6];

/// Upper bound `max(3, 4 (1 - 1/d))` for a maximally mixed input.
pub fn maxmixed_bound(d: usize) -> f64 {
    3f64.max(4.0 * (1.0 - 1.0 / d as f64))
}

/// Decodes `[t0, b0, t1, b1, theta]` with `a = t / (1 + b)`, `c0 = +z`.
pub fn decode(x: &[f64], dim: usize) -> (QuditEffectParams, QuditEffectParams) {
    (
        QuditEffectParams::from_unit_box(x[0], x[1], [0.0, 0.0, 1.0], dim),
        QuditEffectParams::from_unit_box(x[2], x[3], xz_direction(x[4]), dim),
    )
}

/// Pure state in the qubit block with Bloch vector `v`, embedded in dimension `dim`.
fn embedded_pure(v: [f64; 3], dim: usize) -> DensityMatrix {
    let block = linalg::bloch_operator(1.0, v) * Complex64::new(0.5, 0.0);
    DensityMatrix::from_trusted(linalg::embed_qubit_block(&block, dim, 0.0))
}

/// Protocol for the given effects with "+" post states along
/// `+-(a0 b0 c0 - a1 b1 c1)`.
pub fn build_protocol(e0: &QuditEffectParams, e1: &QuditEffectParams) -> Result<ProtocolPair> {
    let dim = e0.dim;
    let (q0, q1) = (e0.qubit_block(), e1.qubit_block());
    let dir = normalize_or_default(sub3(scale3(q0.v, q0.q), scale3(q1.v, q1.q)));
    let mixed = DensityMatrix::maximally_mixed(dim)?;
    let m0 = BinaryMeasurement::new(Effect::new(e0.matrix())?, embedded_pure(dir, dim), mixed.clone())?;
    let m1 = BinaryMeasurement::new(Effect::new(e1.matrix())?, embedded_pure(scale3(dir, -1.0), dim), mixed)?;
    ProtocolPair::new(m0, m1)
}

fn simulate(x: &[f64], rho: &DensityMatrix) -> Result<f64> {
    let (e0, e1) = decode(x, rho.dim());
    let protocol = build_protocol(&e0, &e1)?;
    Ok(sequence::b1(&sequence::correlations(rho, &protocol)?))
}

pub fn maximize_b1_qudit_maxmixed(d: usize, restarts: usize, seed: u64) -> Result<OptimizationReport> {
    if !SUPPORTED_DIMS.contains(&d) {
        return Err(Error::domain(format!("dimension {d} not in {SUPPORTED_DIMS:?}")));
    }
    if restarts == 0 {
        return Err(Error::domain("restarts must be at least 1"));
    }
    let rho = DensityMatrix::maximally_mixed(d)?;
    let objective = |x: &[f64]| simulate(x, &rho).unwrap_or(f64::NEG_INFINITY);
    let bounds = Bounds::new(vec![0.0, 0.0, 0.0, 0.0, THETA_RANGE.0], vec![1.0, 1.0, 1.0, 1.0, THETA_RANGE.1]);
    let best = multistart(&objective, &bounds, restarts, seed, &NelderMead::default());
    let value = simulate(&best.x, &rho)?;
    Ok(OptimizationReport::new(value, best.x, Some(maxmixed_bound(d)), restarts, seed))
}
