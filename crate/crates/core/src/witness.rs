//! Closed-form bounds connecting the observed value of `B1` to the purity of
//! the initial state, the purity of the post-measurement states, and the
//! concurrence of a two-qubit state whose subsystem was measured.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::quantum::{DensityMatrix, Subsystem};

/// Largest value of `B1` reachable by any qubit protocol.
pub const QUBIT_B1_MAX: f64 = 3.0;

/// Values of `B1` this far above 3 are treated as rounding and clamped.
pub const QUBIT_SLACK: f64 = 1e-9;

/// Tolerance on `B1 <= (5 + p) / 2` when a purity is claimed.
pub const CONSISTENCY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityBound {
    pub purity_lower: f64,
    pub bloch_lower: f64,
    /// Set when only the unconditional qubit bound `1/2` applies.
    pub trivial: bool,
}

impl PurityBound {
    pub fn from_bloch(bloch_lower: f64) -> Self {
        let bloch_lower = bloch_lower.clamp(0.0, 1.0);
        Self { purity_lower: 0.5 * (1.0 + bloch_lower * bloch_lower), bloch_lower, trivial: bloch_lower == 0.0 }
    }

    pub fn trivial() -> Self {
        Self { purity_lower: 0.5, bloch_lower: 0.0, trivial: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConcurrenceSource {
    /// From an observed `B1` on one subsystem.
    Temporal,
    /// From the local purities alone.
    LocalPurity,
    /// From global and local purities.
    GlobalLocal,
    Multipartite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceBound {
    pub upper: f64,
    pub lower: Option<f64>,
    pub source: ConcurrenceSource,
}

/// Validates `b1` for the qubit witnesses and clamps rounding noise above 3.
fn qubit_b1(b1_exp: f64) -> Result<f64> {
    check_range("B1", b1_exp, 0.0, 4.0)?;
    if b1_exp > QUBIT_B1_MAX + QUBIT_SLACK {
        return Err(Error::QubitAssumption(b1_exp));
    }
    Ok(b1_exp.min(QUBIT_B1_MAX))
}

/// Maximum of `B1` over all qubit protocols for initial Bloch length `p`: `(5 + p) / 2`.
pub fn b1_max_initial(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0)?;
    Ok(0.5 * (5.0 + p))
}

/// Post-measurement Bloch length below which the deterministic strategy wins.
pub fn branch_threshold(p: f64) -> f64 {
    (1.0 - p) / (3.0 + p)
}

/// Maximum of `B1` when the initial state has Bloch length `p` and both "+"
/// post-measurement states have Bloch length `w`.
pub fn b1_max_constrained(p: f64, w: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("w", w, 0.0, 1.0)?;
    if w <= branch_threshold(p) {
        Ok(2.0)
    } else {
        Ok(1.0 + 0.5 * (1.0 + w) + 0.25 * (1.0 + p) * (1.0 + w))
    }
}

/// Lower bound on the initial purity implied by an observed `B1`.
///
/// Below `B1 = 2.5` the inversion of `(5 + p) / 2` gives nothing, and the
/// trivial qubit bound `1/2` is returned with the flag set.
pub fn purity_lower_bound(b1_exp: f64) -> Result<PurityBound> {
    let b = qubit_b1(b1_exp)?;
    if b <= 2.5 {
        return Ok(PurityBound::trivial());
    }
    Ok(PurityBound::from_bloch(2.0 * b - 5.0))
}

/// Lower bound on the larger purity of the two "+" post-measurement states,
/// given the observed `B1` and the known initial purity.
pub fn postmeasurement_purity_bound(b1_exp: f64, initial_purity: f64) -> Result<PurityBound> {
    let b = qubit_b1(b1_exp)?;
    check_range("initial purity", initial_purity, 0.5, 1.0)?;
    let p = (2.0 * initial_purity - 1.0).max(0.0).sqrt();
    let ceiling = b1_max_initial(p)?;
    if b > ceiling + CONSISTENCY_TOL {
        return Err(Error::Inconsistent(format!(
            "B1 = {b} exceeds the maximum {ceiling} reachable with initial purity {initial_purity}"
        )));
    }
    if b <= 2.0 {
        return Ok(PurityBound::trivial());
    }
    let purity = initial_purity;
    let denom = 4.0 + purity + 3.0 * p;
    let w_purity = (14.0 + 4.0 * b * b + purity + 5.0 * p - 2.0 * b * (7.0 + p)) / denom;
    let w_purity = w_purity.clamp(0.5, 1.0);
    Ok(PurityBound { purity_lower: w_purity, bloch_lower: (2.0 * w_purity - 1.0).max(0.0).sqrt(), trivial: false })
}

/// `B1(p) - B1(p, 1 - eps) = (3 + p) eps / 4`, valid while `1 - eps` stays
/// above the branch threshold.
pub fn robustness_penalty(p: f64, eps: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("eps", eps, 0.0, 1.0)?;
    if 1.0 - eps <= branch_threshold(p) {
        return Err(Error::domain(format!(
            "1 - eps = {} lies at or below the threshold {} for p = {p}",
            1.0 - eps,
            branch_threshold(p)
        )));
    }
    Ok(0.25 * (3.0 + p) * eps)
}

/// Upper bound on the concurrence of a two-qubit state when `B1` was
/// observed on one of its subsystems.
pub fn concurrence_upper_from_b1(b1_exp: f64) -> Result<ConcurrenceBound> {
    let b = qubit_b1(b1_exp)?;
    let c = (2.0 * b - 5.0).clamp(0.0, 1.0);
    Ok(ConcurrenceBound { upper: (1.0 - c * c).max(0.0).sqrt(), lower: None, source: ConcurrenceSource::Temporal })
}

/// Purity-based sandwich on the concurrence of a two-qubit state:
/// `2 max_X (tr rho^2 - tr rho_X^2) <= C^2 <= 2 min_X (1 - tr rho_X^2)`.
pub fn concurrence_bounds_from_state(rho: &DensityMatrix) -> Result<ConcurrenceBound> {
    if rho.dim() != 4 {
        return Err(Error::dim(4, rho.dim()));
    }
    let global = raw_purity(rho);
    let local = [raw_purity(&rho.partial_trace(Subsystem::B)?), raw_purity(&rho.partial_trace(Subsystem::A)?)];
    let lower_sq = local.iter().map(|l| 2.0 * (global - l)).fold(f64::NEG_INFINITY, f64::max);
    let upper_sq = local.iter().map(|l| 2.0 * (1.0 - l)).fold(f64::INFINITY, f64::min);
    Ok(ConcurrenceBound {
        upper: upper_sq.clamp(0.0, 1.0).sqrt(),
        lower: Some(lower_sq.clamp(0.0, 1.0).sqrt()),
        source: ConcurrenceSource::GlobalLocal,
    })
}

fn raw_purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().iter().map(|z| z.norm_sqr()).sum()
}

/// `2^{1 - n/2} sqrt(2^n - 2 - sum_i tr rho_i^2)` for `n` qubits with the
/// given single-party purities.
pub fn multipartite_concurrence_upper(n: usize, local_purities: &[f64]) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need at least two parties, got {n}")));
    }
    if local_purities.len() != n {
        return Err(Error::domain(format!("expected {n} purities, got {}", local_purities.len())));
    }
    for &p in local_purities {
        check_range("local purity", p, 0.5 - 1e-12, 1.0 + 1e-12)?;
    }
    let nf = n as f64;
    let radicand = 2f64.powf(nf) - 2.0 - local_purities.iter().sum::<f64>();
    Ok(2f64.powf(1.0 - nf / 2.0) * radicand.max(0.0).sqrt())
}
