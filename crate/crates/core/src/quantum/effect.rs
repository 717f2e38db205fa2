use num_complex::Complex64;

use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use super::{EQ_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// A POVM element `0 <= E <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    m: CMatrix,
}

impl Effect {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!("effect must be square and non-empty, got {}x{}", m.nrows(), m.ncols())));
        }
        let herm = linalg::hermiticity_defect(&m);
        if herm > EQ_TOL {
            return Err(Error::InvalidInput(format!("effect is not Hermitian (defect {herm:e})")));
        }
        let eig = linalg::hermitian_eigenvalues(&m);
        let (lo, hi) = (eig[0], eig[eig.len() - 1]);
        if lo < -PSD_TOL || hi > 1.0 + PSD_TOL {
            return Err(Error::InvalidInput(format!("effect spectrum [{lo}, {hi}] leaves [0, 1]")));
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: linalg::identity(dim) }
    }

    pub fn zero(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    /// `1 - E`, the effect of the complementary outcome.
    pub fn complement(&self) -> Effect {
        Effect { m: linalg::identity(self.dim()) - &self.m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// Outcome probability `tr(E rho)`.
    pub fn probability(&self, rho: &DensityMatrix) -> f64 {
        linalg::trace_product(&self.m, rho.matrix())
    }

    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self { m }
    }
}

/// Two-outcome measure-and-prepare instrument: outcome "+" has effect
/// `effect_plus`, outcome "-" has `1 - effect_plus`, and each outcome
/// re-prepares its stored state.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryMeasurement {
    effect_plus: Effect,
    effect_minus: Effect,
    post_plus: DensityMatrix,
    post_minus: DensityMatrix,
}

impl BinaryMeasurement {
    pub fn new(effect_plus: Effect, post_plus: DensityMatrix, post_minus: DensityMatrix) -> Result<Self> {
        let d = effect_plus.dim();
        for found in [post_plus.dim(), post_minus.dim()] {
            if found != d {
                return Err(Error::dim(d, found));
            }
        }
        let effect_minus = Effect::new(effect_plus.complement().m)?;
        Ok(Self { effect_plus, effect_minus, post_plus, post_minus })
    }

    /// Always announces "+" and prepares `post_plus`; the "-" branch keeps the
    /// maximally mixed state.
    pub fn deterministic_plus(post_plus: DensityMatrix) -> Self {
        let d = post_plus.dim();
        Self {
            effect_plus: Effect::identity(d),
            effect_minus: Effect::zero(d),
            post_plus,
            post_minus: DensityMatrix::from_trusted(linalg::identity(d) / Complex64::new(d as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.effect_plus.dim()
    }

    pub fn effect_plus(&self) -> &Effect {
        &self.effect_plus
    }

    pub fn effect_minus(&self) -> &Effect {
        &self.effect_minus
    }

    pub fn effect(&self, plus: bool) -> &Effect {
        if plus {
            &self.effect_plus
        } else {
            &self.effect_minus
        }
    }

    pub fn post_plus(&self) -> &DensityMatrix {
        &self.post_plus
    }

    pub fn post_minus(&self) -> &DensityMatrix {
        &self.post_minus
    }

    pub fn post(&self, plus: bool) -> &DensityMatrix {
        if plus {
            &self.post_plus
        } else {
            &self.post_minus
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::bloch::BlochState;

    #[test]
    fn effect_validation() {
        assert!(Effect::new(linalg::identity(2) * Complex64::new(1.2, 0.0)).is_err());
        assert!(Effect::new(linalg::pauli_z()).is_err());
        let half = Effect::new(linalg::identity(3) * Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(half.complement(), half);
    }

    #[test]
    fn measurement_dimensions_must_agree() {
        let e = Effect::identity(2);
        let q = DensityMatrix::maximally_mixed(3).unwrap();
        let d2 = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(matches!(BinaryMeasurement::new(e.clone(), q, d2.clone()), Err(Error::Dimension { .. })));
        assert!(BinaryMeasurement::new(e, d2.clone(), d2).is_ok());
    }

    #[test]
    fn probability_of_projector() {
        let e = Effect::new(linalg::basis_projector(2, 0)).unwrap();
        let rho = BlochState::new(0.4, [0.0, 0.0, 1.0]).unwrap().to_density();
        assert!((e.probability(&rho) - 0.7).abs() < 1e-15);
        assert!((e.complement().probability(&rho) - 0.3).abs() < 1e-15);
    }
}
