use serde::{Deserialize, Serialize};

use super::linalg::{self, norm3, scale3};
use super::state::DensityMatrix;
use super::EQ_TOL;
use crate::error::{check_range, Error, Result};

/// Direction used when the Bloch vector vanishes.
pub const DEFAULT_DIRECTION: [f64; 3] = [0.0, 0.0, 1.0];

/// A qubit state `(1 + length * direction . sigma) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    length: f64,
    direction: [f64; 3],
}

impl BlochState {
    pub fn new(length: f64, direction: [f64; 3]) -> Result<Self> {
        check_range("Bloch length", length, 0.0, 1.0)?;
        let n2 = linalg::dot3(direction, direction);
        if !((n2 - 1.0).abs() <= EQ_TOL) {
            return Err(Error::InvalidInput(format!("direction {direction:?} is not a unit vector")));
        }
        Ok(Self { length, direction })
    }

    /// Builds a state from an unnormalized direction; the zero vector maps to
    /// [`DEFAULT_DIRECTION`].
    pub fn along(length: f64, direction: [f64; 3]) -> Result<Self> {
        Self::new(length, normalize_or_default(direction))
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let len = norm3(v);
        if len > 1.0 + EQ_TOL {
            return Err(Error::domain(format!("Bloch vector length {len} exceeds 1")));
        }
        Self::along(len.min(1.0), v)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn vector(&self) -> [f64; 3] {
        scale3(self.direction, self.length)
    }

    pub fn to_density(&self) -> DensityMatrix {
        bloch_to_density(self)
    }

    /// `(1 + p^2) / 2`.
    pub fn purity(&self) -> f64 {
        0.5 * (1.0 + self.length * self.length)
    }
}

pub fn normalize_or_default(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    if n < 1e-12 {
        DEFAULT_DIRECTION
    } else {
        scale3(v, 1.0 / n)
    }
}

pub fn bloch_to_density(s: &BlochState) -> DensityMatrix {
    let m = linalg::bloch_operator(1.0, s.vector()) * num_complex::Complex64::new(0.5, 0.0);
    DensityMatrix::from_trusted(m)
}

pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochState> {
    if rho.dim() != 2 {
        return Err(Error::dim(2, rho.dim()));
    }
    let m = rho.matrix();
    let v = [2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re];
    let len = norm3(v);
    if len < 1e-12 {
        return BlochState::new(0.0, DEFAULT_DIRECTION);
    }
    BlochState::new(len.min(1.0), scale3(v, 1.0 / len))
}

/// `sqrt(2P - 1)`.
pub fn bloch_length_from_purity(purity: f64) -> Result<f64> {
    check_range("qubit purity", purity, 0.5, 1.0)?;
    Ok((2.0 * purity - 1.0).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{trace_product, CMatrix};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn north_pole_and_center() {
        let up = BlochState::new(1.0, [0.0, 0.0, 1.0]).unwrap().to_density();
        assert_eq!(up.matrix(), DensityMatrix::basis(2, 0).unwrap().matrix());
        let center = BlochState::new(0.0, [1.0, 0.0, 0.0]).unwrap().to_density();
        assert_eq!(center.matrix(), DensityMatrix::maximally_mixed(2).unwrap().matrix());
    }

    #[test]
    fn half_length_along_x() {
        let rho = BlochState::new(0.5, [1.0, 0.0, 0.0]).unwrap().to_density();
        let expected = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.25), c(0.25), c(0.5)]);
        assert!((rho.matrix() - expected).iter().all(|z| z.norm() < 1e-15));

        let back = density_to_bloch(&rho).unwrap();
        assert!((back.length() - 0.5).abs() < 1e-12);
        assert!(norm3(linalg::sub3(back.direction(), [1.0, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn density_to_bloch_conventions() {
        let mixed = density_to_bloch(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert_eq!(mixed.length(), 0.0);
        assert_eq!(mixed.direction(), [0.0, 0.0, 1.0]);

        let down = density_to_bloch(&DensityMatrix::basis(2, 1).unwrap()).unwrap();
        assert!((down.length() - 1.0).abs() < 1e-15);
        assert_eq!(down.direction(), [0.0, 0.0, -1.0]);

        assert!(matches!(
            density_to_bloch(&DensityMatrix::maximally_mixed(3).unwrap()),
            Err(Error::Dimension { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn purity_of_bloch_state() {
        let rho = BlochState::new(0.6, [0.0, 1.0, 0.0]).unwrap().to_density();
        assert!((rho.purity() - 0.68).abs() < 1e-12);
    }

    #[test]
    fn length_from_purity() {
        assert_eq!(bloch_length_from_purity(0.5).unwrap(), 0.0);
        assert_eq!(bloch_length_from_purity(1.0).unwrap(), 1.0);
        assert!((bloch_length_from_purity(0.68).unwrap() - 0.6).abs() < 1e-12);
        assert!(bloch_length_from_purity(0.49).is_err());
        assert!(bloch_length_from_purity(1.01).is_err());
    }

    #[test]
    fn invalid_bloch_states() {
        assert!(BlochState::new(1.2, [0.0, 0.0, 1.0]).is_err());
        assert!(BlochState::new(0.5, [0.0, 0.5, 0.5]).is_err());
    }

    fn unit_vector() -> impl Strategy<Value = [f64; 3]> {
        (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU)
            .prop_map(|(t, f)| [t.sin() * f.cos(), t.sin() * f.sin(), t.cos()])
    }

    proptest! {
        #[test]
        fn purity_matches_length(p in 0.0..=1.0f64, dir in unit_vector()) {
            let s = BlochState::new(p, dir).unwrap();
            let rho = s.to_density();
            prop_assert!((rho.purity() - 0.5 * (1.0 + p * p)).abs() <= 1e-12);
            // tr(rho sigma_z) recovers the z component
            let z = trace_product(rho.matrix(), &linalg::pauli_z());
            prop_assert!((z - p * dir[2]).abs() <= 1e-12);
        }

        #[test]
        fn round_trip(p in 1e-6..=1.0f64, dir in unit_vector()) {
            let s = BlochState::new(p, dir).unwrap();
            let back = density_to_bloch(&s.to_density()).unwrap();
            prop_assert!((back.length() - p).abs() <= 1e-12);
            prop_assert!(norm3(linalg::sub3(back.vector(), s.vector())) <= 1e-12);
        }
    }
}
