use num_complex::Complex64;

use super::linalg::{self, CMatrix};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Eigenvalues of rho below this are treated as rounding noise.
const RANK_CUTOFF: f64 = 1e-14;

/// `sigma_y (x) sigma_y`, which is real.
fn spin_flip() -> CMatrix {
    let mut y = CMatrix::zeros(4, 4);
    y[(0, 3)] = Complex64::new(-1.0, 0.0);
    y[(1, 2)] = Complex64::new(1.0, 0.0);
    y[(2, 1)] = Complex64::new(1.0, 0.0);
    y[(3, 0)] = Complex64::new(-1.0, 0.0);
    y
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the singular values of `tau = Psi^T (sigma_y x sigma_y) Psi`,
/// where the columns of `Psi` are the subnormalized eigenvectors
/// `sqrt(mu_k) |e_k>` of rho. They coincide with the square roots of the
/// eigenvalues of `rho * rho~`, but avoid square-rooting near-zero
/// eigenvalues of a 4x4 product.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::dim(4, rho.dim()));
    }
    let (values, vectors) = linalg::hermitian_eigh(rho.matrix());
    let cols: Vec<_> = values
        .iter()
        .zip(&vectors)
        .filter(|(mu, _)| **mu > RANK_CUTOFF)
        .map(|(mu, v)| v * Complex64::new(mu.sqrt(), 0.0))
        .collect();
    if cols.is_empty() {
        return Ok(0.0);
    }
    let psi = CMatrix::from_columns(&cols);
    let tau = psi.transpose() * spin_flip() * &psi;
    let mut sv: Vec<f64> = tau.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let c = sv[0] - sv[1..].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}
