use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::linalg::{self, CMatrix, CVector};
use super::{EQ_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// A validated density matrix: Hermitian, unit trace, positive semi-definite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

/// Which factor of a two-qubit state to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::InvalidInput("density matrix of dimension 0".into()));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidInput(format!(
                "density matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&m);
        if herm > EQ_TOL {
            return Err(Error::InvalidInput(format!("matrix is not Hermitian (defect {herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > EQ_TOL || tr.im.abs() > EQ_TOL {
            return Err(Error::InvalidInput(format!("trace {tr} differs from 1")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&m)[0];
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidInput(format!("matrix is not PSD (eigenvalue {min_eig:e})")));
        }
        Ok(Self { m })
    }

    /// Normalizes a PSD matrix to unit trace before validating it.
    pub fn from_unnormalized(m: CMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidInput(format!("cannot normalize matrix with trace {tr}")));
        }
        let mut m = m / Complex64::new(tr, 0.0);
        symmetrize(&mut m);
        Self::new(m)
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidInput("zero state vector".into()));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Self::from_unnormalized(linalg::projector(&psi))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("density matrix of dimension 0".into()));
        }
        Ok(Self { m: linalg::identity(dim) / Complex64::new(dim as f64, 0.0) })
    }

    /// `|k><k|` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::InvalidInput(format!("basis index {k} out of range for dimension {dim}")));
        }
        Ok(Self { m: linalg::basis_projector(dim, k) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// `tr(rho^2)`, clamped to `[1/d, 1]`.
    pub fn purity(&self) -> f64 {
        let d = self.dim() as f64;
        let raw: f64 = self.m.iter().map(|z| z.norm_sqr()).sum();
        raw.clamp(1.0 / d, 1.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { m: linalg::kron(&self.m, &other.m) }
    }

    /// Reduced state of a qubit pair after tracing out `traced`.
    pub fn partial_trace(&self, traced: Subsystem) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::dim(4, self.dim()));
        }
        let mut out = CMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = linalg::ZERO;
                for k in 0..2 {
                    acc += match traced {
                        Subsystem::B => self.m[(2 * i + k, 2 * j + k)],
                        Subsystem::A => self.m[(2 * k + i, 2 * k + j)],
                    };
                }
                out[(i, j)] = acc;
            }
        }
        symmetrize(&mut out);
        Ok(DensityMatrix { m: out })
    }

    /// Stored without re-validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(linalg::hermiticity_defect(&m) <= 1e-9);
        Self { m }
    }
}

fn symmetrize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Hilbert-Schmidt-style random state `G G^dagger / tr`, with `G` a `dim x rank`
/// complex Gaussian matrix drawn from a generator seeded with `seed`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_with(&mut rng, dim, rank)
}

pub fn random_density_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::domain(format!("rank {rank} must lie in [1, {dim}]")));
    }
    let g = DMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    DensityMatrix::from_unnormalized(&g * g.adjoint())
}

/// Uniformly random pure state vector of dimension `dim`.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}
