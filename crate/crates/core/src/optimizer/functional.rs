//! Maximization of arbitrary linear functionals of the correlations over
//! measure-and-prepare protocols and initial states of fixed purity.
//!
//! The initial state is diagonal with a spectrum on the fixed-purity sphere;
//! its eigenbasis is absorbed into the effects, which are fully general
//! (`E = U diag(e) U^dagger`, `U = exp(i sum_k theta_k G_k)` over the
//! generalized Gell-Mann basis). Post-measurement states never need to be
//! searched: for fixed effects each branch contributes
//! `p(a|x) lambda_max(sum_{b,y} alpha_{abxy} E_{b|y})`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::nelder_mead::{multistart, Bounds, NelderMead};
use super::OptimizationReport;
use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix};
use crate::quantum::{BinaryMeasurement, DensityMatrix, Effect};
use crate::sequence::{self, LinearFunctional, Outcome, ProtocolPair};
use crate::witness;

fn gell_mann(d: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = linalg::ONE;
            s[(k, j)] = linalg::ONE;
            basis.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = -linalg::I;
            a[(k, j)] = linalg::I;
            basis.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = Complex64::new(norm, 0.0);
        }
        m[(l, l)] = Complex64::new(-(l as f64) * norm, 0.0);
        basis.push(m);
    }
    basis
}

/// Parameter layout and decoding for one `(dim, purity)` search space.
struct Space {
    dim: usize,
    purity: f64,
    generators: Vec<CMatrix>,
}

impl Space {
    fn new(dim: usize, purity: f64) -> Self {
        Self { dim, purity, generators: gell_mann(dim) }
    }

    fn effect_len(&self) -> usize {
        self.dim + self.generators.len()
    }

    fn len(&self) -> usize {
        2 * self.effect_len() + usize::from(self.dim == 3)
    }

    fn bounds(&self) -> Bounds {
        let mut lo = Vec::with_capacity(self.len());
        let mut hi = Vec::with_capacity(self.len());
        for _ in 0..2 {
            lo.extend(std::iter::repeat_n(0.0, self.dim));
            hi.extend(std::iter::repeat_n(1.0, self.dim));
            lo.extend(std::iter::repeat_n(-PI, self.generators.len()));
            hi.extend(std::iter::repeat_n(PI, self.generators.len()));
        }
        if self.dim == 3 {
            lo.push(0.0);
            hi.push(1.0);
        }
        Bounds::new(lo, hi)
    }

    fn effect(&self, x: &[f64]) -> CMatrix {
        let (eig, angles) = x.split_at(self.dim);
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for (g, &t) in self.generators.iter().zip(angles) {
            h += g * Complex64::new(t, 0.0);
        }
        let (mu, w) = linalg::hermitian_eigh(&h);
        let mut u = CMatrix::zeros(self.dim, self.dim);
        for (m, v) in mu.iter().zip(&w) {
            u += linalg::projector(v) * Complex64::from_polar(1.0, *m);
        }
        let mut diag = CMatrix::zeros(self.dim, self.dim);
        for (k, &e) in eig.iter().enumerate() {
            diag[(k, k)] = Complex64::new(e.clamp(0.0, 1.0), 0.0);
        }
        let e = &u * diag * u.adjoint();
        // restore exact Hermiticity
        (&e + e.adjoint()) * Complex64::new(0.5, 0.0)
    }

    fn effects(&self, x: &[f64]) -> [CMatrix; 2] {
        let n = self.effect_len();
        [self.effect(&x[..n]), self.effect(&x[n..2 * n])]
    }

    /// Spectrum with `sum l_i = 1`, `sum l_i^2 = purity`.
    fn spectrum(&self, x: &[f64]) -> Vec<f64> {
        spectrum_for_purity(self.dim, self.purity, x.get(2 * self.effect_len()).copied().unwrap_or(0.0))
    }
}

/// Eigenvalues of a state with the given purity. For `dim = 3` the free
/// parameter `s` in `[0, 1]` sweeps the fixed-purity arc up to permutation.
pub fn spectrum_for_purity(dim: usize, purity: f64, s: f64) -> Vec<f64> {
    match dim {
        2 => {
            let p = (2.0 * purity - 1.0).max(0.0).sqrt();
            vec![0.5 * (1.0 + p), 0.5 * (1.0 - p)]
        }
        3 => {
            let t = (purity - 1.0 / 3.0).max(0.0).sqrt();
            let kappa = if t > 0.0 { 1.0 / (t * 6f64.sqrt()) } else { f64::INFINITY };
            let phi_max = if kappa >= 1.0 { PI / 3.0 } else { PI / 3.0 - kappa.acos() };
            let phi = s.clamp(0.0, 1.0) * phi_max.max(0.0);
            let r = t * (2.0f64 / 3.0).sqrt();
            (0..3)
                .map(|i| (1.0 / 3.0 + r * (phi - 2.0 * PI * i as f64 / 3.0).cos()).max(0.0))
                .collect()
        }
        _ => unreachable!("unsupported dimension"),
    }
}

fn branch_operator(f: &LinearFunctional, a: Outcome, x: usize, plus: &[CMatrix; 2], minus: &[CMatrix; 2]) -> CMatrix {
    let dim = plus[0].nrows();
    let mut m = CMatrix::zeros(dim, dim);
    for y in 0..2 {
        for b in Outcome::BOTH {
            let w = f.weight(a, b, x, y);
            if w != 0.0 {
                let e = if b.is_plus() { &plus[y] } else { &minus[y] };
                m += e * Complex64::new(w, 0.0);
            }
        }
    }
    m
}

fn value(f: &LinearFunctional, space: &Space, x: &[f64]) -> f64 {
    let plus = space.effects(x);
    let id = linalg::identity(space.dim);
    let minus = [&id - &plus[0], &id - &plus[1]];
    let spectrum = space.spectrum(x);
    let mut total = 0.0;
    for xs in 0..2 {
        for a in Outcome::BOTH {
            let e = if a.is_plus() { &plus[xs] } else { &minus[xs] };
            let p_first: f64 = spectrum.iter().enumerate().map(|(k, l)| l * e[(k, k)].re).sum();
            let m = branch_operator(f, a, xs, &plus, &minus);
            let top = *linalg::hermitian_eigenvalues(&m).last().expect("non-empty");
            total += p_first * top;
        }
    }
    total
}

/// Builds the state and protocol encoded by `x`, choosing each post state as
/// the top eigenvector of its branch operator.
fn realize(f: &LinearFunctional, space: &Space, x: &[f64]) -> Result<(DensityMatrix, ProtocolPair)> {
    let plus = space.effects(x);
    let id = linalg::identity(space.dim);
    let minus = [&id - &plus[0], &id - &plus[1]];
    let mut rho = CMatrix::zeros(space.dim, space.dim);
    for (k, l) in space.spectrum(x).iter().enumerate() {
        rho[(k, k)] = Complex64::new(*l, 0.0);
    }
    let rho = DensityMatrix::from_unnormalized(rho)?;
    let post = |a: Outcome, xs: usize| -> Result<DensityMatrix> {
        let (_, vecs) = linalg::hermitian_eigh(&branch_operator(f, a, xs, &plus, &minus));
        DensityMatrix::pure(vecs.last().expect("non-empty"))
    };
    let meas = |xs: usize| -> Result<BinaryMeasurement> {
        BinaryMeasurement::new(Effect::new(plus[xs].clone())?, post(Outcome::Plus, xs)?, post(Outcome::Minus, xs)?)
    };
    Ok((rho, ProtocolPair::new(meas(0)?, meas(1)?)?))
}

fn check_space(dim: usize, purity: f64) -> Result<()> {
    if dim != 2 && dim != 3 {
        return Err(Error::domain(format!("dimension {dim} not in {{2, 3}}")));
    }
    let lo = 1.0 / dim as f64;
    if !(purity >= lo - 1e-12 && purity <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("purity {purity} outside [{lo}, 1]")));
    }
    Ok(())
}

/// Largest value of `f` over all protocols acting on an initial state of the
/// given purity. The closed form is filled in only for `B1` on a qubit.
pub fn maximize_linear_functional(
    f: &LinearFunctional,
    dim: usize,
    purity: f64,
    restarts: usize,
    seed: u64,
) -> Result<OptimizationReport> {
    check_space(dim, purity)?;
    if restarts == 0 {
        return Err(Error::domain("restarts must be at least 1"));
    }
    let purity = purity.clamp(1.0 / dim as f64, 1.0);
    let space = Space::new(dim, purity);
    let objective = |x: &[f64]| value(f, &space, x);
    let nm = NelderMead { max_evals: 60_000, ..NelderMead::default() };
    let best = multistart(&objective, &space.bounds(), restarts, seed, &nm);
    let (rho, protocol) = realize(f, &space, &best.x)?;
    let achieved = sequence::evaluate_functional(f, &sequence::correlations(&rho, &protocol)?);
    let closed = if dim == 2 && f.is_b1() {
        Some(witness::b1_max_initial((2.0 * purity - 1.0).max(0.0).sqrt())?)
    } else {
        None
    };
    Ok(OptimizationReport::new(achieved, best.x, closed, restarts, seed))
}

/// Per-purity maxima of `f`; every purity reuses the same seeded restarts.
pub fn monotonicity_sweep(
    f: &LinearFunctional,
    dim: usize,
    purities: &[f64],
    restarts: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    if purities.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput("purities must be sorted ascending".into()));
    }
    for &p in purities {
        check_space(dim, p)?;
    }
    purities
        .iter()
        .map(|&p| maximize_linear_functional(f, dim, p, restarts, seed).map(|r| (p, r.best_value)))
        .collect()
}
