use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix};
use crate::quantum::{Effect, EQ_TOL};

/// Qubit effect `E_+ = r 1 + q v . sigma` with `0 <= q <= r <= 1 - q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitEffectParams {
    pub r: f64,
    pub q: f64,
    pub v: [f64; 3],
}

impl QubitEffectParams {
    pub fn new(r: f64, q: f64, v: [f64; 3]) -> Result<Self> {
        let ok = q >= -EQ_TOL && q <= r + EQ_TOL && r <= 1.0 - q + EQ_TOL;
        if !ok || !r.is_finite() || !q.is_finite() {
            return Err(Error::InvalidInput(format!("need 0 <= q <= r <= 1 - q, got r = {r}, q = {q}")));
        }
        check_unit(v)?;
        Ok(Self { r, q, v })
    }

    /// Maps the unit square onto the admissible `(r, q)` triangle:
    /// `q = s * min(r, 1 - r)`.
    pub fn from_unit_box(r: f64, s: f64, v: [f64; 3]) -> Self {
        let r = r.clamp(0.0, 1.0);
        let q = s.clamp(0.0, 1.0) * r.min(1.0 - r);
        Self { r, q, v }
    }

    /// Always "+".
    pub fn deterministic() -> Self {
        Self { r: 1.0, q: 0.0, v: [0.0, 0.0, 1.0] }
    }

    /// Projector `(1 + v . sigma) / 2`.
    pub fn projective(v: [f64; 3]) -> Self {
        Self { r: 0.5, q: 0.5, v }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let r: f64 = rng.random();
        let s: f64 = rng.random();
        Self::from_unit_box(r, s, random_unit_vector(rng))
    }

    pub fn matrix(&self) -> CMatrix {
        linalg::bloch_operator(self.r, [self.v[0] * self.q, self.v[1] * self.q, self.v[2] * self.q])
    }

    pub fn effect(&self) -> Effect {
        Effect::from_trusted(self.matrix())
    }
}

/// Qudit effect `E_+ = a (1_2 + b c . sigma) (+) 1_{d-2}`, with `0 <= b <= 1`
/// and `0 <= a <= 1 / (1 + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuditEffectParams {
    pub a: f64,
    pub b: f64,
    pub c: [f64; 3],
    pub dim: usize,
}

impl QuditEffectParams {
    pub fn new(a: f64, b: f64, c: [f64; 3], dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!("qudit dimension {dim} < 2")));
        }
        if !(-EQ_TOL..=1.0 + EQ_TOL).contains(&b) {
            return Err(Error::InvalidInput(format!("b = {b} outside [0, 1]")));
        }
        if !(a >= -EQ_TOL && a <= 1.0 / (1.0 + b) + EQ_TOL) {
            return Err(Error::InvalidInput(format!("a = {a} outside [0, 1/(1+b)]")));
        }
        check_unit(c)?;
        Ok(Self { a, b, c, dim })
    }

    /// `a = t / (1 + b)` for `t` in the unit interval.
    pub fn from_unit_box(t: f64, b: f64, c: [f64; 3], dim: usize) -> Self {
        let b = b.clamp(0.0, 1.0);
        Self { a: t.clamp(0.0, 1.0) / (1.0 + b), b, c, dim }
    }

    /// Boundary family `a = 1 / (1 + b)` where `E_-` is proportional to a projector.
    pub fn proportional_projector(b: f64, c: [f64; 3], dim: usize) -> Self {
        Self::from_unit_box(1.0, b, c, dim)
    }

    /// Prefactor `u = 1 - a (1 - b)` of `E_- = (u/2)(1_2 - c . sigma)` on the boundary family.
    pub fn u(&self) -> f64 {
        1.0 - self.a * (1.0 - self.b)
    }

    /// The qubit-subspace block as `r 1 + q v . sigma`.
    pub fn qubit_block(&self) -> QubitEffectParams {
        QubitEffectParams { r: self.a, q: self.a * self.b, v: self.c }
    }

    pub fn matrix(&self) -> CMatrix {
        let block = linalg::bloch_operator(1.0, [self.c[0] * self.b, self.c[1] * self.b, self.c[2] * self.b])
            * Complex64::new(self.a, 0.0);
        linalg::embed_qubit_block(&block, self.dim, 1.0)
    }

    pub fn effect(&self) -> Effect {
        Effect::from_trusted(self.matrix())
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        let t: f64 = rng.random();
        let b: f64 = rng.random();
        Self::from_unit_box(t, b, random_unit_vector(rng), dim)
    }
}

fn check_unit(v: [f64; 3]) -> Result<()> {
    let n2 = linalg::dot3(v, v);
    if (n2 - 1.0).abs() > EQ_TOL {
        return Err(Error::InvalidInput(format!("{v:?} is not a unit vector")));
    }
    Ok(())
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

/// Unit vector in the x-z plane at angle `theta` from +z.
pub fn xz_direction(theta: f64) -> [f64; 3] {
    [theta.sin(), 0.0, theta.cos()]
}

pub(crate) const THETA_RANGE: (f64, f64) = (0.0, PI);
