//! Two-step sequential measurements: correlation tables, the `B1` witness,
//! general linear functionals and the canonical protocols that reach the
//! known maxima.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};
use crate::optimizer::params::QubitEffectParams;
use crate::quantum::linalg::{self, CMatrix};
use crate::quantum::{random_density_with, BinaryMeasurement, BlochState, DensityMatrix, Effect};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Outcome::Plus
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }
}

/// Storage layout shared by tables and functionals: `[x][y][a][b]`.
pub type Grid = [[[[f64; 2]; 2]; 2]; 2];

/// The sixteen probabilities `p(ab|xy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable {
    probs: Grid,
}

impl CorrelationTable {
    pub fn new(probs: Grid) -> Result<Self> {
        for x in 0..2 {
            for y in 0..2 {
                let slice = probs[x][y];
                let mut sum = 0.0;
                for row in slice {
                    for p in row {
                        if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                            return Err(Error::InvalidInput(format!("p(ab|{x}{y}) = {p} outside [0, 1]")));
                        }
                        sum += p;
                    }
                }
                if (sum - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidInput(format!("setting ({x},{y}) sums to {sum}")));
                }
            }
        }
        Ok(Self { probs })
    }

    /// `p(ab|xy)`.
    pub fn get(&self, a: Outcome, b: Outcome, x: usize, y: usize) -> f64 {
        self.probs[x][y][a.index()][b.index()]
    }

    pub fn grid(&self) -> &Grid {
        &self.probs
    }

    /// Marginal of the first outcome, `p(a|x)`.
    pub fn first_marginal(&self, a: Outcome, x: usize) -> f64 {
        Outcome::BOTH.iter().map(|&b| self.get(a, b, x, 0)).sum()
    }
}

/// Weights `alpha_{abxy}` of `R = sum alpha_{abxy} p(ab|xy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    weights: Grid,
}

impl LinearFunctional {
    pub fn new(weights: Grid) -> Result<Self> {
        if weights.iter().flatten().flatten().flatten().any(|w| !w.is_finite()) {
            return Err(Error::InvalidInput("functional weights must be finite".into()));
        }
        Ok(Self { weights })
    }

    pub fn from_fn(mut f: impl FnMut(Outcome, Outcome, usize, usize) -> f64) -> Result<Self> {
        let mut w = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                for a in Outcome::BOTH {
                    for b in Outcome::BOTH {
                        w[x][y][a.index()][b.index()] = f(a, b, x, y);
                    }
                }
            }
        }
        Self::new(w)
    }

    /// `p(++|00) + p(++|11) + p(+-|01) + p(+-|10)`.
    pub fn b1() -> Self {
        let mut w = [[[[0.0; 2]; 2]; 2]; 2];
        w[0][0][0][0] = 1.0;
        w[1][1][0][0] = 1.0;
        w[0][1][0][1] = 1.0;
        w[1][0][0][1] = 1.0;
        Self { weights: w }
    }

    pub fn constant(value: f64) -> Self {
        Self { weights: [[[[value; 2]; 2]; 2]; 2] }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn weight(&self, a: Outcome, b: Outcome, x: usize, y: usize) -> f64 {
        self.weights[x][y][a.index()][b.index()]
    }

    pub fn is_b1(&self) -> bool {
        *self == Self::b1()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().flatten().flatten().flatten().all(|&w| w == 0.0)
    }
}

pub fn evaluate_functional(f: &LinearFunctional, table: &CorrelationTable) -> f64 {
    let mut acc = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    acc += f.weights[x][y][a][b] * table.probs[x][y][a][b];
                }
            }
        }
    }
    acc
}

pub fn b1(table: &CorrelationTable) -> f64 {
    use Outcome::{Minus, Plus};
    table.get(Plus, Plus, 0, 0) + table.get(Plus, Plus, 1, 1) + table.get(Plus, Minus, 0, 1) + table.get(Plus, Minus, 1, 0)
}

/// The two measurement settings, reused unchanged at both time steps.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolPair {
    measurements: [BinaryMeasurement; 2],
}

impl ProtocolPair {
    pub fn new(meas0: BinaryMeasurement, meas1: BinaryMeasurement) -> Result<Self> {
        if meas0.dim() != meas1.dim() {
            return Err(Error::dim(meas0.dim(), meas1.dim()));
        }
        Ok(Self { measurements: [meas0, meas1] })
    }

    pub fn dim(&self) -> usize {
        self.measurements[0].dim()
    }

    pub fn measurement(&self, x: usize) -> &BinaryMeasurement {
        &self.measurements[x]
    }

    /// Relabels setting 0 as 1 and vice versa.
    pub fn swapped(&self) -> Self {
        let [m0, m1] = self.measurements.clone();
        Self { measurements: [m1, m0] }
    }
}

/// `p(ab|xy) = tr(E_{a|x} rho) tr(E_{b|y} rho_{a|x})`.
///
/// The conditional state is always the stored post-measurement state, so an
/// outcome of probability zero simply contributes zero.
pub fn correlations(rho_in: &DensityMatrix, protocol: &ProtocolPair) -> Result<CorrelationTable> {
    if rho_in.dim() != protocol.dim() {
        return Err(Error::dim(protocol.dim(), rho_in.dim()));
    }
    let mut probs = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        let mx = protocol.measurement(x);
        for a in Outcome::BOTH {
            let p_first = mx.effect(a.is_plus()).probability(rho_in);
            let post = mx.post(a.is_plus());
            for y in 0..2 {
                let my = protocol.measurement(y);
                for b in Outcome::BOTH {
                    let p_second = my.effect(b.is_plus()).probability(post);
                    probs[x][y][a.index()][b.index()] = p_first * p_second;
                }
            }
        }
    }
    CorrelationTable::new(probs)
}

/// Initial state `Bloch(p, +z)`; setting 0 always answers "+" and prepares
/// `Bloch(w, -z)`; setting 1 measures `sigma_z` and prepares `Bloch(w, +z)`
/// for both outcomes.
pub fn theorem2_protocol(p: f64, w: f64) -> Result<(DensityMatrix, ProtocolPair)> {
    check_range("p", p, 0.0, 1.0)?;
    check_range("w", w, 0.0, 1.0)?;
    let rho = BlochState::new(p, [0.0, 0.0, 1.0])?.to_density();
    let meas0 = BinaryMeasurement::deterministic_plus(BlochState::new(w, [0.0, 0.0, -1.0])?.to_density());
    let up = BlochState::new(w, [0.0, 0.0, 1.0])?.to_density();
    let meas1 = BinaryMeasurement::new(Effect::new(linalg::basis_projector(2, 0))?, up.clone(), up)?;
    Ok((rho, ProtocolPair::new(meas0, meas1)?))
}

fn diagonal_effect(diag: &[f64]) -> Result<Effect> {
    let d = diag.len();
    let mut m = CMatrix::zeros(d, d);
    for (k, &v) in diag.iter().enumerate() {
        m[(k, k)] = num_complex::Complex64::new(v, 0.0);
    }
    Effect::new(m)
}

/// Qutrit protocol reaching `B1 = 4` on `|0>`.
pub fn qutrit_value4_protocol() -> Result<(DensityMatrix, ProtocolPair)> {
    let mixed = DensityMatrix::maximally_mixed(3)?;
    let meas0 = BinaryMeasurement::new(diagonal_effect(&[1.0, 1.0, 0.0])?, DensityMatrix::basis(3, 1)?, mixed.clone())?;
    let meas1 = BinaryMeasurement::new(diagonal_effect(&[1.0, 0.0, 1.0])?, DensityMatrix::basis(3, 2)?, mixed)?;
    Ok((DensityMatrix::basis(3, 0)?, ProtocolPair::new(meas0, meas1)?))
}

/// Maximally mixed qudit with `E_{+|0} = 1 - |1><1|` preparing `|0>` and
/// `E_{+|1} = 1 - |0><0|` preparing `|1>`; reaches `4 (1 - 1/d)`.
pub fn qudit_maxmixed_protocol(d: usize) -> Result<(DensityMatrix, ProtocolPair)> {
    if d < 4 {
        return Err(Error::domain(format!("dimension {d} < 4")));
    }
    let mixed = DensityMatrix::maximally_mixed(d)?;
    let mut e0 = vec![1.0; d];
    e0[1] = 0.0;
    let mut e1 = vec![1.0; d];
    e1[0] = 0.0;
    let meas0 = BinaryMeasurement::new(diagonal_effect(&e0)?, DensityMatrix::basis(d, 0)?, mixed.clone())?;
    let meas1 = BinaryMeasurement::new(diagonal_effect(&e1)?, DensityMatrix::basis(d, 1)?, mixed.clone())?;
    Ok((mixed, ProtocolPair::new(meas0, meas1)?))
}

/// Random qubit measurement: effect drawn inside the `(r, q, v)` family,
/// post-measurement states from [`random_density_with`] with random rank.
pub fn random_qubit_measurement<R: Rng + ?Sized>(rng: &mut R) -> Result<BinaryMeasurement> {
    let effect = QubitEffectParams::sample(rng).effect();
    let r1 = rng.random_range(1..=2);
    let r2 = rng.random_range(1..=2);
    BinaryMeasurement::new(effect, random_density_with(rng, 2, r1)?, random_density_with(rng, 2, r2)?)
}

pub fn random_qubit_protocol<R: Rng + ?Sized>(rng: &mut R) -> Result<ProtocolPair> {
    ProtocolPair::new(random_qubit_measurement(rng)?, random_qubit_measurement(rng)?)
}
