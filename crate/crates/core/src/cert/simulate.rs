use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::counts::{CountsRecord, SettingCounts};
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::sequence::{self, CorrelationTable, ProtocolPair};

/// Canonical protocols that can be sampled into counts files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimProtocol {
    Theorem2 { p: f64, w: f64 },
    Qutrit4,
    QuditMaxMixed { d: usize },
}

impl SimProtocol {
    pub fn build(&self) -> Result<(DensityMatrix, ProtocolPair)> {
        match *self {
            SimProtocol::Theorem2 { p, w } => sequence::theorem2_protocol(p, w),
            SimProtocol::Qutrit4 => sequence::qutrit_value4_protocol(),
            SimProtocol::QuditMaxMixed { d } => sequence::qudit_maxmixed_protocol(d),
        }
    }

    pub fn table(&self) -> Result<CorrelationTable> {
        let (rho, protocol) = self.build()?;
        sequence::correlations(&rho, &protocol)
    }

    pub fn label(&self) -> String {
        match *self {
            SimProtocol::Theorem2 { p, w } => format!("theorem2 p={p} w={w}"),
            SimProtocol::Qutrit4 => "qutrit4".to_string(),
            SimProtocol::QuditMaxMixed { d } => format!("quditmm d={d}"),
        }
    }
}

/// Multinomial sample of `shots` outcomes from probabilities summing to one,
/// drawn as a chain of conditional binomials.
pub fn sample_multinomial(rng: &mut ChaCha8Rng, probs: &[f64], shots: u64) -> Vec<u64> {
    let mut counts = vec![0u64; probs.len()];
    let mut left = shots;
    let mut mass = 1.0;
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if k + 1 == probs.len() {
            counts[k] = left;
            break;
        }
        let q = if mass > 0.0 { (p.max(0.0) / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = Binomial::new(left, q).expect("probability in [0, 1]").sample(rng);
        counts[k] = n;
        left -= n;
        mass -= p.max(0.0);
    }
    counts
}

/// Samples `shots` runs of every setting pair from `table`.
pub fn sample_counts(table: &CorrelationTable, shots: u64, seed: u64, label: impl Into<String>) -> Result<CountsRecord> {
    if shots == 0 {
        return Err(Error::domain("shots must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut settings = [[SettingCounts::default(); 2]; 2];
    for (x, row) in settings.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            let g = table.grid()[x][y];
            let n = sample_multinomial(&mut rng, &[g[0][0], g[0][1], g[1][0], g[1][1]], shots);
            *slot = SettingCounts::new(n[0], n[1], n[2], n[3]);
        }
    }
    CountsRecord::new(label, None, settings)
}

pub fn simulate(protocol: SimProtocol, shots: u64, seed: u64) -> Result<CountsRecord> {
    let label = format!("{} shots={shots} seed={seed}", protocol.label());
    sample_counts(&protocol.table()?, shots, seed, label)
}
