use serde::{Deserialize, Serialize};

use super::counts::CountsRecord;
use crate::error::{Error, Result};
use crate::sequence::{self, Outcome};

/// Point estimate of `B1` and its one-sided lower confidence limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B1Estimate {
    pub b1_hat: f64,
    pub b1_lower_conf: f64,
    /// Total half-width subtracted from `b1_hat`.
    pub width: f64,
}

/// Hoeffding half-width for one setting with `n` shots, union-bounded over
/// the four settings: `sqrt(ln(8/delta) / (2 n))`.
pub fn hoeffding_width(n: u64, delta: f64) -> f64 {
    ((8.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

pub fn estimate_b1(rec: &CountsRecord, delta: f64) -> Result<B1Estimate> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta = {delta} outside (0, 1)")));
    }
    let b1_hat = sequence::b1(&rec.empirical_table());
    let width: f64 = (0..2)
        .flat_map(|x| (0..2).map(move |y| (x, y)))
        .map(|(x, y)| hoeffding_width(rec.shots(x, y), delta))
        .sum();
    Ok(B1Estimate { b1_hat, b1_lower_conf: b1_hat - width, width })
}

/// The four empirical terms of `B1`, in the order `++|00`, `++|11`, `+-|01`, `+-|10`.
pub fn b1_terms(rec: &CountsRecord) -> [f64; 4] {
    use Outcome::{Minus, Plus};
    [
        rec.setting(0, 0).frequency(Plus, Plus),
        rec.setting(1, 1).frequency(Plus, Plus),
        rec.setting(0, 1).frequency(Plus, Minus),
        rec.setting(1, 0).frequency(Plus, Minus),
    ]
}
