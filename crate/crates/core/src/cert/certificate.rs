use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::counts::CountsRecord;
use super::estimate::{estimate_b1, B1Estimate};
use crate::error::{Error, Result};
use crate::witness::{self, ConcurrenceBound, PurityBound, QUBIT_B1_MAX};

pub const CONFIDENCE_METHOD: &str =
    "two-sided Hoeffding interval per setting, union bound over the four settings; \
     finite-statistics layer added on top of the exact witness bounds";

/// A bound evaluated at the point estimate and at the lower confidence limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounded<T> {
    pub point: T,
    pub confident: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFlags {
    /// The confidence-adjusted purity bound is the trivial `1/2`.
    pub purity_trivial: bool,
    /// The confidence-adjusted concurrence bound is the trivial `1`.
    pub concurrence_trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the canonical counts JSON.
    pub input_digest: String,
    pub tool_version: String,
    pub confidence_method: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub label: String,
    pub b1_hat: f64,
    pub b1_lower_conf: f64,
    /// Failure probability `delta` of the confidence statement.
    pub confidence: f64,
    /// Headline: the confidence-adjusted purity lower bound.
    pub purity_lower: f64,
    pub purity_bound: Bounded<PurityBound>,
    pub concurrence_bound: Bounded<ConcurrenceBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_initial_purity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub postmeas_bound: Option<Bounded<PurityBound>>,
    pub flags: CertificateFlags,
    pub provenance: Provenance,
}

impl WitnessCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed certificate JSON: {e}")))
    }
}

pub fn input_digest(rec: &CountsRecord) -> String {
    hex::encode(Sha256::digest(rec.to_json().as_bytes()))
}

/// Certificate from counts at failure probability `delta`.
pub fn certify(rec: &CountsRecord, delta: f64) -> Result<WitnessCertificate> {
    let est = estimate_b1(rec, delta)?;
    certify_estimate(rec, &est, delta)
}

/// Certificate from an already computed estimate.
pub fn certify_estimate(rec: &CountsRecord, est: &B1Estimate, delta: f64) -> Result<WitnessCertificate> {
    if est.b1_lower_conf > QUBIT_B1_MAX {
        return Err(Error::QubitAssumption(est.b1_lower_conf));
    }
    // Sampling noise can push the point estimate past 3 while the confident
    // value stays compatible with a qubit.
    let point = est.b1_hat.min(QUBIT_B1_MAX);
    let confident = est.b1_lower_conf.max(0.0);

    let purity_bound = Bounded {
        point: witness::purity_lower_bound(point)?,
        confident: witness::purity_lower_bound(confident)?,
    };
    let concurrence_bound = Bounded {
        point: witness::concurrence_upper_from_b1(point)?,
        confident: witness::concurrence_upper_from_b1(confident)?,
    };
    let postmeas_bound = match rec.claimed_initial_purity {
        None => None,
        Some(purity) => {
            let p = (2.0 * purity - 1.0).max(0.0).sqrt();
            let ceiling = witness::b1_max_initial(p)?;
            Some(Bounded {
                point: witness::postmeasurement_purity_bound(point.min(ceiling), purity)?,
                confident: witness::postmeasurement_purity_bound(confident, purity)?,
            })
        }
    };
    Ok(WitnessCertificate {
        label: rec.label.clone(),
        b1_hat: est.b1_hat,
        b1_lower_conf: est.b1_lower_conf,
        confidence: delta,
        purity_lower: purity_bound.confident.purity_lower,
        flags: CertificateFlags {
            purity_trivial: purity_bound.confident.trivial,
            concurrence_trivial: concurrence_bound.confident.upper >= 1.0,
        },
        purity_bound,
        concurrence_bound,
        claimed_initial_purity: rec.claimed_initial_purity,
        postmeas_bound,
        provenance: Provenance {
            input_digest: input_digest(rec),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            confidence_method: CONFIDENCE_METHOD.to_string(),
        },
    })
}
