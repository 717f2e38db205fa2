use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optimizer::{self, qubit, OptimizationReport, QUBIT_TOL, SEARCH_TOL, SOUNDNESS_TOL};
use crate::sequence::LinearFunctional;
use crate::witness;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subject {
    Eq5,
    Theorem2,
    Qudit,
    Monotonicity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub p: f64,
    pub w: f64,
    pub d: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { p: 1.0, w: 1.0, d: 4, restarts: 100, seed: 0 }
    }
}

/// One JSON line of verification output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyLine {
    pub subject: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub report: OptimizationReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub lines: Vec<VerifyLine>,
    pub passed: bool,
}

/// Within `tol` of the closed form and never above it by more than the
/// soundness slack.
fn gap_ok(report: &OptimizationReport, tol: f64) -> bool {
    match report.gap {
        Some(g) => g.abs() <= tol && g >= -SOUNDNESS_TOL,
        None => true,
    }
}

fn line(subject: &str, report: OptimizationReport, tol: f64) -> VerifyLine {
    VerifyLine {
        subject: subject.to_string(),
        p: None,
        w: None,
        d: None,
        purity: None,
        strategy: None,
        tolerance: tol,
        pass: gap_ok(&report, tol),
        report,
    }
}

/// Names the strategy found by the qubit search.
pub fn strategy_label(p: f64, w: f64, params: &[f64]) -> &'static str {
    if w <= witness::branch_threshold(p) && qubit::is_deterministic(params) {
        "deterministic (always +)"
    } else {
        "sequential (state-dependent)"
    }
}

pub fn verify(subject: Subject, opts: &VerifyOptions) -> Result<VerifyOutcome> {
    let mut lines = Vec::new();
    match subject {
        Subject::Eq5 => {
            for k in 0..=10 {
                let p = k as f64 / 10.0;
                let r = optimizer::maximize_b1_qubit(p, 1.0, opts.restarts, opts.seed)?;
                let mut l = line("eq5", r, QUBIT_TOL);
                l.p = Some(p);
                l.w = Some(1.0);
                lines.push(l);
            }
        }
        Subject::Theorem2 => {
            let r = optimizer::maximize_b1_qubit(opts.p, opts.w, opts.restarts, opts.seed)?;
            let strategy = strategy_label(opts.p, opts.w, &r.best_params);
            let mut l = line("theorem2", r, QUBIT_TOL);
            l.p = Some(opts.p);
            l.w = Some(opts.w);
            l.strategy = Some(strategy.to_string());
            lines.push(l);
        }
        Subject::Qudit => {
            let r = optimizer::maximize_b1_qudit_maxmixed(opts.d, opts.restarts, opts.seed)?;
            let mut l = line("qudit", r, SEARCH_TOL);
            l.d = Some(opts.d);
            lines.push(l);
        }
        Subject::Monotonicity => {
            let f = LinearFunctional::b1();
            let purities: Vec<f64> = (0..8).map(|k| 0.5 + 0.5 * k as f64 / 7.0).collect();
            let mut previous = f64::NEG_INFINITY;
            for &purity in &purities {
                let r = optimizer::maximize_linear_functional(&f, 2, purity, opts.restarts, opts.seed)?;
                let monotone = r.best_value >= previous - SEARCH_TOL;
                previous = r.best_value;
                let mut l = line("monotonicity", r, SEARCH_TOL);
                l.pass &= monotone;
                l.purity = Some(purity);
                l.d = Some(2);
                lines.push(l);
            }
        }
    }
    let passed = lines.iter().all(|l| l.pass);
    Ok(VerifyOutcome { lines, passed })
}
