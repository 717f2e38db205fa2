//! Semi-device-independent purity and concurrence witnesses built from
//! two-step sequential measurements.
//!
//! The crate simulates measure-and-prepare sequences on qubits and small
//! qudits ([`sequence`]), evaluates the closed-form bounds that turn an
//! observed value of the witness `B1` into purity and concurrence statements
//! ([`witness`]), checks those closed forms by direct numerical maximization
//! ([`optimizer`]), and wraps everything into certificates computed from
//! finite counts ([`cert`]).

// Settings are indexed by their labels x, y, a, b; negated comparisons reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cert;
pub mod error;
pub mod optimizer;
pub mod quantum;
pub mod sequence;
pub mod witness;

pub use error::{Error, Result};
