//! Certificates from finite counts, surface export, simulated counts and
//! verification drivers behind the command-line tool.

pub mod certificate;
pub mod counts;
pub mod estimate;
pub mod simulate;
pub mod surface;
pub mod verify;

pub use certificate::{certify, Bounded, CertificateFlags, Provenance, WitnessCertificate};
pub use counts::{ingest_counts, write_counts, CountsRecord, SettingCounts};
pub use estimate::{estimate_b1, hoeffding_width, B1Estimate};
pub use simulate::{sample_counts, simulate, SimProtocol};
pub use surface::{export_surface, surface_csv, surface_rows};
pub use verify::{verify, Subject, VerifyLine, VerifyOptions, VerifyOutcome};
