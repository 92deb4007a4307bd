//! The catalog of concatenation witnesses: DFA pairs attaining the worst-case
//! state complexity of concatenation within a language class, their claimed
//! reachable-state counts, and the construction-set certificates that prove
//! reachability.

mod catalog;
mod certs;
mod verify;

pub use catalog::{build_family, claimed_count, Family, Params};
pub use certs::{build_certificate, expected_via};
pub use verify::{sweep, sweep_tsv, verify_family, CertificateReport, FamilyReport, SweepRow, SWEEP_COLUMNS};
