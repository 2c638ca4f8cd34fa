//! Brute-force checks of published claims, reported rather than asserted.

mod claims;
mod report;

pub use claims::{
    audit_abstract_bound, audit_balls, audit_c2_growth, audit_char_radius, audit_delta_f,
    audit_example_lat, audit_totient, bench, bench_csv, resolve_claims, run_claims, AuditConfig,
    AuditError, BenchRow, ClaimParams, BENCH_METHODS, CLAIM_IDS, DEFAULT_SEED,
};
pub use report::{AuditReport, Verdict};
