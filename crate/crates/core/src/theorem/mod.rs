//! Checks of the comparison theorem: the closed-form table, per-graph
//! verdicts with equality classification, the necessary conditions for a
//! violation, and counterexample certificates.

pub mod certificate;
pub mod table;
pub mod verdict;

pub use certificate::{verify_certificate, CertificateError, CounterexampleCertificate};
pub use table::{
    table1_value, verify_rows, verify_table1, TableMismatch, TableRow, TableVerification, TABLE1,
};
pub use verdict::{
    classify_conjecture, corollary_conditions, ConjectureStatus, ConjectureVerdict, CorollaryReport,
    EqualityClass, TheoremError,
};
