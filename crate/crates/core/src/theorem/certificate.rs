use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::indices::{index_report, IndexError, IndexReport};
use crate::io::graph6::{self, Graph6Error};

/// Self-contained evidence that a graph has `M1/n > M2/m`. Every number is
/// recomputed from `graph6` on verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub graph6: String,
    pub n: u64,
    pub m: u64,
    pub m1: i128,
    pub m2: i128,
    pub gap: i128,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("cannot decode graph: {0}")]
    Decode(#[from] Graph6Error),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("claimed {field} = {claimed}, recomputed {actual}")]
    MismatchedClaim { field: &'static str, claimed: i128, actual: i128 },
    #[error("gap {0} is not positive")]
    NotViolation(i128),
}

impl CounterexampleCertificate {
    /// Builds a certificate from a graph. The claim is not checked here.
    pub fn from_graph(g: &Graph, provenance: impl Into<String>) -> Result<Self, CertificateError> {
        let r = index_report(g)?;
        Ok(CounterexampleCertificate {
            graph6: graph6::encode(g)?,
            n: r.n,
            m: r.m,
            m1: r.m1,
            m2: r.m2,
            gap: r.gap,
            provenance: provenance.into(),
        })
    }
}

/// Recomputes every claimed quantity; accepts only exact matches with a
/// positive gap.
pub fn verify_certificate(cert: &CounterexampleCertificate) -> Result<IndexReport, CertificateError> {
    let g = graph6::decode(&cert.graph6)?;
    let r = index_report(&g)?;
    let claims = [
        ("n", cert.n as i128, r.n as i128),
        ("m", cert.m as i128, r.m as i128),
        ("m1", cert.m1, r.m1),
        ("m2", cert.m2, r.m2),
        ("gap", cert.gap, r.gap),
    ];
    for (field, claimed, actual) in claims {
        if claimed != actual {
            return Err(CertificateError::MismatchedClaim { field, claimed, actual });
        }
    }
    if r.gap <= 0 {
        return Err(CertificateError::NotViolation(r.gap));
    }
    Ok(r)
}
