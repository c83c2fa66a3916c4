//! The full search: histograms, then realizations, then (when connectivity
//! is required) annealing under the connectivity constraint.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::canon::{canonical_form, CanonicalForm};
use super::histogram::{histogram_search_report, HistogramCandidate};
use super::local::local_search;
use super::realize::realize_histogram;
use super::{SearchConfig, SearchError};
use crate::theorem::{verify_certificate, CounterexampleCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub histograms: Vec<HistogramCandidate>,
    pub nodes: u64,
    pub exhaustive_orders: Vec<usize>,
    pub sampled_orders: Vec<usize>,
    pub realization_failures: usize,
    /// Histograms whose realizations could not be made connected with a
    /// positive gap.
    pub connectivity_failures: usize,
    /// Verified, pairwise non-isomorphic, in canonical order.
    pub certificates: Vec<CounterexampleCertificate>,
}

enum Attempt {
    Found(CanonicalForm, CounterexampleCertificate),
    RealizationFailed,
    NotConnected,
}

fn attempt(c: &HistogramCandidate, index: usize, cfg: &SearchConfig) -> Result<Attempt, SearchError> {
    let seed = cfg.seed.wrapping_add(index as u64);
    let g = match realize_histogram(&c.histogram, seed) {
        Ok(g) => g,
        Err(SearchError::RealizationFailure(_)) => return Ok(Attempt::RealizationFailed),
        Err(e) => return Err(e),
    };
    let (graph, label) = if cfg.connected && !g.is_connected() {
        let local = SearchConfig { seed, ..cfg.clone() };
        let out = local_search(&g, &local)?;
        if !(out.violation && out.connected) {
            return Ok(Attempt::NotConnected);
        }
        (out.best, "histogram realization, connected by annealing")
    } else if g.is_connected() {
        (g, "histogram realization")
    } else {
        (g, "histogram realization (disconnected)")
    };
    let canon = canonical_form(&graph);
    let cert = CounterexampleCertificate::from_graph(
        &canon.to_graph(),
        format!("{label}, n = {}, histogram #{index}", c.n),
    )?;
    verify_certificate(&cert)?;
    Ok(Attempt::Found(canon, cert))
}

pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let report = histogram_search_report(cfg)?;
    let attempts: Vec<Result<Attempt, SearchError>> =
        report.candidates.par_iter().enumerate().map(|(i, c)| attempt(c, i, cfg)).collect();
    let mut pool = BTreeMap::new();
    let mut realization_failures = 0;
    let mut connectivity_failures = 0;
    for a in attempts {
        match a? {
            Attempt::Found(canon, cert) => {
                pool.entry(canon).or_insert(cert);
            }
            Attempt::RealizationFailed => realization_failures += 1,
            Attempt::NotConnected => connectivity_failures += 1,
        }
    }
    Ok(SearchOutcome {
        histograms: report.candidates,
        nodes: report.nodes,
        exhaustive_orders: report.exhaustive_orders,
        sampled_orders: report.sampled_orders,
        realization_failures,
        connectivity_failures,
        certificates: pool.into_values().collect(),
    })
}
