//! Counting pairwise non-isomorphic counterexamples at a fixed order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::canon::{canonical_form, CanonicalForm};
use super::histogram::histogram_search;
use super::local::{repair_connectivity, swap_keeps_classes};
use super::realize::realize_histogram;
use super::swap::SwapGraph;
use super::{Objective, SearchConfig, SearchError};
use crate::graph::EdgeClassHistogram;
use crate::theorem::{verify_certificate, CounterexampleCertificate};

/// Graphs kept from each (histogram, restart) task.
pub const SNAPSHOTS_PER_TASK: usize = 4;

/// What the count means; carried in every result.
pub const COUNT_LABEL: &str = "lower bound on the number of isomorphism classes of verified counterexamples";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctCount {
    pub order: usize,
    pub lower_bound: usize,
    pub label: String,
    pub connected_required: bool,
    /// How many of the counted graphs are connected.
    pub connected_found: usize,
    pub histograms: usize,
    pub realization_failures: usize,
    /// One verified certificate per isomorphism class, in canonical order.
    pub certificates: Vec<CounterexampleCertificate>,
}

struct TaskResult {
    found: Vec<(CanonicalForm, CounterexampleCertificate, bool)>,
    failures: usize,
}

/// A realization of `h` followed by class-preserving swaps; snapshots along
/// the way are certified and returned with their canonical forms.
fn sample_histogram(h: &EdgeClassHistogram, index: usize, restart: u32, cfg: &SearchConfig) -> TaskResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(((index as u64) << 20) | restart as u64);
    let mut out = TaskResult { found: Vec::new(), failures: 0 };
    let Ok(g) = realize_histogram(h, rng.gen()) else {
        out.failures += 1;
        return out;
    };
    let mut work = SwapGraph::new(&g);
    let per_snapshot = (cfg.swap_budget / SNAPSHOTS_PER_TASK as u64).max(1);
    for _ in 0..SNAPSHOTS_PER_TASK {
        let mut connected = work.is_connected();
        for _ in 0..per_snapshot {
            let Some(mv) = work.propose(&mut rng) else { continue };
            if !swap_keeps_classes(&work, &mv) {
                continue;
            }
            work.apply(&mv);
            if cfg.connected && connected && !work.is_connected() {
                work.undo(&mv);
            }
        }
        if cfg.connected && !connected {
            connected = repair_connectivity(&mut work, cfg, true, cfg.swap_budget, &mut rng);
            if !connected {
                continue;
            }
        }
        let canon = canonical_form(&work.to_graph());
        let provenance = format!("histogram #{index}, restart {restart}");
        let Ok(cert) = CounterexampleCertificate::from_graph(&canon.to_graph(), provenance) else {
            continue;
        };
        if verify_certificate(&cert).is_ok() {
            out.found.push((canon, cert, connected));
        }
    }
    out
}

/// Realizes every violating histogram of the given order several times and
/// counts the distinct isomorphism classes among the verified results.
pub fn count_distinct(order: usize, cfg: &SearchConfig) -> Result<DistinctCount, SearchError> {
    let at_order = SearchConfig {
        order_min: order,
        order_max: order,
        objective: Objective::CountAtOrder,
        ..cfg.clone()
    };
    at_order.validate()?;
    let candidates = histogram_search(&at_order)?;
    let tasks: Vec<(usize, u32)> =
        (0..candidates.len()).flat_map(|i| (0..at_order.restarts).map(move |r| (i, r))).collect();
    let results: Vec<TaskResult> =
        tasks.par_iter().map(|&(i, r)| sample_histogram(&candidates[i].histogram, i, r, &at_order)).collect();

    let mut pool: BTreeMap<CanonicalForm, (CounterexampleCertificate, bool)> = BTreeMap::new();
    let mut failures = 0;
    for result in results {
        failures += result.failures;
        for (canon, cert, connected) in result.found {
            pool.entry(canon).or_insert((cert, connected));
        }
    }
    Ok(DistinctCount {
        order,
        lower_bound: pool.len(),
        label: COUNT_LABEL.into(),
        connected_required: cfg.connected,
        connected_found: pool.values().filter(|(_, c)| *c).count(),
        histograms: candidates.len(),
        realization_failures: failures,
        certificates: pool.into_values().map(|(cert, _)| cert).collect(),
    })
}
