//! Counterexample search.
//!
//! The gap depends only on the edge-class histogram, so the search runs in
//! two levels: histograms first (`histogram`), then graphs realizing them
//! (`realize`), refined by degree-preserving swaps (`local`). Everything a
//! search emits as a violation has passed `verify_certificate`.

pub mod canon;
pub mod count;
pub mod histogram;
pub mod local;
pub mod pipeline;
pub mod realize;
pub mod swap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeClass, GraphError};
use crate::indices::IndexError;
use crate::theorem::CertificateError;

pub use canon::{canonical_form, CanonicalForm};
pub use count::{count_distinct, DistinctCount};
pub use histogram::{
    histogram_gap, histogram_search, histogram_search_report, HistogramCandidate, HistogramSearchReport,
};
pub use local::{local_search, LocalSearchOutcome, TracePoint};
pub use pipeline::{run_search, SearchOutcome};
pub use realize::{havel_hakimi, realize_histogram};
pub use swap::{double_edge_swap, SwapGraph, SwapMove};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Inconsistent(#[from] GraphError),
    #[error("realization failed: {0}")]
    RealizationFailure(String),
    #[error("invalid swap: {0}")]
    InvalidSwap(String),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Stop at the smallest order that has any violating histogram.
    MinimizeOrder,
    /// Keep only the largest-gap histograms at each order.
    MaximizeGapAtOrder,
    /// Keep every violating histogram at each order.
    CountAtOrder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Inclusive degree bounds `[lo, hi]`.
    pub window: (usize, usize),
    pub order_min: usize,
    pub order_max: usize,
    pub objective: Objective,
    pub connected: bool,
    /// Classes that must not occur.
    pub forbidden_classes: Vec<EdgeClass>,
    /// In window `[2,5]`, require `m_{2,5} > 0` and `m_{3,3} > 0`, which every
    /// violating graph with those extreme degrees satisfies.
    pub corollary_filter: bool,
    pub swap_budget: u64,
    pub restarts: u32,
    pub seed: u64,
    /// Largest order enumerated exhaustively; above it histograms are
    /// sampled by hill-climbing.
    pub exhaustive_limit: usize,
    pub max_results: usize,
    /// Temperature multiplier per annealing step.
    pub cooling: f64,
    /// Starting temperature, in units of gap.
    pub initial_temperature: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            window: (2, 5),
            order_min: 2,
            order_max: 11,
            objective: Objective::CountAtOrder,
            connected: false,
            forbidden_classes: Vec::new(),
            corollary_filter: true,
            swap_budget: 20_000,
            restarts: 4,
            seed: 0,
            exhaustive_limit: 60,
            max_results: 1000,
            cooling: 0.999,
            initial_temperature: 50.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: String| Err(SearchError::InvalidConfig(msg));
        let (lo, hi) = self.window;
        if lo < 1 || hi > 8 || lo > hi {
            return bad(format!("degree window [{lo},{hi}] must satisfy 1 <= lo <= hi <= 8"));
        }
        if self.order_min < 2 || self.order_min > self.order_max {
            return bad(format!(
                "order range {}..={} must be nonempty and start at 2 or more",
                self.order_min, self.order_max
            ));
        }
        if self.order_max > crate::graph::MAX_ORDER {
            return bad(format!("order_max {} is too large", self.order_max));
        }
        if self.swap_budget == 0 || self.restarts == 0 || self.max_results == 0 {
            return bad("swap_budget, restarts and max_results must be positive".into());
        }
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad(format!("cooling {} must lie in (0, 1]", self.cooling));
        }
        if !(self.initial_temperature >= 0.0 && self.initial_temperature.is_finite()) {
            return bad(format!(
                "initial temperature {} must be finite and nonnegative",
                self.initial_temperature
            ));
        }
        Ok(())
    }

    pub fn allows_class(&self, class: EdgeClass) -> bool {
        let (lo, hi) = self.window;
        class.0 >= lo && class.1 <= hi && !self.forbidden_classes.contains(&class)
    }

    fn applies_corollary(&self) -> bool {
        self.corollary_filter && self.window == (2, 5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let mut c = SearchConfig { window: (0, 3), ..Default::default() };
        assert!(c.validate().is_err());
        c.window = (3, 9);
        assert!(c.validate().is_err());
        c.window = (4, 3);
        assert!(c.validate().is_err());
        c = SearchConfig { swap_budget: 0, ..Default::default() };
        assert!(c.validate().is_err());
        c = SearchConfig { order_min: 12, ..Default::default() };
        assert!(c.validate().is_err());
        c = SearchConfig { cooling: 1.5, ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let c = SearchConfig { forbidden_classes: vec![(3, 3)], ..Default::default() };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<SearchConfig>(&text).unwrap(), c);
    }
}
