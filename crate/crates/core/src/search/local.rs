//! Degree-preserving local search. Swaps keep `n`, `m` and `M1`, so the gap
//! moves by `−n·ΔM2` and minimizing `M2` is the whole game.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::swap::SwapGraph;
use super::{SearchConfig, SearchError};
use crate::graph::{edge_class, Graph};
use crate::indices::{index_report, IndexReport};
use crate::theorem::{verify_certificate, CounterexampleCertificate};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: u64,
    pub gap: i128,
    pub temperature: f64,
}

#[derive(Debug, Clone)]
pub struct LocalSearchOutcome {
    pub best: Graph,
    pub report: IndexReport,
    pub violation: bool,
    pub connected: bool,
    /// Present exactly when `violation`; already verified.
    pub certificate: Option<CounterexampleCertificate>,
    /// No violation was reached within the swap budget.
    pub budget_exhausted: bool,
    pub restart: u32,
    pub steps: u64,
    pub accepted: u64,
    /// Best gap after each improvement of the winning restart.
    pub trace: Vec<TracePoint>,
}

struct RunResult {
    best: Graph,
    best_gap: i128,
    connected: bool,
    steps: u64,
    accepted: u64,
    trace: Vec<TracePoint>,
}

/// Checks that `g` fits the window and uses no forbidden class.
pub fn check_start(g: &Graph, cfg: &SearchConfig) -> Result<(), SearchError> {
    let (lo, hi) = cfg.window;
    let (min, max) = g.degree_extremes();
    if min < lo || max > hi {
        return Err(SearchError::InvalidConfig(format!(
            "start graph has degrees {min}..={max}, outside window [{lo},{hi}]"
        )));
    }
    for (u, v) in g.edges() {
        let class = edge_class(g.degree(u), g.degree(v));
        if !cfg.allows_class(class) {
            return Err(SearchError::InvalidConfig(format!(
                "start graph already has forbidden class {class:?}"
            )));
        }
    }
    Ok(())
}

fn swap_allowed(work: &SwapGraph, cfg: &SearchConfig, new: &[(usize, usize); 2]) -> bool {
    cfg.forbidden_classes.is_empty()
        || new.iter().all(|&(a, b)| cfg.allows_class(edge_class(work.degree(a), work.degree(b))))
}

/// Merges components with swaps, accepting only swaps that lower the
/// component count and respect the forbidden classes. With
/// `keep_histogram`, only swaps that keep every class count are used.
/// Returns whether the graph ended connected.
pub fn repair_connectivity<R: Rng + ?Sized>(
    work: &mut SwapGraph,
    cfg: &SearchConfig,
    keep_histogram: bool,
    budget: u64,
    rng: &mut R,
) -> bool {
    let mut components = work.component_count();
    let mut attempts = 0;
    while components > 1 && attempts < budget {
        attempts += 1;
        let Some(mv) = work.propose(rng) else { continue };
        if !swap_allowed(work, cfg, &mv.new) {
            continue;
        }
        if keep_histogram && !swap_keeps_classes(work, &mv) {
            continue;
        }
        work.apply(&mv);
        let now = work.component_count();
        if now < components {
            components = now;
        } else {
            work.undo(&mv);
        }
    }
    components == 1
}

/// Whether the swap leaves the multiset of edge classes unchanged.
pub fn swap_keeps_classes(work: &SwapGraph, mv: &super::SwapMove) -> bool {
    let class = |(x, y): (usize, usize)| edge_class(work.degree(x), work.degree(y));
    let mut old = [class(mv.old[0]), class(mv.old[1])];
    let mut new = [class(mv.new[0]), class(mv.new[1])];
    old.sort_unstable();
    new.sort_unstable();
    old == new
}

fn run_restart(g0: &Graph, cfg: &SearchConfig, restart: u32) -> Result<RunResult, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut work = SwapGraph::new(g0);
    let mut connected = work.is_connected();
    if cfg.connected && !connected {
        connected = repair_connectivity(&mut work, cfg, false, cfg.swap_budget, &mut rng);
    }
    let start = index_report(&work.to_graph())?;
    let n = start.n as i128;
    let mut gap = start.gap;
    let mut best_gap = gap;
    let mut best = work.to_graph();
    let mut temperature = cfg.initial_temperature;
    let mut accepted = 0;
    let mut trace = vec![TracePoint { step: 0, gap, temperature }];
    for step in 1..=cfg.swap_budget {
        temperature *= cfg.cooling;
        let Some(mv) = work.propose(&mut rng) else { continue };
        if !swap_allowed(&work, cfg, &mv.new) {
            continue;
        }
        let delta = -n * work.m2_delta(&mv);
        let take = delta >= 0 || (temperature > 0.0 && rng.gen::<f64>() < (delta as f64 / temperature).exp());
        if !take {
            continue;
        }
        work.apply(&mv);
        if cfg.connected && connected && !work.is_connected() {
            work.undo(&mv);
            continue;
        }
        accepted += 1;
        gap += delta;
        if gap > best_gap {
            best_gap = gap;
            best = work.to_graph();
            trace.push(TracePoint { step, gap, temperature });
        }
    }
    Ok(RunResult { connected: best.is_connected(), best, best_gap, steps: cfg.swap_budget, accepted, trace })
}

/// Anneals from `g0` over `cfg.restarts` independent restarts and returns the
/// best graph found. A violation is reported only after its certificate
/// verifies.
pub fn local_search(g0: &Graph, cfg: &SearchConfig) -> Result<LocalSearchOutcome, SearchError> {
    cfg.validate()?;
    check_start(g0, cfg)?;
    g0.require_no_isolated()?;
    let runs: Vec<Result<RunResult, SearchError>> =
        (0..cfg.restarts).into_par_iter().map(|r| run_restart(g0, cfg, r)).collect();
    let mut winner: Option<(u32, RunResult)> = None;
    for (r, run) in runs.into_iter().enumerate() {
        let run = run?;
        let better = match &winner {
            None => true,
            Some((_, w)) => {
                let key = |x: &RunResult| (!cfg.connected || x.connected, x.best_gap);
                key(&run) > key(w)
            }
        };
        if better {
            winner = Some((r as u32, run));
        }
    }
    let (restart, run) = winner.expect("at least one restart");
    let report = index_report(&run.best)?;
    debug_assert_eq!(report.gap, run.best_gap);
    let violation = report.gap > 0 && (!cfg.connected || run.connected);
    let certificate = if violation {
        let label = if run.connected { "local-search" } else { "local-search (disconnected)" };
        let cert = CounterexampleCertificate::from_graph(&run.best, label)?;
        verify_certificate(&cert)?;
        Some(cert)
    } else {
        None
    };
    Ok(LocalSearchOutcome {
        best: run.best,
        report,
        violation,
        connected: run.connected,
        certificate,
        budget_exhausted: !violation,
        restart,
        steps: run.steps,
        accepted: run.accepted,
        trace: run.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::search::realize_histogram;
    use crate::EdgeClassHistogram;

    fn cfg(window: (usize, usize), budget: u64) -> SearchConfig {
        SearchConfig { window, swap_budget: budget, restarts: 2, ..Default::default() }
    }

    #[test]
    fn violating_realization_stays_violating() {
        let h = EdgeClassHistogram::from_classes([((2, 5), 10), ((3, 3), 6)]).unwrap();
        let g0 = realize_histogram(&h, 4).unwrap();
        let out = local_search(&g0, &cfg((2, 5), 2000)).unwrap();
        assert!(out.violation);
        assert!(out.report.gap >= 2);
        verify_certificate(out.certificate.as_ref().unwrap()).unwrap();
    }

    #[test]
    fn cycles_stay_at_equality() {
        let c = families::cycle(20).unwrap();
        let out = local_search(&c, &cfg((2, 2), 5000)).unwrap();
        assert_eq!(out.report.gap, 0);
        assert!(!out.violation && out.budget_exhausted && out.certificate.is_none());
    }

    #[test]
    fn window_three_six_never_violates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g0 = families::random_window_graph(40, 3, 6, &mut rng).unwrap();
        let out = local_search(&g0, &cfg((3, 6), 20_000)).unwrap();
        assert!(!out.violation);
        assert!(out.report.gap <= 0);
        assert!(out.trace.windows(2).all(|w| w[0].gap < w[1].gap));
    }

    #[test]
    fn start_graph_is_checked() {
        let c = families::cycle(6).unwrap();
        assert!(local_search(&c, &cfg((3, 6), 10)).is_err());
        let forbid = SearchConfig { forbidden_classes: vec![(2, 2)], ..cfg((2, 5), 10) };
        assert!(local_search(&c, &forbid).is_err());
    }

    #[test]
    fn connected_mode_repairs_and_keeps_connectivity() {
        let g0 = families::cycle(5).unwrap().disjoint_union(&families::cycle(7).unwrap());
        let c = SearchConfig { connected: true, ..cfg((2, 2), 500) };
        let out = local_search(&g0, &c).unwrap();
        assert!(out.connected);
        assert!(out.best.is_connected());
    }

    #[test]
    fn deterministic_per_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g0 = families::random_window_graph(30, 2, 5, &mut rng).unwrap();
        let a = local_search(&g0, &cfg((2, 5), 3000)).unwrap();
        let b = local_search(&g0, &cfg((2, 5), 3000)).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.trace, b.trace);
    }
}
