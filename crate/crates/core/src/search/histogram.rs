//! Search over edge-class histograms.
//!
//! For a fixed order `n` the search first fixes the degree counts `n_d`
//! (which fix `m` and `M1`), then assigns class counts `m_{i,j}` in
//! lexicographic class order. The last class touching a degree is forced by
//! the remaining edge ends. A branch is cut when even the smallest possible
//! completion of `M2` cannot push the gap above the current floor; that
//! smallest completion pairs the remaining ends smallest-degree with
//! largest-degree, which is optimal by the rearrangement inequality.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Objective, SearchConfig, SearchError};
use crate::graph::{EdgeClass, EdgeClassHistogram, GraphError};
use crate::indices::{gap_from_counts, IndexError};

/// Evaluations per hill-climbing restart above the exhaustive limit.
pub const HILL_STEPS: usize = 400;
/// Non-improving evaluations before a climb restarts from a fresh point.
pub const HILL_PATIENCE: usize = 40;
/// Node budget for evaluating one degree composition while hill-climbing.
pub const HILL_NODE_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramCandidate {
    pub histogram: EdgeClassHistogram,
    pub n: u64,
    pub m: u64,
    pub m1: i128,
    pub m2: i128,
    pub gap: i128,
}

impl HistogramCandidate {
    pub fn new(histogram: EdgeClassHistogram) -> Result<Self, SearchError> {
        histogram.check_consistency()?;
        let n = histogram.order();
        if n == 0 {
            return Err(GraphError::EmptyGraph.into());
        }
        let m = histogram.size();
        let mut m1: i128 = 0;
        let mut m2: i128 = 0;
        for (&(i, j), &c) in &histogram.classes {
            let c = c as i128;
            m1 = c
                .checked_mul((i + j) as i128)
                .and_then(|t| m1.checked_add(t))
                .ok_or(IndexError::Overflow("M1"))?;
            m2 = c
                .checked_mul((i * j) as i128)
                .and_then(|t| m2.checked_add(t))
                .ok_or(IndexError::Overflow("M2"))?;
        }
        let gap = gap_from_counts(n, m, m1, m2)?;
        Ok(HistogramCandidate { histogram, n, m, m1, m2, gap })
    }

    fn rank_key(&self) -> (u64, std::cmp::Reverse<i128>, Vec<(EdgeClass, u64)>) {
        let classes = self.histogram.classes.iter().map(|(&k, &v)| (k, v)).collect();
        (self.n, std::cmp::Reverse(self.gap), classes)
    }
}

/// `m·M1 − n·M2` computed from class counts alone.
pub fn histogram_gap(h: &EdgeClassHistogram) -> Result<i128, SearchError> {
    Ok(HistogramCandidate::new(h.clone())?.gap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramSearchReport {
    pub candidates: Vec<HistogramCandidate>,
    /// Search-tree nodes visited over all orders.
    pub nodes: u64,
    /// Orders that were enumerated exhaustively.
    pub exhaustive_orders: Vec<usize>,
    /// Orders that were only sampled.
    pub sampled_orders: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Slot {
    a: usize,
    b: usize,
    cap: u64,
    /// This is the last class touching degree `a`.
    forced: bool,
    forbidden: bool,
    required: bool,
}

/// Leaves with gap at least `floor` are kept. With `raise`, the floor climbs
/// to the best gap seen and only ties with it are kept.
struct Collector {
    floor: i128,
    raise: bool,
    keep: usize,
    found: Vec<(Vec<u64>, i128)>,
    nodes: u64,
    node_budget: u64,
}

struct Composition<'a> {
    degs: &'a [usize],
    slots: Vec<Slot>,
    n: i128,
    m: i128,
    m1: i128,
}

impl Composition<'_> {
    fn lower_bound(&self, residual: &[u64]) -> i128 {
        let mut lo = 0;
        let mut hi = residual.len();
        let mut left = [0u64; 8];
        left[..hi].copy_from_slice(residual);
        let mut total: i128 = 0;
        while lo < hi {
            if left[lo] == 0 {
                lo += 1;
                continue;
            }
            if left[hi - 1] == 0 {
                hi -= 1;
                continue;
            }
            if lo == hi - 1 {
                let d = self.degs[lo] as i128;
                total += (left[lo] / 2) as i128 * d * d;
                break;
            }
            let t = left[lo].min(left[hi - 1]);
            total += t as i128 * self.degs[lo] as i128 * self.degs[hi - 1] as i128;
            left[lo] -= t;
            left[hi - 1] -= t;
        }
        total
    }

    fn run(&self, counts: &[u64], col: &mut Collector) {
        let mut residual: Vec<u64> = self.degs.iter().zip(counts).map(|(&d, &c)| d as u64 * c).collect();
        let mut values = vec![0u64; self.slots.len()];
        self.dfs(0, &mut residual, &mut values, 0, col);
    }

    fn dfs(&self, idx: usize, residual: &mut [u64], values: &mut [u64], m2: i128, col: &mut Collector) {
        if col.nodes >= col.node_budget {
            return;
        }
        col.nodes += 1;
        if idx == self.slots.len() {
            debug_assert!(residual.iter().all(|&r| r == 0));
            let gap = self.m * self.m1 - self.n * m2;
            if gap < col.floor {
                return;
            }
            if col.raise && gap > col.floor {
                col.floor = gap;
                col.found.clear();
            }
            if col.found.len() < col.keep {
                col.found.push((values.to_vec(), gap));
            }
            return;
        }
        let s = self.slots[idx];
        let same = s.a == s.b;
        let (lo, hi) = if s.forced {
            let v = if same {
                if residual[s.a] % 2 == 1 {
                    return;
                }
                residual[s.a] / 2
            } else {
                if residual[s.a] > residual[s.b] {
                    return;
                }
                residual[s.a]
            };
            (v, v)
        } else {
            let max = if same { residual[s.a] / 2 } else { residual[s.a].min(residual[s.b]) };
            (0, max.min(s.cap))
        };
        let (lo, hi) = if s.forbidden { (lo, 0) } else { (lo, hi) };
        let lo = if s.required { lo.max(1) } else { lo };
        if lo > hi || hi > s.cap {
            return;
        }
        let w = (self.degs[s.a] * self.degs[s.b]) as i128;
        for v in (lo..=hi).rev() {
            if same {
                residual[s.a] -= 2 * v;
            } else {
                residual[s.a] -= v;
                residual[s.b] -= v;
            }
            let m2_next = m2 + v as i128 * w;
            let best_possible = self.m * self.m1 - self.n * (m2_next + self.lower_bound(residual));
            if best_possible >= col.floor {
                values[idx] = v;
                self.dfs(idx + 1, residual, values, m2_next, col);
            }
            if same {
                residual[s.a] += 2 * v;
            } else {
                residual[s.a] += v;
                residual[s.b] += v;
            }
        }
        values[idx] = 0;
    }

    fn histogram(&self, values: &[u64]) -> EdgeClassHistogram {
        let classes = self
            .slots
            .iter()
            .zip(values)
            .filter(|(_, &v)| v > 0)
            .map(|(s, &v)| ((self.degs[s.a], self.degs[s.b]), v));
        EdgeClassHistogram::from_classes(classes).expect("search leaves are consistent")
    }
}

/// The per-order context shared by every composition.
struct Window<'a> {
    cfg: &'a SearchConfig,
    degrees: Vec<usize>,
    required: BTreeSet<EdgeClass>,
}

impl<'a> Window<'a> {
    fn new(cfg: &'a SearchConfig) -> Self {
        let (lo, hi) = cfg.window;
        let required =
            if cfg.applies_corollary() { [(2, 5), (3, 3)].into_iter().collect() } else { BTreeSet::new() };
        Window { cfg, degrees: (lo..=hi).collect(), required }
    }

    /// Builds the class slots for the degree counts `counts` (indexed like
    /// `self.degrees`), or `None` if the counts are infeasible up front.
    fn composition<'b>(
        &self,
        counts: &[u64],
        degs: &'b mut Vec<usize>,
        present: &mut Vec<u64>,
    ) -> Option<Composition<'b>> {
        degs.clear();
        present.clear();
        for (&d, &c) in self.degrees.iter().zip(counts) {
            if c > 0 {
                degs.push(d);
                present.push(c);
            }
        }
        let n: u64 = present.iter().sum();
        let ends: u64 = degs.iter().zip(present.iter()).map(|(&d, &c)| d as u64 * c).sum();
        if degs.is_empty() || ends % 2 == 1 || degs.iter().any(|&d| d as u64 >= n) {
            return None;
        }
        let m = ends / 2;
        if self.cfg.connected && m + 1 < n {
            return None;
        }
        let count_of = |d: usize| degs.iter().position(|&x| x == d).map(|i| present[i]).unwrap_or(0);
        for &(i, j) in &self.required {
            let ok = if i == j { count_of(i) >= 2 } else { count_of(i) > 0 && count_of(j) > 0 };
            if !ok {
                return None;
            }
        }
        let k = degs.len();
        let mut slots = Vec::with_capacity(k * (k + 1) / 2);
        for a in 0..k {
            for b in a..k {
                let class = (degs[a], degs[b]);
                let cap = if a == b { present[a] * (present[a] - 1) / 2 } else { present[a] * present[b] };
                slots.push(Slot {
                    a,
                    b,
                    cap,
                    forced: b == k - 1,
                    forbidden: !self.cfg.allows_class(class),
                    required: self.required.contains(&class),
                });
            }
        }
        let m1: u64 = degs.iter().zip(present.iter()).map(|(&d, &c)| (d * d) as u64 * c).sum();
        Some(Composition { degs: &degs[..], slots, n: n as i128, m: m as i128, m1: m1 as i128 })
    }

    fn evaluate(
        &self,
        counts: &[u64],
        col: &mut Collector,
        out: &mut Vec<HistogramCandidate>,
    ) -> Result<(), SearchError> {
        let mut degs = Vec::new();
        let mut present = Vec::new();
        let Some(comp) = self.composition(counts, &mut degs, &mut present) else {
            return Ok(());
        };
        comp.run(&present, col);
        for (values, _) in col.found.drain(..) {
            out.push(HistogramCandidate::new(comp.histogram(&values))?);
        }
        Ok(())
    }
}

fn compositions(
    n: u64,
    parts: usize,
    f: &mut dyn FnMut(&[u64]) -> Result<(), SearchError>,
) -> Result<(), SearchError> {
    fn rec(
        left: u64,
        idx: usize,
        cur: &mut Vec<u64>,
        parts: usize,
        f: &mut dyn FnMut(&[u64]) -> Result<(), SearchError>,
    ) -> Result<(), SearchError> {
        if idx + 1 == parts {
            cur.push(left);
            let r = f(cur);
            cur.pop();
            return r;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, idx + 1, cur, parts, f)?;
            cur.pop();
        }
        Ok(())
    }
    rec(n, 0, &mut Vec::with_capacity(parts), parts, f)
}

fn exhaustive_order(
    window: &Window<'_>,
    n: usize,
    nodes: &mut u64,
) -> Result<Vec<HistogramCandidate>, SearchError> {
    let cfg = window.cfg;
    let raise = cfg.objective == Objective::MaximizeGapAtOrder;
    let mut col = Collector {
        floor: 1,
        raise,
        keep: cfg.max_results,
        found: Vec::new(),
        nodes: 0,
        node_budget: u64::MAX,
    };
    let mut out = Vec::new();
    compositions(n as u64, window.degrees.len(), &mut |counts| {
        if raise {
            // Each composition keeps its own ties; the floor carries over.
            let mut local = Vec::new();
            let floor_before = col.floor;
            window.evaluate(counts, &mut col, &mut local)?;
            if col.floor > floor_before {
                out.clear();
            }
            out.extend(local);
            Ok(())
        } else {
            window.evaluate(counts, &mut col, &mut out)
        }
    })?;
    *nodes += col.nodes;
    if raise {
        let best = out.iter().map(|c| c.gap).max();
        out.retain(|c| Some(c.gap) == best);
    }
    Ok(out)
}

fn random_counts<R: Rng>(window: &Window<'_>, n: usize, rng: &mut R) -> Vec<u64> {
    let k = window.degrees.len();
    let mut counts = vec![0u64; k];
    for _ in 0..n {
        counts[rng.gen_range(0..k)] += 1;
    }
    fix_parity(window, &mut counts, rng);
    counts
}

/// One single-vertex move between degrees of opposite parity, if the
/// handshake sum is odd.
fn fix_parity<R: Rng>(window: &Window<'_>, counts: &mut [u64], rng: &mut R) {
    let k = counts.len();
    let ends: u64 = window.degrees.iter().zip(counts.iter()).map(|(&d, &c)| d as u64 * c).sum();
    if ends.is_multiple_of(2) {
        return;
    }
    let odd: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| counts[a] > 0 && (window.degrees[a] + window.degrees[b]) % 2 == 1)
        .collect();
    if !odd.is_empty() {
        let (a, b) = odd[rng.gen_range(0..odd.len())];
        shift(counts, a, b, 1);
    }
}

fn shift(next: &mut [u64], from: usize, to: usize, amount: u64) {
    let amount = amount.min(next[from]);
    next[from] -= amount;
    next[to] += amount;
}

/// Moves a random number of vertices between two degrees, then restores
/// the handshake parity.
fn neighbour<R: Rng>(window: &Window<'_>, counts: &[u64], rng: &mut R) -> Vec<u64> {
    let mut next = counts.to_vec();
    let k = next.len();
    let n: u64 = next.iter().sum();
    if k == 1 || n == 0 {
        return next;
    }
    let nonempty: Vec<usize> = (0..k).filter(|&i| next[i] > 0).collect();
    let from = nonempty[rng.gen_range(0..nonempty.len())];
    let to = (from + rng.gen_range(1..k)) % k;
    let amount = rng.gen_range(1..=(n / 8).max(1));
    shift(&mut next, from, to, amount);
    fix_parity(window, &mut next, rng);
    next
}

/// Best gap of one composition, exploring at most `HILL_NODE_BUDGET` nodes.
fn score(
    window: &Window<'_>,
    counts: &[u64],
    nodes: &mut u64,
) -> Result<(i128, Vec<HistogramCandidate>), SearchError> {
    let mut col = Collector {
        floor: i128::MIN,
        raise: true,
        keep: 4,
        found: Vec::new(),
        nodes: 0,
        node_budget: HILL_NODE_BUDGET,
    };
    let mut out = Vec::new();
    window.evaluate(counts, &mut col, &mut out)?;
    *nodes += col.nodes;
    let best = out.iter().map(|c| c.gap).max().unwrap_or(i128::MIN);
    Ok((best, out))
}

fn sampled_order(
    window: &Window<'_>,
    n: usize,
    nodes: &mut u64,
) -> Result<Vec<HistogramCandidate>, SearchError> {
    let cfg = window.cfg;
    let mut pool: BTreeMap<Vec<(EdgeClass, u64)>, HistogramCandidate> = BTreeMap::new();
    for restart in 0..cfg.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ ((n as u64) << 32));
        rng.set_stream(restart as u64);
        let mut current = random_counts(window, n, &mut rng);
        let (mut current_score, found) = score(window, &current, nodes)?;
        let keep = |cands: Vec<HistogramCandidate>, pool: &mut BTreeMap<_, _>| {
            for c in cands.into_iter().filter(|c| c.gap > 0) {
                pool.insert(c.rank_key().2, c);
            }
        };
        keep(found, &mut pool);
        let mut stale = 0;
        for _ in 0..HILL_STEPS {
            let fresh = stale >= HILL_PATIENCE;
            let next = if fresh {
                random_counts(window, n, &mut rng)
            } else {
                neighbour(window, &current, &mut rng)
            };
            let (s, found) = score(window, &next, nodes)?;
            keep(found, &mut pool);
            if fresh || s > current_score {
                stale = 0;
            } else {
                stale += 1;
            }
            if fresh || s >= current_score {
                current = next;
                current_score = s;
            }
        }
    }
    let mut out: Vec<_> = pool.into_values().collect();
    if cfg.objective == Objective::MaximizeGapAtOrder {
        let best = out.iter().map(|c| c.gap).max();
        out.retain(|c| Some(c.gap) == best);
    }
    Ok(out)
}

/// Violating histograms over the configured orders, sorted by order, then
/// gap descending.
pub fn histogram_search(cfg: &SearchConfig) -> Result<Vec<HistogramCandidate>, SearchError> {
    Ok(histogram_search_report(cfg)?.candidates)
}

pub fn histogram_search_report(cfg: &SearchConfig) -> Result<HistogramSearchReport, SearchError> {
    cfg.validate()?;
    let window = Window::new(cfg);
    let mut report = HistogramSearchReport {
        candidates: Vec::new(),
        nodes: 0,
        exhaustive_orders: Vec::new(),
        sampled_orders: Vec::new(),
    };
    for n in cfg.order_min..=cfg.order_max {
        let found = if n <= cfg.exhaustive_limit {
            report.exhaustive_orders.push(n);
            exhaustive_order(&window, n, &mut report.nodes)?
        } else {
            report.sampled_orders.push(n);
            sampled_order(&window, n, &mut report.nodes)?
        };
        let hit = !found.is_empty();
        report.candidates.extend(found);
        if hit && cfg.objective == Objective::MinimizeOrder {
            break;
        }
    }
    report.candidates.sort_by_cached_key(|c| c.rank_key());
    report.candidates.truncate(cfg.max_results);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::search::realize_histogram;

    fn cfg(window: (usize, usize), order_max: usize) -> SearchConfig {
        SearchConfig { window, order_min: 2, order_max, ..Default::default() }
    }

    #[test]
    fn gap_from_histogram() {
        let k25_k4 = EdgeClassHistogram::from_classes([((2, 5), 10), ((3, 3), 6)]).unwrap();
        assert_eq!(histogram_gap(&k25_k4).unwrap(), 2);
        let cycle = EdgeClassHistogram::from_classes([((2, 2), 7)]).unwrap();
        assert_eq!(histogram_gap(&cycle).unwrap(), 0);
        let bad = EdgeClassHistogram {
            classes: [((5, 5), 3)].into_iter().collect(),
            degrees: [(5, 1)].into_iter().collect(),
        };
        assert!(matches!(histogram_gap(&bad), Err(SearchError::Inconsistent(_))));
    }

    #[test]
    fn big_join_histogram() {
        let x = families::xi(15).unwrap();
        let c = families::cubic(families::CubicKind::MoebiusLadder { order: 106 }).unwrap();
        let j = families::bridge_join(families::BridgeJoinSpec::with_defaults(&x, &c)).unwrap();
        let h = j.edge_class_histogram().unwrap();
        assert_eq!(h.class_count(2, 5), 158);
        assert_eq!(h.class_count(3, 3), 156);
        assert_eq!(h.class_count(3, 5), 2);
        assert_eq!(h.class_count(3, 4), 4);
        assert_eq!(h.classes.len(), 4);
        assert_eq!(histogram_gap(&h).unwrap(), 4);
    }

    #[test]
    fn lower_bound_is_rearrangement() {
        let degs = vec![2, 3, 5];
        let comp = Composition { degs: &degs, slots: vec![], n: 0, m: 0, m1: 0 };
        // ends: 4 of degree 2, 2 of degree 3, 2 of degree 5
        // pairs: 2-5, 2-5, 2-3, 2-3 → 10+10+6+6
        assert_eq!(comp.lower_bound(&[4, 2, 2]), 32);
        assert_eq!(comp.lower_bound(&[0, 4, 0]), 18);
    }

    #[test]
    fn smallest_window_violation_is_k25_k4() {
        let found = histogram_search(&cfg((2, 5), 11)).unwrap();
        assert_eq!(found.len(), 1);
        let c = &found[0];
        assert_eq!((c.n, c.m, c.m1, c.m2, c.gap), (11, 16, 106, 154, 2));
        assert_eq!(c.histogram.class_count(2, 5), 10);
        assert_eq!(c.histogram.class_count(3, 3), 6);
    }

    #[test]
    fn counts_match_brute_force_oracle() {
        // frozen from an independent enumeration without pruning
        let found = histogram_search(&cfg((2, 5), 16)).unwrap();
        assert_eq!(found.len(), 3);
        let wide = histogram_search(&cfg((1, 5), 9)).unwrap();
        assert_eq!(wide.len(), 1);
        assert_eq!(wide[0].histogram.family_set(), [(1, 5), (2, 2)].into_iter().collect());
        assert_eq!(wide[0].gap, 3);
    }

    #[test]
    fn every_candidate_realizes_with_the_same_gap() {
        for c in histogram_search(&cfg((2, 5), 30)).unwrap() {
            let g = realize_histogram(&c.histogram, 11).unwrap();
            assert_eq!(g.edge_class_histogram().unwrap(), c.histogram);
            assert_eq!(crate::indices::index_report(&g).unwrap().gap, c.gap);
        }
    }

    #[test]
    fn narrow_windows_have_no_violations() {
        for window in [(1, 4), (3, 6), (4, 7), (5, 8), (2, 4), (3, 5)] {
            assert!(histogram_search(&cfg(window, 20)).unwrap().is_empty(), "{window:?}");
        }
    }

    #[test]
    fn forbidden_classes_without_the_filter() {
        for class in [(2, 5), (3, 3)] {
            let c =
                SearchConfig { forbidden_classes: vec![class], corollary_filter: false, ..cfg((2, 5), 24) };
            assert!(histogram_search(&c).unwrap().is_empty(), "{class:?}");
        }
        // sanity: without the filter the search still finds violations
        let open = SearchConfig { corollary_filter: false, ..cfg((2, 5), 11) };
        assert_eq!(histogram_search(&open).unwrap().len(), 1);
    }

    #[test]
    fn objectives() {
        let min = SearchConfig { objective: Objective::MinimizeOrder, ..cfg((2, 5), 30) };
        let found = histogram_search(&min).unwrap();
        assert!(found.iter().all(|c| c.n == 11));
        let best =
            SearchConfig { objective: Objective::MaximizeGapAtOrder, order_min: 22, ..cfg((2, 5), 22) };
        let top = histogram_search(&best).unwrap();
        let all = histogram_search(&SearchConfig { order_min: 22, ..cfg((2, 5), 22) }).unwrap();
        let max = all.iter().map(|c| c.gap).max().unwrap();
        assert!(!top.is_empty() && top.iter().all(|c| c.gap == max));
        assert_eq!(top.len(), all.iter().filter(|c| c.gap == max).count());
    }

    #[test]
    fn sampling_above_the_limit_finds_violations() {
        let c = SearchConfig {
            order_min: 40,
            order_max: 40,
            exhaustive_limit: 30,
            restarts: 2,
            ..Default::default()
        };
        let report = histogram_search_report(&c).unwrap();
        assert_eq!(report.sampled_orders, vec![40]);
        assert!(!report.candidates.is_empty());
        assert!(report.candidates.iter().all(|c| c.gap > 0 && c.n == 40));
    }

    #[test]
    fn results_are_sorted() {
        let found = histogram_search(&cfg((2, 5), 24)).unwrap();
        assert!(found.windows(2).all(|w| (w[0].n, -w[0].gap) <= (w[1].n, -w[1].gap)));
    }
}
