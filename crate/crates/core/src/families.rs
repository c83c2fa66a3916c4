//! Graph families: the standard small graphs, the two-path construction
//! `Ξ_{2k+1}` whose edges all join a degree-2 vertex to a degree-5 vertex,
//! cubic graphs, the one-edge bridge join, and the order scan over
//! `Ξ_{2k+1}` joined to a cubic graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge_class, Graph, GraphError};
use crate::indices::{index_report, IndexError};
use crate::rational::{ratio, Rational};
use crate::search::realize::havel_hakimi;
use crate::search::swap::SwapGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bridge vertex {vertex} has degree {degree}, expected 2")]
    NotDegreeTwo { vertex: usize, degree: usize },
    #[error("second graph is not 3-regular")]
    NotCubic,
    #[error("first graph has an edge outside class {{2,5}}")]
    NotTwoFive,
    #[error("generation failed: {0}")]
    GenerationFailure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

fn bad(msg: impl Into<String>) -> FamilyError {
    FamilyError::BadParameter(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardKind {
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
}

pub fn make_standard(kind: StandardKind) -> Result<Graph, FamilyError> {
    match kind {
        StandardKind::Path(n) => path(n),
        StandardKind::Cycle(n) => cycle(n),
        StandardKind::Star(n) => star(n),
        StandardKind::Complete(n) => complete(n),
        StandardKind::CompleteBipartite(a, b) => complete_bipartite(a, b),
    }
}

/// `P_n`: `0 - 1 - … - (n-1)`.
pub fn path(n: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(bad("path needs at least one vertex"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::new(n, &edges)?)
}

/// `C_n`, `n ≥ 3`.
pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(bad(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::new(n, &edges)?)
}

/// `S_n`: center 0 joined to `1..n`.
pub fn star(n: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(bad("star needs at least one vertex"));
    }
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Ok(Graph::new(n, &edges)?)
}

pub fn complete(n: usize) -> Result<Graph, FamilyError> {
    if n == 0 {
        return Err(bad("complete graph needs at least one vertex"));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(Graph::new(n, &edges)?)
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
    if a == 0 || b == 0 {
        return Err(bad("both parts of a complete bipartite graph must be nonempty"));
    }
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    Ok(Graph::new(a + b, &edges)?)
}

/// `Ξ_{2k+1}`.
///
/// Two paths `v_1 … v_{2k+1}` and `u_1 … u_{2k+1}`; at every odd position
/// `i` a group of independent vertices is joined to both `v_i` and `u_i`:
/// four vertices at the two ends, three at interior odd positions. Vertex
/// numbering: the `v` path (`0..=2k`), the `u` path, then the groups in
/// position order. The result has `7(k+1)` vertices and `10(k+1)` edges,
/// every edge joining a degree-2 vertex to a degree-5 vertex.
pub fn xi(k: usize) -> Result<Graph, FamilyError> {
    if k == 0 {
        return Err(bad("xi needs k >= 1"));
    }
    let len = 2 * k + 1;
    let v = |pos: usize| pos - 1;
    let u = |pos: usize| len + pos - 1;
    let mut edges = Vec::with_capacity(10 * (k + 1));
    for pos in 1..len {
        edges.push((v(pos), v(pos + 1)));
        edges.push((u(pos), u(pos + 1)));
    }
    let mut next = 2 * len;
    for pos in (1..=len).step_by(2) {
        let group = if pos == 1 || pos == len { 4 } else { 3 };
        for _ in 0..group {
            edges.push((v(pos), next));
            edges.push((u(pos), next));
            next += 1;
        }
    }
    debug_assert_eq!(next, 7 * (k + 1));
    Ok(Graph::new(next, &edges)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicKind {
    Complete4,
    Prism {
        order: usize,
    },
    MoebiusLadder {
        order: usize,
    },
    /// Vertex `i` joined to `i ± jump` and `i + order/2`.
    Circulant {
        order: usize,
        jump: usize,
    },
    RandomPairing {
        order: usize,
        seed: u64,
    },
}

/// Pairing attempts before `random_pairing` gives up.
pub const PAIRING_RETRIES: usize = 1000;

fn check_cubic_order(order: usize, min: usize) -> Result<(), FamilyError> {
    if order % 2 == 1 {
        return Err(bad(format!("a 3-regular graph needs even order, got {order}")));
    }
    if order < min {
        return Err(bad(format!("order must be at least {min}, got {order}")));
    }
    Ok(())
}

pub fn cubic(kind: CubicKind) -> Result<Graph, FamilyError> {
    match kind {
        CubicKind::Complete4 => complete(4),
        CubicKind::Prism { order } => {
            check_cubic_order(order, 6)?;
            let h = order / 2;
            let mut edges = Vec::with_capacity(3 * h);
            for i in 0..h {
                edges.push((i, (i + 1) % h));
                edges.push((h + i, h + (i + 1) % h));
                edges.push((i, h + i));
            }
            Ok(Graph::new(order, &edges)?)
        }
        CubicKind::MoebiusLadder { order } => cubic(CubicKind::Circulant { order, jump: 1 }),
        CubicKind::Circulant { order, jump } => {
            check_cubic_order(order, 4)?;
            if jump == 0 || 2 * jump >= order {
                return Err(bad(format!("jump must lie in 1..{}, got {jump}", order / 2)));
            }
            let mut edges = Vec::with_capacity(3 * order / 2);
            for i in 0..order {
                edges.push((i, (i + jump) % order));
                if i < order / 2 {
                    edges.push((i, i + order / 2));
                }
            }
            Ok(Graph::new(order, &edges)?)
        }
        CubicKind::RandomPairing { order, seed } => random_pairing(order, seed),
    }
}

/// Configuration-model pairing of three stubs per vertex, retried until the
/// result has no loops or repeated edges.
fn random_pairing(order: usize, seed: u64) -> Result<Graph, FamilyError> {
    check_cubic_order(order, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..order).flat_map(|v| [v, v, v]).collect();
    'attempt: for _ in 0..PAIRING_RETRIES {
        stubs.shuffle(&mut rng);
        let mut seen = std::collections::HashSet::with_capacity(stubs.len());
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b || !seen.insert(edge_class(a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        return Ok(Graph::new(order, &edges)?);
    }
    Err(FamilyError::GenerationFailure(format!(
        "no simple pairing on {order} vertices after {PAIRING_RETRIES} attempts"
    )))
}

/// Inputs to the bridge join: an all-`{2,5}` graph with a degree-2 vertex
/// `u`, and a cubic graph with any vertex `v`.
#[derive(Debug, Clone, Copy)]
pub struct BridgeJoinSpec<'a> {
    pub g1: &'a Graph,
    pub u: usize,
    pub g2: &'a Graph,
    pub v: usize,
}

impl<'a> BridgeJoinSpec<'a> {
    /// Uses the first degree-2 vertex of `g1` and vertex 0 of `g2`.
    pub fn with_defaults(g1: &'a Graph, g2: &'a Graph) -> Self {
        let u = g1.degrees().position(|d| d == 2).unwrap_or(0);
        BridgeJoinSpec { g1, u, g2, v: 0 }
    }
}

/// `g1 ∪ g2` plus the edge `u v`.
pub fn bridge_join(join: BridgeJoinSpec<'_>) -> Result<Graph, FamilyError> {
    let BridgeJoinSpec { g1, u, g2, v } = join;
    if u >= g1.order() || g1.degree(u) != 2 {
        return Err(FamilyError::NotDegreeTwo {
            vertex: u,
            degree: if u < g1.order() { g1.degree(u) } else { 0 },
        });
    }
    if g1.edges().any(|(a, b)| edge_class(g1.degree(a), g1.degree(b)) != (2, 5)) {
        return Err(FamilyError::NotTwoFive);
    }
    if g2.degrees().any(|d| d != 3) || v >= g2.order() {
        return Err(FamilyError::NotCubic);
    }
    Ok(g1.disjoint_union(g2).with_edge(u, g1.order() + v)?)
}

/// Closed-form gap of a bridge join whose parts have `m1` and `m2` edges:
/// `m1·m2/30 + 12 − 27·m1/10 − 8·m2/3`.
pub fn lemma1_gap(m1: u64, m2: u64) -> Rational {
    let (a, b) = (m1 as i128, m2 as i128);
    ratio(a * b, 30) + ratio(12, 1) - ratio(27 * a, 10) - ratio(8 * b, 3)
}

/// `m1·m2 + 360 > 81·m1 + 80·m2`.
pub fn lemma1_condition(m1: u64, m2: u64) -> bool {
    let (a, b) = (m1 as i128, m2 as i128);
    a * b + 360 > 81 * a + 80 * b
}

/// `M1` of the bridge join from the part sizes.
pub fn bridged_m1(m1: u64, m2: u64) -> i128 {
    (m1 as i128 - 2) * 7 + (m2 as i128 - 3) * 6 + 44
}

/// `M2` of the bridge join from the part sizes.
pub fn bridged_m2(m1: u64, m2: u64) -> i128 {
    (m1 as i128 - 2) * 10 + (m2 as i128 - 3) * 9 + 78
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop2Row {
    pub k: usize,
    pub xi_order: usize,
    pub xi_size: usize,
    /// Smallest even cubic order strictly above the bound.
    pub cubic_order: usize,
    pub order: usize,
    /// Gap of the constructed join, computed from the graph itself.
    pub gap: i128,
    /// `(7k+19)(k−1)/(k−7)`, a strict lower bound on `order`.
    #[serde(with = "crate::rational")]
    pub order_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop2Scan {
    pub rows: Vec<Prop2Row>,
    pub min_k: usize,
    pub min_order: usize,
    pub min_cubic_order: usize,
}

/// Least even `h ≥ 4` with `h·(15k − 105) > 810k + 450`.
pub fn min_cubic_order(k: usize) -> usize {
    let num = 810 * k + 450;
    let den = 15 * k - 105;
    let mut h = num / den + 1;
    if h % 2 == 1 {
        h += 1;
    }
    h.max(4)
}

/// For each `k` in range, the smallest violating join of `Ξ_{2k+1}` with a
/// cubic graph, built and measured. `k_min` must be at least 8; below that
/// no cubic order works.
pub fn prop2_scan(k_min: usize, k_max: usize) -> Result<Prop2Scan, FamilyError> {
    if k_min < 8 {
        return Err(bad(format!("k_min must be at least 8, got {k_min}")));
    }
    if k_max < k_min {
        return Err(bad(format!("empty range {k_min}..={k_max}")));
    }
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        let h = min_cubic_order(k);
        let g1 = xi(k)?;
        let g2 = cubic(CubicKind::MoebiusLadder { order: h })?;
        let joined = bridge_join(BridgeJoinSpec::with_defaults(&g1, &g2))?;
        let report = index_report(&joined)?;
        let kk = k as i128;
        rows.push(Prop2Row {
            k,
            xi_order: g1.order(),
            xi_size: g1.size(),
            cubic_order: h,
            order: joined.order(),
            gap: report.gap,
            order_bound: ratio((7 * kk + 19) * (kk - 1), kk - 7),
        });
    }
    let best = rows.iter().min_by_key(|r| (r.order, r.k)).expect("range is nonempty");
    Ok(Prop2Scan { min_k: best.k, min_order: best.order, min_cubic_order: best.cubic_order, rows })
}

/// `r·K_{2,5} ∪ l·K_4`.
pub fn disjoint_counterexample(r: usize, l: usize) -> Result<Graph, FamilyError> {
    if r == 0 || l == 0 {
        return Err(bad("r and l must both be at least 1"));
    }
    let k25 = complete_bipartite(2, 5)?;
    let k4 = complete(4)?;
    let mut g = k25.clone();
    for _ in 1..r {
        g = g.disjoint_union(&k25);
    }
    for _ in 0..l {
        g = g.disjoint_union(&k4);
    }
    Ok(g)
}

/// Uniform labeled tree on `n ≥ 2` vertices from a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph, FamilyError> {
    if n < 2 {
        return Err(bad("a tree without isolated vertices needs n >= 2"));
    }
    if n == 2 {
        return Ok(Graph::new(2, &[(0, 1)])?);
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = leaves.pop_first().expect("a Prüfer step always has a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let last: Vec<usize> = leaves.into_iter().collect();
    edges.push((last[0], last[1]));
    Ok(Graph::new(n, &edges)?)
}

/// A random tree plus one extra edge: connected with exactly one cycle.
pub fn random_unicyclic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Graph, FamilyError> {
    if n < 3 {
        return Err(bad("a unicyclic graph needs n >= 3"));
    }
    let tree = random_tree(n, rng)?;
    loop {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !tree.has_edge(a, b) {
            return Ok(tree.with_edge(a, b)?);
        }
    }
}

/// A random graph whose degrees all lie in `lo..=hi`: a random graphical
/// degree sequence, realized and then shuffled with degree-preserving swaps.
pub fn random_window_graph<R: Rng + ?Sized>(
    n: usize,
    lo: usize,
    hi: usize,
    rng: &mut R,
) -> Result<Graph, FamilyError> {
    if lo == 0 || lo > hi || hi >= n {
        return Err(bad(format!("need 1 <= lo <= hi < n, got {lo}..={hi} with n = {n}")));
    }
    if lo == hi && (n * lo) % 2 == 1 {
        return Err(bad(format!("no {lo}-regular graph on {n} vertices")));
    }
    for _ in 0..PAIRING_RETRIES {
        let mut degrees: Vec<usize> = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
        if degrees.iter().sum::<usize>() % 2 == 1 {
            let i = rng.gen_range(0..n);
            if degrees[i] < hi {
                degrees[i] += 1;
            } else if degrees[i] > lo {
                degrees[i] -= 1;
            } else {
                continue;
            }
        }
        let Some(edges) = havel_hakimi(&degrees) else {
            continue;
        };
        let g = Graph::new(n, &edges)?;
        let mut work = SwapGraph::new(&g);
        let attempts = 10 * g.size().max(1);
        for _ in 0..attempts {
            work.random_swap(rng, |_, _| true);
        }
        return Ok(work.to_graph());
    }
    Err(FamilyError::GenerationFailure(format!(
        "no graphical degree sequence in {lo}..={hi} on {n} vertices"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_graphs() {
        let s = make_standard(StandardKind::Star(6)).unwrap();
        assert_eq!(s.degree(0), 5);
        assert_eq!((1..6).map(|v| s.degree(v)).sum::<usize>(), 5);
        let k = make_standard(StandardKind::CompleteBipartite(2, 5)).unwrap();
        assert_eq!(k.size(), 10);
        assert_eq!(k.family_set().unwrap().into_iter().collect::<Vec<_>>(), vec![(2, 5)]);
        assert!(matches!(make_standard(StandardKind::Cycle(2)), Err(FamilyError::BadParameter(_))));
    }

    #[test]
    fn xi_small_cases() {
        let x3 = xi(1).unwrap();
        assert_eq!((x3.order(), x3.size()), (14, 20));
        let h = x3.edge_class_histogram().unwrap();
        assert_eq!(h.class_count(2, 5), 20);
        assert_eq!((h.degree_count(2), h.degree_count(5)), (10, 4));
        let x5 = xi(2).unwrap();
        assert_eq!((x5.order(), x5.size()), (21, 30));
        assert_eq!(x5.degree_extremes(), (2, 5));
        let x31 = xi(15).unwrap();
        assert_eq!((x31.order(), x31.size()), (112, 160));
        assert!(x31.is_connected());
        assert!(xi(0).is_err());
    }

    #[test]
    fn cubic_constructions() {
        let k4 = cubic(CubicKind::Complete4).unwrap();
        assert!(k4.degrees().all(|d| d == 3));
        let ml = cubic(CubicKind::MoebiusLadder { order: 106 }).unwrap();
        assert_eq!((ml.order(), ml.size()), (106, 159));
        assert!(ml.degrees().all(|d| d == 3));
        assert!(matches!(
            cubic(CubicKind::Circulant { order: 7, jump: 1 }),
            Err(FamilyError::BadParameter(_))
        ));
        assert!(cubic(CubicKind::Prism { order: 4 }).is_err());
        let p = cubic(CubicKind::Prism { order: 10 }).unwrap();
        assert!(p.degrees().all(|d| d == 3) && p.size() == 15);
        for seed in 0..5 {
            let r = cubic(CubicKind::RandomPairing { order: 40, seed }).unwrap();
            assert!(r.degrees().all(|d| d == 3));
            assert_eq!(r, cubic(CubicKind::RandomPairing { order: 40, seed }).unwrap());
        }
    }

    #[test]
    fn bridge_join_counts_and_errors() {
        let g1 = xi(1).unwrap();
        let k4 = complete(4).unwrap();
        let j = bridge_join(BridgeJoinSpec::with_defaults(&g1, &k4)).unwrap();
        assert_eq!((j.order(), j.size()), (18, 27));

        let five = g1.degrees().position(|d| d == 5).unwrap();
        let join = BridgeJoinSpec { g1: &g1, u: five, g2: &k4, v: 0 };
        assert_eq!(bridge_join(join), Err(FamilyError::NotDegreeTwo { vertex: five, degree: 5 }));
        let c5 = cycle(5).unwrap();
        let join = BridgeJoinSpec::with_defaults(&g1, &c5);
        assert_eq!(bridge_join(join), Err(FamilyError::NotCubic));
    }

    #[test]
    fn lemma_arithmetic() {
        assert_eq!(lemma1_gap(160, 159), ratio(4, 1));
        assert_eq!(lemma1_gap(10, 6), ratio(-29, 1));
        assert_eq!(lemma1_gap(160, 156), ratio(-4, 1));
        assert!(lemma1_condition(160, 159));
        assert!(!lemma1_condition(160, 156));
        assert!(!lemma1_condition(10, 9));
        assert_eq!(bridged_m1(160, 159), 2086);
        assert_eq!(bridged_m2(160, 159), 3062);
    }

    #[test]
    fn cubic_order_bounds() {
        assert_eq!(min_cubic_order(8), 464);
        assert_eq!(min_cubic_order(15), 106);
        assert_eq!(min_cubic_order(16), 100);
    }

    #[test]
    fn scan_single_k() {
        let s = prop2_scan(8, 8).unwrap();
        assert_eq!((s.min_order, s.min_cubic_order), (527, 464));
        let s = prop2_scan(16, 16).unwrap();
        assert_eq!((s.min_order, s.min_cubic_order), (219, 100));
        assert!(prop2_scan(7, 9).is_err());
    }

    #[test]
    fn disjoint_family() {
        assert_eq!(index_report(&disjoint_counterexample(1, 1).unwrap()).unwrap().gap, 2);
        assert_eq!(index_report(&disjoint_counterexample(3, 2).unwrap()).unwrap().gap, 12);
        assert!(disjoint_counterexample(1, 0).is_err());
    }

    #[test]
    fn random_families_have_expected_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..40 {
            let t = random_tree(n, &mut rng).unwrap();
            assert_eq!(t.size(), n - 1);
            assert!(t.is_connected());
        }
        for n in 3..40 {
            let u = random_unicyclic(n, &mut rng).unwrap();
            assert_eq!(u.size(), n);
            assert!(u.is_connected());
        }
        for _ in 0..20 {
            let g = random_window_graph(30, 3, 6, &mut rng).unwrap();
            let (lo, hi) = g.degree_extremes();
            assert!(lo >= 3 && hi <= 6);
        }
        for _ in 0..20 {
            let g = random_window_graph(7, 2, 2, &mut rng).unwrap();
            assert!(g.degrees().all(|d| d == 2));
        }
        assert!(random_window_graph(7, 3, 3, &mut rng).is_err());
    }
}
