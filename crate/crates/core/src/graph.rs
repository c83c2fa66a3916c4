//! Simple undirected graphs with dense 0-based vertex indices, plus the
//! degree and edge-class statistics everything else is computed from.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order accepted by [`Graph::new`]. Keeps every index sum well
/// inside checked 128-bit arithmetic.
pub const MAX_ORDER: usize = 1_000_000;

/// Unordered pair of endpoint degrees `{i, j}`, stored with `i <= j`.
pub type EdgeClass = (usize, usize);

/// Normalizes a degree pair into an [`EdgeClass`].
#[inline]
pub fn edge_class(a: usize, b: usize) -> EdgeClass {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{order}")]
    IndexOutOfRange { u: usize, v: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("inconsistent edge-class histogram: {0}")]
    InconsistentHistogram(String),
}

/// A simple undirected graph.
///
/// Neighbor lists are sorted and symmetric; a vertex's degree is the length
/// of its list. The graph is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    size: usize,
}

impl Graph {
    /// Builds a graph on `order` vertices, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn new(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if order == 0 {
            return Err(GraphError::EmptyGraph);
        }
        if order > MAX_ORDER {
            return Err(GraphError::OrderTooLarge(order));
        }
        let mut adj = vec![Vec::new(); order];
        for &(u, v) in edges {
            if u >= order || v >= order {
                return Err(GraphError::IndexOutOfRange { u, v, order });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, nbrs) in adj.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if let Some(w) = nbrs.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = edge_class(u, w[0]);
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Graph { adj, size: edges.len() })
    }

    /// Builds from neighbor lists already known to be simple and symmetric.
    pub(crate) fn from_adjacency_unchecked(mut adj: Vec<Vec<usize>>) -> Self {
        let mut twice = 0;
        for nbrs in adj.iter_mut() {
            nbrs.sort_unstable();
            twice += nbrs.len();
        }
        debug_assert!(twice % 2 == 0);
        Graph { adj, size: twice / 2 }
    }

    /// Number of vertices, `n(G)`.
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges, `m(G)`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.iter().map(Vec::len)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// `(δ(G), Δ(G))`.
    pub fn degree_extremes(&self) -> (usize, usize) {
        self.degrees().fold((usize::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)))
    }

    pub fn isolated_vertex(&self) -> Option<usize> {
        self.adj.iter().position(Vec::is_empty)
    }

    /// Analysis operations only accept graphs without isolated vertices.
    pub fn require_no_isolated(&self) -> Result<(), GraphError> {
        match self.isolated_vertex() {
            Some(v) => Err(GraphError::IsolatedVertex(v)),
            None => Ok(()),
        }
    }

    /// Counts `m_{i,j}` and `n_i`.
    pub fn edge_class_histogram(&self) -> Result<EdgeClassHistogram, GraphError> {
        self.require_no_isolated()?;
        let mut hist = EdgeClassHistogram::default();
        for d in self.degrees() {
            *hist.degrees.entry(d).or_insert(0) += 1;
        }
        for (u, v) in self.edges() {
            *hist.classes.entry(edge_class(self.degree(u), self.degree(v))).or_insert(0) += 1;
        }
        Ok(hist)
    }

    /// The set `𝔽(G)` of edge classes that occur in the graph.
    pub fn family_set(&self) -> Result<BTreeSet<EdgeClass>, GraphError> {
        self.require_no_isolated()?;
        Ok(self.edges().map(|(u, v)| edge_class(self.degree(u), self.degree(v))).collect())
    }

    /// `self ∪ other`; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let mut adj = self.adj.clone();
        adj.extend(other.adj.iter().map(|nbrs| nbrs.iter().map(|&v| v + shift).collect::<Vec<_>>()));
        Graph { adj, size: self.size + other.size }
    }

    /// Returns a copy with one extra edge `uv`.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        let order = self.order();
        if u >= order || v >= order {
            return Err(GraphError::IndexOutOfRange { u, v, order });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            let (a, b) = edge_class(u, v);
            return Err(GraphError::DuplicateEdge(a, b));
        }
        let mut adj = self.adj.clone();
        adj[u].push(v);
        adj[v].push(u);
        Ok(Graph::from_adjacency_unchecked(adj))
    }

    /// Component label per vertex (labels are `0..count` in order of first
    /// appearance) and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.order();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 == 1
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order(), "permutation length mismatch");
        let mut adj = vec![Vec::new(); self.order()];
        for (u, nbrs) in self.adj.iter().enumerate() {
            adj[perm[u]] = nbrs.iter().map(|&v| perm[v]).collect();
        }
        Graph::from_adjacency_unchecked(adj)
    }
}

mod class_triples {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::EdgeClass;

    pub fn serialize<S: Serializer>(map: &BTreeMap<EdgeClass, u64>, s: S) -> Result<S::Ok, S::Error> {
        let triples: Vec<(usize, usize, u64)> = map.iter().map(|(&(i, j), &c)| (i, j, c)).collect();
        triples.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<EdgeClass, u64>, D::Error> {
        let triples = Vec::<(usize, usize, u64)>::deserialize(d)?;
        Ok(triples.into_iter().map(|(i, j, c)| (super::edge_class(i, j), c)).collect())
    }
}

/// Edge-class counts `m_{i,j}` and vertex-degree counts `n_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeClassHistogram {
    /// Carried in JSON as `[i, j, count]` triples.
    #[serde(with = "class_triples")]
    pub classes: BTreeMap<EdgeClass, u64>,
    pub degrees: BTreeMap<usize, u64>,
}

impl EdgeClassHistogram {
    /// Builds a histogram from class counts alone, deriving each `n_i` from
    /// `i·n_i = Σ_{j≠i} m_{i,j} + 2·m_{i,i}`. Fails when a stub total is not a
    /// multiple of its degree.
    pub fn from_classes(classes: impl IntoIterator<Item = (EdgeClass, u64)>) -> Result<Self, GraphError> {
        let mut hist = EdgeClassHistogram::default();
        for ((a, b), count) in classes {
            if count == 0 {
                continue;
            }
            *hist.classes.entry(edge_class(a, b)).or_insert(0) += count;
        }
        for (i, stubs) in hist.stub_totals() {
            if i == 0 || stubs % i as u64 != 0 {
                return Err(GraphError::InconsistentHistogram(format!(
                    "{stubs} edge ends at degree {i} is not a multiple of {i}"
                )));
            }
            hist.degrees.insert(i, stubs / i as u64);
        }
        Ok(hist)
    }

    pub fn class_count(&self, i: usize, j: usize) -> u64 {
        self.classes.get(&edge_class(i, j)).copied().unwrap_or(0)
    }

    pub fn degree_count(&self, i: usize) -> u64 {
        self.degrees.get(&i).copied().unwrap_or(0)
    }

    /// `Σ n_i`.
    pub fn order(&self) -> u64 {
        self.degrees.values().sum()
    }

    /// `Σ m_{i,j}`.
    pub fn size(&self) -> u64 {
        self.classes.values().sum()
    }

    /// Edge ends incident to each degree: `Σ_{j≠i} m_{i,j} + 2·m_{i,i}`.
    pub fn stub_totals(&self) -> BTreeMap<usize, u64> {
        let mut stubs = BTreeMap::new();
        for (&(i, j), &c) in &self.classes {
            *stubs.entry(i).or_insert(0) += c;
            *stubs.entry(j).or_insert(0) += c;
        }
        stubs
    }

    /// Classes with a nonzero count.
    pub fn family_set(&self) -> BTreeSet<EdgeClass> {
        self.classes.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect()
    }

    /// Checks nonzero degrees and `i·n_i = Σ_{j≠i} m_{i,j} + 2·m_{i,i}` for
    /// every degree that appears on either side.
    pub fn check_consistency(&self) -> Result<(), GraphError> {
        let stubs = self.stub_totals();
        let keys: BTreeSet<usize> = stubs
            .keys()
            .copied()
            .chain(self.degrees.iter().filter(|(_, &c)| c > 0).map(|(&d, _)| d))
            .collect();
        for i in keys {
            if i == 0 {
                return Err(GraphError::InconsistentHistogram("degree 0 is not allowed".into()));
            }
            let lhs = i as u64 * self.degree_count(i);
            let rhs = stubs.get(&i).copied().unwrap_or(0);
            if lhs != rhs {
                return Err(GraphError::InconsistentHistogram(format!(
                    "degree {i}: {i}·n_{i} = {lhs} but edge ends sum to {rhs}"
                )));
            }
        }
        Ok(())
    }

    /// Classwise sum.
    pub fn merged(&self, other: &EdgeClassHistogram) -> EdgeClassHistogram {
        let mut out = self.clone();
        for (&k, &c) in &other.classes {
            *out.classes.entry(k).or_insert(0) += c;
        }
        for (&d, &c) in &other.degrees {
            *out.degrees.entry(d).or_insert(0) += c;
        }
        out
    }
}
