//! Degree-preserving double-edge swaps `{a b, c d} → {a d, c b}` on a mutable
//! working copy of a graph.

use rand::Rng;

use super::SearchError;
use crate::graph::{edge_class, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwapMove {
    /// Indices into the edge list of the two edges being replaced.
    pub first: usize,
    pub second: usize,
    pub old: [(usize, usize); 2],
    pub new: [(usize, usize); 2],
}

#[derive(Debug, Clone)]
pub struct SwapGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl SwapGraph {
    pub fn new(g: &Graph) -> Self {
        SwapGraph {
            adj: (0..g.order()).map(|v| g.neighbors(v).to_vec()).collect(),
            edges: g.edges().collect(),
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_adjacency_unchecked(self.adj.clone())
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.adj[a].len() <= self.adj[b].len() { (a, b) } else { (b, a) };
        self.adj[x].contains(&y)
    }

    /// Builds the move replacing edges `first` and `second`, or `None` when
    /// it would create a loop or a repeated edge. `cross` picks the
    /// alternative pairing `{a c, b d}`.
    pub fn candidate(&self, first: usize, second: usize, cross: bool) -> Option<SwapMove> {
        if first == second {
            return None;
        }
        let (a, b) = self.edges[first];
        let (mut c, mut d) = self.edges[second];
        if cross {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b || self.has_edge(a, d) || self.has_edge(c, b) {
            return None;
        }
        Some(SwapMove {
            first,
            second,
            old: [self.edges[first], self.edges[second]],
            new: [edge_class(a, d), edge_class(c, b)],
        })
    }

    /// A uniformly random pair of edges with a random pairing, if valid.
    pub fn propose<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<SwapMove> {
        if self.edges.len() < 2 {
            return None;
        }
        let first = rng.gen_range(0..self.edges.len());
        let second = rng.gen_range(0..self.edges.len());
        self.candidate(first, second, rng.gen_bool(0.5))
    }

    /// Change in `M2` if `mv` were applied.
    pub fn m2_delta(&self, mv: &SwapMove) -> i128 {
        let w = |(x, y): (usize, usize)| (self.degree(x) * self.degree(y)) as i128;
        w(mv.new[0]) + w(mv.new[1]) - w(mv.old[0]) - w(mv.old[1])
    }

    fn unlink(&mut self, (a, b): (usize, usize)) {
        let pos = self.adj[a].iter().position(|&x| x == b).expect("edge present");
        self.adj[a].swap_remove(pos);
        let pos = self.adj[b].iter().position(|&x| x == a).expect("edge present");
        self.adj[b].swap_remove(pos);
    }

    fn link(&mut self, (a, b): (usize, usize)) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    pub fn apply(&mut self, mv: &SwapMove) {
        self.unlink(mv.old[0]);
        self.unlink(mv.old[1]);
        self.link(mv.new[0]);
        self.link(mv.new[1]);
        self.edges[mv.first] = mv.new[0];
        self.edges[mv.second] = mv.new[1];
    }

    pub fn undo(&mut self, mv: &SwapMove) {
        self.unlink(mv.new[0]);
        self.unlink(mv.new[1]);
        self.link(mv.old[0]);
        self.link(mv.old[1]);
        self.edges[mv.first] = mv.old[0];
        self.edges[mv.second] = mv.old[1];
    }

    /// Proposes one move, applies it, and keeps it only if `accept` (which
    /// sees the swapped graph) agrees.
    pub fn random_swap<R, F>(&mut self, rng: &mut R, mut accept: F) -> Option<SwapMove>
    where
        R: Rng + ?Sized,
        F: FnMut(&SwapGraph, &SwapMove) -> bool,
    {
        let mv = self.propose(rng)?;
        self.apply(&mv);
        if accept(self, &mv) {
            Some(mv)
        } else {
            self.undo(&mv);
            None
        }
    }

    pub fn component_count(&self) -> usize {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// Replaces edges `ab` and `cd` of `g` by `ad` and `cb`.
pub fn double_edge_swap(
    g: &Graph,
    (a, b): (usize, usize),
    (c, d): (usize, usize),
) -> Result<Graph, SearchError> {
    if !g.has_edge(a, b) || !g.has_edge(c, d) {
        return Err(SearchError::InvalidSwap("both edges must exist".into()));
    }
    if a == d || c == b {
        return Err(SearchError::InvalidSwap("swap would create a loop".into()));
    }
    if g.has_edge(a, d) || g.has_edge(c, b) {
        return Err(SearchError::InvalidSwap("swap would repeat an edge".into()));
    }
    let mut edges: Vec<_> = g.edges().filter(|&e| e != edge_class(a, b) && e != edge_class(c, d)).collect();
    edges.extend([(a, d), (c, b)]);
    Ok(Graph::new(g.order(), &edges)?)
}
