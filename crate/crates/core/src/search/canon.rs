//! Canonical labeling by individualization and refinement.
//!
//! Colours are refined until stable (each round ranks vertices by their
//! colour and the sorted colours of their neighbours). The search tree
//! individualizes one vertex of the first smallest non-singleton cell per
//! level; every discrete leaf gives a labeling, and the canonical form is
//! the lexicographically smallest relabeled edge list. Two leaves with the
//! same edge list yield an automorphism, used both to skip children in the
//! same orbit and to jump back to where the two leaf paths diverged.

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::io::graph6;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub order: usize,
    /// Relabeled edges `(u, v)`, `u < v`, sorted.
    pub edges: Vec<(u32, u32)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Graph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (u as usize, v as usize)).collect();
        Graph::new(self.order, &edges).expect("canonical edges form a simple graph")
    }

    pub fn graph6(&self) -> String {
        graph6::encode(&self.to_graph()).expect("canonical forms stay within graph6 range")
    }
}

#[derive(Clone)]
struct Leaf {
    path: Vec<usize>,
    labels: Vec<usize>,
    cert: Vec<(u32, u32)>,
}

struct Search<'a> {
    g: &'a Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

fn refine(g: &Graph, mut colour: Vec<u32>) -> Vec<u32> {
    let n = g.order();
    let mut cells = count_cells(&colour);
    let mut order: Vec<usize> = (0..n).collect();
    let mut sigs: Vec<(u32, Vec<u32>)> = vec![(0, Vec::new()); n];
    loop {
        for v in 0..n {
            let sig = &mut sigs[v];
            sig.0 = colour[v];
            sig.1.clear();
            sig.1.extend(g.neighbors(v).iter().map(|&w| colour[w]));
            sig.1.sort_unstable();
        }
        order.sort_unstable_by(|&a, &b| sigs[a].cmp(&sigs[b]));
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && sigs[order[i]] != sigs[order[i - 1]] {
                rank += 1;
            }
            colour[order[i]] = rank;
        }
        let now = rank as usize + 1;
        if now == cells {
            return colour;
        }
        cells = now;
    }
}

fn count_cells(colour: &[u32]) -> usize {
    let mut c = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Vertices of the first smallest cell with more than one vertex.
fn target_cell(colour: &[u32]) -> Option<Vec<usize>> {
    let n = colour.len();
    let mut size = vec![0usize; n];
    for &c in colour {
        size[c as usize] += 1;
    }
    let (c, _) = size.iter().enumerate().filter(|(_, &s)| s > 1).min_by_key(|&(c, &s)| (s, c))?;
    Some((0..n).filter(|&v| colour[v] as usize == c).collect())
}

fn individualize(colour: &[u32], v: usize) -> Vec<u32> {
    colour.iter().enumerate().map(|(x, &c)| 2 * c + u32::from(x != v)).collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn certificate(&self, labels: &[usize]) -> Vec<(u32, u32)> {
        let mut cert: Vec<(u32, u32)> = self
            .g
            .edges()
            .map(|(u, v)| {
                let (a, b) = (labels[u] as u32, labels[v] as u32);
                (a.min(b), a.max(b))
            })
            .collect();
        cert.sort_unstable();
        cert
    }

    /// Orbits of the automorphisms that fix every vertex of `path`.
    fn stabilizer_orbits(&self, path: &[usize]) -> Vec<usize> {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        for gamma in &self.automorphisms {
            if path.iter().all(|&p| gamma[p] == p) {
                for (x, &y) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        parent
    }

    /// Records an automorphism from two leaves with equal certificates.
    fn automorphism(&mut self, from: &[usize], to: &[usize]) {
        let n = from.len();
        let mut inverse = vec![0; n];
        for (v, &l) in to.iter().enumerate() {
            inverse[l] = v;
        }
        let gamma: Vec<usize> = (0..n).map(|x| inverse[from[x]]).collect();
        if gamma.iter().enumerate().any(|(x, &y)| x != y) {
            self.automorphisms.push(gamma);
        }
    }

    fn leaf(&mut self, path: &[usize], colour: &[u32]) -> Option<usize> {
        let labels: Vec<usize> = colour.iter().map(|&c| c as usize).collect();
        let cert = self.certificate(&labels);
        let Some(first) = &self.first else {
            let leaf = Leaf { path: path.to_vec(), labels, cert };
            self.best = Some(leaf.clone());
            self.first = Some(leaf);
            return None;
        };
        if cert == first.cert {
            let (to, level) = (first.labels.clone(), common_prefix(path, &first.path));
            self.automorphism(&labels, &to);
            return Some(level);
        }
        let best = self.best.as_ref().expect("set with first");
        match cert.cmp(&best.cert) {
            std::cmp::Ordering::Equal => {
                let (to, level) = (best.labels.clone(), common_prefix(path, &best.path));
                self.automorphism(&labels, &to);
                Some(level)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(Leaf { path: path.to_vec(), labels, cert });
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    /// Returns the level to jump back to, if any.
    fn visit(&mut self, path: &mut Vec<usize>, colour: Vec<u32>) -> Option<usize> {
        let Some(cell) = target_cell(&colour) else {
            return self.leaf(path, &colour);
        };
        let depth = path.len();
        let mut tried: Vec<usize> = Vec::new();
        let mut known = self.automorphisms.len();
        let mut orbits = self.stabilizer_orbits(path);
        for w in cell {
            if self.automorphisms.len() != known {
                known = self.automorphisms.len();
                orbits = self.stabilizer_orbits(path);
            }
            let rep = find(&mut orbits, w);
            if tried.iter().any(|&t| find(&mut orbits, t) == rep) {
                continue;
            }
            tried.push(w);
            let child = refine(self.g, individualize(&colour, w));
            path.push(w);
            let jump = self.visit(path, child);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }
}

/// Vertex `v` of `g` goes to label `labels[v]` in the canonical form.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let mut s = Search { g, first: None, best: None, automorphisms: Vec::new() };
    let start = refine(g, vec![0; g.order()]);
    s.visit(&mut Vec::new(), start);
    s.best.expect("the search reaches at least one leaf").labels
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let labels = canonical_labeling(g);
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .map(|(u, v)| {
            let (a, b) = (labels[u] as u32, labels[v] as u32);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    CanonicalForm { order: g.order(), edges }
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order() && a.size() == b.size() && canonical_form(a) == canonical_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shuffled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(rng);
        g.relabel(&perm)
    }

    #[test]
    fn relabelings_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let graphs = [
            families::cycle(9).unwrap(),
            families::complete_bipartite(2, 5).unwrap().disjoint_union(&families::complete(4).unwrap()),
            families::xi(2).unwrap(),
            families::cubic(families::CubicKind::MoebiusLadder { order: 40 }).unwrap(),
            families::cubic(families::CubicKind::Prism { order: 40 }).unwrap(),
            families::disjoint_counterexample(3, 4).unwrap(),
        ];
        for g in &graphs {
            let c = canonical_form(g);
            for _ in 0..5 {
                assert_eq!(canonical_form(&shuffled(g, &mut rng)), c);
            }
            assert_eq!(c.to_graph().edge_class_histogram(), g.edge_class_histogram());
        }
    }

    #[test]
    fn refinement_blind_pairs_are_separated() {
        // both 2-regular on six vertices
        let c6 = families::cycle(6).unwrap();
        let two_triangles = families::cycle(3).unwrap().disjoint_union(&families::cycle(3).unwrap());
        assert!(!are_isomorphic(&c6, &two_triangles));
        // both 3-regular on eight vertices
        let cube = families::cubic(families::CubicKind::Prism { order: 8 }).unwrap();
        let moebius = families::cubic(families::CubicKind::MoebiusLadder { order: 8 }).unwrap();
        assert!(!are_isomorphic(&cube, &moebius));
        let twin = families::cubic(families::CubicKind::Circulant { order: 8, jump: 3 }).unwrap();
        // multiplying by 3 mod 8 maps jump 1 to jump 3
        assert!(are_isomorphic(&moebius, &twin));
    }

    #[test]
    fn hundred_random_isomorphic_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for i in 0..100 {
            let n = 10 + i % 40;
            let g = families::random_window_graph(n, 2, 5, &mut rng).unwrap();
            let h = shuffled(&g, &mut rng);
            assert_eq!(canonical_form(&g), canonical_form(&h), "pair {i}");
        }
    }

    #[test]
    fn labeling_is_a_permutation() {
        let g = families::xi(3).unwrap();
        let mut l = canonical_labeling(&g);
        l.sort_unstable();
        assert_eq!(l, (0..g.order()).collect::<Vec<_>>());
    }
}
