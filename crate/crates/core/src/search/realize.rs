//! Graph construction from degree data.
//!
//! `realize_histogram` is a direct joint-degree construction. Inside each
//! degree group the edge ends of every class are spread over the vertices
//! as evenly as possible (consecutive runs over a round-robin slot order, so
//! each vertex receives `⌊c/n_i⌋` or `⌈c/n_i⌉` ends of a class with `c` ends).
//! Each class `(i,j)` is then an independent near-regular bipartite graph,
//! or for `i = j` a near-regular graph inside the group, and the pieces are
//! edge-disjoint by construction.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SearchError;
use crate::graph::{EdgeClassHistogram, Graph};

/// Havel–Hakimi on an arbitrary degree sequence. Returns the edge list, or
/// `None` if the sequence is not graphical.
pub fn havel_hakimi(degrees: &[usize]) -> Option<Vec<(usize, usize)>> {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 || degrees.iter().any(|&d| d >= n.max(1)) {
        return None;
    }
    let mut residual: Vec<(usize, usize)> = degrees.iter().copied().zip(0..n).collect();
    let mut edges = Vec::with_capacity(degrees.iter().sum::<usize>() / 2);
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        let (d, v) = residual[0];
        if d == 0 {
            return Some(edges);
        }
        if d >= residual.len() {
            return None;
        }
        residual[0].0 = 0;
        for slot in residual.iter_mut().skip(1).take(d) {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            edges.push((v, slot.1));
        }
    }
}

/// Bipartite realization with left degrees `left` and right degrees `right`,
/// greedily joining each left vertex (largest first) to the right vertices
/// with most remaining demand. Complete whenever the pair is realizable.
fn bipartite_greedy(left: &[usize], right: &[usize]) -> Option<Vec<(usize, usize)>> {
    if left.iter().sum::<usize>() != right.iter().sum::<usize>() {
        return None;
    }
    let mut order: Vec<usize> = (0..left.len()).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(left[a]));
    let mut rem: Vec<(usize, usize)> = right.iter().copied().zip(0..right.len()).collect();
    let mut edges = Vec::new();
    for a in order {
        rem.sort_unstable_by(|x, y| y.cmp(x));
        if left[a] > rem.len() {
            return None;
        }
        for slot in rem.iter_mut().take(left[a]) {
            if slot.0 == 0 {
                return None;
            }
            slot.0 -= 1;
            edges.push((a, slot.1));
        }
    }
    Some(edges)
}

/// Checks the per-class capacities `m_{i,j} ≤ n_i·n_j` and
/// `m_{i,i} ≤ n_i(n_i−1)/2` on top of the consistency identity.
pub fn check_capacities(h: &EdgeClassHistogram) -> Result<(), SearchError> {
    h.check_consistency()?;
    for (&(i, j), &c) in &h.classes {
        let (ni, nj) = (h.degree_count(i), h.degree_count(j));
        let cap = if i == j { ni * ni.saturating_sub(1) / 2 } else { ni * nj };
        if c > cap {
            return Err(SearchError::RealizationFailure(format!(
                "class ({i},{j}) has {c} edges but room for only {cap}"
            )));
        }
    }
    Ok(())
}

/// A simple graph whose edge-class histogram equals `h`. Vertex labels are
/// shuffled by `seed`.
pub fn realize_histogram(h: &EdgeClassHistogram, seed: u64) -> Result<Graph, SearchError> {
    check_capacities(h)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.order() as usize;
    if n == 0 {
        return Err(SearchError::RealizationFailure("empty histogram".into()));
    }

    // group[d] = vertex labels of degree d, in shuffled order
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut group: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut next = 0;
    for (&d, &count) in &h.degrees {
        group.insert(d, labels[next..next + count as usize].to_vec());
        next += count as usize;
    }

    // share[(i, j)] = per-vertex end counts of class (i,j) inside group i
    let mut share: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (&i, members) in &group {
        let size = members.len();
        let mut partners: Vec<usize> = h
            .classes
            .keys()
            .filter_map(|&(a, b)| match (a == i, b == i) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        partners.dedup();
        partners.shuffle(&mut rng);
        let mut cursor = 0;
        for j in partners {
            let ends = h.class_count(i, j) as usize * if i == j { 2 } else { 1 };
            let mut counts = vec![0usize; size];
            for slot in cursor..cursor + ends {
                counts[slot % size] += 1;
            }
            cursor += ends;
            share.insert((i, j), counts);
        }
        debug_assert_eq!(cursor, i * size);
    }

    let mut edges = Vec::with_capacity(h.size() as usize);
    for &(i, j) in h.classes.keys() {
        let gi = &group[&i];
        if i == j {
            let local = havel_hakimi(&share[&(i, i)]).ok_or_else(|| {
                SearchError::RealizationFailure(format!("class ({i},{i}) is not graphical"))
            })?;
            edges.extend(local.into_iter().map(|(a, b)| (gi[a], gi[b])));
        } else {
            let gj = &group[&j];
            let local = bipartite_greedy(&share[&(i, j)], &share[&(j, i)]).ok_or_else(|| {
                SearchError::RealizationFailure(format!("class ({i},{j}) is not realizable"))
            })?;
            edges.extend(local.into_iter().map(|(a, b)| (gi[a], gj[b])));
        }
    }
    let g = Graph::new(n, &edges)?;
    let back = g.edge_class_histogram()?;
    if back != *h {
        return Err(SearchError::RealizationFailure(
            "constructed graph does not reproduce the histogram".into(),
        ));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::indices::index_report;

    fn hist(classes: &[((usize, usize), u64)]) -> EdgeClassHistogram {
        EdgeClassHistogram::from_classes(classes.iter().copied()).unwrap()
    }

    #[test]
    fn havel_hakimi_basics() {
        assert_eq!(havel_hakimi(&[2, 2, 2]).unwrap().len(), 3);
        assert!(havel_hakimi(&[3, 3, 1, 1]).is_none());
        assert!(havel_hakimi(&[1, 1, 1]).is_none());
        assert_eq!(havel_hakimi(&[0, 0]).unwrap(), vec![]);
        let edges = havel_hakimi(&[3, 3, 2, 2, 2]).unwrap();
        let g = Graph::new(5, &edges).unwrap();
        assert_eq!(g.degrees().collect::<Vec<_>>(), vec![3, 3, 2, 2, 2]);
    }

    #[test]
    fn k25_k4_histogram() {
        let h = hist(&[((2, 5), 10), ((3, 3), 6)]);
        for seed in 0..10 {
            let g = realize_histogram(&h, seed).unwrap();
            assert_eq!(g.edge_class_histogram().unwrap(), h);
            assert_eq!(index_report(&g).unwrap().gap, 2);
        }
    }

    #[test]
    fn xi_histogram() {
        let h = families::xi(1).unwrap().edge_class_histogram().unwrap();
        assert_eq!(h.class_count(2, 5), 20);
        let g = realize_histogram(&h, 1).unwrap();
        assert_eq!(g.size(), 20);
        assert_eq!(g.edge_class_histogram().unwrap(), h);
    }

    #[test]
    fn mixed_classes_round_trip() {
        for k in [1, 3, 6] {
            let x = families::xi(k).unwrap();
            let c = families::cubic(families::CubicKind::Prism { order: 12 }).unwrap();
            let j = families::bridge_join(families::BridgeJoinSpec::with_defaults(&x, &c)).unwrap();
            let h = j.edge_class_histogram().unwrap();
            let g = realize_histogram(&h, k as u64).unwrap();
            assert_eq!(g.edge_class_histogram().unwrap(), h);
            assert_eq!(index_report(&g).unwrap().gap, index_report(&j).unwrap().gap);
        }
    }

    #[test]
    fn inconsistent_and_overfull_histograms_fail() {
        let bad = EdgeClassHistogram {
            classes: [((5, 5), 3)].into_iter().collect(),
            degrees: [(5, 1)].into_iter().collect(),
        };
        assert!(matches!(realize_histogram(&bad, 0), Err(SearchError::Inconsistent(_))));
        let matching = EdgeClassHistogram {
            classes: [((1, 1), 2)].into_iter().collect(),
            degrees: [(1, 4)].into_iter().collect(),
        };
        assert!(realize_histogram(&matching, 0).is_ok());
        // two degree-3 vertices share at most one edge
        let loop_class = EdgeClassHistogram {
            classes: [((3, 3), 3)].into_iter().collect(),
            degrees: [(3, 2)].into_iter().collect(),
        };
        assert!(matches!(realize_histogram(&loop_class, 0), Err(SearchError::RealizationFailure(_))));
        // each degree-2 vertex needs two distinct degree-4 neighbours
        let cross = EdgeClassHistogram {
            classes: [((2, 4), 4)].into_iter().collect(),
            degrees: [(2, 2), (4, 1)].into_iter().collect(),
        };
        assert!(matches!(realize_histogram(&cross, 0), Err(SearchError::RealizationFailure(_))));
    }
}
