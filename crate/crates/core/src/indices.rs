//! First and second Zagreb indices and the quantities used to compare
//! `M1/n` against `M2/m` without ever leaving exact arithmetic.
//!
//! The comparison is carried by the integer `gap = m·M1 − n·M2`: positive
//! means `M1/n > M2/m`, zero means equality. `Θ = M2 − (m/n)·M1` is the same
//! quantity scaled by `−1/n`, and `Θ′` rescales `Θ` by the harmonic sum
//! `Σ m_{i,j}(1/i + 1/j)`, which always equals `n`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeClassHistogram, Graph, GraphError};
use crate::rational::{self, integer, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("degrees passed to psi must be at least 1")]
    ZeroDegree,
}

fn checked(v: Option<i128>, what: &'static str) -> Result<i128, IndexError> {
    v.ok_or(IndexError::Overflow(what))
}

/// `M1(G) = Σ_v d(v)²`.
pub fn m1(g: &Graph) -> Result<i128, IndexError> {
    g.require_no_isolated()?;
    g.degrees().try_fold(0i128, |acc, d| {
        let d = d as i128;
        checked(d.checked_mul(d).and_then(|sq| acc.checked_add(sq)), "M1")
    })
}

/// `M2(G) = Σ_{uv ∈ E} d(u)·d(v)`.
pub fn m2(g: &Graph) -> Result<i128, IndexError> {
    g.require_no_isolated()?;
    g.edges().try_fold(0i128, |acc, (u, v)| {
        let p = (g.degree(u) as i128).checked_mul(g.degree(v) as i128);
        checked(p.and_then(|p| acc.checked_add(p)), "M2")
    })
}

/// `m·M1 − n·M2` from raw counts, overflow-checked.
pub fn gap_from_counts(n: u64, m: u64, m1: i128, m2: i128) -> Result<i128, IndexError> {
    let a = checked((m as i128).checked_mul(m1), "m·M1")?;
    let b = checked((n as i128).checked_mul(m2), "n·M2")?;
    checked(a.checked_sub(b), "gap")
}

/// Everything needed to decide `M1/n` vs `M2/m` for one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub n: u64,
    pub m: u64,
    pub m1: i128,
    pub m2: i128,
    /// `m·M1 − n·M2`.
    pub gap: i128,
    /// `M2 − (m/n)·M1`; always `−gap/n`.
    #[serde(with = "rational")]
    pub theta: Rational,
}

impl IndexReport {
    pub fn violates(&self) -> bool {
        self.gap > 0
    }
}

pub fn index_report(g: &Graph) -> Result<IndexReport, IndexError> {
    let first = m1(g)?;
    let second = m2(g)?;
    let n = g.order() as u64;
    let m = g.size() as u64;
    Ok(IndexReport {
        n,
        m,
        m1: first,
        m2: second,
        gap: gap_from_counts(n, m, first, second)?,
        theta: theta_from_counts(n, m, first, second),
    })
}

fn theta_from_counts(n: u64, m: u64, m1: i128, m2: i128) -> Rational {
    integer(m2) - ratio(m as i128, n as i128) * integer(m1)
}

/// `Θ(G) = M2 − (m/n)·M1`.
pub fn theta(g: &Graph) -> Result<Rational, IndexError> {
    Ok(theta_from_counts(g.order() as u64, g.size() as u64, m1(g)?, m2(g)?))
}

/// `Θ′(G) = (Σ m_{i,j}(1/i + 1/j))·Θ(G)`.
pub fn theta_prime(g: &Graph) -> Result<Rational, IndexError> {
    let h = g.edge_class_histogram()?;
    Ok(harmonic_sum(&h)? * theta(g)?)
}

/// `Σ m_{i,j}·(1/i + 1/j)` over a consistent histogram.
pub fn harmonic_sum(h: &EdgeClassHistogram) -> Result<Rational, IndexError> {
    h.check_consistency()?;
    let mut total = Rational::zero();
    for (&(i, j), &c) in &h.classes {
        let pair = ratio(1, i as i128) + ratio(1, j as i128);
        total += integer(c as i128) * pair;
    }
    Ok(total)
}

/// `Ψ(i,j,k,l) = ij(1/k + 1/l) + kl(1/i + 1/j) − (i + j + k + l)`.
pub fn psi_class(i: usize, j: usize, k: usize, l: usize) -> Result<Rational, IndexError> {
    if i == 0 || j == 0 || k == 0 || l == 0 {
        return Err(IndexError::ZeroDegree);
    }
    let [i, j, k, l] = [i, j, k, l].map(|x| x as i128);
    let inv = |x: i128| ratio(1, x);
    Ok(integer(i * j) * (inv(k) + inv(l)) + integer(k * l) * (inv(i) + inv(j)) - integer(i + j + k + l))
}

/// `Θ′` written as the symmetrized quadratic form
/// `½ Σ_p Σ_q m_p m_q Ψ(p, q)` over edge classes `p, q`.
pub fn theta_prime_quadratic(h: &EdgeClassHistogram) -> Result<Rational, IndexError> {
    h.check_consistency()?;
    let classes: Vec<_> = h.classes.iter().filter(|(_, &c)| c > 0).collect();
    let mut total = Rational::zero();
    for &(&(i, j), &cp) in &classes {
        for &(&(k, l), &cq) in &classes {
            total += integer(cp as i128 * cq as i128) * psi_class(i, j, k, l)?;
        }
    }
    Ok(total / (Rational::one() + Rational::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    fn k25_k4() -> Graph {
        let mut edges = Vec::new();
        for a in 0..2 {
            for b in 2..7 {
                edges.push((a, b));
            }
        }
        Graph::new(7, &edges).unwrap().disjoint_union(&complete(4))
    }

    #[test]
    fn cycles_sit_on_equality() {
        for n in 3..12 {
            let r = index_report(&cycle(n)).unwrap();
            assert_eq!((r.m1, r.m2, r.gap), (4 * n as i128, 4 * n as i128, 0));
            assert!(theta(&cycle(n)).unwrap().is_zero());
            assert!(theta_prime(&cycle(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn star_plus_triangle_violates() {
        // S_6 ∪ C_3: M1 = 25 + 5 + 12, M2 = 25 + 12.
        let g = star(6).disjoint_union(&cycle(3));
        let r = index_report(&g).unwrap();
        assert_eq!((r.n, r.m, r.m1, r.m2), (9, 8, 42, 37));
        assert_eq!(r.gap, 3);
        assert_eq!(r.theta, ratio(-3, 9));
        assert_eq!(theta_prime(&g).unwrap(), integer(-3));
    }

    #[test]
    fn bipartite_plus_k4_violates_by_two() {
        let g = k25_k4();
        let r = index_report(&g).unwrap();
        assert_eq!((r.n, r.m, r.m1, r.m2, r.gap), (11, 16, 106, 154, 2));
        assert_eq!(theta(&g).unwrap(), ratio(-2, 11));
        assert_eq!(theta_prime(&g).unwrap(), integer(-2));
    }

    #[test]
    fn path_theta() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(theta(&g).unwrap(), ratio(1, 2));
        let h = g.edge_class_histogram().unwrap();
        assert_eq!(harmonic_sum(&h).unwrap(), integer(4));
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi_class(2, 5, 3, 3).unwrap(), ratio(-1, 30));
        assert_eq!(psi_class(1, 1, 1, 2).unwrap(), ratio(1, 2));
        assert_eq!(psi_class(1, 4, 2, 2).unwrap(), integer(0));
        assert_eq!(psi_class(3, 6, 4, 4).unwrap(), integer(0));
        for i in 1..6 {
            for j in 1..6 {
                assert!(psi_class(i, j, i, j).unwrap().is_zero());
            }
        }
        assert_eq!(psi_class(0, 1, 1, 1), Err(IndexError::ZeroDegree));
    }

    #[test]
    fn psi_symmetries() {
        for i in 1..=12 {
            for j in 1..=12 {
                for k in 1..=12 {
                    for l in 1..=12 {
                        let p = psi_class(i, j, k, l).unwrap();
                        assert_eq!(p, psi_class(j, i, k, l).unwrap());
                        assert_eq!(p, psi_class(i, j, l, k).unwrap());
                        assert_eq!(p, psi_class(k, l, i, j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn quadratic_form_examples() {
        let single = EdgeClassHistogram::from_classes([((3, 4), 12)]).unwrap();
        assert!(theta_prime_quadratic(&single).unwrap().is_zero());
        let h = EdgeClassHistogram::from_classes([((2, 5), 10), ((3, 3), 6)]).unwrap();
        assert_eq!(theta_prime_quadratic(&h).unwrap(), integer(-2));
        let h = EdgeClassHistogram::from_classes([((1, 4), 4), ((2, 2), 3)]).unwrap();
        assert!(theta_prime_quadratic(&h).unwrap().is_zero());
    }

    #[test]
    fn harmonic_sum_rejects_inconsistent() {
        let mut h = EdgeClassHistogram::default();
        h.classes.insert((2, 2), 7);
        h.degrees.insert(2, 6);
        assert!(matches!(harmonic_sum(&h), Err(IndexError::Graph(GraphError::InconsistentHistogram(_)))));
        h.degrees.insert(2, 7);
        assert_eq!(harmonic_sum(&h).unwrap(), integer(7));
    }

    #[test]
    fn isolated_vertex_is_an_error() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(m1(&g), Err(IndexError::Graph(GraphError::IsolatedVertex(2))));
        assert!(index_report(&g).is_err());
    }
}
