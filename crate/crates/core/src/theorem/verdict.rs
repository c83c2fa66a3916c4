use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeClass, Graph, GraphError};
use crate::indices::{index_report, IndexError, IndexReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("degree window {min}..={max} is wider than 3")]
    DegreeWindowExceeded { min: usize, max: usize },
    /// Raised only if an instance contradicts the theorem; never expected.
    #[error("theorem contradicted: {0}")]
    Contradiction(String),
}

impl From<GraphError> for TheoremError {
    fn from(e: GraphError) -> Self {
        TheoremError::Index(e.into())
    }
}

/// How `M1/n` compares with `M2/m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjectureStatus {
    /// `M1/n < M2/m`.
    StrictlyHolds,
    Equality,
    /// `M1/n > M2/m`.
    Violated,
}

/// The edge-class sets that produce equality inside a window of width 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqualityClass {
    /// Every edge joins the same pair of degrees.
    SingleClass,
    /// `{{1,4},{2,2}}`
    OneFourTwoTwo,
    /// `{{3,6},{4,4}}`
    ThreeSixFourFour,
}

impl EqualityClass {
    pub fn matching(family: &BTreeSet<EdgeClass>) -> Option<Self> {
        let classes: Vec<_> = family.iter().copied().collect();
        match classes.as_slice() {
            [_] => Some(EqualityClass::SingleClass),
            [(1, 4), (2, 2)] => Some(EqualityClass::OneFourTwoTwo),
            [(3, 6), (4, 4)] => Some(EqualityClass::ThreeSixFourFour),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub status: ConjectureStatus,
    pub report: IndexReport,
    pub family: BTreeSet<EdgeClass>,
    pub equality_class: Option<EqualityClass>,
    pub min_degree: usize,
    pub max_degree: usize,
    pub connected: bool,
    /// `Δ − δ ≤ 3` and `(δ, Δ) ≠ (2, 5)`: the range where violations are
    /// ruled out.
    pub covered_by_theorem: bool,
}

pub fn covered_by_theorem(min: usize, max: usize) -> bool {
    max - min <= 3 && !(min == 2 && max == 5)
}

/// Classifies `g` from the sign of its gap. Disconnected graphs are
/// accepted; connectivity is reported alongside.
pub fn classify_conjecture(g: &Graph) -> Result<ConjectureVerdict, TheoremError> {
    let report = index_report(g)?;
    let family = g.family_set()?;
    let (min_degree, max_degree) = g.degree_extremes();
    let status = match report.gap.signum() {
        1 => ConjectureStatus::Violated,
        0 => ConjectureStatus::Equality,
        _ => ConjectureStatus::StrictlyHolds,
    };
    let covered = covered_by_theorem(min_degree, max_degree);
    let equality_class = match status {
        ConjectureStatus::Equality => EqualityClass::matching(&family),
        _ => None,
    };
    if covered {
        if status == ConjectureStatus::Violated {
            return Err(TheoremError::Contradiction(format!(
                "gap {} > 0 with degrees in {min_degree}..={max_degree}",
                report.gap
            )));
        }
        if status == ConjectureStatus::Equality && equality_class.is_none() {
            return Err(TheoremError::Contradiction(format!(
                "equality with unlisted edge classes {family:?}"
            )));
        }
    }
    Ok(ConjectureVerdict {
        status,
        report,
        family,
        equality_class,
        min_degree,
        max_degree,
        connected: g.is_connected(),
        covered_by_theorem: covered,
    })
}

/// The four necessary conditions for a violation inside a window of width 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub violated: bool,
    pub min_degree_is_2: bool,
    pub max_degree_is_5: bool,
    pub m_2_5: u64,
    pub m_3_3: u64,
}

impl CorollaryReport {
    pub fn all_hold(&self) -> bool {
        self.min_degree_is_2 && self.max_degree_is_5 && self.m_2_5 != 0 && self.m_3_3 != 0
    }
}

pub fn corollary_conditions(g: &Graph) -> Result<CorollaryReport, TheoremError> {
    let (min, max) = g.degree_extremes();
    if max - min > 3 {
        return Err(TheoremError::DegreeWindowExceeded { min, max });
    }
    let report = index_report(g)?;
    let hist = g.edge_class_histogram()?;
    let out = CorollaryReport {
        violated: report.violates(),
        min_degree_is_2: min == 2,
        max_degree_is_5: max == 5,
        m_2_5: hist.class_count(2, 5),
        m_3_3: hist.class_count(3, 3),
    };
    if out.violated && !out.all_hold() {
        return Err(TheoremError::Contradiction(format!(
            "violation without the necessary conditions: {out:?}"
        )));
    }
    Ok(out)
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
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn bipartite(a: usize, b: usize) -> Graph {
        let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Graph::new(a + b, &edges).unwrap()
    }

    #[test]
    fn cycle_is_single_class_equality() {
        let v = classify_conjecture(&cycle(9)).unwrap();
        assert_eq!(v.status, ConjectureStatus::Equality);
        assert_eq!(v.equality_class, Some(EqualityClass::SingleClass));
        assert!(v.connected && v.covered_by_theorem);
    }

    #[test]
    fn pendant_equality_class() {
        let g = star(5).disjoint_union(&cycle(3));
        let v = classify_conjecture(&g).unwrap();
        assert_eq!(v.report.gap, 0);
        assert_eq!(v.equality_class, Some(EqualityClass::OneFourTwoTwo));
        assert!(!v.connected);
    }

    #[test]
    fn three_six_four_four_equality_class() {
        let g = bipartite(6, 3).disjoint_union(&complete(5));
        let v = classify_conjecture(&g).unwrap();
        assert_eq!((v.report.n, v.report.m, v.report.m1, v.report.m2), (14, 28, 242, 484));
        assert_eq!(v.status, ConjectureStatus::Equality);
        assert_eq!(v.equality_class, Some(EqualityClass::ThreeSixFourFour));
    }

    #[test]
    fn star_plus_triangle_is_violated_outside_window() {
        let v = classify_conjecture(&star(6).disjoint_union(&cycle(3))).unwrap();
        assert_eq!(v.status, ConjectureStatus::Violated);
        assert_eq!(v.report.gap, 3);
        assert!(!v.covered_by_theorem);
    }

    #[test]
    fn path_strictly_holds() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(classify_conjecture(&g).unwrap().status, ConjectureStatus::StrictlyHolds);
    }

    #[test]
    fn corollary_on_known_graphs() {
        let g = bipartite(2, 5).disjoint_union(&complete(4));
        let c = corollary_conditions(&g).unwrap();
        assert!(c.violated && c.all_hold());
        assert_eq!((c.m_2_5, c.m_3_3), (10, 6));

        let c = corollary_conditions(&cycle(6)).unwrap();
        assert!(!c.violated);
        assert_eq!((c.min_degree_is_2, c.max_degree_is_5, c.m_2_5, c.m_3_3), (true, false, 0, 0));

        assert_eq!(
            corollary_conditions(&star(6)),
            Err(TheoremError::DegreeWindowExceeded { min: 1, max: 5 })
        );
    }
}
