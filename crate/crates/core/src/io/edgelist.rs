//! Plain-text edge lists:
//!
//! ```text
//! n 4
//! 0 1
//! # comment
//! 2 3
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{edge_class, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeListError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn parse_index(tok: &str, line: usize) -> Result<usize, EdgeListError> {
    tok.parse().map_err(|_| EdgeListError::Parse {
        line,
        message: format!("expected a vertex index, found {tok:?}"),
    })
}

pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut order: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((n, _)) = order else {
            match tokens.as_slice() {
                ["n", count] => {
                    order = Some((parse_index(count, line)?, line));
                    continue;
                }
                _ => {
                    return Err(EdgeListError::Parse {
                        line,
                        message: "first line must be `n <order>`".into(),
                    })
                }
            }
        };
        let [a, b] = tokens.as_slice() else {
            return Err(EdgeListError::Parse { line, message: format!("expected `u v`, found {content:?}") });
        };
        let (u, v) = (parse_index(a, line)?, parse_index(b, line)?);
        let fail = |source| EdgeListError::Graph { line, source };
        if u >= n || v >= n {
            return Err(fail(GraphError::IndexOutOfRange { u, v, order: n }));
        }
        if u == v {
            return Err(fail(GraphError::SelfLoop(u)));
        }
        let key = edge_class(u, v);
        if !seen.insert(key) {
            return Err(fail(GraphError::DuplicateEdge(key.0, key.1)));
        }
        edges.push((u, v));
    }
    let Some((n, header_line)) = order else {
        return Err(EdgeListError::Parse { line: 0, message: "missing `n <order>` header".into() });
    };
    Graph::new(n, &edges).map_err(|source| EdgeListError::Graph { line: header_line, source })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.order());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = parse_edge_list("n 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(g, Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap());
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edge_list("# header\nn 4\n0 1\n# comment\n\n2 3 # trailing\n").unwrap();
        assert_eq!((g.order(), g.size()), (4, 2));
        assert_eq!(g.components().1, 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_edge_list("n 3\n0 0"),
            Err(EdgeListError::Graph { line: 2, source: GraphError::SelfLoop(0) })
        );
        assert_eq!(
            parse_edge_list("n 3\n0 1\n1 0"),
            Err(EdgeListError::Graph { line: 3, source: GraphError::DuplicateEdge(0, 1) })
        );
        assert!(matches!(parse_edge_list("n 3\n0 x"), Err(EdgeListError::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("0 1"), Err(EdgeListError::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("n 2\n0 5"), Err(EdgeListError::Graph { line: 2, .. })));
    }

    #[test]
    fn writer_round_trip() {
        let g = Graph::new(5, &[(0, 4), (1, 2), (2, 3)]).unwrap();
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }
}
