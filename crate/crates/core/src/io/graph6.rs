//! graph6 encoding: a size header followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

const BIAS: u8 = 63;
const LONG: u8 = 126;
/// Largest order the eight-byte header can express.
pub const MAX_GRAPH6_ORDER: u64 = (1 << 36) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("order {0} cannot be expressed in a graph6 header")]
    OrderTooLarge(u64),
    #[error("malformed graph6 header or body: {0}")]
    MalformedHeader(String),
    #[error("graph6 string has trailing data: {0}")]
    TrailingBits(String),
    #[error("byte {byte} at offset {offset} is outside the printable range 63..=126")]
    NonPrintable { byte: u8, offset: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn encode_order(n: u64, out: &mut Vec<u8>) -> Result<(), Graph6Error> {
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(LONG);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else if n <= MAX_GRAPH6_ORDER {
        out.extend([LONG, LONG]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        return Err(Graph6Error::OrderTooLarge(n));
    }
    Ok(())
}

fn bit_count(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Encodes `g` (no trailing newline).
pub fn encode(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order() as u64;
    let mut out = Vec::new();
    encode_order(n, &mut out)?;
    let mut body = vec![0u8; bit_count(n).div_ceil(6) as usize];
    for (u, v) in g.edges() {
        // u < v; bit index of x(u, v) in column-major upper-triangle order
        let pos = (v as u64 * (v as u64 - 1) / 2 + u as u64) as usize;
        body[pos / 6] |= 1 << (5 - pos % 6);
    }
    out.extend(body.into_iter().map(|b| b + BIAS));
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

/// Decodes one graph6 string. An optional `>>graph6<<` prefix and trailing
/// line ending are accepted.
pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.trim_end_matches(['\n', '\r']).as_bytes();
    if let Some((offset, &byte)) = bytes.iter().enumerate().find(|(_, &b)| !(BIAS..=LONG).contains(&b)) {
        return Err(Graph6Error::NonPrintable { byte, offset });
    }
    let (n, header_len) = decode_order(bytes)?;
    let body = &bytes[header_len..];
    let needed = bit_count(n).div_ceil(6);
    if (body.len() as u64) < needed {
        return Err(Graph6Error::MalformedHeader(format!(
            "order {n} needs {needed} body bytes, found {}",
            body.len()
        )));
    }
    if body.len() as u64 > needed {
        return Err(Graph6Error::TrailingBits(format!(
            "{} bytes past the end of the adjacency data",
            body.len() as u64 - needed
        )));
    }
    let n = usize::try_from(n).map_err(|_| Graph6Error::OrderTooLarge(n))?;
    if n > crate::graph::MAX_ORDER {
        return Err(GraphError::OrderTooLarge(n).into());
    }
    let total = bit_count(n as u64) as usize;
    let mut edges = Vec::new();
    let (mut u, mut v) = (0usize, 1usize);
    for pos in 0..body.len() * 6 {
        let bit = (body[pos / 6] - BIAS) >> (5 - pos % 6) & 1;
        if pos >= total {
            if bit != 0 {
                return Err(Graph6Error::TrailingBits("nonzero padding bits".into()));
            }
            continue;
        }
        if bit == 1 {
            edges.push((u, v));
        }
        u += 1;
        if u == v {
            u = 0;
            v += 1;
        }
    }
    Ok(Graph::new(n, &edges)?)
}

fn decode_order(bytes: &[u8]) -> Result<(u64, usize), Graph6Error> {
    let value = |chunk: &[u8]| chunk.iter().fold(0u64, |acc, &b| (acc << 6) | (b - BIAS) as u64);
    match bytes {
        [] => Err(Graph6Error::MalformedHeader("empty string".into())),
        [LONG, LONG, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Graph6Error::MalformedHeader("truncated 8-byte header".into()));
            }
            Ok((value(&rest[..6]), 8))
        }
        [LONG, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Graph6Error::MalformedHeader("truncated 4-byte header".into()));
            }
            Ok((value(&rest[..3]), 4))
        }
        [first, ..] => Ok(((first - BIAS) as u64, 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_known_strings() {
        let k3 = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(encode(&k3).unwrap(), "Bw");
        let empty2 = Graph::new(2, &[]).unwrap();
        assert_eq!(encode(&empty2).unwrap(), "A?");
        assert_eq!(decode("Bw").unwrap(), k3);
        assert_eq!(decode(">>graph6<<Bw\n").unwrap(), k3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(decode(""), Err(Graph6Error::MalformedHeader(_))));
        // order 5 needs two body bytes
        assert!(matches!(decode("D?"), Err(Graph6Error::MalformedHeader(_))));
        assert!(matches!(decode("~?"), Err(Graph6Error::MalformedHeader(_))));
        assert!(matches!(decode("Bw?"), Err(Graph6Error::TrailingBits(_))));
        // K_3 with a padding bit set
        assert!(matches!(decode("Bx"), Err(Graph6Error::TrailingBits(_))));
        assert!(matches!(decode("B w"), Err(Graph6Error::NonPrintable { byte: b' ', offset: 1 })));
        assert!(matches!(decode("?"), Err(Graph6Error::Graph(GraphError::EmptyGraph))));
    }

    #[test]
    fn long_header_round_trip() {
        let n = 100;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Graph::new(n, &edges).unwrap();
        let s = encode(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(&s[..4], "~?@c");
        assert_eq!(decode(&s).unwrap(), g);
    }
}
