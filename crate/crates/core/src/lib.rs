//! Exact comparison of the first and second Zagreb indices.
//!
//! For a graph with `n` vertices and `m` edges, `M1 = Σ d(v)²` and
//! `M2 = Σ_{uv} d(u)d(v)`. The crate decides `M1/n` versus `M2/m` with exact
//! integer arithmetic, checks the closed-form analysis of the class-pair
//! function `Ψ`, builds the known counterexample families and searches for
//! new ones.

pub mod families;
pub mod graph;
pub mod indices;
pub mod io;
pub mod rational;
pub mod search;
pub mod theorem;

pub use graph::{edge_class, EdgeClass, EdgeClassHistogram, Graph, GraphError};
pub use indices::{index_report, IndexError, IndexReport};
pub use rational::Rational;
