//! Decomposition trees of finite graph continua.
//!
//! A finite connected multigraph with positive rational edge lengths is viewed
//! through its geometric realization: a compact, connected, locally connected
//! metric space. This crate computes the structure that the cut points and cut
//! pairs of that space impose on it:
//!
//! * [`continuum`] — the graph model itself: exact points, removal of finite
//!   point sets, connectivity components, and the separation oracle that every
//!   other module is built on.
//! * [`pretree`] — betweenness tables, the four pretree axioms, intervals and
//!   their linear orders, and assembly of a tree from a verified table.
//! * [`cutpoint`] — cut points, equivalence classes of non-cut points, the
//!   cut-point pretree and tree, metrization, and maps induced by graph
//!   automorphisms.
//! * [`cutpair`] — for continua without cut points: cyclic sets, necklaces,
//!   inseparable structure, gaps, the circle map, and the JSJ tree.
//! * [`combined`] — splices the per-block JSJ trees into the cut-point tree.
//! * [`actions`] — classification of tree maps: non-nesting verification,
//!   elliptic fixed sets, hyperbolic axes, global fixed points, fixed ends.
//! * [`verify`] — the executable property suite run by the CLI and the
//!   acceptance tests.
//!
//! All arithmetic is exact rational; no floating point is used anywhere.

pub mod actions;
pub mod combined;
pub mod continuum;
pub mod corpus;
pub mod cutpair;
pub mod cutpoint;
pub mod emit;
pub mod error;
pub mod pretree;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational scalar used for edge lengths, point parameters and metrics.
pub type Rational = num_rational::Rational64;

/// Shorthand for constructing a rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
