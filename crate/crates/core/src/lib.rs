//! Clique bootstrap percolation on uniform hypergraphs.
//!
//! Starting from an initial infection `G_0`, each synchronous round adds
//! every missing edge whose insertion would complete a new copy of the
//! complete `r`-uniform hypergraph on `k` vertices, until nothing changes.
//! The crate provides:
//!
//! * [`hypergraph`]: canonical edges with packed colex keys, hashed or
//!   dense-bitset membership, and a plain text file format;
//! * [`engine`]: the process itself, as a brute-force oracle and as an
//!   equivalent frontier-based incremental engine, with full traces;
//! * [`constructions`]: generators for initial infections with known
//!   behavior, in particular a family on `9n-4` vertices whose process runs
//!   for `4n^3 - 2n^2 + 6n - 6` rounds adding exactly one edge per round;
//! * [`verify`]: checkers that confirm the one-edge-per-round discipline,
//!   the exact predicted infection order, and the cubic growth.

pub mod binom;
pub mod constructions;
pub mod edge;
pub mod engine;
mod error;
pub mod hypergraph;
pub mod verify;

pub use edge::{Edge, VertexId};
pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, StoreKind, DEFAULT_DENSE_BUDGET};
