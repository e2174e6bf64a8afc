//! Canonical edges: sorted vertex tuples with a packed colex key.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::binom::{colex_rank, colex_unrank};
use crate::error::{Error, Result};

/// Dense 0-based vertex index.
pub type VertexId = u32;

/// An `r`-edge in canonical form: strictly increasing vertices plus the colex
/// rank of the tuple, which doubles as the dense membership key.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    verts: SmallVec<[VertexId; 4]>,
    key: u64,
}

impl Edge {
    /// Canonicalize a vertex multiset into an edge. The same multiset always
    /// yields the same edge; duplicates and arities below 2 are rejected.
    pub fn new<I: IntoIterator<Item = VertexId>>(vertices: I) -> Result<Edge> {
        let mut verts: SmallVec<[VertexId; 4]> = vertices.into_iter().collect();
        if verts.len() < 2 {
            return Err(Error::InvalidEdge(format!(
                "arity {} below the minimum uniformity 2",
                verts.len()
            )));
        }
        verts.sort_unstable();
        if verts.windows(2).any(|w| w[0] == w[1]) {
            let dup = verts.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(Error::InvalidEdge(format!("repeated vertex {dup}")));
        }
        let key = colex_rank(&verts)
            .ok_or_else(|| Error::Resource("edge key overflows u64".into()))?;
        Ok(Edge { verts, key })
    }

    /// Rebuild an edge from its colex key.
    pub fn from_key(key: u64, r: u32) -> Edge {
        let verts = colex_unrank(key, r);
        Edge { verts, key }
    }

    pub(crate) fn from_canonical_parts(verts: SmallVec<[VertexId; 4]>, key: u64) -> Edge {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(colex_rank(&verts), Some(key));
        Edge { verts, key }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.verts
    }

    /// Colex rank of the vertex tuple; for vertices below `n` this lies in
    /// `[0, C(n, r))` and is a bijection with the tuple.
    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn arity(&self) -> usize {
        self.verts.len()
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.verts.last().expect("edges are never empty")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.verts.binary_search(&v).is_ok()
    }
}

/// Colex order: ranks compare like reversed tuples.
impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .cmp(&other.key)
            .then_with(|| self.verts.cmp(&other.verts))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
