//! Uniform hypergraphs with O(1) edge membership and a line-based text format.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use smallvec::SmallVec;

use crate::binom::BinomTable;
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};

/// Default memory budget for the dense bit-array store: 256 MiB.
pub const DEFAULT_DENSE_BUDGET: usize = 256 * 1024 * 1024;

/// Backing store for edge membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StoreKind {
    /// Hash set of edge keys. Works at any scale; the default.
    Hashed,
    /// One bit per possible edge, indexed by colex key. Needs
    /// `C(n, r)` bits to fit the memory budget.
    Dense,
}

#[derive(Clone, Debug)]
enum Store {
    Hashed(HashSet<u64>),
    Dense(Vec<u64>),
}

/// An `r`-uniform hypergraph on vertex set `[0, n)`.
#[derive(Clone, Debug)]
pub struct Hypergraph {
    r: u32,
    n: u32,
    max_edges: u64,
    table: BinomTable,
    store: Store,
    count: u64,
}

impl Hypergraph {
    /// Empty hypergraph with the hashed store.
    pub fn new(r: u32, n: u32) -> Result<Hypergraph> {
        Hypergraph::with_store(r, n, StoreKind::Hashed, DEFAULT_DENSE_BUDGET)
    }

    /// Empty hypergraph with an explicit store. A dense store whose bit table
    /// exceeds `budget_bytes` is refused with [`Error::Resource`].
    pub fn with_store(r: u32, n: u32, kind: StoreKind, budget_bytes: usize) -> Result<Hypergraph> {
        if r < 2 {
            return Err(Error::InvalidInput(format!(
                "uniformity must be at least 2, got {r}"
            )));
        }
        let table = BinomTable::new(n.max(r), r)?;
        let max_edges = table.get(n, r);
        let store = match kind {
            StoreKind::Hashed => Store::Hashed(HashSet::new()),
            StoreKind::Dense => {
                let words = (max_edges as usize).div_ceil(64);
                if words.saturating_mul(8) > budget_bytes {
                    return Err(Error::Resource(format!(
                        "dense store needs {} bytes, budget is {budget_bytes}",
                        words.saturating_mul(8)
                    )));
                }
                Store::Dense(vec![0u64; words])
            }
        };
        Ok(Hypergraph { r, n, max_edges, table, store, count: 0 })
    }

    pub fn uniformity(&self) -> u32 {
        self.r
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.count
    }

    /// `C(n, r)`, the size of the complete hypergraph.
    pub fn max_edge_count(&self) -> u64 {
        self.max_edges
    }

    pub fn is_complete(&self) -> bool {
        self.count == self.max_edges
    }

    pub fn store_kind(&self) -> StoreKind {
        match self.store {
            Store::Hashed(_) => StoreKind::Hashed,
            Store::Dense(_) => StoreKind::Dense,
        }
    }

    pub(crate) fn table(&self) -> &BinomTable {
        &self.table
    }

    /// Canonicalize vertices into an edge of this hypergraph, enforcing the
    /// arity and the vertex range.
    pub fn canonical_edge(&self, vertices: &[VertexId]) -> Result<Edge> {
        if vertices.len() != self.r as usize {
            return Err(Error::InvalidEdge(format!(
                "expected {} vertices, got {}",
                self.r,
                vertices.len()
            )));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::InvalidEdge(format!(
                "vertex {v} out of range (n={})",
                self.n
            )));
        }
        let mut verts: SmallVec<[u32; 4]> = SmallVec::from_slice(vertices);
        verts.sort_unstable();
        if let Some(w) = verts.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(format!("repeated vertex {}", w[0])));
        }
        let key = self.table.rank(&verts);
        Ok(Edge::from_canonical_parts(verts, key))
    }

    fn check_owned(&self, e: &Edge) -> Result<()> {
        if e.arity() != self.r as usize {
            return Err(Error::InvalidEdge(format!(
                "edge {e} has arity {}, hypergraph uniformity is {}",
                e.arity(),
                self.r
            )));
        }
        if e.max_vertex() >= self.n {
            return Err(Error::InvalidEdge(format!(
                "vertex {} out of range (n={})",
                e.max_vertex(),
                self.n
            )));
        }
        Ok(())
    }

    #[inline(always)]
    pub(crate) fn contains_key(&self, key: u64) -> bool {
        match &self.store {
            Store::Hashed(s) => s.contains(&key),
            Store::Dense(bits) => {
                (bits[(key >> 6) as usize] >> (key & 63)) & 1 == 1
            }
        }
    }

    pub fn contains(&self, e: &Edge) -> bool {
        e.arity() == self.r as usize && e.max_vertex() < self.n && self.contains_key(e.key())
    }

    /// Insert an edge; returns `false` (and changes nothing) if it was
    /// already present.
    pub fn add_edge(&mut self, e: &Edge) -> Result<bool> {
        self.check_owned(e)?;
        Ok(self.insert_key(e.key()))
    }

    /// Insert an edge that must not already be present.
    pub fn insert_new(&mut self, e: &Edge) -> Result<()> {
        if !self.add_edge(e)? {
            return Err(Error::InvalidInput(format!("duplicate edge {e}")));
        }
        Ok(())
    }

    pub(crate) fn insert_key(&mut self, key: u64) -> bool {
        let fresh = match &mut self.store {
            Store::Hashed(s) => s.insert(key),
            Store::Dense(bits) => {
                let word = &mut bits[(key >> 6) as usize];
                let mask = 1u64 << (key & 63);
                let fresh = *word & mask == 0;
                *word |= mask;
                fresh
            }
        };
        if fresh {
            self.count += 1;
        }
        fresh
    }

    /// Remove an edge; returns `false` if it was not present.
    pub fn remove_edge(&mut self, e: &Edge) -> Result<bool> {
        self.check_owned(e)?;
        let key = e.key();
        let removed = match &mut self.store {
            Store::Hashed(s) => s.remove(&key),
            Store::Dense(bits) => {
                let word = &mut bits[(key >> 6) as usize];
                let mask = 1u64 << (key & 63);
                let removed = *word & mask != 0;
                *word &= !mask;
                removed
            }
        };
        if removed {
            self.count -= 1;
        }
        Ok(removed)
    }

    /// All edge keys in ascending (colex) order.
    pub fn edge_keys_sorted(&self) -> Vec<u64> {
        match &self.store {
            Store::Hashed(s) => {
                let mut keys: Vec<u64> = s.iter().copied().collect();
                keys.sort_unstable();
                keys
            }
            Store::Dense(bits) => {
                let mut keys = Vec::with_capacity(self.count as usize);
                for (w, &word) in bits.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let b = word.trailing_zeros();
                        keys.push((w as u64) << 6 | b as u64);
                        word &= word - 1;
                    }
                }
                keys
            }
        }
    }

    /// All edges in colex order.
    pub fn edges(&self) -> Vec<Edge> {
        self.edge_keys_sorted()
            .into_iter()
            .map(|k| Edge::from_key(k, self.r))
            .collect()
    }

    /// Copy with the requested store kind.
    pub fn converted(&self, kind: StoreKind, budget_bytes: usize) -> Result<Hypergraph> {
        if kind == self.store_kind() {
            return Ok(self.clone());
        }
        let mut out = Hypergraph::with_store(self.r, self.n, kind, budget_bytes)?;
        for key in self.edge_keys_sorted() {
            out.insert_key(key);
        }
        Ok(out)
    }

    /// Copy using the dense store when it fits the budget, else hashed.
    /// This never fails: hashing is the universal fallback.
    pub fn with_auto_store(&self, budget_bytes: usize) -> Hypergraph {
        let fits = (self.max_edges as usize).div_ceil(64).saturating_mul(8) <= budget_bytes;
        let kind = if fits { StoreKind::Dense } else { StoreKind::Hashed };
        self.converted(kind, budget_bytes)
            .expect("fallback store cannot exceed the budget")
    }

    /// Parse the text format:
    /// `#` lines are comments, blank lines are skipped, the first data line is
    /// `r n m`, followed by exactly `m` lines of `r` vertex indices each
    /// (any order within a line). Duplicate edges are a hard error.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Hypergraph> {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut graph: Option<Hypergraph> = None;
        let mut expected: u64 = 0;
        let mut read: u64 = 0;
        let mut line_no = 0usize;
        for line in reader.lines() {
            line_no += 1;
            let line = line?;
            let data = line.trim();
            if data.is_empty() || data.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = data.split_whitespace().collect();
            match graph {
                None => {
                    if fields.len() != 3 {
                        return Err(parse_err(
                            line_no,
                            format!("header must be `r n m`, got {} fields", fields.len()),
                        ));
                    }
                    let r: u32 = fields[0].parse().map_err(|_| {
                        parse_err(line_no, format!("bad uniformity {:?}", fields[0]))
                    })?;
                    let n: u32 = fields[1].parse().map_err(|_| {
                        parse_err(line_no, format!("bad vertex count {:?}", fields[1]))
                    })?;
                    expected = fields[2].parse().map_err(|_| {
                        parse_err(line_no, format!("bad edge count {:?}", fields[2]))
                    })?;
                    let g = Hypergraph::new(r, n).map_err(|e| match e {
                        // an unrepresentable key space is a resource problem,
                        // not a syntax one
                        Error::Resource(_) => e,
                        other => parse_err(line_no, other.to_string()),
                    })?;
                    graph = Some(g);
                }
                Some(ref mut g) => {
                    if read == expected {
                        return Err(parse_err(
                            line_no,
                            format!("unexpected extra data after {expected} edges"),
                        ));
                    }
                    let mut verts: SmallVec<[u32; 4]> = SmallVec::new();
                    for f in &fields {
                        verts.push(f.parse().map_err(|_| {
                            parse_err(line_no, format!("bad vertex index {f:?}"))
                        })?);
                    }
                    let edge = g
                        .canonical_edge(&verts)
                        .map_err(|e| parse_err(line_no, e.to_string()))?;
                    if !g.insert_key(edge.key()) {
                        return Err(parse_err(line_no, format!("duplicate edge {edge}")));
                    }
                    read += 1;
                }
            }
        }
        let g = graph.ok_or_else(|| parse_err(line_no + 1, "missing `r n m` header".into()))?;
        if read != expected {
            return Err(parse_err(
                line_no + 1,
                format!("header declared {expected} edges, file has {read}"),
            ));
        }
        Ok(g)
    }

    /// Write the text format, bit-exact: header then edges in colex order,
    /// vertices ascending, single spaces, `\n` endings.
    pub fn write_text<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{} {} {}", self.r, self.n, self.count)?;
        for edge in self.edges() {
            let mut first = true;
            for v in edge.vertices() {
                if !first {
                    write!(w, " ")?;
                }
                write!(w, "{v}")?;
                first = false;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}
