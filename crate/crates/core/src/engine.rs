//! The synchronous clique bootstrap process.
//!
//! Round `t` adds every missing edge `e` for which some `k`-set `S ⊇ e` has
//! all of its other `r`-subsets present, i.e. adding `e` completes a new copy
//! of the complete `r`-uniform hypergraph on `k` vertices. Two engines share
//! this contract:
//!
//! * `Naive` scans every `k`-set of the vertex set each round. Slow, but an
//!   independent oracle.
//! * `Incremental` scans only `k`-sets around the previous round's additions
//!   (the frontier). An edge first infectable at round `t+1` has every
//!   witness meeting round `t`'s additions, otherwise it would have been
//!   infected earlier, so the frontier scan is exhaustive.

use std::collections::HashMap;
use std::io::Write;

use serde::Serialize;
use smallvec::SmallVec;

use crate::binom::BinomTable;
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, DEFAULT_DENSE_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    Naive,
    Incremental,
}

/// Configuration for a percolation run.
#[derive(Clone, Debug)]
pub struct PercolationConfig {
    /// Clique size `k` of the completion pattern; must exceed the uniformity.
    pub k: u32,
    pub engine: EngineKind,
    /// Cap on the number of rounds; defaults to `C(n, r) + 1`, which no run
    /// can exhaust since every active round adds at least one edge.
    pub max_rounds: Option<u64>,
    /// Keep the completed-copy vertex set for every added edge.
    pub record_witnesses: bool,
    /// Budget for the working copy's dense membership table; runs fall back
    /// to the hashed store above it.
    pub dense_budget: usize,
}

impl PercolationConfig {
    pub fn new(k: u32) -> PercolationConfig {
        PercolationConfig {
            k,
            engine: EngineKind::Incremental,
            max_rounds: None,
            record_witnesses: true,
            dense_budget: DEFAULT_DENSE_BUDGET,
        }
    }

    pub fn engine(mut self, engine: EngineKind) -> Self {
        self.engine = engine;
        self
    }

    pub fn witnesses(mut self, record: bool) -> Self {
        self.record_witnesses = record;
        self
    }

    pub fn max_rounds(mut self, cap: u64) -> Self {
        self.max_rounds = Some(cap);
        self
    }
}

/// Sorted vertex set of the completed copy that justified an infection.
pub type Witness = Vec<VertexId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundEdge {
    pub edge: Edge,
    pub witness: Option<Witness>,
}

/// One synchronous round; `added` is in colex-key order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub t: u64,
    pub added: Vec<RoundEdge>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// Number of active rounds, `min{t : G_t = G_{t+1}}` when not truncated.
    pub running_time: u64,
    pub rounds: Vec<RoundRecord>,
    pub final_edge_count: u64,
    pub percolated: bool,
    /// The round cap was hit before the process stabilized.
    pub truncated: bool,
}

impl RunResult {
    /// Added edges of every round flattened in order.
    pub fn flat_edges(&self) -> impl Iterator<Item = &Edge> {
        self.rounds.iter().flat_map(|r| r.added.iter().map(|a| &a.edge))
    }
}

fn check_k(g: &Hypergraph, k: u32) -> Result<()> {
    if k <= g.uniformity() {
        return Err(Error::InvalidConfig(format!(
            "clique size k={k} must exceed the uniformity r={}",
            g.uniformity()
        )));
    }
    Ok(())
}

/// One synchronous round by brute force: every non-edge `e` with a `k`-set
/// witness whose other `r`-subsets are all present, paired with the
/// lexicographically least witness, in colex-key order of the edges.
pub fn infect_round_naive(g: &Hypergraph, k: u32) -> Result<Vec<(Edge, Witness)>> {
    check_k(g, k)?;
    let mut found: HashMap<u64, (Edge, Witness)> = HashMap::new();
    // Lexicographic k-set enumeration makes the first witness per edge the
    // lexicographically least one.
    scan_all_witnesses(g, k, |verts, missing| {
        found
            .entry(missing.key())
            .or_insert_with(|| (missing.clone(), verts.to_vec()));
    });
    Ok(sorted_by_key(found))
}

fn sorted_by_key(found: HashMap<u64, (Edge, Witness)>) -> Vec<(Edge, Witness)> {
    let mut out: Vec<(Edge, Witness)> = found.into_values().collect();
    out.sort_unstable_by_key(|(e, _)| e.key());
    out
}

/// Visit every k-set with exactly one absent r-subset. The callback gets the
/// sorted k-set and the absent subset as an edge.
fn scan_all_witnesses<F: FnMut(&[u32], &Edge)>(g: &Hypergraph, k: u32, mut f: F) {
    let n = g.vertex_count();
    if k > n {
        return;
    }
    if k == g.uniformity() + 1 {
        let mut scan = DropOneScan {
            g,
            n,
            k: k as usize,
            s: vec![0; k as usize],
            pre: vec![0; k as usize + 1],
            f: &mut |s: &[u32], p: usize| {
                let e = subset_dropping(g.table(), s, p);
                f(s, &e);
            },
        };
        scan.descend(0, 0);
    } else {
        let r = g.uniformity() as usize;
        let mut sub: Vec<u32> = vec![0; r];
        crate::binom::for_each_combination(n, k, |s| {
            if let Some(e) = sole_missing_subset(g, s, r, &mut sub) {
                f(s, &e);
            }
        });
    }
}

/// Exactly-one-missing test over all r-subsets of `s`, for general arity.
fn sole_missing_subset(
    g: &Hypergraph,
    s: &[u32],
    r: usize,
    scratch: &mut [u32],
) -> Option<Edge> {
    let tb = g.table();
    let k = s.len();
    let mut missing: Option<u64> = None;
    let mut pos: Vec<usize> = (0..r).collect();
    loop {
        let mut key = 0u64;
        for (i, &p) in pos.iter().enumerate() {
            key += tb.get(s[p], i as u32 + 1);
        }
        if !g.contains_key(key) {
            if missing.is_some() {
                return None;
            }
            missing = Some(key);
            for (i, &p) in pos.iter().enumerate() {
                scratch[i] = s[p];
            }
        }
        // next position combination
        let mut i = r;
        loop {
            if i == 0 {
                let key = missing?;
                let verts: SmallVec<[u32; 4]> = SmallVec::from_slice(&scratch[..r]);
                return Some(Edge::from_canonical_parts(verts, key));
            }
            i -= 1;
            if pos[i] < k - (r - i) {
                break;
            }
        }
        pos[i] += 1;
        for j in i + 1..r {
            pos[j] = pos[j - 1] + 1;
        }
    }
}

/// Edge formed by dropping position `p` from the sorted set `s`.
fn subset_dropping(tb: &BinomTable, s: &[u32], p: usize) -> Edge {
    let mut verts: SmallVec<[u32; 4]> = SmallVec::with_capacity(s.len() - 1);
    for (i, &v) in s.iter().enumerate() {
        if i != p {
            verts.push(v);
        }
    }
    let key = tb.rank(&verts);
    Edge::from_canonical_parts(verts, key)
}

/// Brute-force scan specialized to `k = r + 1`, where the r-subsets of a
/// k-set are its drop-one subsets. The prefix walk carries partial colex
/// keys so the innermost loop does one table load and `r` bit tests per
/// candidate set.
struct DropOneScan<'a, F> {
    g: &'a Hypergraph,
    n: u32,
    k: usize,
    s: Vec<u32>,
    /// `pre[q] = sum_{i<q} C(s_i, i+1)`: key contribution of a prefix whose
    /// positions are unshifted (no dropped element before them).
    pre: Vec<u64>,
    f: &'a mut F,
}

impl<F: FnMut(&[u32], usize)> DropOneScan<'_, F> {
    fn descend(&mut self, level: usize, start: u32) {
        if level == self.k - 1 {
            self.leaf(start);
            return;
        }
        let max = self.n - (self.k - level) as u32;
        let tb = self.g.table();
        for v in start..=max {
            self.s[level] = v;
            self.pre[level + 1] = self.pre[level] + tb.get(v, level as u32 + 1);
            self.descend(level + 1, v + 1);
        }
    }

    /// Fixed prefix `s[0..k-1]`, last element `d` sweeping `start..n`.
    ///
    /// For the subset dropping position `p < k-1`, every element after `p`
    /// shifts down one rank slot, so its key is
    /// `pre[p] + sum_{p<i<k-1} C(s_i, i) + C(d, k-1)`; the `d`-free part is
    /// precomputed per prefix in `fixed[p]`. The subset dropping `d` itself
    /// is the prefix, with key `pre[k-1]`, tested once.
    fn leaf(&mut self, start: u32) {
        let k = self.k;
        let last = k - 1;
        let tb = self.g.table();
        let mut fixed: SmallVec<[u64; 8]> = SmallVec::with_capacity(last);
        let mut mid = 0u64;
        fixed.push(0);
        for p in (0..last.saturating_sub(1)).rev() {
            mid += tb.get(self.s[p + 1], p as u32 + 1);
            fixed.push(mid);
        }
        fixed.reverse();
        for p in 0..last {
            fixed[p] += self.pre[p];
        }
        let prefix_key = self.pre[last];
        let prefix_present = self.g.contains_key(prefix_key);
        for d in start..self.n {
            let cd = tb.get(d, last as u32);
            if prefix_present {
                // the absent subset, if unique, contains d
                let mut miss = usize::MAX;
                let mut count = 0u32;
                for (p, fx) in fixed.iter().enumerate() {
                    if !self.g.contains_key(fx + cd) {
                        count += 1;
                        if count > 1 {
                            break;
                        }
                        miss = p;
                    }
                }
                if count == 1 {
                    self.s[last] = d;
                    (self.f)(&self.s, miss);
                }
            } else {
                // the prefix is the only subset allowed to be absent
                if fixed.iter().all(|fx| self.g.contains_key(fx + cd)) {
                    self.s[last] = d;
                    (self.f)(&self.s, last);
                }
            }
        }
    }
}

/// Infections discoverable from the given frontier edges: for every frontier
/// edge `f` and `(k-r)`-set `U` disjoint from it, test `S = f ∪ U` for
/// exactly one absent r-subset. Candidates keep the lexicographically least
/// witness, which equals the naive engine's choice because every witness of
/// a newly infectable edge contains a frontier edge.
fn infect_round_from_frontier(
    g: &Hypergraph,
    frontier: &[Edge],
    k: u32,
) -> Vec<(Edge, Witness)> {
    let n = g.vertex_count();
    let r = g.uniformity() as usize;
    let ext = k as usize - r;
    let mut found: HashMap<u64, (Edge, Witness)> = HashMap::new();
    if k > n {
        return Vec::new();
    }
    let mut record = |edge: Edge, s: &[u32]| {
        found
            .entry(edge.key())
            .and_modify(|(_, w)| {
                if s < w.as_slice() {
                    *w = s.to_vec();
                }
            })
            .or_insert_with(|| (edge, s.to_vec()));
    };
    let mut s: Vec<u32> = vec![0; k as usize];
    let mut sub: Vec<u32> = vec![0; r];
    for f in frontier {
        if ext == 1 {
            // merge each outside vertex into the sorted frontier edge
            for d in 0..n {
                if f.contains(d) {
                    continue;
                }
                merge_one(f.vertices(), d, &mut s);
                if let Some(missing) = sole_missing_drop_one(g, &s) {
                    let e = subset_dropping(g.table(), &s, missing);
                    record(e, &s);
                }
            }
        } else {
            let outside: Vec<u32> = (0..n).filter(|&v| !f.contains(v)).collect();
            crate::binom::for_each_combination(outside.len() as u32, ext as u32, |pick| {
                merge_many(f.vertices(), pick, &outside, &mut s);
                if let Some(e) = sole_missing_subset(g, &s, r, &mut sub) {
                    record(e, &s);
                }
            });
        }
    }
    sorted_by_key(found)
}

fn merge_one(sorted: &[u32], d: u32, out: &mut [u32]) {
    let mut i = 0;
    for &v in sorted {
        if v < d {
            out[i] = v;
            i += 1;
        }
    }
    out[i] = d;
    i += 1;
    for &v in sorted {
        if v > d {
            out[i] = v;
            i += 1;
        }
    }
}

fn merge_many(sorted: &[u32], pick: &[u32], outside: &[u32], out: &mut [u32]) {
    let mut a = 0;
    let mut b = 0;
    for slot in out.iter_mut() {
        let take_left = if a == sorted.len() {
            false
        } else if b == pick.len() {
            true
        } else {
            sorted[a] < outside[pick[b] as usize]
        };
        if take_left {
            *slot = sorted[a];
            a += 1;
        } else {
            *slot = outside[pick[b] as usize];
            b += 1;
        }
    }
}

/// Position of the unique absent drop-one subset of sorted `s`, if any.
fn sole_missing_drop_one(g: &Hypergraph, s: &[u32]) -> Option<usize> {
    let tb = g.table();
    let k = s.len();
    let mut pre: SmallVec<[u64; 8]> = SmallVec::with_capacity(k + 1);
    let mut suf: SmallVec<[u64; 8]> = SmallVec::with_capacity(k + 1);
    pre.push(0);
    for (i, &v) in s.iter().enumerate() {
        let prev = pre[i];
        pre.push(prev + tb.get(v, i as u32 + 1));
    }
    suf.push(0);
    for (back, &v) in s.iter().rev().enumerate() {
        let i = k - 1 - back;
        let prev = suf[back];
        suf.push(prev + tb.get(v, i as u32));
    }
    suf.reverse();
    let mut miss = None;
    for p in 0..k {
        if !g.contains_key(pre[p] + suf[p + 1]) {
            if miss.is_some() {
                return None;
            }
            miss = Some(p);
        }
    }
    miss
}

/// All k-sets whose r-subsets all lie in `g_prev ∪ added` but not all in
/// `g_prev`, i.e. the copies completed by this batch. Sorted lexicographically.
pub fn new_copies(g_prev: &Hypergraph, added: &[Edge], k: u32) -> Result<Vec<Witness>> {
    check_k(g_prev, k)?;
    let n = g_prev.vertex_count();
    let r = g_prev.uniformity() as usize;
    let ext = k as usize - r;
    let mut added_keys: Vec<u64> = Vec::with_capacity(added.len());
    for e in added {
        if e.arity() != r {
            return Err(Error::InvalidEdge(format!(
                "added edge {e} has arity {}, expected {r}",
                e.arity()
            )));
        }
        if g_prev.contains(e) {
            return Err(Error::InvalidInput(format!(
                "added edge {e} is already present"
            )));
        }
        added_keys.push(e.key());
    }
    added_keys.sort_unstable();
    let present = |key: u64| g_prev.contains_key(key) || added_keys.binary_search(&key).is_ok();
    let mut copies: std::collections::BTreeSet<Witness> = std::collections::BTreeSet::new();
    if k > n {
        return Ok(Vec::new());
    }
    let tb = g_prev.table();
    let mut s: Vec<u32> = vec![0; k as usize];
    // every completed copy contains at least one added edge
    for f in added {
        let outside: Vec<u32> = (0..n).filter(|&v| !f.contains(v)).collect();
        crate::binom::for_each_combination(outside.len() as u32, ext as u32, |pick| {
            merge_many(f.vertices(), pick, &outside, &mut s);
            let mut pos: Vec<usize> = (0..r).collect();
            let all_present = loop {
                let mut key = 0u64;
                for (i, &p) in pos.iter().enumerate() {
                    key += tb.get(s[p], i as u32 + 1);
                }
                if !present(key) {
                    break false;
                }
                let mut i = r;
                let exhausted = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    if pos[i] < k as usize - (r - i) {
                        break false;
                    }
                };
                if exhausted {
                    break true;
                }
                pos[i] += 1;
                for j in i + 1..r {
                    pos[j] = pos[j - 1] + 1;
                }
            };
            if all_present {
                copies.insert(s.clone());
            }
        });
    }
    Ok(copies.into_iter().collect())
}

/// Run the process to stabilization (or the round cap) with the engine named
/// in the config.
pub fn run(g0: &Hypergraph, cfg: &PercolationConfig) -> Result<RunResult> {
    check_k(g0, cfg.k)?;
    let mut g = g0.with_auto_store(cfg.dense_budget);
    let max_rounds = cfg
        .max_rounds
        .unwrap_or_else(|| g.max_edge_count().saturating_add(1));
    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut frontier: Option<Vec<Edge>> = None;
    let mut stabilized = false;
    let mut t: u64 = 0;
    while t < max_rounds {
        t += 1;
        let additions = match cfg.engine {
            EngineKind::Naive => infect_round_naive(&g, cfg.k)?,
            EngineKind::Incremental => {
                let fr = match frontier.take() {
                    Some(fr) => fr,
                    None => g.edges(),
                };
                infect_round_from_frontier(&g, &fr, cfg.k)
            }
        };
        if additions.is_empty() {
            stabilized = true;
            break;
        }
        for (e, _) in &additions {
            g.insert_new(e)?;
        }
        if cfg.engine == EngineKind::Incremental {
            frontier = Some(additions.iter().map(|(e, _)| e.clone()).collect());
        }
        let added = additions
            .into_iter()
            .map(|(edge, witness)| RoundEdge {
                edge,
                witness: cfg.record_witnesses.then_some(witness),
            })
            .collect();
        rounds.push(RoundRecord { t, added });
    }
    Ok(RunResult {
        running_time: rounds.len() as u64,
        final_edge_count: g.edge_count(),
        percolated: g.is_complete(),
        truncated: !stabilized,
        rounds,
    })
}

/// [`run`] with the naive engine.
pub fn run_naive(g0: &Hypergraph, cfg: &PercolationConfig) -> Result<RunResult> {
    run(g0, &cfg.clone().engine(EngineKind::Naive))
}

/// [`run`] with the incremental engine.
pub fn run_incremental(g0: &Hypergraph, cfg: &PercolationConfig) -> Result<RunResult> {
    run(g0, &cfg.clone().engine(EngineKind::Incremental))
}

#[derive(Serialize)]
struct TraceEdge<'a> {
    e: &'a [VertexId],
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<&'a [VertexId]>,
}

#[derive(Serialize)]
struct TraceRound<'a> {
    t: u64,
    edges: Vec<TraceEdge<'a>>,
}

/// JSON Lines trace: one object per round, edges in colex-key order, `w`
/// omitted when witnesses were not recorded.
pub fn write_trace_jsonl<W: Write>(result: &RunResult, mut w: W) -> std::io::Result<()> {
    for round in &result.rounds {
        let line = TraceRound {
            t: round.t,
            edges: round
                .added
                .iter()
                .map(|a| TraceEdge {
                    e: a.edge.vertices(),
                    w: a.witness.as_deref(),
                })
                .collect(),
        };
        serde_json::to_writer(&mut w, &line)?;
        writeln!(w)?;
    }
    Ok(())
}
