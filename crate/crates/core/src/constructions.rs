//! Initial infections with known behavior: the slow-percolating triple-layer
//! construction, its predicted infection sequence, and small reference
//! hypergraphs (beachballs, paths, near-complete graphs).

use std::fmt;
use std::io::Write;

use crate::edge::Edge;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Semantic name of a vertex in the slow construction.
///
/// The construction has `n` top vertices `t_i`, `2n-1` bottom vertices
/// `b_j`/`b_-j`, `3n` middle vertices `m_l` for `-(n-1) <= l <= 2n`, and
/// `3(n-1)` dummy vertices `d_{i,s}` used by the top-swap gadgets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// `t_i`, `1 <= i <= n`.
    Top(u32),
    /// `b_j`, `1 <= j <= n`.
    BottomPos(u32),
    /// `b_-j`, `1 <= j <= n-1`.
    BottomNeg(u32),
    /// `m_l`, `-(n-1) <= l <= 2n`.
    Middle(i64),
    /// `d_{i,s}`, `1 <= i <= n-1`, `1 <= s <= 3`.
    Dummy(u32, u32),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Top(i) => write!(f, "t{i}"),
            Label::BottomPos(j) => write!(f, "b{j}"),
            Label::BottomNeg(j) => write!(f, "b-{j}"),
            Label::Middle(l) => write!(f, "m{l}"),
            Label::Dummy(i, s) => write!(f, "d{i},{s}"),
        }
    }
}

/// Fixed bijection between labels and dense vertex indices:
/// `t_i -> i-1`, `b_j -> n+j-1`, `b_-j -> 2n+j-1`, `m_l -> l+4n-2`,
/// `d_{i,s} -> 6n-1+3(i-1)+(s-1)`.
#[derive(Clone, Copy, Debug)]
struct LabelMap {
    n: i64,
}

impl LabelMap {
    fn new(n: u32) -> LabelMap {
        LabelMap { n: n as i64 }
    }

    fn t(&self, i: i64) -> u32 {
        debug_assert!(1 <= i && i <= self.n);
        (i - 1) as u32
    }

    fn b(&self, j: i64) -> u32 {
        if j > 0 {
            debug_assert!(j <= self.n);
            (self.n + j - 1) as u32
        } else {
            debug_assert!(j < 0 && -j < self.n);
            (2 * self.n - j - 1) as u32
        }
    }

    fn m(&self, l: i64) -> u32 {
        debug_assert!(-(self.n - 1) <= l && l <= 2 * self.n);
        (l + 4 * self.n - 2) as u32
    }

    fn d(&self, i: i64, s: i64) -> u32 {
        debug_assert!(1 <= i && i < self.n && (1..=3).contains(&s));
        (6 * self.n - 1 + 3 * (i - 1) + (s - 1)) as u32
    }

    fn label_of(&self, index: u32) -> Label {
        let n = self.n;
        let v = index as i64;
        if v < n {
            Label::Top((v + 1) as u32)
        } else if v < 2 * n {
            Label::BottomPos((v - n + 1) as u32)
        } else if v < 3 * n - 1 {
            Label::BottomNeg((v - 2 * n + 1) as u32)
        } else if v < 6 * n - 1 {
            Label::Middle(v - (4 * n - 2))
        } else {
            let off = v - (6 * n - 1);
            Label::Dummy((off / 3 + 1) as u32, (off % 3 + 1) as u32)
        }
    }
}

/// The slow-percolating initial infection together with its label map and
/// the distinguished starting edge.
#[derive(Clone, Debug)]
pub struct LabeledConstruction {
    pub g0: Hypergraph,
    /// `labels[v]` is the semantic name of vertex `v`.
    pub labels: Vec<Label>,
    /// `{t_1, m_0, m_1}`, the edge whose removal freezes the process.
    pub e0: Edge,
    pub n_param: u32,
}

impl LabeledConstruction {
    pub fn label_of(&self, v: u32) -> Label {
        self.labels[v as usize]
    }

    /// Dense index of a label, if it is in range for this construction.
    pub fn index_of(&self, label: Label) -> Option<u32> {
        let n = self.n_param as i64;
        let lm = LabelMap::new(self.n_param);
        match label {
            Label::Top(i) if 1 <= i as i64 && (i as i64) <= n => Some(lm.t(i as i64)),
            Label::BottomPos(j) if 1 <= j as i64 && (j as i64) <= n => Some(lm.b(j as i64)),
            Label::BottomNeg(j) if 1 <= j as i64 && (j as i64) < n => Some(lm.b(-(j as i64))),
            Label::Middle(l) if -(n - 1) <= l && l <= 2 * n => Some(lm.m(l)),
            Label::Dummy(i, s)
                if 1 <= i as i64 && (i as i64) < n && (1..=3).contains(&s) =>
            {
                Some(lm.d(i as i64, s as i64))
            }
            _ => None,
        }
    }

    /// Canonical edge from three labels.
    pub fn edge(&self, a: Label, b: Label, c: Label) -> Result<Edge> {
        let mut verts = [0u32; 3];
        for (slot, l) in verts.iter_mut().zip([a, b, c]) {
            *slot = self
                .index_of(l)
                .ok_or_else(|| Error::InvalidInput(format!("label {l} out of range")))?;
        }
        self.g0.canonical_edge(&verts)
    }

    /// Label sidecar: one `index<TAB>label` line per vertex.
    pub fn write_labels<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (i, label) in self.labels.iter().enumerate() {
            writeln!(w, "{i}\t{label}")?;
        }
        Ok(())
    }
}

/// Build the 3-uniform initial infection on `9n-4` vertices whose
/// `K_4`-completion process runs for `4n^3 - 2n^2 + 6n - 6` rounds, adding
/// one edge per round, without percolating.
///
/// Edge families, in label space:
/// (a) `t_1 m_0 m_1`;
/// (b) `t_i m_l m_{l+1}` for `1<=i<=n`, `1<=l<=n-1`;
/// (c) `b_j m_l m_{l+1}` for `1<=j<=n`, `-(j-1)<=l<=n+j-1`;
/// (d) `b_-j m_l m_{l+1}` for `1<=j<=n-1`, `-j<=l<=n+j-1`;
/// (e) `t_i b_j m_{-(j-1)}` and `t_i b_j m_{n+j}` for `1<=i,j<=n`;
/// (f) `t_i b_-j m_{n+j}` and `t_i b_-j m_{-j}` for `1<=i<=n`, `1<=j<=n-1`;
/// (g) twelve dummy-gadget triples per `1<=i<=n-1` wiring
///     `t_i, m_{2n-1}, m_{2n}` through `d_{i,1..3}` to `t_{i+1}, m_0, m_1`.
pub fn slow3(n: u32) -> Result<LabeledConstruction> {
    if n < 2 {
        return Err(Error::UnsupportedParameter(format!(
            "slow3 needs n >= 2, got {n}"
        )));
    }
    let lm = LabelMap::new(n);
    let vn = 9 * n - 4;
    let mut g = Hypergraph::new(3, vn)?;
    let add = |g: &mut Hypergraph, a: u32, b: u32, c: u32| -> Result<()> {
        let e = g.canonical_edge(&[a, b, c])?;
        g.insert_new(&e)
    };
    let n = n as i64;

    // (a)
    add(&mut g, lm.t(1), lm.m(0), lm.m(1))?;
    // (b)
    for i in 1..=n {
        for l in 1..=n - 1 {
            add(&mut g, lm.t(i), lm.m(l), lm.m(l + 1))?;
        }
    }
    // (c)
    for j in 1..=n {
        for l in -(j - 1)..=n + j - 1 {
            add(&mut g, lm.b(j), lm.m(l), lm.m(l + 1))?;
        }
    }
    // (d)
    for j in 1..=n - 1 {
        for l in -j..=n + j - 1 {
            add(&mut g, lm.b(-j), lm.m(l), lm.m(l + 1))?;
        }
    }
    // (e)
    for i in 1..=n {
        for j in 1..=n {
            add(&mut g, lm.t(i), lm.b(j), lm.m(-(j - 1)))?;
            add(&mut g, lm.t(i), lm.b(j), lm.m(n + j))?;
        }
    }
    // (f)
    for i in 1..=n {
        for j in 1..=n - 1 {
            add(&mut g, lm.t(i), lm.b(-j), lm.m(n + j))?;
            add(&mut g, lm.t(i), lm.b(-j), lm.m(-j))?;
        }
    }
    // (g)
    for i in 1..=n - 1 {
        let (d1, d2, d3) = (lm.d(i, 1), lm.d(i, 2), lm.d(i, 3));
        let (m_hi1, m_hi2) = (lm.m(2 * n - 1), lm.m(2 * n));
        add(&mut g, lm.t(i), m_hi1, d1)?;
        add(&mut g, lm.t(i), m_hi2, d1)?;
        add(&mut g, m_hi1, m_hi2, d2)?;
        add(&mut g, m_hi1, d1, d2)?;
        add(&mut g, m_hi2, d1, d3)?;
        add(&mut g, m_hi2, d2, d3)?;
        add(&mut g, d1, d2, lm.t(i + 1))?;
        add(&mut g, d1, d3, lm.t(i + 1))?;
        add(&mut g, d2, d3, lm.m(0))?;
        add(&mut g, d2, lm.t(i + 1), lm.m(0))?;
        add(&mut g, d3, lm.t(i + 1), lm.m(1))?;
        add(&mut g, d3, lm.m(0), lm.m(1))?;
    }

    let e0 = g.canonical_edge(&[lm.t(1), lm.m(0), lm.m(1)])?;
    let labels = (0..vn).map(|v| lm.label_of(v)).collect();
    Ok(LabeledConstruction { g0: g, labels, e0, n_param: n as u32 })
}

/// Which part of a phase an expected step belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Traversal with bottom vertex `b_j` (`j > 0`) or `b_-j` (`j < 0`),
    /// including the trailing middle-path extension step.
    Bottom(i64),
    /// The six-step dummy chain that swaps the top vertex.
    DummyChain,
}

/// One predicted infection, with its position in the phase/stage schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedStep {
    pub edge: Edge,
    /// Phase index `i` (the active top vertex), `1..=n`.
    pub phase: u32,
    pub stage: Stage,
    /// 0-based position within the stage.
    pub pos: u32,
}

/// The exact infection order of [`slow3`]: phases `i = 1..=n`, each phase
/// alternating bottom stages `j, -j` with middle-path extensions, followed by
/// the dummy chain into the next phase (omitted for the last phase).
pub fn expected_sequence(n: u32) -> Result<Vec<ExpectedStep>> {
    if n < 2 {
        return Err(Error::UnsupportedParameter(format!(
            "expected_sequence needs n >= 2, got {n}"
        )));
    }
    let lm = LabelMap::new(n);
    let capacity = closed_form_t(n).min(1 << 24) as usize;
    let mut steps: Vec<ExpectedStep> = Vec::with_capacity(capacity);
    let nn = n as i64;
    let mut push = |verts: [u32; 3], phase: i64, stage: Stage, pos: u32| -> Result<()> {
        steps.push(ExpectedStep {
            edge: Edge::new(verts)?,
            phase: phase as u32,
            stage,
            pos,
        });
        Ok(())
    };
    for i in 1..=nn {
        for j in 1..=nn {
            // stage j: t_i b_j m_{-(j-2)} ... t_i b_j m_{n+j-1}, then
            // the extension t_i m_{n+j-1} m_{n+j}
            let mut pos = 0u32;
            for l in -(j - 2)..=nn + j - 1 {
                push([lm.t(i), lm.b(j), lm.m(l)], i, Stage::Bottom(j), pos)?;
                pos += 1;
            }
            push(
                [lm.t(i), lm.m(nn + j - 1), lm.m(nn + j)],
                i,
                Stage::Bottom(j),
                pos,
            )?;
            if j == nn {
                break;
            }
            // stage -j: t_i b_-j m_{n+j-1} down to t_i b_-j m_{-(j-1)}, then
            // the extension t_i m_{-(j-1)} m_{-j}
            pos = 0;
            for l in (-(j - 1)..=nn + j - 1).rev() {
                push([lm.t(i), lm.b(-j), lm.m(l)], i, Stage::Bottom(-j), pos)?;
                pos += 1;
            }
            push(
                [lm.t(i), lm.m(-(j - 1)), lm.m(-j)],
                i,
                Stage::Bottom(-j),
                pos,
            )?;
        }
        if i < nn {
            let chain = [
                [lm.m(2 * nn - 1), lm.m(2 * nn), lm.d(i, 1)],
                [lm.m(2 * nn), lm.d(i, 1), lm.d(i, 2)],
                [lm.d(i, 1), lm.d(i, 2), lm.d(i, 3)],
                [lm.d(i, 2), lm.d(i, 3), lm.t(i + 1)],
                [lm.d(i, 3), lm.t(i + 1), lm.m(0)],
                [lm.t(i + 1), lm.m(0), lm.m(1)],
            ];
            for (pos, verts) in chain.into_iter().enumerate() {
                push(verts, i, Stage::DummyChain, pos as u32)?;
            }
        }
    }
    Ok(steps)
}

/// Exact running time of the process on [`slow3`]`(n)`:
/// `4n^3 - 2n^2 + 6n - 6`. Each of the `n` phases contributes `4n^2 - 2n`
/// steps (stage `j` has `n + 2j - 1` steps, stage `-j` has `n + 2j`), and
/// each of the `n - 1` top swaps adds its 6-step dummy chain.
pub fn closed_form_t(n: u32) -> u64 {
    let n = n as u128;
    let t = (4 * n * n * n + 6 * n)
        .checked_sub(2 * n * n + 6)
        .expect("defined for n >= 1");
    u64::try_from(t).expect("running time exceeds u64")
}

/// Beachball hypergraph: each consecutive middle pair forms a triple with the
/// top and with the bottom vertex; `2(|middles| - 1)` edges in total.
pub fn beachball(top: u32, bottom: u32, middles: &[u32]) -> Result<Hypergraph> {
    if middles.len() < 2 {
        return Err(Error::UnsupportedParameter(format!(
            "beachball needs at least 2 middle vertices, got {}",
            middles.len()
        )));
    }
    let mut all: Vec<u32> = Vec::with_capacity(middles.len() + 2);
    all.push(top);
    all.push(bottom);
    all.extend_from_slice(middles);
    let mut sorted = all.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidEdge(format!("repeated vertex {}", w[0])));
    }
    let n = sorted.last().unwrap() + 1;
    let mut g = Hypergraph::new(3, n)?;
    for pair in middles.windows(2) {
        for apex in [top, bottom] {
            let e = g.canonical_edge(&[apex, pair[0], pair[1]])?;
            g.insert_new(&e)?;
        }
    }
    Ok(g)
}

/// The graph path `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: u32) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::UnsupportedParameter(format!(
            "path needs n >= 2, got {n}"
        )));
    }
    let mut g = Hypergraph::new(2, n)?;
    for i in 0..n - 1 {
        let e = g.canonical_edge(&[i, i + 1])?;
        g.insert_new(&e)?;
    }
    Ok(g)
}

/// `K_n` minus the clique on `{0, ..., n-k+1}` (a clique of `n-k+2`
/// vertices): the minimum initial infection that percolates under
/// `K_k`-completion, doing so in a single round.
pub fn complete_minus_clique(n: u32, k: u32) -> Result<Hypergraph> {
    if k < 2 || k > n {
        return Err(Error::UnsupportedParameter(format!(
            "complete_minus_clique needs 2 <= k <= n, got n={n} k={k}"
        )));
    }
    let removed = n - k + 2;
    let mut g = Hypergraph::new(2, n)?;
    for a in 0..n {
        for b in a + 1..n {
            if b >= removed {
                let e = g.canonical_edge(&[a, b])?;
                g.insert_new(&e)?;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slow3_small_sizes() {
        let c = slow3(2).unwrap();
        assert_eq!(c.g0.vertex_count(), 14);
        assert_eq!(c.g0.edge_count(), 39);
        // n=2: t_1 -> 0, m_0 -> 6, m_1 -> 7
        assert_eq!(c.e0.vertices(), &[0, 6, 7]);
        assert!(c.g0.contains(&c.e0));

        let c3 = slow3(3).unwrap();
        assert_eq!(c3.g0.vertex_count(), 23);
        assert_eq!(c3.e0.vertices(), &[0, 10, 11]);
    }

    #[test]
    fn slow3_rejects_degenerate_parameter() {
        assert!(matches!(slow3(1), Err(Error::UnsupportedParameter(_))));
        assert!(matches!(slow3(0), Err(Error::UnsupportedParameter(_))));
        assert!(matches!(
            expected_sequence(1),
            Err(Error::UnsupportedParameter(_))
        ));
    }

    #[test]
    fn slow3_edge_count_formula() {
        for n in 2..=10u32 {
            let c = slow3(n).unwrap();
            let n64 = n as u64;
            assert_eq!(c.g0.edge_count(), 9 * n64 * n64 + 7 * n64 - 11, "n={n}");
            assert_eq!(c.g0.vertex_count(), 9 * n - 4);
        }
    }

    #[test]
    fn label_map_is_a_bijection() {
        for n in 2..=8u32 {
            let c = slow3(n).unwrap();
            assert_eq!(c.labels.len(), (9 * n - 4) as usize);
            for (v, &label) in c.labels.iter().enumerate() {
                assert_eq!(c.index_of(label), Some(v as u32), "n={n} v={v}");
            }
        }
    }

    #[test]
    fn label_rendering() {
        assert_eq!(Label::Top(1).to_string(), "t1");
        assert_eq!(Label::BottomPos(3).to_string(), "b3");
        assert_eq!(Label::BottomNeg(3).to_string(), "b-3");
        assert_eq!(Label::Middle(-2).to_string(), "m-2");
        assert_eq!(Label::Dummy(2, 1).to_string(), "d2,1");
    }

    #[test]
    fn label_sidecar_format() {
        let c = slow3(2).unwrap();
        let mut buf = Vec::new();
        c.write_labels(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 14);
        assert_eq!(lines[0], "0\tt1");
        assert_eq!(lines[2], "2\tb1");
        assert_eq!(lines[4], "4\tb-1");
        assert_eq!(lines[5], "5\tm-1");
        assert_eq!(lines[6], "6\tm0");
        assert_eq!(lines[13], "13\td1,3");
    }

    #[test]
    fn expected_sequence_opening_and_length() {
        let c = slow3(2).unwrap();
        let seq = expected_sequence(2).unwrap();
        assert_eq!(seq.len(), 30);
        assert_eq!(seq.len() as u64, closed_form_t(2));
        // first three steps: t_1 b_1 m_1, t_1 b_1 m_2, t_1 m_2 m_3
        let want = [
            c.edge(Label::Top(1), Label::BottomPos(1), Label::Middle(1)).unwrap(),
            c.edge(Label::Top(1), Label::BottomPos(1), Label::Middle(2)).unwrap(),
            c.edge(Label::Top(1), Label::Middle(2), Label::Middle(3)).unwrap(),
        ];
        for (step, want) in seq.iter().zip(&want) {
            assert_eq!(&step.edge, want);
        }
        assert_eq!(seq[0].phase, 1);
        assert_eq!(seq[0].stage, Stage::Bottom(1));
        assert_eq!(seq[0].pos, 0);
    }

    #[test]
    fn expected_sequence_is_fresh_and_duplicate_free() {
        for n in 2..=10u32 {
            let c = slow3(n).unwrap();
            let seq = expected_sequence(n).unwrap();
            assert_eq!(seq.len() as u64, closed_form_t(n), "n={n}");
            let mut seen = std::collections::HashSet::new();
            for step in &seq {
                assert!(!c.g0.contains(&step.edge), "n={n} step {}", step.edge);
                assert!(seen.insert(step.edge.key()), "n={n} repeat {}", step.edge);
            }
        }
    }

    #[test]
    fn consecutive_steps_share_two_vertices() {
        for n in 2..=10u32 {
            let c = slow3(n).unwrap();
            let seq = expected_sequence(n).unwrap();
            let mut prev = &c.e0;
            for step in &seq {
                let shared = step
                    .edge
                    .vertices()
                    .iter()
                    .filter(|&&v| prev.contains(v))
                    .count();
                assert_eq!(shared, 2, "n={n} after {prev} comes {}", step.edge);
                prev = &step.edge;
            }
        }
    }

    #[test]
    fn stage_rows_end_with_extension_edges() {
        // the last step of every bottom stage is {t_i, m_l, m_{l+1}}
        let c = slow3(4).unwrap();
        let seq = expected_sequence(4).unwrap();
        for win in seq.windows(2) {
            let (a, b) = (&win[0], &win[1]);
            let stage_ended = match (a.stage, b.stage) {
                (Stage::Bottom(x), Stage::Bottom(y)) => x != y || a.phase != b.phase,
                (Stage::Bottom(_), Stage::DummyChain) => true,
                _ => false,
            };
            if stage_ended {
                let t = c.index_of(Label::Top(a.phase)).unwrap();
                let verts = a.edge.vertices();
                assert!(a.edge.contains(t), "stage must end at a top edge");
                let mids: Vec<u32> = verts.iter().copied().filter(|&v| v != t).collect();
                let (la, lb) = (c.label_of(mids[0]), c.label_of(mids[1]));
                match (la, lb) {
                    (Label::Middle(x), Label::Middle(y)) => {
                        assert_eq!((x - y).abs(), 1);
                    }
                    other => panic!("stage ended with {other:?}"),
                }
            }
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_t(2), 30);
        assert_eq!(closed_form_t(3), 102);
        assert_eq!(closed_form_t(5), 474);
        assert_eq!(closed_form_t(10), 3854);
        // leading term 4n^3: doubling n multiplies T by ~8
        let ratio = closed_form_t(40) as f64 / closed_form_t(20) as f64;
        assert!((7.0..=8.5).contains(&ratio));
    }

    #[test]
    fn beachball_shapes() {
        let g = beachball(0, 1, &[2, 3]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains(&g.canonical_edge(&[0, 2, 3]).unwrap()));
        assert!(g.contains(&g.canonical_edge(&[1, 2, 3]).unwrap()));
        assert_eq!(beachball(0, 1, &[2, 3, 4]).unwrap().edge_count(), 4);
        assert!(matches!(
            beachball(0, 1, &[2]),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(matches!(beachball(0, 1, &[1, 2]), Err(Error::InvalidEdge(_))));
    }

    #[test]
    fn path_and_clique_complement_shapes() {
        assert_eq!(path_graph(2).unwrap().edge_count(), 1);
        assert_eq!(path_graph(5).unwrap().edge_count(), 4);
        assert!(matches!(path_graph(1), Err(Error::UnsupportedParameter(_))));

        let g = complete_minus_clique(6, 4).unwrap();
        assert_eq!(g.edge_count(), 15 - 6);
        // minimum weakly saturated size: (k-2)n - C(k-1, 2)
        let g = complete_minus_clique(7, 5).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(g.edge_count(), (5 - 2) * 7 - 6);
        assert!(matches!(
            complete_minus_clique(4, 5),
            Err(Error::UnsupportedParameter(_))
        ));
    }
}
