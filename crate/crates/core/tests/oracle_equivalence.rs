//! The brute-force engine is the oracle: the incremental engine must produce
//! identical runs (same rounds, same edges, same witnesses) on everything.

use bootperc::binom::for_each_combination;
use bootperc::constructions::slow3;
use bootperc::engine::{
    infect_round_naive, run_incremental, run_naive, EngineKind, PercolationConfig, RunResult,
};
use bootperc::{Edge, Hypergraph};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic corpus: instance `i` fixes (r, n, p) by index and draws
/// edges from its own ChaCha stream.
fn random_instance(i: u64) -> Hypergraph {
    let r = 2 + (i % 2) as u32;
    let n = 4 + (i % 5) as u32; // 4..=8
    let p = [0.2, 0.5, 0.8][(i % 3) as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(i);
    let mut g = Hypergraph::new(r, n).unwrap();
    for_each_combination(n, r, |s| {
        if rng.gen_bool(p) {
            let e = g.canonical_edge(s).unwrap();
            g.insert_new(&e).unwrap();
        }
    });
    g
}

fn assert_same_run(a: &RunResult, b: &RunResult, what: &str) {
    assert_eq!(a.running_time, b.running_time, "{what}: running time");
    assert_eq!(a.final_edge_count, b.final_edge_count, "{what}: edge count");
    assert_eq!(a.percolated, b.percolated, "{what}: percolation");
    assert_eq!(a.truncated, b.truncated, "{what}: truncation");
    assert_eq!(a.rounds, b.rounds, "{what}: rounds");
}

#[test]
fn engines_agree_on_random_corpus() {
    for i in 0..200u64 {
        let g = random_instance(i);
        let k = g.uniformity() + 1;
        let cfg = PercolationConfig::new(k);
        let naive = run_naive(&g, &cfg).unwrap();
        let incr = run_incremental(&g, &cfg).unwrap();
        assert_same_run(&naive, &incr, &format!("instance {i}"));
    }
}

/// Triangle completion on every graph with up to 5 vertices, and a seeded
/// sample of sparse 6-vertex graphs.
#[test]
fn engines_agree_on_small_graphs_exhaustively() {
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for_each_combination(5, 2, |s| pairs.push((s[0], s[1])));
    for n in 3..=5u32 {
        let live: Vec<&(u32, u32)> = pairs.iter().filter(|(_, b)| *b < n).collect();
        for mask in 0u32..1 << live.len() {
            let mut g = Hypergraph::new(2, n).unwrap();
            for (bit, (a, b)) in live.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    let e = g.canonical_edge(&[*a, *b]).unwrap();
                    g.insert_new(&e).unwrap();
                }
            }
            let cfg = PercolationConfig::new(3);
            let naive = run_naive(&g, &cfg).unwrap();
            let incr = run_incremental(&g, &cfg).unwrap();
            assert_same_run(&naive, &incr, &format!("n={n} mask={mask:b}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..3000 {
        let mut g = Hypergraph::new(2, 6).unwrap();
        let edges = rng.gen_range(0..=8u32);
        while g.edge_count() < edges as u64 {
            let a = rng.gen_range(0..6u32);
            let b = rng.gen_range(0..6u32);
            if a != b {
                let e = g.canonical_edge(&[a, b]).unwrap();
                g.add_edge(&e).unwrap();
            }
        }
        let cfg = PercolationConfig::new(3);
        let naive = run_naive(&g, &cfg).unwrap();
        let incr = run_incremental(&g, &cfg).unwrap();
        assert_same_run(&naive, &incr, &format!("sparse sample {i}"));
    }
}

#[test]
fn engines_agree_on_slow_construction() {
    for n in 2..=5u32 {
        let c = slow3(n).unwrap();
        let cfg = PercolationConfig::new(4);
        let naive = run_naive(&c.g0, &cfg).unwrap();
        let incr = run_incremental(&c.g0, &cfg).unwrap();
        assert_same_run(&naive, &incr, &format!("slow3({n})"));
    }
}

fn relabel(g: &Hypergraph, perm: &[u32]) -> Hypergraph {
    let mut out = Hypergraph::new(g.uniformity(), g.vertex_count()).unwrap();
    for e in g.edges() {
        let verts: Vec<u32> = e.vertices().iter().map(|&v| perm[v as usize]).collect();
        let e = out.canonical_edge(&verts).unwrap();
        out.insert_new(&e).unwrap();
    }
    out
}

#[test]
fn relabeling_equivariance() {
    for i in 0..40u64 {
        let g = random_instance(i);
        let n = g.vertex_count();
        let mut rng = ChaCha8Rng::seed_from_u64(500 + i);
        let mut perm: Vec<u32> = (0..n).collect();
        // Fisher-Yates
        for a in (1..n as usize).rev() {
            let b = rng.gen_range(0..=a);
            perm.swap(a, b);
        }
        let h = relabel(&g, &perm);
        let cfg = PercolationConfig::new(g.uniformity() + 1).witnesses(false);
        for engine in [EngineKind::Naive, EngineKind::Incremental] {
            let base = bootperc::engine::run(&g, &cfg.clone().engine(engine)).unwrap();
            let permuted = bootperc::engine::run(&h, &cfg.clone().engine(engine)).unwrap();
            assert_eq!(base.running_time, permuted.running_time, "instance {i}");
            assert_eq!(base.percolated, permuted.percolated, "instance {i}");
            for (rb, rp) in base.rounds.iter().zip(&permuted.rounds) {
                let mapped: Vec<Edge> = rb
                    .added
                    .iter()
                    .map(|a| {
                        let verts: Vec<u32> =
                            a.edge.vertices().iter().map(|&v| perm[v as usize]).collect();
                        Edge::new(verts).unwrap()
                    })
                    .collect();
                let mut mapped_keys: Vec<u64> = mapped.iter().map(|e| e.key()).collect();
                mapped_keys.sort_unstable();
                let actual_keys: Vec<u64> = rp.added.iter().map(|a| a.edge.key()).collect();
                assert_eq!(mapped_keys, actual_keys, "instance {i} round {}", rb.t);
            }
        }
    }
}

/// Every infection at round t >= 2 must have a witness face added exactly at
/// round t-1; otherwise it would have fired earlier.
#[test]
fn no_premature_infection() {
    for i in 0..60u64 {
        let g = random_instance(i);
        let k = g.uniformity() + 1;
        let res = run_naive(&g, &PercolationConfig::new(k)).unwrap();
        let mut round_of: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
        for round in &res.rounds {
            for a in &round.added {
                round_of.insert(a.edge.key(), round.t);
            }
        }
        for round in &res.rounds {
            if round.t < 2 {
                continue;
            }
            for a in &round.added {
                let s = a.witness.as_ref().unwrap();
                let mut fresh = false;
                for_each_combination(s.len() as u32, g.uniformity(), |pos| {
                    let verts: Vec<u32> = pos.iter().map(|&p| s[p as usize]).collect();
                    let key = Edge::new(verts).unwrap().key();
                    if key != a.edge.key() && round_of.get(&key) == Some(&(round.t - 1)) {
                        fresh = true;
                    }
                });
                assert!(
                    fresh,
                    "instance {i}: round {} edge {} has a stale witness",
                    round.t, a.edge
                );
            }
        }
    }
}

/// Witnesses really are completions: k vertices containing the edge, with
/// every other face present in the previous round's hypergraph.
#[test]
fn witnesses_are_valid_completions() {
    for i in 0..60u64 {
        let g0 = random_instance(i);
        let k = g0.uniformity() + 1;
        let res = run_naive(&g0, &PercolationConfig::new(k)).unwrap();
        let mut g = g0.clone();
        for round in &res.rounds {
            for a in &round.added {
                let s = a.witness.as_ref().unwrap();
                assert_eq!(s.len(), k as usize);
                assert!(a.edge.vertices().iter().all(|v| s.contains(v)));
                assert!(!g.contains(&a.edge), "already present before round {}", round.t);
                for_each_combination(s.len() as u32, g.uniformity(), |pos| {
                    let verts: Vec<u32> = pos.iter().map(|&p| s[p as usize]).collect();
                    let e = Edge::new(verts).unwrap();
                    if e != a.edge {
                        assert!(g.contains(&e), "witness face {e} absent at round {}", round.t);
                    }
                });
            }
            for a in &round.added {
                g.add_edge(&a.edge).unwrap();
            }
        }
        // stabilization is a fixpoint
        assert!(infect_round_naive(&g, k).unwrap().is_empty());
        assert_eq!(g.edge_count(), res.final_edge_count);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_roundtrips(r in 2u32..4, n in 0u32..9, seed in any::<u64>()) {
        let n = n.max(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Hypergraph::new(r, n).unwrap();
        for_each_combination(n, r, |s| {
            if rng.gen_bool(0.4) {
                let e = g.canonical_edge(s).unwrap();
                g.insert_new(&e).unwrap();
            }
        });
        let mut buf = Vec::new();
        g.write_text(&mut buf).unwrap();
        let back = Hypergraph::read_text(buf.as_slice()).unwrap();
        prop_assert_eq!(back.uniformity(), g.uniformity());
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edge_keys_sorted(), g.edge_keys_sorted());
        let mut again = Vec::new();
        back.write_text(&mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn runs_are_monotone_and_deterministic(seed in 0u64..10_000) {
        let g = random_instance(seed);
        let k = g.uniformity() + 1;
        let cfg = PercolationConfig::new(k);
        let a = run_incremental(&g, &cfg).unwrap();
        let b = run_incremental(&g, &cfg).unwrap();
        prop_assert_eq!(&a.rounds, &b.rounds);
        // each round only ever grows the edge set, one batch at a time
        let mut count = g.edge_count();
        for round in &a.rounds {
            prop_assert!(!round.added.is_empty());
            count += round.added.len() as u64;
        }
        prop_assert_eq!(count, a.final_edge_count);
        prop_assert_eq!(a.percolated, a.final_edge_count == g.max_edge_count());
    }
}
