//! Mechanical checks of the slow construction's promised behavior: the
//! civilised conditions, exact agreement with the predicted infection order,
//! and the cubic growth of the running time.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use smallvec::SmallVec;

use crate::constructions::{expected_sequence, slow3, ExpectedStep};
use crate::edge::Edge;
use crate::engine::{
    infect_round_naive, new_copies, run, EngineKind, PercolationConfig, Witness,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, DEFAULT_DENSE_BUDGET};

/// A failed civilised condition: which one, at which round, and why.
#[derive(Clone, Debug)]
pub struct Violation {
    /// Condition number, 1 to 3.
    pub condition: u8,
    pub round: u64,
    pub detail: String,
}

/// Result of [`check_civilised`]. A construction is civilised (relative to a
/// distinguished edge `e0`) when (1) every round adds exactly one edge and
/// completes exactly one new copy, (2) each new copy contains the two most
/// recent distinguished edges `e_{t-1}, e_t` and no later one (earlier
/// distinguished edges may reappear as copy faces: the process reuses them
/// to keep chains alive), and (3) the process started without `e0` infects
/// nothing.
#[derive(Clone, Debug)]
pub struct CivilisedReport {
    pub cond1_ok: bool,
    pub cond2_ok: bool,
    pub cond3_ok: bool,
    pub first_violation: Option<Violation>,
    /// Observed stabilization time of the full process.
    pub running_time: u64,
}

impl CivilisedReport {
    pub fn all_ok(&self) -> bool {
        self.cond1_ok && self.cond2_ok && self.cond3_ok
    }
}

/// Run the `(r+1)`-clique process on `g0` and check the three civilised
/// conditions for the distinguished edge `e0`. Condition (1) is judged
/// before condition (2) at each round: a non-unique copy fails (1), so (2)
/// only ever sees a well-defined unique copy per round.
pub fn check_civilised(g0: &Hypergraph, e0: &Edge, engine: EngineKind) -> Result<CivilisedReport> {
    if !g0.contains(e0) {
        return Err(Error::InvalidInput(format!(
            "distinguished edge {e0} is not in the hypergraph"
        )));
    }
    let k = g0.uniformity() + 1;
    let result = run(g0, &PercolationConfig::new(k).engine(engine))?;

    // condition (1): one edge and one completed copy per round
    let mut cond1_violation: Option<Violation> = None;
    let mut infected: Vec<Edge> = Vec::with_capacity(result.rounds.len());
    let mut copies: Vec<Witness> = Vec::with_capacity(result.rounds.len());
    let mut g = g0.with_auto_store(DEFAULT_DENSE_BUDGET);
    for round in &result.rounds {
        let added: Vec<Edge> = round.added.iter().map(|a| a.edge.clone()).collect();
        if added.len() != 1 {
            cond1_violation = Some(Violation {
                condition: 1,
                round: round.t,
                detail: format!("round adds {} edges, expected 1", added.len()),
            });
            break;
        }
        let new = new_copies(&g, &added, k)?;
        if new.len() != 1 {
            cond1_violation = Some(Violation {
                condition: 1,
                round: round.t,
                detail: format!(
                    "edge {} completes {} copies, expected 1",
                    added[0],
                    new.len()
                ),
            });
            break;
        }
        copies.push(new.into_iter().next().unwrap());
        g.insert_new(&added[0])?;
        infected.push(added.into_iter().next().unwrap());
    }
    let cond1_ok = cond1_violation.is_none();

    // condition (2): E(H_t) ∩ {e_{t-1}, ..., e_T} = {e_{t-1}, e_t}; the copy
    // is built on the two most recent distinguished edges and touches no
    // later one. Earlier distinguished edges are allowed as faces: the
    // middle-path extension edges (and e_0 itself) are deliberately reused
    // by later chains.
    let mut cond2_violation: Option<Violation> = None;
    if cond1_ok {
        // distinguished edge key -> its index, with e_0 at 0 and e_t at t
        let mut index: HashMap<u64, u64> = HashMap::with_capacity(infected.len() + 1);
        index.insert(e0.key(), 0);
        for (i, e) in infected.iter().enumerate() {
            index.insert(e.key(), i as u64 + 1);
        }
        for (idx, copy) in copies.iter().enumerate() {
            let t = idx as u64 + 1;
            let prev = if idx == 0 { e0 } else { &infected[idx - 1] };
            let mut expect = [prev.key(), infected[idx].key()];
            expect.sort_unstable();
            let mut inter: SmallVec<[u64; 8]> = SmallVec::new();
            for drop in 0..copy.len() {
                let verts = copy
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != drop)
                    .map(|(_, &v)| v);
                let key = Edge::new(verts)?.key();
                if index.get(&key).is_some_and(|&j| j >= t - 1) {
                    inter.push(key);
                }
            }
            inter.sort_unstable();
            if inter.as_slice() != expect {
                cond2_violation = Some(Violation {
                    condition: 2,
                    round: t,
                    detail: format!(
                        "copy at round {t} meets {} recent distinguished edges, expected exactly e_{} and e_{t}",
                        inter.len(),
                        t - 1
                    ),
                });
                break;
            }
        }
    }
    let cond2_ok = cond1_ok && cond2_violation.is_none();

    // condition (3): without e0, a single round infects nothing (equivalent
    // to full stabilization, by monotonicity)
    let mut reduced = g0.clone();
    reduced.remove_edge(e0)?;
    let stray = infect_round_naive(&reduced, k)?;
    let cond3_violation = stray.first().map(|(e, w)| Violation {
        condition: 3,
        round: 1,
        detail: format!(
            "without {e0}, edge {e} is infected (witness {w:?})"
        ),
    });
    let cond3_ok = cond3_violation.is_none();

    let first_violation = cond1_violation.or(cond2_violation).or(cond3_violation);
    Ok(CivilisedReport {
        cond1_ok,
        cond2_ok,
        cond3_ok,
        first_violation,
        running_time: result.running_time,
    })
}

/// First divergence between a run and an expected one-edge-per-round trace.
#[derive(Clone, Debug)]
pub struct SequenceMismatch {
    pub t: u64,
    /// Edge the schedule expects at round `t`; `None` when the run keeps
    /// adding edges past the end of the schedule.
    pub expected: Option<Edge>,
    /// What round `t` actually added (empty: the run had already stopped).
    pub actual: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub struct SequenceDiff {
    pub matched_prefix_len: u64,
    pub expected_len: u64,
    pub first_mismatch: Option<SequenceMismatch>,
}

impl SequenceDiff {
    pub fn is_full_match(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Simulate [`slow3`]`(n)` with `k = 4` and compare the trace round by round
/// against [`expected_sequence`]`(n)`.
pub fn check_sequence(n: u32, engine: EngineKind) -> Result<SequenceDiff> {
    let c = slow3(n)?;
    let expected = expected_sequence(n)?;
    check_sequence_on(&c.g0, &expected, engine)
}

/// [`check_sequence`] against a caller-supplied initial infection, so
/// perturbed fixtures can be diffed against the same schedule.
pub fn check_sequence_on(
    g0: &Hypergraph,
    expected: &[ExpectedStep],
    engine: EngineKind,
) -> Result<SequenceDiff> {
    let cfg = PercolationConfig::new(g0.uniformity() + 1)
        .engine(engine)
        .witnesses(false);
    let result = run(g0, &cfg)?;
    let expected_len = expected.len() as u64;
    let mut matched: u64 = 0;
    let mut first_mismatch: Option<SequenceMismatch> = None;
    for (idx, step) in expected.iter().enumerate() {
        let t = idx as u64 + 1;
        match result.rounds.get(idx) {
            Some(round) if round.added.len() == 1 && round.added[0].edge == step.edge => {
                matched += 1;
            }
            Some(round) => {
                first_mismatch = Some(SequenceMismatch {
                    t,
                    expected: Some(step.edge.clone()),
                    actual: round.added.iter().map(|a| a.edge.clone()).collect(),
                });
                break;
            }
            None => {
                first_mismatch = Some(SequenceMismatch {
                    t,
                    expected: Some(step.edge.clone()),
                    actual: Vec::new(),
                });
                break;
            }
        }
    }
    if first_mismatch.is_none() && result.rounds.len() > expected.len() {
        let round = &result.rounds[expected.len()];
        first_mismatch = Some(SequenceMismatch {
            t: round.t,
            expected: None,
            actual: round.added.iter().map(|a| a.edge.clone()).collect(),
        });
    }
    Ok(SequenceDiff {
        matched_prefix_len: matched,
        expected_len,
        first_mismatch,
    })
}

/// One row of the running-time scaling table.
#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub n: u32,
    pub t: u64,
    pub vertices: u32,
    pub edges_initial: u64,
    pub edges_final: u64,
    pub wall_ms: f64,
    /// `T(n) / T(n/2)` when the table also contains `n/2`.
    pub ratio_vs_half_n: Option<f64>,
}

/// Simulate [`slow3`]`(n)` and measure its running time.
pub fn scaling_row(n: u32, engine: EngineKind) -> Result<ScalingRow> {
    let c = slow3(n)?;
    let cfg = PercolationConfig::new(4).engine(engine).witnesses(false);
    let start = Instant::now();
    let result = run(&c.g0, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ScalingRow {
        n,
        t: result.running_time,
        vertices: c.g0.vertex_count(),
        edges_initial: c.g0.edge_count(),
        edges_final: result.final_edge_count,
        wall_ms,
        ratio_vs_half_n: None,
    })
}

/// Sort rows by `n` and fill in the doubling ratios.
pub fn attach_ratios(rows: &mut [ScalingRow]) {
    rows.sort_by_key(|r| r.n);
    let times: Vec<(u32, u64)> = rows.iter().map(|r| (r.n, r.t)).collect();
    for row in rows.iter_mut() {
        row.ratio_vs_half_n = if row.n % 2 == 0 {
            times
                .iter()
                .find(|(n, _)| *n == row.n / 2)
                .map(|(_, t_half)| row.t as f64 / *t_half as f64)
        } else {
            None
        };
    }
}

/// Scaling table for each `n`, ascending, with doubling ratios attached.
pub fn scaling_report(ns: &[u32], engine: EngineKind) -> Result<Vec<ScalingRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    let mut sorted: Vec<u32> = ns.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for n in sorted {
        rows.push(scaling_row(n, engine)?);
    }
    attach_ratios(&mut rows);
    Ok(rows)
}

/// CSV with the fixed header
/// `n,T,vertices,edges_initial,edges_final,wall_ms,ratio_vs_half_n`;
/// the ratio field is empty when `n/2` is absent.
pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "n,T,vertices,edges_initial,edges_final,wall_ms,ratio_vs_half_n")?;
    for r in rows {
        let ratio = r
            .ratio_vs_half_n
            .map(|x| format!("{x:.6}"))
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{:.3},{}",
            r.n, r.t, r.vertices, r.edges_initial, r.edges_final, r.wall_ms, ratio
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{closed_form_t, Label};

    #[test]
    fn slow3_is_civilised_under_both_engines() {
        for n in 2..=4u32 {
            let c = slow3(n).unwrap();
            for engine in [EngineKind::Naive, EngineKind::Incremental] {
                let report = check_civilised(&c.g0, &c.e0, engine).unwrap();
                assert!(report.all_ok(), "n={n} {engine:?}: {:?}", report.first_violation);
                assert!(report.first_violation.is_none());
                assert_eq!(report.running_time, closed_form_t(n));
            }
        }
    }

    #[test]
    fn double_completion_fails_condition_one() {
        // K_5^(3) minus one edge: the missing face completes two copies at once.
        let mut g = Hypergraph::new(3, 5).unwrap();
        crate::binom::for_each_combination(5, 3, |s| {
            let e = g.canonical_edge(s).unwrap();
            g.insert_new(&e).unwrap();
        });
        let gone = g.canonical_edge(&[0, 1, 2]).unwrap();
        g.remove_edge(&gone).unwrap();
        let e0 = g.canonical_edge(&[0, 1, 3]).unwrap();
        let report = check_civilised(&g, &e0, EngineKind::Naive).unwrap();
        assert!(!report.cond1_ok);
        let v = report.first_violation.unwrap();
        assert_eq!(v.condition, 1);
        assert_eq!(v.round, 1);
    }

    #[test]
    fn missing_distinguished_edge_is_rejected() {
        let c = slow3(2).unwrap();
        let absent = c.g0.canonical_edge(&[0, 1, 2]).unwrap();
        assert!(!c.g0.contains(&absent));
        assert!(matches!(
            check_civilised(&c.g0, &absent, EngineKind::Naive),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn injected_edge_breaks_civility() {
        // an extra beachball chord makes some round infect two edges at once
        let c = slow3(3).unwrap();
        let mut g = c.g0.clone();
        let extra = c
            .edge(Label::Top(1), Label::BottomPos(1), Label::Middle(5))
            .unwrap();
        g.insert_new(&extra).unwrap();
        let report = check_civilised(&g, &c.e0, EngineKind::Naive).unwrap();
        assert!(!report.all_ok());
        let v = report.first_violation.expect("must pinpoint a violation");
        assert_eq!(v.condition, 1);
        assert_eq!(v.round, 16);
    }

    #[test]
    fn sequence_matches_for_small_n() {
        for n in 2..=4u32 {
            for engine in [EngineKind::Naive, EngineKind::Incremental] {
                let diff = check_sequence(n, engine).unwrap();
                assert!(diff.is_full_match(), "n={n} {engine:?}: {:?}", diff.first_mismatch);
                assert_eq!(diff.matched_prefix_len, closed_form_t(n));
                assert_eq!(diff.expected_len, closed_form_t(n));
            }
        }
    }

    #[test]
    fn deleted_edge_is_reported_against_the_schedule() {
        let c = slow3(3).unwrap();
        let mut g = c.g0.clone();
        let gone = c
            .edge(Label::BottomPos(1), Label::Middle(0), Label::Middle(1))
            .unwrap();
        assert!(g.remove_edge(&gone).unwrap());
        let expected = expected_sequence(3).unwrap();
        let diff = check_sequence_on(&g, &expected, EngineKind::Naive).unwrap();
        assert!(!diff.is_full_match());
        assert_eq!(diff.matched_prefix_len, 0);
        let m = diff.first_mismatch.unwrap();
        assert_eq!(m.t, 1);
        let t1b1m1 = c
            .edge(Label::Top(1), Label::BottomPos(1), Label::Middle(1))
            .unwrap();
        assert_eq!(m.expected, Some(t1b1m1));
        assert!(m.actual.is_empty());
    }

    #[test]
    fn scaling_rows_and_csv() {
        let rows = scaling_report(&[4, 2], EngineKind::Incremental).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].n, 2);
        assert_eq!(rows[0].t, closed_form_t(2));
        assert!(rows[0].ratio_vs_half_n.is_none());
        let r4 = &rows[1];
        assert_eq!(r4.t, closed_form_t(4));
        let ratio = r4.ratio_vs_half_n.unwrap();
        assert!((ratio - closed_form_t(4) as f64 / closed_form_t(2) as f64).abs() < 1e-12);
        assert_eq!(r4.edges_final, r4.edges_initial + r4.t);

        let mut buf = Vec::new();
        write_scaling_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,T,vertices,edges_initial,edges_final,wall_ms,ratio_vs_half_n"
        );
        let row2: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row2[0], "2");
        assert_eq!(row2[1], "30");
        assert_eq!(row2[6], "");
    }

    #[test]
    fn single_row_report() {
        let rows = scaling_report(&[3], EngineKind::Incremental).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].t, 102);
        assert!(rows[0].ratio_vs_half_n.is_none());
    }
}
