//! Command-line front end: generate initial infections, run the percolation
//! engines, verify construction behavior, and scan running-time growth.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad parameters or
//! unparseable input, 3 resource limit exceeded, 4 I/O failure.

use std::collections::VecDeque;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bootperc::constructions::{beachball, complete_minus_clique, path_graph, slow3};
use bootperc::engine::{run, write_trace_jsonl, EngineKind, PercolationConfig};
use bootperc::verify::{
    attach_ratios, check_civilised, check_sequence, scaling_row, write_scaling_csv, ScalingRow,
};
use bootperc::{Error, Hypergraph};

#[derive(Parser)]
#[command(
    name = "bootperc",
    version,
    about = "Clique bootstrap percolation on uniform hypergraphs",
    after_help = "Exit codes: 0 success, 1 verification failure, 2 bad \
                  parameters or input, 3 resource limit exceeded, 4 I/O failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated hypergraph in the text format
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Run the percolation process on a hypergraph file
    Run(RunArgs),
    /// Check a construction against its promised behavior
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Tabulate running times over several construction sizes
    Scan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Naive,
    Incremental,
}

impl From<EngineArg> for EngineKind {
    fn from(e: EngineArg) -> EngineKind {
        match e {
            EngineArg::Naive => EngineKind::Naive,
            EngineArg::Incremental => EngineKind::Incremental,
        }
    }
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Slow-percolating construction on 9n-4 vertices
    Slow3 {
        #[arg(long)]
        n: u32,
        /// Output hypergraph file
        #[arg(short, long)]
        out: PathBuf,
        /// Also write an index<TAB>label sidecar
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Graph path on n vertices
    Path {
        #[arg(long)]
        n: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Complete graph minus a clique on n-k+2 vertices
    CompleteMinusClique {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Beachball: consecutive middle pairs joined with the top and bottom vertex
    Beachball {
        #[arg(long)]
        top: u32,
        #[arg(long)]
        bottom: u32,
        /// Ordered middle vertices, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        middles: Vec<u32>,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Hypergraph file to start from
    #[arg(short, long)]
    input: PathBuf,
    /// Clique size of the completion pattern
    #[arg(short, long)]
    k: u32,
    #[arg(long, value_enum, default_value = "incremental")]
    engine: EngineArg,
    /// Write a JSON Lines trace of every round
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Stop after this many rounds even if still active
    #[arg(long)]
    max_rounds: Option<u64>,
    /// Leave completed-copy witnesses out of the trace
    #[arg(long)]
    no_witnesses: bool,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// One new edge and one new copy per round, locality of copies, and a
    /// frozen process without the distinguished edge
    Civilised {
        /// Check the generated slow3 construction of this size
        #[arg(long, conflicts_with_all = ["input", "e0"])]
        n: Option<u32>,
        /// Check a hypergraph file instead (needs --e0)
        #[arg(long, requires = "e0")]
        input: Option<PathBuf>,
        /// Distinguished edge as comma-separated vertex indices
        #[arg(long, value_delimiter = ',')]
        e0: Option<Vec<u32>>,
        #[arg(long, value_enum, default_value = "naive")]
        engine: EngineArg,
    },
    /// Exact round-by-round agreement with the predicted infection order
    Sequence {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "incremental")]
        engine: EngineArg,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Sizes: comma-separated values, each `N` or an inclusive range `A..B`
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<String>,
    /// Output CSV path
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, value_enum, default_value = "incremental")]
    engine: EngineArg,
    /// Evaluate up to this many sizes concurrently
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// A failed check, as opposed to a malformed invocation.
struct VerifyFailed;

enum Failure {
    Lib(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Lib(Error::Io(e))
    }
}

impl From<VerifyFailed> for Failure {
    fn from(_: VerifyFailed) -> Failure {
        Failure::Verify
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Verify => 1,
        Failure::Lib(e) => match e {
            Error::InvalidEdge(_)
            | Error::InvalidConfig(_)
            | Error::UnsupportedParameter(_)
            | Error::InvalidInput(_)
            | Error::Parse { .. } => 2,
            Error::Resource(_) => 3,
            Error::Io(_) => 4,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(cmd) => cmd_generate(cmd),
        Command::Run(args) => cmd_run(args),
        Command::Verify(cmd) => cmd_verify(cmd),
        Command::Scan(args) => cmd_scan(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Lib(e) = &f {
                eprintln!("error: {e}");
            }
            ExitCode::from(exit_code(&f))
        }
    }
}

fn write_hypergraph(g: &Hypergraph, path: &Path) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    g.write_text(&mut w)?;
    w.flush()?;
    Ok(())
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    let r = BufReader::new(File::open(path)?);
    Ok(Hypergraph::read_text(r)?)
}

fn cmd_generate(cmd: GenerateCmd) -> Result<(), Failure> {
    let g = match cmd {
        GenerateCmd::Slow3 { n, out, labels } => {
            let c = slow3(n)?;
            if let Some(path) = labels {
                let mut w = BufWriter::new(File::create(path)?);
                c.write_labels(&mut w)?;
                w.flush()?;
            }
            write_hypergraph(&c.g0, &out)?;
            c.g0
        }
        GenerateCmd::Path { n, out } => {
            let g = path_graph(n)?;
            write_hypergraph(&g, &out)?;
            g
        }
        GenerateCmd::CompleteMinusClique { n, k, out } => {
            let g = complete_minus_clique(n, k)?;
            write_hypergraph(&g, &out)?;
            g
        }
        GenerateCmd::Beachball { top, bottom, middles, out } => {
            let g = beachball(top, bottom, &middles)?;
            write_hypergraph(&g, &out)?;
            g
        }
    };
    println!("vertices={} edges={}", g.vertex_count(), g.edge_count());
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), Failure> {
    let g = read_hypergraph(&args.input)?;
    let mut cfg = PercolationConfig::new(args.k)
        .engine(args.engine.into())
        .witnesses(args.trace.is_some() && !args.no_witnesses);
    cfg.max_rounds = args.max_rounds;
    let start = Instant::now();
    let result = run(&g, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    if let Some(path) = args.trace {
        let mut w = BufWriter::new(File::create(path)?);
        write_trace_jsonl(&result, &mut w)?;
        w.flush()?;
    }
    println!(
        "M={} percolated={} final_edges={} rounds={} wall_ms={:.3}",
        result.running_time,
        result.percolated,
        result.final_edge_count,
        result.rounds.len(),
        wall_ms
    );
    Ok(())
}

fn cmd_verify(cmd: VerifyCmd) -> Result<(), Failure> {
    match cmd {
        VerifyCmd::Civilised { n, input, e0, engine } => {
            let (g, e0) = match (n, input) {
                (Some(n), None) => {
                    let c = slow3(n)?;
                    (c.g0, c.e0)
                }
                (None, Some(path)) => {
                    let g = read_hypergraph(&path)?;
                    let verts = e0.expect("clap enforces --e0 with --input");
                    let e = g.canonical_edge(&verts)?;
                    (g, e)
                }
                _ => {
                    return Err(Failure::Lib(Error::InvalidInput(
                        "pass either --n or --input with --e0".into(),
                    )))
                }
            };
            let report = check_civilised(&g, &e0, engine.into())?;
            for (i, ok) in [report.cond1_ok, report.cond2_ok, report.cond3_ok]
                .iter()
                .enumerate()
            {
                println!("cond{} {}", i + 1, if *ok { "PASS" } else { "FAIL" });
            }
            println!("T={}", report.running_time);
            if let Some(v) = report.first_violation {
                println!(
                    "first violation: condition {} at round {}: {}",
                    v.condition, v.round, v.detail
                );
                return Err(VerifyFailed.into());
            }
            Ok(())
        }
        VerifyCmd::Sequence { n, engine } => {
            let diff = check_sequence(n, engine.into())?;
            println!("matched {}/{}", diff.matched_prefix_len, diff.expected_len);
            if let Some(m) = diff.first_mismatch {
                let expected = m
                    .expected
                    .map(|e| e.to_string())
                    .unwrap_or_else(|| "stabilization".into());
                let actual = if m.actual.is_empty() {
                    "nothing".into()
                } else {
                    m.actual
                        .iter()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                println!("mismatch at round {}: expected {expected}, got {actual}", m.t);
                return Err(VerifyFailed.into());
            }
            Ok(())
        }
    }
}

fn parse_sizes(tokens: &[String]) -> Result<Vec<u32>, Failure> {
    let bad = |tok: &str| {
        Failure::Lib(Error::InvalidInput(format!(
            "bad size token {tok:?}, expected N or A..B"
        )))
    };
    let mut out = Vec::new();
    for tok in tokens {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        if let Some((a, b)) = tok.split_once("..") {
            let a: u32 = a.parse().map_err(|_| bad(tok))?;
            let b: u32 = b.parse().map_err(|_| bad(tok))?;
            if a > b {
                return Err(bad(tok));
            }
            out.extend(a..=b);
        } else {
            out.push(tok.parse().map_err(|_| bad(tok))?);
        }
    }
    if out.is_empty() {
        return Err(Failure::Lib(Error::InvalidInput(
            "no sizes given".into(),
        )));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn cmd_scan(args: ScanArgs) -> Result<(), Failure> {
    let sizes = parse_sizes(&args.n)?;
    let engine: EngineKind = args.engine.into();
    let mut rows: Vec<ScalingRow> = if args.jobs <= 1 {
        let mut rows = Vec::with_capacity(sizes.len());
        for &n in &sizes {
            rows.push(scaling_row(n, engine)?);
        }
        rows
    } else {
        let queue: Mutex<VecDeque<u32>> = Mutex::new(sizes.iter().copied().collect());
        let done: Mutex<Vec<Result<ScalingRow, Error>>> = Mutex::new(Vec::new());
        std::thread::scope(|scope| {
            for _ in 0..args.jobs.min(sizes.len()) {
                scope.spawn(|| loop {
                    let n = match queue.lock().unwrap().pop_front() {
                        Some(n) => n,
                        None => break,
                    };
                    let row = scaling_row(n, engine);
                    done.lock().unwrap().push(row);
                });
            }
        });
        let mut rows = Vec::with_capacity(sizes.len());
        for row in done.into_inner().unwrap() {
            rows.push(row?);
        }
        rows
    };
    attach_ratios(&mut rows);
    let mut w = BufWriter::new(File::create(&args.csv)?);
    write_scaling_csv(&rows, &mut w)?;
    w.flush()?;
    println!("wrote {} ({} rows)", args.csv.display(), rows.len());
    Ok(())
}
