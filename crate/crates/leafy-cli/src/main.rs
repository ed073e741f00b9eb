//! `leafy` — command-line front end for the spanning-tree library.
//!
//! Subcommands: `check` (hypothesis report), `solve` (exact search),
//! `construct` (certified constructive pipeline), `verify` (classify a
//! certificate), `gen` (family generators), `thresholds` (density
//! constants). Graphs travel as edge-list files, certificates and traces
//! as separate files so that verification can be re-run by third
//! parties. Every run prints a JSON report with a digest of the input
//! and the outcome.
//!
//! Exit codes: 0 success/full, 1 no tree (or certificate not full),
//! 2 input or parse error, 3 search budget exhausted, 4 hypothesis
//! violation, 5 internal invariant failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use leafy::cert::ContractError;
use leafy::construct::ConstructError;
use leafy::families::{build_h, case_family, random_graph, stress_family, ExtremalParams};
use leafy::graph::hypothesis_report;
use leafy::{
    classify, construct_2k_st, solve_exact, solve_naive, thresholds, Graph, SearchBudget,
    SolveStatus, TreeCertificate, TreeKind,
};
use serde_json::json;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_HYPOTHESIS: u8 = 4;
const EXIT_INVARIANT: u8 = 5;

#[derive(Parser)]
#[command(name = "leafy", version, about = "Spanning trees without small-degree vertices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print each graph's structural quantities and condition flags.
    Check(CheckArgs),
    /// Decide [2,k]-ST existence by exact search.
    Solve(SolveArgs),
    /// Build a certified [2,k]-ST through the constructive pipeline.
    Construct(ConstructArgs),
    /// Classify a certificate file against its graph.
    Verify(VerifyArgs),
    /// Generate a graph from the built-in families.
    Gen(GenArgs),
    /// Print c_k and the size thresholds n0(k), n1(k).
    Thresholds(ThresholdsArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Graph files in edge-list format (`n m` header, one `u v` per line).
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    /// Class bound: forbidden tree degrees are 2..=k.
    #[arg(short, long)]
    k: usize,
    /// Emit only the JSON report, no table.
    #[arg(long)]
    json: bool,
    /// Process files concurrently on this many threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    #[arg(short, long)]
    k: usize,
    /// Search-node budget for the exact solver.
    #[arg(long, default_value_t = 5_000_000)]
    nodes: u64,
    /// Optional wall-clock budget in milliseconds.
    #[arg(long)]
    time_ms: Option<u64>,
    /// Use the enumeration oracle instead of the backtracking solver.
    #[arg(long)]
    naive: bool,
    /// Certificate output path (single input only; default: input + ".cert").
    #[arg(long)]
    cert: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    #[arg(short, long)]
    k: usize,
    /// Certificate output path (single input only; default: input + ".cert").
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Trace output path (single input only; default: input + ".trace.json").
    #[arg(long)]
    trace: Option<PathBuf>,
    /// On construction failure, fall back to the exact solver.
    #[arg(long)]
    fallback_exact: bool,
    /// Skip the upfront hypothesis gate (the caller vouches for the
    /// input); corrupt inputs then fail on an internal inequality.
    #[arg(long)]
    assume_hypotheses: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file.
    graph: PathBuf,
    /// Certificate file (as written by `solve`/`construct`).
    cert: PathBuf,
    /// Class bound; defaults to the one recorded in the certificate.
    #[arg(short, long)]
    k: Option<usize>,
}

#[derive(Args)]
struct GenArgs {
    /// Family: `h`, `case:<label>`, `stress`, or `random`.
    #[arg(long)]
    family: String,
    #[arg(short, long)]
    k: Option<usize>,
    #[arg(short, long)]
    n: usize,
    /// Edge probability for `random`.
    #[arg(short, long, default_value_t = 0.5)]
    p: f64,
    /// RNG seed for `random` (fixed default for reproducibility).
    #[arg(long, default_value_t = 0x5EED)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write a Graphviz DOT rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdsArgs {
    #[arg(short, long)]
    k: usize,
    /// Emit only the JSON report.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Check(a) => per_file(&a.graphs.clone(), a.jobs, move |p| cmd_check(p, &a)),
        Cmd::Solve(a) => {
            if a.cert.is_some() && a.graphs.len() > 1 {
                eprintln!("--cert requires a single input file");
                return ExitCode::from(EXIT_INPUT);
            }
            per_file(&a.graphs.clone(), a.jobs, move |p| cmd_solve(p, &a))
        }
        Cmd::Construct(a) => {
            if (a.cert.is_some() || a.trace.is_some()) && a.graphs.len() > 1 {
                eprintln!("--cert/--trace require a single input file");
                return ExitCode::from(EXIT_INPUT);
            }
            per_file(&a.graphs.clone(), a.jobs, move |p| cmd_construct(p, &a))
        }
        Cmd::Verify(a) => cmd_verify(&a).print(),
        Cmd::Gen(a) => cmd_gen(&a).print(),
        Cmd::Thresholds(a) => cmd_thresholds(&a).print(),
    };
    ExitCode::from(code)
}

/// Output of one unit of work: buffered so concurrent runs do not
/// interleave, printed in input order.
struct Run {
    code: u8,
    out: String,
    err: String,
}

impl Run {
    fn fail(code: u8, msg: impl Into<String>) -> Run {
        Run { code, out: String::new(), err: msg.into() }
    }

    fn print(self) -> u8 {
        print!("{}", self.out);
        eprint!("{}", self.err);
        self.code
    }
}

/// Runs `work` over every file, on `jobs` threads, printing buffered
/// results in input order; the process exit code is the maximum per-file
/// code (all failure codes outrank success).
fn per_file<F>(files: &[PathBuf], jobs: usize, work: F) -> u8
where
    F: Fn(&Path) -> Run + Sync,
{
    let jobs = jobs.max(1).min(files.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Run>>> = Mutex::new((0..files.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= files.len() {
                    break;
                }
                let run = work(&files[i]);
                slots.lock().unwrap()[i] = Some(run);
            });
        }
    });
    let mut code = EXIT_OK;
    for run in slots.into_inner().unwrap().into_iter().flatten() {
        code = code.max(run.print());
    }
    code
}

/// Loads and parses a graph, or produces the exit-2 run.
fn load_graph(path: &Path) -> Result<(Graph, InputDigest), Run> {
    let bytes = fs::read(path)
        .map_err(|e| Run::fail(EXIT_INPUT, format!("{}: {e}\n", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Run::fail(EXIT_INPUT, format!("{}: not valid UTF-8\n", path.display())))?;
    let g = Graph::parse_edge_list(&text)
        .map_err(|e| Run::fail(EXIT_INPUT, format!("{}:{e}\n", path.display())))?;
    let digest = InputDigest {
        path: path.display().to_string(),
        n: g.n(),
        m: g.edge_count(),
        sha256: sha256_hex(&bytes),
    };
    Ok((g, digest))
}

#[derive(serde::Serialize)]
struct InputDigest {
    path: String,
    n: usize,
    m: usize,
    sha256: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hex = String::with_capacity(64);
    for byte in Sha256::digest(bytes) {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

/// The JSON report every subcommand prints: command echo, input digest,
/// outcome, wall time.
fn report(digest: &InputDigest, outcome: serde_json::Value, started: Instant) -> String {
    let report = json!({
        "command": std::env::args().collect::<Vec<_>>().join(" "),
        "input": digest,
        "outcome": outcome,
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes"))
}

fn cmd_check(path: &Path, args: &CheckArgs) -> Run {
    let started = Instant::now();
    let (g, digest) = match load_graph(path) {
        Ok(v) => v,
        Err(run) => return run,
    };
    if args.k < 2 {
        return Run::fail(EXIT_INPUT, format!("k = {} must be at least 2\n", args.k));
    }
    let rep = hypothesis_report(&g, args.k);
    let mut out = String::new();
    if !args.json {
        let fmt_pair = |p: leafy::PairMin| match p.value() {
            Some(v) => v.to_string(),
            None => "complete".into(),
        };
        let _ = writeln!(out, "graph      {} (n={}, m={})", path.display(), g.n(), g.edge_count());
        let _ = writeln!(out, "delta      {}", rep.delta);
        let _ = writeln!(out, "sigma      {}", fmt_pair(rep.sigma));
        let _ = writeln!(out, "nc         {}", fmt_pair(rep.nc));
        let _ = writeln!(out, "connected  {}", rep.connected);
        let _ = writeln!(out, "conditions (k={})", rep.k);
        let _ = writeln!(out, "  hist_min_degree   {}", rep.flags.hist_min_degree);
        let _ = writeln!(out, "  hist_degree_sum   {}", rep.flags.hist_degree_sum);
        let _ = writeln!(out, "  dense_min_degree  {}", rep.flags.dense_min_degree);
        let _ = writeln!(out, "  degree_sum        {}", rep.flags.degree_sum);
        let _ = writeln!(out, "  nc_condition      {}", rep.flags.nc_condition);
        if let Some(reason) = rep.nc_condition_failure() {
            let _ = writeln!(out, "  nc_condition reason: {reason}");
        }
    }
    let mut outcome = serde_json::to_value(&rep).expect("report serializes");
    if let Some(reason) = rep.nc_condition_failure() {
        outcome["nc_condition_reason"] = json!(reason);
    }
    out.push_str(&report(&digest, outcome, started));
    Run { code: EXIT_OK, out, err: String::new() }
}

/// Default path for an artifact derived from the input file.
fn derived(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Run> {
    fs::write(path, contents)
        .map_err(|e| Run::fail(EXIT_INPUT, format!("{}: {e}\n", path.display())))
}

fn cmd_solve(path: &Path, args: &SolveArgs) -> Run {
    let started = Instant::now();
    let (g, digest) = match load_graph(path) {
        Ok(v) => v,
        Err(run) => return run,
    };
    if args.k < 2 {
        return Run::fail(EXIT_INPUT, format!("k = {} must be at least 2\n", args.k));
    }
    let mut budget = SearchBudget::nodes(args.nodes);
    if let Some(ms) = args.time_ms {
        budget.time_limit = Some(std::time::Duration::from_millis(ms));
    }
    let outcome = if args.naive {
        match solve_naive(&g, args.k) {
            Ok(o) => o,
            Err(ContractError(msg)) => return Run::fail(EXIT_INPUT, format!("{msg}\n")),
        }
    } else {
        solve_exact(&g, args.k, budget)
    };
    let (code, status, cert) = match outcome.status {
        SolveStatus::Found(cert) => (EXIT_OK, "found", Some(cert)),
        SolveStatus::None => (EXIT_NEGATIVE, "none", None),
        SolveStatus::BudgetExhausted => (EXIT_BUDGET, "budget-exhausted", None),
    };
    let mut cert_path = None;
    if let Some(cert) = &cert {
        debug_assert!(classify(&g, cert, args.k).is_full());
        let target = args.cert.clone().unwrap_or_else(|| derived(path, ".cert"));
        if let Err(run) = write_file(&target, &cert.to_text()) {
            return run;
        }
        cert_path = Some(target.display().to_string());
    }
    let out = report(
        &digest,
        json!({
            "status": status,
            "oracle": if args.naive { "naive" } else { "exact" },
            "nodes": outcome.stats.nodes,
            "max_depth": outcome.stats.max_depth,
            "note": outcome.note,
            "certificate": cert_path,
        }),
        started,
    );
    Run { code, out, err: String::new() }
}

fn cmd_construct(path: &Path, args: &ConstructArgs) -> Run {
    let started = Instant::now();
    let (g, digest) = match load_graph(path) {
        Ok(v) => v,
        Err(run) => return run,
    };
    if args.k < 2 {
        return Run::fail(EXIT_INPUT, format!("k = {} must be at least 2\n", args.k));
    }
    let cert_path = args.cert.clone().unwrap_or_else(|| derived(path, ".cert"));
    let trace_path = args.trace.clone().unwrap_or_else(|| derived(path, ".trace.json"));

    let run = if args.assume_hypotheses {
        leafy::construct_2k_st_assuming(&g, args.k)
    } else {
        construct_2k_st(&g, args.k)
    };
    let (code, outcome, err) = match run {
        Ok((cert, trace)) => {
            debug_assert!(classify(&g, &cert, args.k).is_full());
            if let Err(run) = write_file(&cert_path, &cert.to_text()) {
                return run;
            }
            let trace_json =
                serde_json::to_string_pretty(&trace).expect("trace serializes");
            if let Err(run) = write_file(&trace_path, &trace_json) {
                return run;
            }
            (
                EXIT_OK,
                json!({
                    "status": "constructed",
                    "case": trace.case_label(),
                    "certificate": cert_path.display().to_string(),
                    "trace": trace_path.display().to_string(),
                }),
                String::new(),
            )
        }
        Err(ConstructError::Hypothesis(msg)) => (
            EXIT_HYPOTHESIS,
            json!({ "status": "hypothesis-violation", "detail": msg }),
            format!("{}: hypothesis violation: {msg}\n", path.display()),
        ),
        Err(ConstructError::Invariant { message, trace }) => {
            let trace_json =
                serde_json::to_string_pretty(&trace).expect("trace serializes");
            if let Err(run) = write_file(&trace_path, &trace_json) {
                return run;
            }
            let mut err = format!(
                "{}: internal invariant failure in case `{}`: {message}\n",
                path.display(),
                trace.case_label()
            );
            for entry in &trace.ledger {
                let _ = writeln!(
                    err,
                    "  [{}] {}: {} {} {}",
                    if entry.holds { "ok" } else { "FAIL" },
                    entry.name,
                    entry.lhs,
                    entry.op.symbol(),
                    entry.rhs
                );
            }
            (
                EXIT_INVARIANT,
                json!({
                    "status": "invariant-failure",
                    "detail": message,
                    "case": trace.case_label(),
                    "ledger": trace.ledger,
                    "trace": trace_path.display().to_string(),
                }),
                err,
            )
        }
    };

    if code != EXIT_OK && args.fallback_exact {
        let outcome_exact = solve_exact(&g, args.k, SearchBudget::ample());
        if let SolveStatus::Found(cert) = outcome_exact.status {
            debug_assert!(classify(&g, &cert, args.k).is_full());
            if let Err(run) = write_file(&cert_path, &cert.to_text()) {
                return run;
            }
            let out = report(
                &digest,
                json!({
                    "status": "fallback-exact",
                    "construction_failure": outcome,
                    "certificate": cert_path.display().to_string(),
                }),
                started,
            );
            return Run { code: EXIT_OK, out, err };
        }
    }

    let out = report(&digest, outcome, started);
    Run { code, out, err }
}

fn cmd_verify(args: &VerifyArgs) -> Run {
    let started = Instant::now();
    let (g, digest) = match load_graph(&args.graph) {
        Ok(v) => v,
        Err(run) => return run,
    };
    let cert_text = match fs::read_to_string(&args.cert) {
        Ok(t) => t,
        Err(e) => return Run::fail(EXIT_INPUT, format!("{}: {e}\n", args.cert.display())),
    };
    let cert = match TreeCertificate::parse_text(&cert_text) {
        Ok(c) => c,
        Err(e) => return Run::fail(EXIT_INPUT, format!("{}:{e}\n", args.cert.display())),
    };
    let k = args.k.unwrap_or_else(|| cert.k());
    if k != cert.k() {
        return Run::fail(
            EXIT_INPUT,
            format!("--k {} contradicts the certificate's k = {}\n", k, cert.k()),
        );
    }
    let kind = classify(&g, &cert, k);
    let (code, status) = match &kind {
        TreeKind::Full => (EXIT_OK, "full"),
        TreeKind::Semi { .. } | TreeKind::Quasi { .. } => (EXIT_NEGATIVE, "not-full"),
        TreeKind::Invalid { .. } => (EXIT_INPUT, "invalid"),
    };
    let mut out = format!("{kind}\n");
    out.push_str(&report(
        &digest,
        json!({ "status": status, "classification": format!("{kind}"), "k": k }),
        started,
    ));
    Run { code, out, err: String::new() }
}

fn cmd_gen(args: &GenArgs) -> Run {
    let started = Instant::now();
    let need_k = || -> Result<usize, Run> {
        args.k
            .ok_or_else(|| Run::fail(EXIT_INPUT, format!("--family {} requires --k\n", args.family)))
    };
    let built: Result<Graph, Run> = match args.family.as_str() {
        "h" => match need_k() {
            Ok(k) => build_h(ExtremalParams { k, n: args.n })
                .map_err(|e| Run::fail(EXIT_INPUT, format!("{e}\n"))),
            Err(run) => Err(run),
        },
        "random" => {
            if !(0.0..=1.0).contains(&args.p) {
                Err(Run::fail(EXIT_INPUT, format!("edge probability {} not in [0, 1]\n", args.p)))
            } else {
                Ok(random_graph(args.n, args.p, args.seed))
            }
        }
        "stress" => match need_k() {
            Ok(k) => stress_family(k, args.n).map_err(|e| Run::fail(EXIT_INPUT, format!("{e}\n"))),
            Err(run) => Err(run),
        },
        other => match other.strip_prefix("case:") {
            Some(label) => match need_k() {
                Ok(k) => case_family(label, k, args.n)
                    .map_err(|e| Run::fail(EXIT_INPUT, format!("{e}\n"))),
                Err(run) => Err(run),
            },
            None => Err(Run::fail(
                EXIT_INPUT,
                format!("unknown family `{other}`; expected h, case:<label>, stress or random\n"),
            )),
        },
    };
    let g = match built {
        Ok(g) => g,
        Err(run) => return run,
    };

    let text = g.to_edge_list();
    let mut out = String::new();
    match &args.out {
        Some(path) => {
            if let Err(run) = write_file(path, &text) {
                return run;
            }
        }
        None => out.push_str(&text),
    }
    if let Some(dot) = &args.dot {
        if let Err(run) = write_file(dot, &g.to_dot()) {
            return run;
        }
    }
    let digest = InputDigest {
        path: args.out.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "-".into()),
        n: g.n(),
        m: g.edge_count(),
        sha256: sha256_hex(text.as_bytes()),
    };
    let outcome = json!({
        "status": "generated",
        "family": args.family,
        "dot": args.dot.as_ref().map(|p| p.display().to_string()),
    });
    if args.out.is_some() {
        out.push_str(&report(&digest, outcome, started));
    }
    Run { code: EXIT_OK, out, err: String::new() }
}

fn cmd_thresholds(args: &ThresholdsArgs) -> Run {
    if args.k < 2 {
        return Run::fail(EXIT_INPUT, format!("k = {} must be at least 2\n", args.k));
    }
    let t = thresholds(args.k);
    let mut out = String::new();
    if !args.json {
        let _ = writeln!(out, "k    {}", t.k);
        let _ = writeln!(out, "c_k  {}", t.c_k);
        let _ = writeln!(out, "n0   {}", t.n0);
        let _ = writeln!(out, "n1   {}", t.n1);
    }
    let _ = writeln!(out, "{}", serde_json::to_string(&t).expect("thresholds serialize"));
    Run { code: EXIT_OK, out, err: String::new() }
}
