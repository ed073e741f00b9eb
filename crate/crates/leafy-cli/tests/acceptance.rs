//! Acceptance gate for the whole workspace: one test per criterion, each
//! printing a single `criterion N (...): PASS/FAIL` line. The lines are
//! captured by the harness by default; run with `--nocapture` to see them.
//!
//! The criteria exercise the public surface end to end: exact threshold
//! values, non-existence on the extremal family, its measured parameters,
//! solver-vs-oracle equivalence, existence under the degree-sum condition,
//! the constructive pipeline routed through every case label, the
//! degree-sum ⇒ neighborhood-union implication, and certificate-checker
//! soundness under mutation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use leafy::families::{build_h, case_labels, random_graph, ExtremalParams};
use leafy::{
    classify, solve_exact, solve_naive, Graph, SearchBudget, SolveStatus, TreeCertificate,
};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_leafy")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, g.to_edge_list()).unwrap();
    path
}

/// Prints the criterion's one-line verdict, then fails the test on any
/// recorded problem.
fn conclude(number: u32, name: &str, started: Instant, failures: &[String], detail: &str) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {number} ({name}): {verdict} - {detail} [{:.1?}]", started.elapsed());
    assert!(failures.is_empty(), "criterion {number} ({name}): {}", failures.join("; "));
}

/// Deterministic split-mix step for the mutation fuzzer; the graph
/// generator has its own seeded RNG.
fn next(state: &mut u64) -> u64 {
    *state = state.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(0xD1B54A32D192ED03);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Criterion 1: the `thresholds` command reports n1(2..5) = 276, 994,
/// 2306, 4356 exactly, and n1(k) > 16k^3 holds for every k in [2, 50].
/// Total runtime under one second.
#[test]
fn criterion_1_threshold_reproduction() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for (k, expect) in [(2, 276u64), (3, 994), (4, 2306), (5, 4356)] {
        let out = run(&["thresholds", "-k", &k.to_string(), "--json"]);
        if code(&out) != 0 {
            failures.push(format!("thresholds -k {k} exited {}", code(&out)));
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        if v["n1"] != serde_json::json!(expect) {
            failures.push(format!("n1({k}) = {} (expected {expect})", v["n1"]));
        }
    }

    for k in 2usize..=50 {
        let t = leafy::thresholds(k);
        if t.n1 <= 16 * k * k * k {
            failures.push(format!("n1({k}) = {} is not above 16k^3 = {}", t.n1, 16 * k * k * k));
        }
    }

    if started.elapsed() >= Duration::from_secs(1) {
        failures.push(format!("took {:.1?}, bound is 1 s", started.elapsed()));
    }
    conclude(
        1,
        "threshold reproduction",
        started,
        &failures,
        "n1(2..5) exact, n1(k) > 16k^3 for k in [2,50], under 1 s",
    );
}

/// Criterion 2: exhaustive search proves the extremal family has no
/// [2,k]-ST at desk scale: H(k=2, n in {11,13,15}) and H(k=3, n=15) all
/// come back `none` with an ample budget, within 60 s total.
#[test]
fn criterion_2_extremal_non_existence() {
    let started = Instant::now();
    let mut failures = Vec::new();

    for (k, n) in [(2usize, 11usize), (2, 13), (2, 15), (3, 15)] {
        let h = build_h(ExtremalParams { k, n }).unwrap();
        let out = solve_exact(&h, k, SearchBudget::ample());
        if !matches!(out.status, SolveStatus::None) {
            failures.push(format!("H({k},{n}): expected none, got {:?}", out.status));
        }
    }

    if started.elapsed() >= Duration::from_secs(60) {
        failures.push(format!("took {:.1?}, bound is 60 s", started.elapsed()));
    }
    conclude(
        2,
        "extremal family non-existence",
        started,
        &failures,
        "H(2,11), H(2,13), H(2,15), H(3,15) exhaustively none",
    );
}

/// Criterion 3: wherever the extremal family's measurements are
/// guaranteed (2 <= k, 6k <= n) and n <= 60, the built graph has minimum
/// degree exactly 2k-1 and 2*NC >= n-2. Exact integer checks.
#[test]
fn criterion_3_extremal_family_measurements() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0usize;

    for k in 2usize..=10 {
        for n in 6 * k..=60 {
            let p = ExtremalParams { k, n };
            assert!(p.guarantees_hold());
            let h = build_h(p).unwrap();
            if h.min_degree() != 2 * k - 1 {
                failures.push(format!("H({k},{n}): delta = {}, not 2k-1", h.min_degree()));
            }
            if !h.nc_value().twice_at_least(n - 2) {
                failures.push(format!("H({k},{n}): 2*NC below n-2 = {}", n - 2));
            }
            checked += 1;
        }
    }

    // Sum over k = 2..=10 of (61 - 6k) pairs.
    if checked != 225 {
        failures.push(format!("swept {checked} pairs, expected 225"));
    }
    conclude(
        3,
        "extremal family measurements",
        started,
        &failures,
        "delta = 2k-1 and 2*NC >= n-2 on all 225 guaranteed (k,n), n <= 60",
    );
}

/// Criterion 4: the backtracking solver and the enumeration oracle agree
/// on found/none for 10^4 random connected graphs with n in [4,8] and
/// k in {2,3}; every found certificate classifies full.
#[test]
fn criterion_4_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut done = 0usize;
    let mut seed = 0u64;

    while done < 10_000 {
        seed += 1;
        let n = 4 + (seed as usize * 7) % 5;
        let p = 0.3 + 0.6 * ((seed * 13 % 100) as f64) / 100.0;
        let g = random_graph(n, p, seed);
        if !g.is_connected() {
            continue;
        }
        let k = 2 + (seed as usize) % 2;
        let exact = solve_exact(&g, k, SearchBudget::ample());
        let naive = solve_naive(&g, k).unwrap();
        if exact.status.is_found() != naive.status.is_found() {
            failures.push(format!(
                "n={n} k={k} seed={seed}: exact found={}, naive found={}",
                exact.status.is_found(),
                naive.status.is_found()
            ));
        }
        for out in [&exact, &naive] {
            if let SolveStatus::Found(cert) = &out.status {
                if !classify(&g, cert, k).is_full() {
                    failures.push(format!("n={n} k={k} seed={seed}: unsound certificate"));
                }
            }
        }
        done += 1;
        if failures.len() > 5 {
            break;
        }
    }

    conclude(
        4,
        "oracle equivalence",
        started,
        &failures,
        "exact == naive on 10^4 random connected graphs, n in [4,8], k in {2,3}",
    );
}

/// Criterion 5: on 10^3 random graphs with n in [8,12] whose degree-sum
/// number satisfies sigma >= n-1, the exact solver finds a HIST every
/// single time.
#[test]
fn criterion_5_degree_sum_existence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut done = 0usize;
    let mut seed = 100_000u64;

    while done < 1_000 {
        seed += 1;
        let n = 8 + (seed as usize * 3) % 5;
        let p = 0.5 + 0.45 * ((seed * 17 % 100) as f64) / 100.0;
        let g = random_graph(n, p, seed);
        if !g.sigma_value().at_least(n - 1) {
            continue;
        }
        if !solve_exact(&g, 2, SearchBudget::ample()).status.is_found() {
            failures.push(format!("n={n} seed={seed}: sigma >= n-1 but no HIST found"));
        }
        done += 1;
        if failures.len() > 5 {
            break;
        }
    }

    conclude(
        5,
        "degree-sum existence",
        started,
        &failures,
        "HIST found on 1000/1000 graphs with sigma >= n-1, n in [8,12]",
    );
}

/// Criterion 6: for every case label of the constructive pipeline at
/// k = 2, the fixture family routes the run into exactly that branch:
/// gen -> construct exits 0, the trace's case path equals the label, and
/// verify classifies the certificate full. Each instance under 30 s.
#[test]
fn criterion_6_end_to_end_cases() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();

    let labels = case_labels(2);
    if labels.len() < 7 {
        failures.push(format!("only {} case labels at k = 2", labels.len()));
    }

    for (i, label) in labels.iter().enumerate() {
        let instance = Instant::now();
        let graph = dir.path().join(format!("case{i}.el"));
        let cert = dir.path().join(format!("case{i}.cert"));
        let trace = dir.path().join(format!("case{i}.trace.json"));
        let out = run(&[
            "gen",
            "--family",
            &format!("case:{label}"),
            "-k",
            "2",
            "-n",
            "276",
            "--out",
            graph.to_str().unwrap(),
        ]);
        if code(&out) != 0 {
            failures.push(format!("{label}: gen exited {}", code(&out)));
            continue;
        }
        let out = run(&[
            "construct",
            graph.to_str().unwrap(),
            "-k",
            "2",
            "--cert",
            cert.to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
        ]);
        if code(&out) != 0 {
            failures.push(format!("{label}: construct exited {}", code(&out)));
            continue;
        }
        let t: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
        let path: Vec<&str> =
            t["case_path"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
        if path.join("/") != *label {
            failures.push(format!("{label}: trace went to {}", path.join("/")));
        }
        let out = run(&["verify", graph.to_str().unwrap(), cert.to_str().unwrap()]);
        if code(&out) != 0 || !stdout(&out).contains("full") {
            failures.push(format!("{label}: verify exited {}", code(&out)));
        }
        if instance.elapsed() >= Duration::from_secs(30) {
            failures.push(format!("{label}: took {:.1?}, bound is 30 s", instance.elapsed()));
        }
    }

    conclude(
        6,
        "end-to-end construction",
        started,
        &failures,
        "all 8 case labels at k=2, n=276: construct exits 0, trace matches, verify full",
    );
}

/// Criterion 7: among 10^4 random non-complete graphs with n <= 12
/// satisfying sigma >= n-2, every one also satisfies 2*NC >= n-2.
#[test]
fn criterion_7_sigma_implies_nc() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut done = 0usize;
    let mut seed = 200_000u64;

    while done < 10_000 {
        seed += 1;
        let n = 4 + (seed as usize * 5) % 9;
        let p = 0.3 + 0.65 * ((seed * 19 % 100) as f64) / 100.0;
        let g = random_graph(n, p, seed);
        let sigma = match g.sigma_value().value() {
            Some(s) => s, // None means complete: excluded
            None => continue,
        };
        if sigma + 2 < n {
            continue;
        }
        if !g.nc_value().twice_at_least(n - 2) {
            failures.push(format!("n={n} seed={seed}: sigma = {sigma} but 2*NC < n-2"));
        }
        done += 1;
        if failures.len() > 5 {
            break;
        }
    }

    conclude(
        7,
        "degree sum implies neighborhood union",
        started,
        &failures,
        "2*NC >= n-2 on 10^4 non-complete graphs with sigma >= n-2, n <= 12",
    );
}

/// Criterion 8: take 10^3 valid certificates from the exact solver and
/// mutate each once (drop an edge / add an edge / retarget an endpoint).
/// The verify command must reject every mutant that is no longer a tree
/// or has a vertex of degree in [2,k]; mutants that happen to remain
/// full [2,k]-STs must still pass.
#[test]
fn criterion_8_certificate_fuzz() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let mut rng = 0xACCE97u64;

    let mut mutants = 0usize;
    let mut rejected = 0usize;
    let mut survivors = 0usize;
    let mut seed = 300_000u64;

    while mutants < 1_000 && failures.len() <= 5 {
        seed += 1;
        let n = 6 + (seed as usize * 11) % 5;
        let p = 0.55 + 0.4 * ((seed * 23 % 100) as f64) / 100.0;
        let g = random_graph(n, p, seed);
        if !g.is_connected() {
            continue;
        }
        let k = 2 + (seed as usize) % 2;
        let cert = match solve_exact(&g, k, SearchBudget::ample()).status {
            SolveStatus::Found(c) => c,
            _ => continue,
        };

        let edges = cert.edges().to_vec();
        let vertices: Vec<usize> = cert.vertices().iter().collect();
        let mutated: Vec<(usize, usize)> = match mutants % 3 {
            // Drop one edge: the remainder cannot span.
            0 => {
                let idx = next(&mut rng) as usize % edges.len();
                let mut e = edges.clone();
                e.remove(idx);
                e
            }
            // Add one absent edge: n edges always contain a cycle.
            1 => {
                let mut candidates: Vec<(usize, usize)> = g
                    .edges()
                    .into_iter()
                    .filter(|e| !edges.contains(e))
                    .collect();
                if candidates.is_empty() {
                    // The tree uses every host edge; add a non-edge instead
                    // (a foreign edge, equally invalid).
                    for &u in &vertices {
                        for &v in &vertices {
                            if u < v && !edges.contains(&(u, v)) {
                                candidates.push((u, v));
                            }
                        }
                    }
                }
                let extra = candidates[next(&mut rng) as usize % candidates.len()];
                let mut e = edges.clone();
                e.push(extra);
                e
            }
            // Retarget one endpoint: may break the tree, may leave a tree
            // with a bad degree, may even stay a full tree.
            _ => {
                let idx = next(&mut rng) as usize % edges.len();
                let (a, b) = edges[idx];
                let (keep, moved) = if next(&mut rng) % 2 == 0 { (a, b) } else { (b, a) };
                let offset = next(&mut rng) as usize;
                let target = (0..vertices.len())
                    .map(|j| vertices[(offset + j) % vertices.len()])
                    .find(|&t| {
                        t != keep
                            && t != moved
                            && !edges.contains(&(keep.min(t), keep.max(t)))
                    });
                match target {
                    Some(t) => {
                        let mut e = edges.clone();
                        e[idx] = (keep.min(t), keep.max(t));
                        e
                    }
                    None => continue, // keep is adjacent to everything; resample
                }
            }
        };
        let mutant = TreeCertificate::new(k, cert.vertices().clone(), mutated);

        let graph_path = write_graph(dir.path(), "fuzz.el", &g);
        let cert_path = dir.path().join("fuzz.cert");
        fs::write(&cert_path, mutant.to_text()).unwrap();
        let out = run(&["verify", graph_path.to_str().unwrap(), cert_path.to_str().unwrap()]);

        let still_full = classify(&g, &mutant, k).is_full();
        match (still_full, code(&out)) {
            (false, 0) => failures.push(format!(
                "seed={seed} k={k}: broken mutant accepted ({:?})",
                classify(&g, &mutant, k)
            )),
            (true, c) if c != 0 => {
                failures.push(format!("seed={seed} k={k}: intact full tree rejected ({c})"))
            }
            (false, _) => rejected += 1,
            (true, _) => survivors += 1,
        }
        // Dropping or adding an edge always breaks tree-ness.
        if mutants % 3 != 2 && still_full {
            failures.push(format!("seed={seed}: drop/add mutant classified full"));
        }
        mutants += 1;
    }

    let detail = format!(
        "1000 mutants: {rejected} rejected, {survivors} still full and accepted, none misjudged"
    );
    conclude(8, "certificate soundness fuzz", started, &failures, &detail);
}
