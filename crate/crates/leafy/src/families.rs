//! Graph generators: the extremal family `H`, fixture families routing
//! the constructive pipeline into each of its cases, and seeded random
//! graphs.

use crate::cert::ContractError;
use crate::construct::construct_2k_st;
use crate::graph::{hypothesis_report, Graph};
use crate::thresholds::thresholds;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of the extremal graph `H`: three cliques K_{2k−1},
/// K_{⌈(n+1)/2⌉−k} and K_{⌊(n+1)/2⌋−k} joined by one bridge edge uv plus
/// one edge u_i–w_i per non-u vertex of the first clique.
///
/// Construction only needs all three parts nonempty (k ≥ 2 and
/// n ≥ 2k+1). The family's headline measurements — δ(H) = 2k−1, u a
/// cut-vertex, 2·NC(H) ≥ n−2 — are stated for 2 ≤ k ≤ n/6 and hold
/// exactly there (see [`ExtremalParams::guarantees_hold`]); smaller n is
/// still useful for exhaustive-search experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremalParams {
    pub k: usize,
    pub n: usize,
}

impl ExtremalParams {
    fn part_sizes(&self) -> (usize, usize, usize) {
        let a = 2 * self.k - 1;
        let b = (self.n + 1).div_ceil(2) - self.k;
        let c = (self.n + 1) / 2 - self.k;
        (a, b, c)
    }

    /// Whether n is large enough (2 ≤ k ≤ n/6) for the family's stated
    /// measurements to be guaranteed: δ(H) = 2k−1 needs every pure clique
    /// vertex to reach that degree, i.e. cliques of size ≥ 2k.
    pub fn guarantees_hold(&self) -> bool {
        self.k >= 2 && 6 * self.k <= self.n
    }

    fn validate(&self) -> Result<(), ContractError> {
        if self.k < 2 {
            return Err(ContractError(format!("k = {} must be at least 2", self.k)));
        }
        if self.n < 2 * self.k + 1 {
            return Err(ContractError(format!(
                "n = {} leaves an empty clique part (need n ≥ 2k+1 = {})",
                self.n,
                2 * self.k + 1
            )));
        }
        let (a, b, c) = self.part_sizes();
        debug_assert_eq!(a + b + c, self.n);
        debug_assert!(b >= 1 && c >= 1);
        Ok(())
    }
}

/// Builds `H` with a fixed labeling: vertices `0..2k-2` form the first
/// clique with u = 0, the next block is the second clique with v as its
/// first vertex, the final block is the third clique. The bridge edges
/// are uv and u_i–w_i for the 2k−2 vertices u_i ≠ u of the first clique;
/// the w_i are the first 2k−2 vertices of the third clique when it is
/// large enough, assigned round-robin otherwise.
///
/// The result always has δ(H) = 2k−1 (one short of the 2k the
/// neighborhood-union condition demands), 2·NC(H) ≥ n−2, u as a
/// cut-vertex — and no [2,k]-ST.
pub fn build_h(p: ExtremalParams) -> Result<Graph, ContractError> {
    p.validate()?;
    let (a, b, c) = p.part_sizes();
    let mut edges = Vec::new();
    let clique = |start: usize, len: usize, edges: &mut Vec<(usize, usize)>| {
        for i in start..start + len {
            for j in i + 1..start + len {
                edges.push((i, j));
            }
        }
    };
    clique(0, a, &mut edges);
    clique(a, b, &mut edges);
    clique(a + b, c, &mut edges);
    edges.push((0, a)); // uv
    for i in 1..=2 * p.k - 2 {
        let w = a + b + (i - 1) % c;
        edges.push((i, w)); // u_i w_i
    }
    Ok(Graph::new(p.n, &edges).expect("extremal family construction is simple"))
}

/// The case taxonomy of the constructive pipeline, i.e. the values
/// `ProofTrace::case_label` can take, in a fixed order.
///
/// At k = 2 the label `W-disconnected/overlap/Case2` is omitted: a
/// shared anchor has at least one edge into each component of `W`, so
/// its `W`-degree is at least 2 and can never be ≤ k−1 = 1.
pub fn case_labels(k: usize) -> Vec<&'static str> {
    let mut labels = vec![
        "dense",
        "W-connected/Case1",
        "W-connected/Case2/Subcase2.1",
        "W-connected/Case2/Subcase2.2",
        "W-disconnected/overlap/Case1",
        "W-disconnected/overlap/Case2",
        "W-disconnected/disjoint/Case1",
        "W-disconnected/disjoint/Case2",
        "W-disconnected/disjoint/Case3",
    ];
    if k == 2 {
        labels.retain(|&l| l != "W-disconnected/overlap/Case2");
    }
    labels
}

/// Hub fixture behind [`case_family`]: vertex 0 joined to the clique
/// {1..2k}; the rest is one clique (or two, split floor/ceil) forming
/// `W`; `links` adds (hub-neighbor, W-offset) edges steering which case
/// the constructive pipeline takes.
fn hub_fixture(n: usize, k: usize, links: &[(usize, usize)], split_w: bool) -> Graph {
    let d = 2 * k;
    let mut edges = Vec::new();
    for i in 1..=d {
        edges.push((0, i));
        for j in i + 1..=d {
            edges.push((i, j));
        }
    }
    let w0 = d + 1;
    let wlen = n - w0;
    let cut = if split_w { wlen / 2 } else { wlen };
    for a in 0..wlen {
        for b in a + 1..wlen {
            if (a < cut) == (b < cut) {
                edges.push((w0 + a, w0 + b));
            }
        }
    }
    for &(ui, off) in links {
        edges.push((ui, w0 + off));
    }
    Graph::new(n, &edges).expect("hub fixture is simple")
}

/// Builds a graph that satisfies the hypotheses of the constructive
/// pipeline (connected, n ≥ n₁(k), δ ≥ 2k, 2·NC ≥ n−2) and routes it
/// into exactly the case named by `label` (one of [`case_labels`]).
///
/// Recipes: `dense` is the complete graph; every other label is a
/// [`hub_fixture`] whose hub has degree exactly 2k (so it is the chosen
/// minimum-degree vertex) and whose link pattern pins the branch — e.g.
/// `W-connected/Case2/Subcase2.2` links one hub neighbor to exactly k
/// vertices of a connected `W`, and the disjoint labels link two hub
/// neighbors to the two halves of a split `W` with the case's required
/// depths. The generator re-runs the pipeline on the result and fails
/// if the trace does not match, so a returned graph is a verified
/// fixture.
///
/// Errors: `k < 2`, `n < n₁(k)`, an unknown label, or
/// `W-disconnected/overlap/Case2` with k = 2 (the case is unreachable
/// there) are input errors; a mismatched trace is a generator bug
/// reported as an error.
pub fn case_family(label: &str, k: usize, n: usize) -> Result<Graph, ContractError> {
    if k < 2 {
        return Err(ContractError(format!("k = {k} must be at least 2")));
    }
    let n1 = thresholds(k).n1;
    if n < n1 {
        return Err(ContractError(format!("n = {n} is below n1({k}) = {n1}")));
    }
    let wlen = n - 2 * k - 1;
    let cut = wlen / 2;
    let fan = |ui: usize, from: usize, count: usize| -> Vec<(usize, usize)> {
        (from..from + count).map(|off| (ui, off)).collect()
    };
    let g = match label {
        "dense" => Graph::complete(n),
        "W-connected/Case1" => hub_fixture(n, k, &fan(1, 0, wlen), false),
        "W-connected/Case2/Subcase2.1" => hub_fixture(n, k, &[(1, 0)], false),
        "W-connected/Case2/Subcase2.2" => hub_fixture(n, k, &fan(1, 0, k), false),
        "W-disconnected/overlap/Case1" => {
            let mut links = fan(1, 0, k - 1);
            links.push((1, cut));
            hub_fixture(n, k, &links, true)
        }
        "W-disconnected/overlap/Case2" => {
            if k == 2 {
                return Err(ContractError(
                    "W-disconnected/overlap/Case2 is unreachable at k = 2: a shared \
                     anchor has W-degree at least 2 > k-1"
                        .into(),
                ));
            }
            hub_fixture(n, k, &[(1, 0), (1, cut)], true)
        }
        "W-disconnected/disjoint/Case1" => {
            let mut links = fan(1, 0, k);
            links.extend(fan(2, cut, k));
            hub_fixture(n, k, &links, true)
        }
        "W-disconnected/disjoint/Case2" => hub_fixture(n, k, &[(1, 0), (2, cut)], true),
        "W-disconnected/disjoint/Case3" => {
            let mut links = fan(1, 0, k);
            links.push((2, cut));
            hub_fixture(n, k, &links, true)
        }
        other => {
            return Err(ContractError(format!(
                "unknown case label {other:?}; expected one of {:?}",
                case_labels(k)
            )));
        }
    };

    let report = hypothesis_report(&g, k);
    if !report.flags.nc_condition {
        return Err(ContractError(format!(
            "fixture bug: {label} recipe violates the hypotheses: {}",
            report.nc_condition_failure().unwrap_or_default()
        )));
    }
    let (_, tr) = construct_2k_st(&g, k).map_err(|e| {
        ContractError(format!("fixture bug: {label} recipe fails to construct: {e}"))
    })?;
    if tr.case_label() != label {
        return Err(ContractError(format!(
            "fixture bug: {label} recipe routed to {}",
            tr.case_label()
        )));
    }
    Ok(g)
}

/// Non-dense stress input: two balanced cliques plus a hub vertex 0
/// joined to the first k vertices of each. Satisfies the hypotheses of
/// the constructive pipeline with δ = 2k — far below the dense bound —
/// and disconnected `W`, forcing the full disjoint-components path.
pub fn stress_family(k: usize, n: usize) -> Result<Graph, ContractError> {
    if k < 2 {
        return Err(ContractError(format!("k = {k} must be at least 2")));
    }
    let n1 = thresholds(k).n1;
    if n < n1 {
        return Err(ContractError(format!("n = {n} is below n1({k}) = {n1}")));
    }
    let a = (n - 1).div_ceil(2);
    let mut edges = Vec::new();
    for i in 1..n {
        for j in i + 1..n {
            if (i <= a) == (j <= a) {
                edges.push((i, j));
            }
        }
    }
    for i in 1..=k {
        edges.push((0, i));
        edges.push((0, a + i));
    }
    Ok(Graph::new(n, &edges).expect("stress family is simple"))
}

/// Seeded Erdős–Rényi sample: every pair becomes an edge independently
/// with probability `edge_prob`. The same seed always yields the same
/// graph.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Graph {
    assert!(
        (0.0..=1.0).contains(&edge_prob),
        "edge probability must lie in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("random sampling yields a simple graph")
}
