//! Exact decision and witness search for [2,k]-ST existence.
//!
//! [`solve_exact`] backtracks over vertex *roles*: in any [2,k]-ST every
//! vertex is either a leaf (tree degree 1) or internal (tree degree ≥
//! k+1). A role assignment is realizable iff the internal set `I` induces
//! a connected subgraph carrying a spanning tree `T_I`, every leaf has a
//! neighbor in `I`, and the leaves can be distributed so every internal
//! vertex reaches degree k+1. The search prunes with necessary
//! conditions (degree caps, the size bound k·|I| ≤ n−2, connectivity of
//! the not-yet-leaf set) and decides each complete assignment by
//! enumerating spanning trees of `G[I]` plus a bipartite feasibility
//! check.
//!
//! [`solve_naive`] enumerates all spanning trees outright and is the
//! oracle [`solve_exact`] is tested against.

use crate::cert::{classify, ContractError, TreeCertificate};
use crate::dsu::{Dsu, RollbackDsu};
use crate::graph::{Graph, VertexSet};
use std::time::{Duration, Instant};

/// Limits for the backtracking search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of search-tree nodes to expand.
    pub node_limit: u64,
    /// Optional wall-clock limit.
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn nodes(node_limit: u64) -> SearchBudget {
        assert!(node_limit > 0, "node limit must be positive");
        SearchBudget { node_limit, time_limit: None }
    }

    /// Large enough to decide every instance this crate's tests touch.
    pub fn ample() -> SearchBudget {
        SearchBudget::nodes(50_000_000)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::nodes(5_000_000)
    }
}

/// Search effort counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub max_depth: usize,
}

/// Tri-state search result. A timeout is reported as its own state and
/// never conflated with a proof of non-existence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveStatus {
    Found(TreeCertificate),
    None,
    BudgetExhausted,
}

impl SolveStatus {
    pub fn is_found(&self) -> bool {
        matches!(self, SolveStatus::Found(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub stats: SearchStats,
    /// Diagnostic for degenerate inputs (e.g. disconnected graphs).
    pub note: Option<String>,
}

impl SolveOutcome {
    fn with(status: SolveStatus, stats: SearchStats) -> SolveOutcome {
        SolveOutcome { status, stats, note: None }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Open,
    Leaf,
    Internal,
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    bound: usize, // |I| ≤ bound in any [2,k]-ST
    budget: SearchBudget,
    started: Instant,
    role: Vec<Role>,
    internals: Vec<usize>,
    leaves: Vec<usize>,
    stats: SearchStats,
}

enum Step {
    Found(TreeCertificate),
    Exhausted, // subtree fully explored, no witness
    Budget,
}

impl<'a> Search<'a> {
    /// True if the vertices outside `leaves ∪ {extra}` induce a connected
    /// nonempty subgraph and every leaf keeps a neighbor there.
    fn leaf_assignment_viable(&self, extra: usize) -> bool {
        let n = self.g.n();
        let mut rest = vec![true; n];
        for &l in &self.leaves {
            rest[l] = false;
        }
        rest[extra] = false;
        let start = match (0..n).find(|&v| rest[v]) {
            Some(v) => v,
            None => return false,
        };
        // BFS over the rest set.
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in self.g.neighbors(v) {
                if rest[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != rest.iter().filter(|&&r| r).count() {
            return false;
        }
        // Every leaf (including the candidate) needs a possible parent.
        self.leaves
            .iter()
            .chain(std::iter::once(&extra))
            .all(|&l| self.g.neighbors(l).iter().any(|&w| rest[w]))
    }

    fn can_be_internal(&self, v: usize) -> bool {
        self.g.degree(v) >= self.k + 1 && self.internals.len() < self.bound
    }

    fn can_be_leaf(&self, v: usize) -> bool {
        self.leaf_assignment_viable(v)
    }

    /// Picks the open vertex with the fewest feasible roles (fail-first),
    /// smallest id on ties. Returns (vertex, feasible internal, feasible leaf).
    fn pick_branch_vertex(&self) -> Option<(usize, bool, bool)> {
        let mut best: Option<(usize, usize, bool, bool)> = None; // (choices, v, int, leaf)
        for v in 0..self.g.n() {
            if self.role[v] != Role::Open {
                continue;
            }
            let i = self.can_be_internal(v);
            let l = self.can_be_leaf(v);
            let choices = i as usize + l as usize;
            if best.as_ref().is_none_or(|&(c, ..)| choices < c) {
                best = Some((choices, v, i, l));
                if choices == 0 {
                    break;
                }
            }
        }
        best.map(|(_, v, i, l)| (v, i, l))
    }

    fn run(&mut self, depth: usize) -> Step {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.stats.nodes > self.budget.node_limit {
            return Step::Budget;
        }
        if let Some(limit) = self.budget.time_limit {
            // Checking the clock on every 1024th node keeps the overhead low.
            if self.stats.nodes % 1024 == 0 && self.started.elapsed() > limit {
                return Step::Budget;
            }
        }
        let Some((v, can_int, can_leaf)) = self.pick_branch_vertex() else {
            // All vertices assigned: decide this role assignment exactly.
            return self.realize();
        };
        if can_int {
            self.role[v] = Role::Internal;
            self.internals.push(v);
            match self.run(depth + 1) {
                Step::Exhausted => {}
                stop => return stop,
            }
            self.internals.pop();
            self.role[v] = Role::Open;
        }
        if can_leaf {
            self.role[v] = Role::Leaf;
            self.leaves.push(v);
            match self.run(depth + 1) {
                Step::Exhausted => {}
                stop => return stop,
            }
            self.leaves.pop();
            self.role[v] = Role::Open;
        }
        Step::Exhausted
    }

    /// Decides whether the complete role assignment carries a [2,k]-ST:
    /// some spanning tree of G[I] must admit a leaf distribution raising
    /// every internal degree to k+1. Enumeration steps count against the
    /// same node budget as the role search, so a single dense internal
    /// set cannot blow past the declared limits.
    fn realize(&mut self) -> Step {
        if self.internals.is_empty() {
            return Step::Exhausted; // n ≥ 3 needs an internal vertex
        }
        let iset = VertexSet::new(self.internals.iter().copied());
        let (gi, map) = self.g.induced(&iset);
        // Leaf → its internal neighbors (indices into `map`).
        let leaf_opts: Vec<Vec<usize>> = self
            .leaves
            .iter()
            .map(|&l| {
                (0..map.len()).filter(|&i| self.g.has_edge(l, map[i])).collect::<Vec<_>>()
            })
            .collect();
        if leaf_opts.iter().any(|opts| opts.is_empty()) {
            return Step::Exhausted;
        }
        let (g, k, leaves) = (self.g, self.k, &self.leaves);
        let (stats, budget, started) = (&mut self.stats, &self.budget, self.started);
        let mut found = None;
        let ended = enumerate_trees_bounded(
            &gi,
            &mut || {
                stats.nodes += 1;
                if stats.nodes > budget.node_limit {
                    return false;
                }
                if let Some(limit) = budget.time_limit {
                    if stats.nodes % 1024 == 0 && started.elapsed() > limit {
                        return false;
                    }
                }
                true
            },
            &mut |tree| {
                let mut deg = vec![0usize; gi.n()];
                for &(a, b) in tree {
                    deg[a] += 1;
                    deg[b] += 1;
                }
                let demand: Vec<usize> =
                    deg.iter().map(|&d| (k + 1).saturating_sub(d)).collect();
                if let Some(assign) = distribute_leaves(&leaf_opts, &demand) {
                    let mut edges: Vec<(usize, usize)> =
                        tree.iter().map(|&(a, b)| (map[a], map[b])).collect();
                    for (li, &ti) in assign.iter().enumerate() {
                        edges.push((leaves[li], map[ti]));
                    }
                    found = Some(TreeCertificate::new(k, VertexSet::all(g.n()), edges));
                    true
                } else {
                    false
                }
            },
        );
        match (ended, found) {
            (Enumeration::Halted, _) => Step::Budget,
            (_, Some(cert)) => Step::Found(cert),
            (_, None) => Step::Exhausted,
        }
    }
}

/// Assigns every leaf to one of its allowed internal vertices so that
/// internal `i` receives at least `demand[i]` leaves. Returns the chosen
/// internal per leaf. Demands are matched with an augmenting-path search
/// (each demand unit is one slot); leaves left over go to their smallest
/// allowed internal.
fn distribute_leaves(leaf_opts: &[Vec<usize>], demand: &[usize]) -> Option<Vec<usize>> {
    let total: usize = demand.iter().sum();
    if total > leaf_opts.len() {
        return None;
    }
    // slot s belongs to internal slot_owner[s]
    let mut slot_owner = Vec::with_capacity(total);
    for (i, &d) in demand.iter().enumerate() {
        slot_owner.extend(std::iter::repeat(i).take(d));
    }
    // leaf_match[l] = slot assigned to leaf l (or usize::MAX)
    let mut leaf_match = vec![usize::MAX; leaf_opts.len()];
    let mut slot_match = vec![usize::MAX; total];
    for s in 0..total {
        let mut seen = vec![false; leaf_opts.len()];
        if !augment(s, &slot_owner, leaf_opts, &mut leaf_match, &mut slot_match, &mut seen) {
            return None;
        }
    }
    let assign: Vec<usize> = leaf_match
        .iter()
        .enumerate()
        .map(|(l, &s)| if s == usize::MAX { leaf_opts[l][0] } else { slot_owner[s] })
        .collect();
    Some(assign)
}

fn augment(
    slot: usize,
    slot_owner: &[usize],
    leaf_opts: &[Vec<usize>],
    leaf_match: &mut [usize],
    slot_match: &mut [usize],
    seen: &mut [bool],
) -> bool {
    let owner = slot_owner[slot];
    for (l, opts) in leaf_opts.iter().enumerate() {
        if seen[l] || !opts.contains(&owner) {
            continue;
        }
        seen[l] = true;
        if leaf_match[l] == usize::MAX
            || augment(leaf_match[l], slot_owner, leaf_opts, leaf_match, slot_match, seen)
        {
            leaf_match[l] = slot;
            slot_match[slot] = l;
            return true;
        }
    }
    false
}

/// How a bounded enumeration ended.
#[derive(PartialEq, Eq)]
enum Enumeration {
    /// The visitor returned true.
    Stopped,
    /// Every spanning tree was seen.
    Done,
    /// The tick callback called a halt.
    Halted,
}

/// One entry of the explicit include/exclude walk: the edge index under
/// consideration and how far its subtree has been explored.
enum Stage {
    Enter,
    Included,
    Excluded,
}

/// Calls `f` once per spanning tree of `g` (edge subsets in lexicographic
/// include/exclude order); stops early when `f` returns true. `tick` runs
/// once per visited search node and halts the walk by returning false.
/// The walk keeps its own stack — its depth reaches the edge count, far
/// past what call recursion could survive on large graphs.
fn enumerate_trees_bounded(
    g: &Graph,
    tick: &mut impl FnMut() -> bool,
    f: &mut impl FnMut(&[(usize, usize)]) -> bool,
) -> Enumeration {
    let n = g.n();
    if n == 0 {
        return Enumeration::Done;
    }
    if n == 1 {
        return if f(&[]) { Enumeration::Stopped } else { Enumeration::Done };
    }
    let edges = g.edges();
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    let mut dsu = RollbackDsu::new(n);
    let mut stack: Vec<(usize, Stage)> = vec![(0, Stage::Enter)];
    while let Some((i, stage)) = stack.last_mut() {
        let i = *i;
        match stage {
            Stage::Enter => {
                if !tick() {
                    return Enumeration::Halted;
                }
                if chosen.len() == n - 1 {
                    if f(&chosen) {
                        return Enumeration::Stopped;
                    }
                    stack.pop();
                    continue;
                }
                if i == edges.len() {
                    stack.pop();
                    continue;
                }
                // Prune: the remaining edges must still connect everything.
                let mut probe = Dsu::new(n);
                let mut classes = n;
                for &(u, v) in chosen.iter().chain(&edges[i..]) {
                    if probe.union(u, v) {
                        classes -= 1;
                    }
                }
                if classes != 1 {
                    stack.pop();
                    continue;
                }
                let (u, v) = edges[i];
                // Include edges[i] first if it joins two components.
                if dsu.union(u, v) {
                    chosen.push((u, v));
                    *stage = Stage::Included;
                } else {
                    *stage = Stage::Excluded;
                }
                stack.push((i + 1, Stage::Enter));
            }
            Stage::Included => {
                chosen.pop();
                dsu.undo();
                *stage = Stage::Excluded;
                stack.push((i + 1, Stage::Enter));
            }
            Stage::Excluded => {
                stack.pop();
            }
        }
    }
    Enumeration::Done
}

/// [`enumerate_trees_bounded`] without a budget. Returns whether
/// enumeration was stopped by the visitor.
pub(crate) fn enumerate_spanning_trees(
    g: &Graph,
    f: &mut impl FnMut(&[(usize, usize)]) -> bool,
) -> bool {
    enumerate_trees_bounded(g, &mut || true, f) == Enumeration::Stopped
}

/// Backtracking decision procedure. Returns `Found` with a certificate
/// (always re-validated through [`classify`]), `None` when the search
/// space is exhausted, or `BudgetExhausted` — never `None` on a timeout.
/// The node budget covers both role-search nodes and the spanning-tree
/// enumeration steps inside each complete assignment, so it bounds total
/// work, not just branching. Disconnected graphs yield `None` immediately
/// with a note.
pub fn solve_exact(g: &Graph, k: usize, budget: SearchBudget) -> SolveOutcome {
    assert!(k >= 2, "class bound k must be at least 2");
    assert!(budget.node_limit > 0, "node limit must be positive");
    let n = g.n();
    let stats = SearchStats::default();
    if n == 0 {
        let mut out = SolveOutcome::with(SolveStatus::None, stats);
        out.note = Some("empty graph".into());
        return out;
    }
    if !g.is_connected() {
        let mut out = SolveOutcome::with(SolveStatus::None, stats);
        out.note = Some("input graph is disconnected".into());
        return out;
    }
    if n == 1 {
        let cert = TreeCertificate::new(k, VertexSet::all(1), []);
        return SolveOutcome::with(SolveStatus::Found(cert), stats);
    }
    if n == 2 {
        let cert = TreeCertificate::new(k, VertexSet::all(2), [(0, 1)]);
        assert!(classify(g, &cert, k).is_full());
        return SolveOutcome::with(SolveStatus::Found(cert), stats);
    }
    // Any [2,k]-ST satisfies (k+1)|I| + (n−|I|) ≤ 2(n−1), i.e. k|I| ≤ n−2.
    let bound = (n - 2) / k;
    if bound == 0 {
        return SolveOutcome::with(SolveStatus::None, stats);
    }
    let mut search = Search {
        g,
        k,
        bound,
        budget,
        started: Instant::now(),
        role: vec![Role::Open; n],
        internals: Vec::new(),
        leaves: Vec::new(),
        stats,
    };
    // The role search recurses once per vertex and the leaf matching once
    // per leaf, so recursion depth scales with n. Run the search on its
    // own stack sized for the input instead of gambling on the caller's.
    let stack_bytes = (16 << 20).max(n * 512);
    let step = std::thread::scope(|scope| {
        std::thread::Builder::new()
            .name("leafy-solve".into())
            .stack_size(stack_bytes)
            .spawn_scoped(scope, || search.run(0))
            .expect("failed to spawn the solver thread")
            .join()
            .expect("solver thread panicked")
    });
    match step {
        Step::Found(cert) => {
            assert!(
                classify(g, &cert, k).is_full(),
                "internal error: search produced a certificate that fails validation"
            );
            SolveOutcome::with(SolveStatus::Found(cert), search.stats)
        }
        Step::Exhausted => SolveOutcome::with(SolveStatus::None, search.stats),
        Step::Budget => SolveOutcome::with(SolveStatus::BudgetExhausted, search.stats),
    }
}

/// Default vertex cap for [`solve_naive`] (spanning-tree counts explode).
pub const NAIVE_CAP: usize = 10;

/// Enumerates every spanning tree and tests each one — exact by
/// construction, exponential by nature. Use as an oracle on tiny graphs.
pub fn solve_naive(g: &Graph, k: usize) -> Result<SolveOutcome, ContractError> {
    solve_naive_with_cap(g, k, NAIVE_CAP)
}

/// [`solve_naive`] with an explicit vertex cap.
pub fn solve_naive_with_cap(
    g: &Graph,
    k: usize,
    cap: usize,
) -> Result<SolveOutcome, ContractError> {
    assert!(k >= 2, "class bound k must be at least 2");
    let n = g.n();
    if n > cap {
        return Err(ContractError(format!(
            "graph has {n} vertices, above the naive enumeration cap {cap}"
        )));
    }
    let mut stats = SearchStats::default();
    if n == 0 {
        let mut out = SolveOutcome::with(SolveStatus::None, stats);
        out.note = Some("empty graph".into());
        return Ok(out);
    }
    if !g.is_connected() {
        let mut out = SolveOutcome::with(SolveStatus::None, stats);
        out.note = Some("input graph is disconnected".into());
        return Ok(out);
    }
    let mut witness: Option<TreeCertificate> = None;
    enumerate_spanning_trees(g, &mut |tree| {
        stats.nodes += 1;
        let mut deg = vec![0usize; n];
        for &(u, v) in tree {
            deg[u] += 1;
            deg[v] += 1;
        }
        if deg.iter().all(|&d| d < 2 || d > k) {
            witness = Some(TreeCertificate::new(k, VertexSet::all(n), tree.to_vec()));
            true
        } else {
            false
        }
    });
    stats.max_depth = n.saturating_sub(1);
    match witness {
        Some(cert) => {
            assert!(classify(g, &cert, k).is_full());
            Ok(SolveOutcome::with(SolveStatus::Found(cert), stats))
        }
        None => Ok(SolveOutcome::with(SolveStatus::None, stats)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_instances_found() {
        let out = solve_exact(&Graph::complete(4), 2, SearchBudget::default());
        assert!(out.status.is_found());
        let out = solve_naive(&Graph::complete(5), 3).unwrap();
        assert!(out.status.is_found());
    }

    #[test]
    fn path_and_cycle_have_none() {
        // P4's only spanning tree is itself; every spanning tree of a
        // cycle is a path.
        let out = solve_exact(&Graph::path(4), 2, SearchBudget::default());
        assert_eq!(out.status, SolveStatus::None);
        let out = solve_naive(&Graph::cycle(4), 2).unwrap();
        assert_eq!(out.status, SolveStatus::None);
        let out = solve_exact(&Graph::cycle(6), 2, SearchBudget::default());
        assert_eq!(out.status, SolveStatus::None);
    }

    #[test]
    fn wheel_has_hist() {
        // Hub + C5: the hub star is a HIST.
        let mut edges: Vec<(usize, usize)> = (1..=5).map(|v| (0, v)).collect();
        edges.extend([(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]);
        let w5 = Graph::new(6, &edges).unwrap();
        let naive = solve_naive(&w5, 2).unwrap();
        assert!(naive.status.is_found());
        let exact = solve_exact(&w5, 2, SearchBudget::default());
        assert!(exact.status.is_found());
    }

    #[test]
    fn disconnected_is_none_with_note() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let out = solve_exact(&g, 2, SearchBudget::default());
        assert_eq!(out.status, SolveStatus::None);
        assert!(out.note.unwrap().contains("disconnected"));
    }

    #[test]
    fn tiny_graphs() {
        let out = solve_exact(&Graph::complete(1), 2, SearchBudget::default());
        assert!(out.status.is_found());
        let out = solve_exact(&Graph::complete(2), 5, SearchBudget::default());
        assert!(out.status.is_found());
        // n=4, k=3: an internal vertex would need degree ≥ 4 > n−1.
        let out = solve_exact(&Graph::complete(4), 3, SearchBudget::default());
        assert_eq!(out.status, SolveStatus::None);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // A tight node budget must surface as BudgetExhausted, not None.
        let g = Graph::complete(9);
        let out = solve_exact(&g, 2, SearchBudget::nodes(2));
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
    }

    #[test]
    fn budget_binds_inside_tree_enumeration() {
        // A 276-vertex instance whose first complete role assignment
        // induces a dense internal graph with thousands of edges. The
        // enumeration over its spanning trees must (a) charge the node
        // budget rather than running unbounded and (b) carry its own
        // stack — the include/exclude walk goes deeper than call
        // recursion could survive.
        let g = crate::families::build_h(crate::families::ExtremalParams { k: 2, n: 276 })
            .unwrap();
        let limit = 20_000;
        let out = solve_exact(&g, 2, SearchBudget::nodes(limit));
        assert_eq!(out.status, SolveStatus::BudgetExhausted);
        // Both stopping points fire on the first node past the limit.
        assert_eq!(out.stats.nodes, limit + 1);
    }

    #[test]
    fn naive_cap_enforced() {
        let g = Graph::complete(11);
        assert!(solve_naive(&g, 2).is_err());
        assert!(solve_naive_with_cap(&Graph::complete(5), 2, 5).is_ok());
    }

    #[test]
    fn spanning_tree_enumeration_counts() {
        // Cayley: K4 has 4^2 = 16 spanning trees; C5 has 5.
        let mut count = 0;
        enumerate_spanning_trees(&Graph::complete(4), &mut |_| {
            count += 1;
            false
        });
        assert_eq!(count, 16);
        count = 0;
        enumerate_spanning_trees(&Graph::cycle(5), &mut |_| {
            count += 1;
            false
        });
        assert_eq!(count, 5);
    }

    #[test]
    fn agreement_on_all_graphs_up_to_6() {
        // Full sweep: the two solvers must agree everywhere (including
        // disconnected inputs).
        for n in 1..=6usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                for k in [2, 3] {
                    let exact = solve_exact(&g, k, SearchBudget::ample());
                    let naive = solve_naive(&g, k).unwrap();
                    assert_eq!(
                        exact.status.is_found(),
                        naive.status.is_found(),
                        "disagreement at n={n} k={k} mask={mask:b}"
                    );
                    assert!(!matches!(exact.status, SolveStatus::BudgetExhausted));
                }
            }
        }
    }
}
