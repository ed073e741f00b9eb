//! Greedy [2,k]-ST construction for dense graphs.
//!
//! Realizes the oracle contract "a connected graph with δ(G) ≥ c_k√n has
//! a [2,k]-ST": the existence proof is external, so any deterministic
//! procedure producing a valid certificate under that precondition will
//! do. The greedy here grows a tree whose internal vertices always have
//! degree ≥ k+1 and whose other vertices are leaves; completion therefore
//! implies validity. If the greedy ever stalls, an exhaustive fallback
//! runs; if that fails too the contract itself is violated, which callers
//! treat as an implementation bug.

use crate::cert::{classify, TreeCertificate};
use crate::graph::{Graph, VertexSet};
use crate::solver::{solve_exact, SearchBudget, SolveStatus};
use crate::thresholds::min_degree_is_dense;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DenseError {
    /// The caller-checked density precondition δ ≥ c_k√n (or
    /// connectivity) does not hold for this input.
    Precondition(String),
    /// Precondition held, yet neither the greedy nor the exhaustive
    /// fallback produced a tree — an implementation bug by contract.
    ContractViolated(String),
}

impl fmt::Display for DenseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenseError::Precondition(msg) => write!(f, "density precondition violated: {msg}"),
            DenseError::ContractViolated(msg) => {
                write!(f, "dense oracle contract violated: {msg}")
            }
        }
    }
}

impl std::error::Error for DenseError {}

/// Tree under construction: internal vertices keep degree ≥ k+1, every
/// other covered vertex is a leaf with exactly one edge.
struct Grow<'a> {
    g: &'a Graph,
    k: usize,
    internal: Vec<bool>,
    covered: Vec<bool>,
    deg: Vec<usize>,            // current tree degree
    parent: Vec<Option<usize>>, // leaf -> its internal anchor
    edges: Vec<(usize, usize)>,
    covered_count: usize,
}

impl<'a> Grow<'a> {
    fn attach_leaf(&mut self, leaf: usize, to: usize) {
        debug_assert!(self.internal[to] && !self.covered[leaf]);
        self.edges.push((to, leaf));
        self.deg[to] += 1;
        self.deg[leaf] = 1;
        self.parent[leaf] = Some(to);
        self.covered[leaf] = true;
        self.covered_count += 1;
    }

    fn uncovered_neighbors(&self, v: usize) -> Vec<usize> {
        self.g.neighbors(v).iter().copied().filter(|&w| !self.covered[w]).collect()
    }

    /// Leaf with the most uncovered neighbors (smallest id on ties).
    fn best_leaf(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.g.n() {
            if self.covered[v] && !self.internal[v] {
                let cnt = self.uncovered_neighbors(v).len();
                if cnt > 0 && best.is_none_or(|(_, c)| cnt > c) {
                    best = Some((v, cnt));
                }
            }
        }
        best
    }

    /// Promotes leaf `l`, attaching all its uncovered neighbors. When that
    /// alone leaves `l` below degree k+1, re-parents leaves adjacent to
    /// `l` away from parents that can spare them (degree ≥ k+2). Returns
    /// false (changing nothing) if the deficit cannot be covered.
    fn promote(&mut self, l: usize) -> bool {
        let gained = self.uncovered_neighbors(l);
        let deficit = (self.k + 1).saturating_sub(1 + gained.len());
        let mut moves = Vec::new();
        if deficit > 0 {
            let mut donated = vec![0usize; self.g.n()];
            for &r in self.g.neighbors(l) {
                if moves.len() == deficit {
                    break;
                }
                if self.covered[r] && !self.internal[r] && r != l {
                    let p = self.parent[r].expect("leaves always have a parent");
                    if self.deg[p] - donated[p] >= self.k + 2 {
                        donated[p] += 1;
                        moves.push((r, p));
                    }
                }
            }
            if moves.len() < deficit {
                return false;
            }
        }
        self.internal[l] = true;
        for v in gained {
            self.attach_leaf(v, l);
        }
        for (r, p) in moves {
            self.edges.retain(|&(a, b)| (a, b) != (p, r) && (a, b) != (r, p));
            self.deg[p] -= 1;
            self.edges.push((l, r));
            self.deg[l] += 1;
            self.parent[r] = Some(l);
        }
        true
    }
}

/// Builds a [2,k]-ST of a connected graph with δ(G) ≥ c_k√n.
///
/// Deterministic: the seed is the maximum-degree vertex (smallest id on
/// ties) whose whole neighborhood becomes leaves; then, repeatedly, the
/// leaf adjacent to the most uncovered vertices is promoted to internal
/// when it can reach degree k+1 outright, remaining vertices adjacent to
/// internal vertices are attached as leaves, and only then promotion with
/// leaf re-parenting is tried. The result is re-validated before being
/// returned.
pub fn solve_dense(g: &Graph, k: usize) -> Result<TreeCertificate, DenseError> {
    assert!(k >= 2, "class bound k must be at least 2");
    let n = g.n();
    if n == 0 {
        return Err(DenseError::Precondition("empty graph".into()));
    }
    let delta = g.min_degree();
    if !min_degree_is_dense(delta, n, k) {
        return Err(DenseError::Precondition(format!(
            "min degree {delta} < c_{k}·√{n} ≈ {:.3}",
            crate::thresholds::ck(k) * (n as f64).sqrt()
        )));
    }
    if !g.is_connected() {
        return Err(DenseError::Precondition("graph is disconnected".into()));
    }
    if let Some(cert) = greedy(g, k) {
        debug_assert!(classify(g, &cert, k).is_full());
        return Ok(cert);
    }
    // The greedy stalled; the contract still guarantees existence.
    match solve_exact(g, k, SearchBudget::ample()).status {
        SolveStatus::Found(cert) => Ok(cert),
        SolveStatus::None => Err(DenseError::ContractViolated(format!(
            "no [2,{k}]-ST exists on a graph with n={n}, delta={delta}"
        ))),
        SolveStatus::BudgetExhausted => Err(DenseError::ContractViolated(format!(
            "fallback search exhausted its budget on a graph with n={n}, delta={delta}"
        ))),
    }
}

fn greedy(g: &Graph, k: usize) -> Option<TreeCertificate> {
    let n = g.n();
    let seed = (0..n).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))?;
    if g.degree(seed) < k + 1 {
        return None;
    }
    let mut t = Grow {
        g,
        k,
        internal: vec![false; n],
        covered: vec![false; n],
        deg: vec![0; n],
        parent: vec![None; n],
        edges: Vec::with_capacity(n.saturating_sub(1)),
        covered_count: 1,
    };
    t.internal[seed] = true;
    t.covered[seed] = true;
    for w in t.uncovered_neighbors(seed) {
        t.attach_leaf(w, seed);
    }
    while t.covered_count < n {
        let best = t.best_leaf();
        // Plain promotion: the leaf reaches degree k+1 from new vertices.
        if let Some((l, cnt)) = best {
            if cnt >= k && t.promote(l) {
                continue;
            }
        }
        // Attach vertices adjacent to existing internal vertices.
        let mut attached = false;
        for v in 0..n {
            if !t.covered[v] {
                let anchor = g.neighbors(v).iter().copied().find(|&w| t.internal[w]);
                if let Some(w) = anchor {
                    t.attach_leaf(v, w);
                    attached = true;
                }
            }
        }
        if attached {
            continue;
        }
        // Promotion with re-parenting as the last resort.
        if let Some((l, _)) = best {
            if t.promote(l) {
                continue;
            }
        }
        return None; // stalled
    }
    Some(TreeCertificate::new(k, VertexSet::all(n), t.edges))
}
