//! Constructive solver for graphs meeting the neighborhood-union
//! hypotheses.
//!
//! [`construct_2k_st`] takes a connected graph with n ≥ n₁(k), δ(G) ≥ 2k
//! and 2·NC(G) ≥ n−2 and produces a [2,k]-ST without searching the whole
//! graph: dense inputs (δ ≥ c_k·√n) go straight to the dense solver;
//! everything else is assembled around a fixed minimum-degree vertex `u`
//! by a case analysis on `W = V ∖ N[u]`, invoking the dense solver only
//! on induced subgraphs whose density is justified by inequalities that
//! are re-checked at runtime. Every run produces a [`ProofTrace`] holding
//! the branch taken, the oracle calls, and the full inequality ledger.
//!
//! The case taxonomy (the values [`ProofTrace::case_label`] can take):
//!
//! - `dense`
//! - `W-connected/Case1` — some neighbor of `u` sees all of `W`
//! - `W-connected/Case2/Subcase2.1` — every neighbor sees ≤ k−1 of `W`
//! - `W-connected/Case2/Subcase2.2` — the best neighbor sees k..|W|−1
//! - `W-disconnected/overlap/Case1` — a shared neighbor with ≥ k edges into `W`
//! - `W-disconnected/overlap/Case2` — a shared neighbor with ≤ k−1 edges (k ≥ 3)
//! - `W-disconnected/disjoint/Case1` — both side anchors have ≥ k edges into their component
//! - `W-disconnected/disjoint/Case2` — both side anchors have ≤ k−1 edges
//! - `W-disconnected/disjoint/Case3` — first anchor ≥ k, second ≤ k−1
//!
//! Each non-dense branch either emits the spanning tree directly or
//! builds a semi tree and completes it through [`extend_semi_tree`],
//! [`component_solver`] and [`component_anchor_tree`]. Failed hypothesis
//! checks abort before any work; a failed internal inequality is a hard
//! error that carries the trace collected so far.

use std::fmt;

use crate::cert::{classify, glue, induced_path, TreeCertificate, TreeKind};
use crate::dense::solve_dense;
use crate::graph::{hypothesis_report, Graph, VertexSet};
use crate::thresholds::{ck, min_degree_is_dense, thresholds};
use crate::trace::{Cmp, ProofTrace};

/// Error from [`construct_2k_st`].
#[derive(Debug)]
pub enum ConstructError {
    /// The input fails a stated hypothesis; nothing was attempted.
    Hypothesis(String),
    /// A hypothesis that the construction guarantees internally failed at
    /// runtime: either a bug or an undetected violation in the input. The
    /// trace collected up to the failure is attached.
    Invariant { message: String, trace: Box<ProofTrace> },
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::Hypothesis(msg) => write!(f, "hypothesis violation: {msg}"),
            ConstructError::Invariant { message, trace } => {
                write!(f, "internal invariant failure in {}: {message}", trace.case_label())
            }
        }
    }
}

impl std::error::Error for ConstructError {}

/// Failure inside one of the construction steps; [`construct_2k_st`]
/// wraps it into [`ConstructError::Invariant`] together with the trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantError(pub String);

impl fmt::Display for InvariantError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InvariantError {}

impl From<crate::cert::ContractError> for InvariantError {
    fn from(e: crate::cert::ContractError) -> InvariantError {
        InvariantError(e.0)
    }
}

/// Records `lhs op rhs` in the ledger and errors when it does not hold.
fn require(
    tr: &mut ProofTrace,
    name: &str,
    lhs: i128,
    op: Cmp,
    rhs: i128,
) -> Result<(), InvariantError> {
    if tr.check_int(name, lhs, op, rhs) {
        Ok(())
    } else {
        Err(InvariantError(format!(
            "required inequality failed: {name} ({lhs} {} {rhs} is false)",
            op.symbol()
        )))
    }
}

/// First `count` vertices of `candidates` (ascending), or an error naming
/// the shortfall.
fn smallest_ids(
    candidates: &VertexSet,
    count: usize,
    what: &str,
) -> Result<VertexSet, InvariantError> {
    if candidates.len() < count {
        return Err(InvariantError(format!(
            "need {count} vertices for {what}, only {} available",
            candidates.len()
        )));
    }
    Ok(candidates.iter().take(count).collect())
}

/// Star edges from `center` to every vertex of `set` (which must not
/// contain `center`).
fn star(center: usize, set: &VertexSet) -> impl Iterator<Item = (usize, usize)> + '_ {
    set.iter().map(move |v| (center, v))
}

/// Runs the dense solver on `G[set]`, recording the oracle call and the
/// density inequality that justifies it. The returned certificate is
/// relabeled to the host graph's vertex ids.
fn dense_subtree(
    g: &Graph,
    set: &VertexSet,
    k: usize,
    tr: &mut ProofTrace,
) -> Result<TreeCertificate, InvariantError> {
    let (sub, map) = g.induced(set);
    let delta = sub.min_degree();
    let dense = min_degree_is_dense(delta, sub.n(), k);
    tr.oracle(sub.n(), delta, dense);
    tr.record(
        "delta(sub) >= c_k*sqrt(|sub|)",
        delta as f64,
        Cmp::Ge,
        ck(k) * (sub.n() as f64).sqrt(),
        dense,
    );
    if !dense {
        return Err(InvariantError(format!(
            "induced subgraph on {} vertices has min degree {delta} below the dense bound",
            sub.n()
        )));
    }
    let cert = solve_dense(&sub, k)
        .map_err(|e| InvariantError(format!("dense solver failed on justified input: {e}")))?;
    let edges = cert.edges().iter().map(|&(a, b)| (map[a], map[b]));
    Ok(TreeCertificate::new(k, set.clone(), edges))
}

/// Spanning tree for `G[component ∖ removed]`.
///
/// `split_size` is the size of the set whose removal from `W` separated
/// the component in the calling context (0 when `W` itself was already
/// disconnected); the size bound `|split| + δ(G) < (n−4k+6)/4` is what
/// guarantees that deleting up to 2k−2 further vertices keeps the
/// component connected and dense.
pub fn component_solver(
    g: &Graph,
    k: usize,
    component: &VertexSet,
    removed: &VertexSet,
    split_size: usize,
    tr: &mut ProofTrace,
) -> Result<TreeCertificate, InvariantError> {
    if removed.len() > 2 * k - 2 {
        return Err(InvariantError(format!(
            "precondition: removed set has {} vertices, limit is 2k-2 = {}",
            removed.len(),
            2 * k - 2
        )));
    }
    if !removed.is_subset_of(component) {
        return Err(InvariantError("precondition: removed set not inside the component".into()));
    }
    let n = g.n() as i128;
    let kk = k as i128;
    let delta = g.min_degree() as i128;
    require(
        tr,
        "4*(|split|+delta) < n-4k+6",
        4 * (split_size as i128 + delta),
        Cmp::Lt,
        n - 4 * kk + 6,
    )?;
    let rest = component.difference(removed);
    if rest.is_empty() {
        return Err(InvariantError("component vanishes after removal".into()));
    }
    if !g.is_connected_within(&rest) {
        return Err(InvariantError(format!(
            "removing {removed} disconnects the component despite the size bound"
        )));
    }
    dense_subtree(g, &rest, k, tr)
}

/// Tree covering `component ∪ {v}` for a vertex `v` outside it with
/// `d_C(v) ≥ 1`, under the standing bounds (n ≥ n₁(k), 4δ < n−12k+14,
/// `component` one of exactly two components of `G[W]`).
///
/// Output shape, together with its classification against `g`:
/// - `d_C(v) = |C|`: star at `v` (clean tree, `v` internal with degree > 3k);
/// - `d_C(v) = 1`: tree with `v` a leaf (clean);
/// - otherwise: tree with `d_T(v) = min{k, d_C(v)}` — its only vertex
///   with degree in [2,k], so it classifies semi (degree exactly k) or
///   quasi (below k) and the caller must absorb `v`'s deficit.
pub fn component_anchor_tree(
    g: &Graph,
    k: usize,
    component: &VertexSet,
    v: usize,
    tr: &mut ProofTrace,
) -> Result<(TreeCertificate, TreeKind), InvariantError> {
    let n = g.n() as i128;
    let kk = k as i128;
    let delta = g.min_degree() as i128;
    require(tr, "4*delta < n-12k+14", 4 * delta, Cmp::Lt, n - 12 * kk + 14)?;
    require(tr, "2*|C| >= n-2*delta", 2 * component.len() as i128, Cmp::Ge, n - 2 * delta)?;
    require(tr, "|C| > 3k", component.len() as i128, Cmp::Gt, 3 * kk)?;
    let d_c_v = g.degree_in(v, component);
    if d_c_v == 0 || component.contains(v) {
        return Err(InvariantError(format!(
            "anchor {v} must lie outside the component and have a neighbor inside"
        )));
    }

    let vertices = component.with(v);
    if d_c_v == component.len() {
        tr.step(format!("anchor {v}: star attachment, degree |C| = {d_c_v}"));
        let cert = TreeCertificate::new(k, vertices, star(v, component));
        let kind = classify(g, &cert, k);
        return Ok((cert, kind));
    }

    // v sees part of the component: walk one step deeper along an
    // induced path v–x1–x2, reserve small sets around x1, solve the rest
    // densely, and re-attach the reserved vertices as leaves.
    let (x1, x2) = induced_path(g, component, v)?;
    let d_x1 = g.degree_in(x1, component) as i128;
    require(tr, "d_C(x1) > 3k", d_x1, Cmp::Gt, 3 * kk)?;
    let s1 = smallest_ids(
        &g.neighbors_in(v, component).without(x1),
        (k - 1).min(d_c_v - 1),
        "S1 (neighbors of the anchor)",
    )?;
    let s2 = smallest_ids(
        &g.neighbors_in(x1, component).difference(&s1).without(x2),
        k - 2,
        "S2 (neighbors of x1)",
    )?;
    let removed = s1.union(&s2).with(x2);
    require(tr, "|S1 u S2 u {x2}| <= 2k-2", removed.len() as i128, Cmp::Le, 2 * kk - 2)?;
    let base = component_solver(g, k, component, &removed, 0, tr)?;

    let mut edges = base.edges().to_vec();
    if d_c_v == 1 {
        tr.step(format!("anchor {v}: leaf attachment via {x1}"));
        edges.extend(star(x1, &s2.with(v).with(x2)));
    } else {
        tr.step(format!("anchor {v}: partial attachment, degree min(k, {d_c_v})"));
        edges.extend(star(v, &s1.with(x1)));
        edges.extend(star(x1, &s2.with(x2)));
    }
    let cert = TreeCertificate::new(k, vertices, edges);
    let kind = classify(g, &cert, k);
    if matches!(kind, TreeKind::Invalid { .. }) {
        return Err(InvariantError(format!("anchor tree for {v} is invalid: {kind}")));
    }
    Ok((cert, kind))
}

/// Completes a semi tree `T` (vertex set `N[u] ∪ S`, single degree-k
/// vertex `v ∈ S ⊆ W`, where `u` is the smallest minimum-degree vertex)
/// into a full [2,k]-ST, assuming `G[W]` is connected and
/// `2 ≤ |S| < (n−4k+10)/4 − δ`.
pub fn extend_semi_tree(
    g: &Graph,
    k: usize,
    tree: &TreeCertificate,
    v: usize,
    tr: &mut ProofTrace,
) -> Result<TreeCertificate, InvariantError> {
    let n = g.n() as i128;
    let kk = k as i128;
    let delta = g.min_degree();
    let u = (0..g.n())
        .find(|&x| g.degree(x) == delta)
        .ok_or_else(|| InvariantError("empty graph".into()))?;
    let closed = g.closed_neighborhood(u);
    let w = VertexSet::all(g.n()).difference(&closed);

    let s = tree.vertices().difference(&closed);
    if s.len() < 2 {
        return Err(InvariantError(format!(
            "precondition: tree must reach at least 2 vertices beyond N[u], found {}",
            s.len()
        )));
    }
    if !closed.is_subset_of(tree.vertices()) || !s.is_subset_of(&w) {
        return Err(InvariantError("precondition: tree vertex set is not N[u] plus a part of W".into()));
    }
    if !s.contains(v) || tree.degree_of(v) != k {
        return Err(InvariantError(format!("precondition: {v} is not a degree-k vertex of the tree in S")));
    }
    match classify(g, tree, k) {
        TreeKind::Semi { witnesses } if witnesses.as_slice() == [v] => {}
        other => {
            return Err(InvariantError(format!(
                "precondition: tree must be semi with single witness {v}, got {other}"
            )));
        }
    }
    if !g.is_connected_within(&w) {
        return Err(InvariantError("precondition: G[W] is not connected".into()));
    }
    require(
        tr,
        "4*(|S|+delta) < n-4k+10",
        4 * (s.len() as i128 + delta as i128),
        Cmp::Lt,
        n - 4 * kk + 10,
    )?;

    let s_prime = s.without(v);
    require(
        tr,
        "4*(|S'|+delta) < n-4k+6",
        4 * (s_prime.len() as i128 + delta as i128),
        Cmp::Lt,
        n - 4 * kk + 6,
    )?;
    let rest = w.difference(&s_prime);

    if g.is_connected_within(&rest) {
        // The tree's missing vertices form one connected dense block
        // around v; solve it and hang it on v.
        tr.step("extension: G[W \\ S'] is connected");
        let sub_delta = rest.iter().map(|x| g.degree_in(x, &rest)).min().unwrap_or(0);
        require(
            tr,
            "2*delta(W\\S') >= n-2-2*(delta+|S'|)",
            2 * sub_delta as i128,
            Cmp::Ge,
            n - 2 - 2 * (delta as i128 + s_prime.len() as i128),
        )?;
        let part = dense_subtree(g, &rest, k, tr)?;
        return Ok(glue(g, tree, &[(rest, part)])?);
    }

    tr.step("extension: G[W \\ S'] splits");
    let comps = g.components(&rest);
    if comps.len() != 2 {
        return Err(InvariantError(format!(
            "G[W \\ S'] has {} components; the standing bounds allow at most two",
            comps.len()
        )));
    }
    let (c1, c2) = if comps[0].contains(v) {
        (&comps[0], &comps[1])
    } else if comps[1].contains(v) {
        (&comps[1], &comps[0])
    } else {
        return Err(InvariantError(format!("witness {v} fell outside both components")));
    };
    for c in [c1, c2] {
        require(
            tr,
            "2*|C| >= n-2*(delta+|S'|)",
            2 * c.len() as i128,
            Cmp::Ge,
            n - 2 * (delta as i128 + s_prime.len() as i128),
        )?;
        require(tr, "2*|C| <= n-2", 2 * c.len() as i128, Cmp::Le, n - 2)?;
        require(tr, "|C| > k", c.len() as i128, Cmp::Gt, kk)?;
    }

    // The bridge vertex: the smallest removed vertex with neighbors in
    // the component not containing v.
    let x = s_prime
        .iter()
        .find(|&x| g.degree_in(x, c2) >= 1)
        .ok_or_else(|| InvariantError("no removed vertex reaches the second component".into()))?;
    let a = g.degree_in(x, c2);

    if a == c2.len() {
        // x sees the whole second component: attach it as leaves of x,
        // then the first component hangs on v.
        tr.step(format!("extension: bridge {x} sees all of the second component"));
        let mut edges = tree.edges().to_vec();
        edges.extend(star(x, c2));
        let widened = TreeCertificate::new(k, tree.vertices().union(c2), edges);
        let part = component_solver(g, k, c1, &VertexSet::default(), s_prime.len(), tr)?;
        return Ok(glue(g, &widened, &[(c1.clone(), part)])?);
    }

    // x sees part of the second component: develop a second degree-k
    // vertex x1 inside it, then solve both components minus the
    // reserved leaves.
    tr.step(format!("extension: bridge {x} opens a second anchor"));
    let (x1, x2) = induced_path(g, c2, x)?;
    require(tr, "d_C2(x1) > 2k", g.degree_in(x1, c2) as i128, Cmp::Gt, 2 * kk)?;
    require(
        tr,
        "d_C1(x)+d_C2(x) > k",
        (g.degree_in(x, c1) + g.degree_in(x, c2)) as i128,
        Cmp::Gt,
        kk,
    )?;
    let s1 = smallest_ids(
        &g.neighbors_in(x, c2).without(x1),
        (a - 1).min(k - 1),
        "S1 (neighbors of the bridge in C2)",
    )?;
    let s2 = smallest_ids(
        &g.neighbors_in(x1, c2).difference(&s1).without(x2),
        k - 2,
        "S2 (neighbors of x1 in C2)",
    )?;
    let removed2 = s1.union(&s2).with(x2);
    require(tr, "|S1 u S2 u {x2}| <= 2k-2", removed2.len() as i128, Cmp::Le, 2 * kk - 2)?;
    let s3 = smallest_ids(
        &g.neighbors_in(x, c1).without(v),
        k - 1 - s1.len(),
        "S3 (neighbors of the bridge in C1)",
    )?;

    let mut edges = tree.edges().to_vec();
    edges.extend(star(x, &s1.union(&s3).with(x1)));
    edges.extend(star(x1, &s2.with(x2)));
    let two_semi = TreeCertificate::new(
        k,
        tree.vertices().union(&s1).union(&s2).union(&s3).with(x1).with(x2),
        edges,
    );
    require(tr, "d_T''(x) == k+1", two_semi.degree_of(x) as i128, Cmp::Eq, kk + 1)?;
    require(tr, "d_T''(x1) == k", two_semi.degree_of(x1) as i128, Cmp::Eq, kk)?;

    let rest1 = c1.difference(&s3);
    let rest2 = c2.difference(&removed2);
    let part1 = component_solver(g, k, c1, &s3, s_prime.len(), tr)?;
    let part2 = component_solver(g, k, c2, &removed2, s_prime.len(), tr)?;
    Ok(glue(g, &two_semi, &[(rest1, part1), (rest2, part2)])?)
}

/// Handles connected `G[W]`: measures how much of `W` each neighbor of
/// `u` can see and routes to a direct two-center tree, or to a semi tree
/// completed by [`extend_semi_tree`].
pub fn case_w_connected(
    g: &Graph,
    k: usize,
    u: usize,
    w: &VertexSet,
    tr: &mut ProofTrace,
) -> Result<TreeCertificate, InvariantError> {
    let n = g.n() as i128;
    let kk = k as i128;
    let delta = g.min_degree();
    let nu = g.neighborhood(u);

    // u1 = neighbor of u seeing the most of W (smallest id on ties).
    let (mut u1, mut best) = (usize::MAX, 0usize);
    for ui in nu.iter() {
        let cnt = g.degree_in(ui, w);
        if cnt > best {
            (u1, best) = (ui, cnt);
        }
    }
    require(tr, "max_i |U_i| >= 1", best as i128, Cmp::Ge, 1)?;

    if best == w.len() {
        // Two-center tree: u carries its neighborhood, u1 carries W.
        tr.enter("Case1");
        let mut edges: Vec<(usize, usize)> = star(u, &nu).collect();
        edges.extend(star(u1, w));
        let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
        require(tr, "d_T(u) >= 2k", cert.degree_of(u) as i128, Cmp::Ge, 2 * kk)?;
        require(tr, "d_T(u1) > 3k", cert.degree_of(u1) as i128, Cmp::Gt, 3 * kk)?;
        return Ok(cert);
    }

    tr.enter("Case2");
    let (x1, x2) = induced_path(g, w, u1)?;
    require(
        tr,
        "d_W(x1) > 3k",
        g.degree_in(x1, w) as i128,
        Cmp::Gt,
        3 * kk,
    )?;

    let (tree, v) = if best <= k - 1 {
        // Every neighbor of u sees at most k−1 of W, which forces N(u)
        // to be a clique; u1 can then absorb all of N[u] directly.
        tr.enter("Subcase2.1");
        require(tr, "2*delta < n-4k+4", 2 * delta as i128, Cmp::Lt, n - 4 * kk + 4)?;
        if !g.is_clique(&nu) {
            return Err(InvariantError(
                "neighborhood of u is not a clique despite the degree bound".into(),
            ));
        }
        let s1 = smallest_ids(
            &g.neighbors_in(x1, w).without(x2),
            k - 2,
            "S1 (neighbors of x1 in W)",
        )?;
        let mut edges: Vec<(usize, usize)> = star(u1, &nu.with(u).without(u1).with(x1)).collect();
        edges.extend(star(x1, &s1.with(x2)));
        let tree =
            TreeCertificate::new(k, nu.with(u).union(&s1).with(x1).with(x2), edges);
        require(tr, "d_T(u1) == delta+1", tree.degree_of(u1) as i128, Cmp::Eq, delta as i128 + 1)?;
        (tree, x1)
    } else {
        // u1 sees k..|W|−1 vertices of W: keep the star at u and grow a
        // branch u1 → x1 with padding leaves.
        tr.enter("Subcase2.2");
        let s2 = smallest_ids(
            &g.neighbors_in(u1, w).without(x1),
            k - 1,
            "S2 (neighbors of u1 in W)",
        )?;
        let s3 = smallest_ids(
            &g.neighbors_in(x1, w).difference(&s2).without(x2),
            k - 2,
            "S3 (neighbors of x1 in W)",
        )?;
        let mut edges: Vec<(usize, usize)> = star(u, &nu).collect();
        edges.extend(star(u1, &s2.with(x1)));
        edges.extend(star(x1, &s3.with(x2)));
        let tree =
            TreeCertificate::new(k, nu.with(u).union(&s2).union(&s3).with(x1).with(x2), edges);
        require(tr, "d_T'(u1) == k+1", tree.degree_of(u1) as i128, Cmp::Eq, kk + 1)?;
        (tree, x1)
    };
    require(tr, "d_T(v) == k", tree.degree_of(v) as i128, Cmp::Eq, kk)?;
    extend_semi_tree(g, k, &tree, v, tr)
}

/// Handles disconnected `G[W]` (`comps` are its components; exactly two
/// are possible under the standing bounds). Builds per-component trees
/// anchored on chosen neighbors of `u` and wires them into one spanning
/// tree.
pub fn case_w_disconnected(
    g: &Graph,
    k: usize,
    u: usize,
    comps: &[VertexSet],
    tr: &mut ProofTrace,
) -> Result<TreeCertificate, InvariantError> {
    let n = g.n() as i128;
    let kk = k as i128;
    let delta = g.min_degree();
    require(tr, "4*delta < n+2", 4 * delta as i128, Cmp::Lt, n + 2)?;
    if comps.len() != 2 {
        return Err(InvariantError(format!(
            "G[W] has {} components; the standing bounds allow at most two",
            comps.len()
        )));
    }
    let (c1, c2) = (&comps[0], &comps[1]);
    let nu = g.neighborhood(u);

    // Which neighbors of u reach which component.
    let reach1: VertexSet = nu.iter().filter(|&x| g.degree_in(x, c1) >= 1).collect();
    let reach2: VertexSet = nu.iter().filter(|&x| g.degree_in(x, c2) >= 1).collect();
    if reach1.is_empty() || reach2.is_empty() {
        return Err(InvariantError(
            "a component of G[W] is unreachable from N(u) despite connectivity".into(),
        ));
    }
    let overlap = reach1.intersection(&reach2);

    if !overlap.is_empty() {
        tr.enter("overlap");
        // u1 = shared neighbor of maximum total degree (smallest id on ties).
        let (mut u1, mut best) = (usize::MAX, 0usize);
        for x in overlap.iter() {
            if g.degree(x) > best {
                (u1, best) = (x, g.degree(x));
            }
        }
        let d_w_u1 = g.degree_in(u1, c1) + g.degree_in(u1, c2);
        let (t1, _) = component_anchor_tree(g, k, c1, u1, tr)?;
        let (t2, _) = component_anchor_tree(g, k, c2, u1, tr)?;

        if d_w_u1 >= k {
            tr.enter("Case1");
            require(tr, "d_W(u1) >= k", d_w_u1 as i128, Cmp::Ge, kk)?;
            let mut edges = t1.edges().to_vec();
            edges.extend_from_slice(t2.edges());
            edges.extend(star(u, &nu));
            let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
            require(tr, "d_T(u) >= 2k", cert.degree_of(u) as i128, Cmp::Ge, 2 * kk)?;
            require(tr, "d_T(u1) >= k+1", cert.degree_of(u1) as i128, Cmp::Ge, kk + 1)?;
            Ok(cert)
        } else {
            tr.enter("Case2");
            require(tr, "d_W(u1) <= k-1", d_w_u1 as i128, Cmp::Le, kk - 1)?;
            require(tr, "d_W(u1) >= 2", d_w_u1 as i128, Cmp::Ge, 2)?;
            // u1's missing degree is made up from its neighbors inside
            // N(u), re-parented from u onto u1.
            let in_nu = g.neighbors_in(u1, &nu);
            require(
                tr,
                "d_N(u)(u1) >= delta-d_W(u1)-1",
                in_nu.len() as i128,
                Cmp::Ge,
                delta as i128 - d_w_u1 as i128 - 1,
            )?;
            let s_prime = smallest_ids(&in_nu, k - 2, "S' (neighbors of u1 in N(u))")?;
            let mut edges: Vec<(usize, usize)> = star(u, &nu.difference(&s_prime)).collect();
            edges.extend(star(u1, &s_prime));
            edges.extend_from_slice(t1.edges());
            edges.extend_from_slice(t2.edges());
            let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
            require(tr, "d_T'(u) >= k+2", cert.degree_of(u) as i128, Cmp::Ge, kk + 2)?;
            require(tr, "d_T'(u1) >= k+1", cert.degree_of(u1) as i128, Cmp::Ge, kk + 1)?;
            Ok(cert)
        }
    } else {
        tr.enter("disjoint");
        // Per-side anchors: the neighbor with the most edges into its
        // component (smallest id on ties); sides ordered so the first
        // anchor is at least as connected as the second.
        let pick = |reach: &VertexSet, c: &VertexSet| {
            let (mut best_v, mut best_d) = (usize::MAX, 0usize);
            for x in reach.iter() {
                let d = g.degree_in(x, c);
                if d > best_d {
                    (best_v, best_d) = (x, d);
                }
            }
            (best_v, best_d)
        };
        let (mut a1, mut d1) = pick(&reach1, c1);
        let (mut a2, mut d2) = pick(&reach2, c2);
        let (mut c1, mut c2) = (c1, c2);
        if d1 < d2 {
            std::mem::swap(&mut a1, &mut a2);
            std::mem::swap(&mut d1, &mut d2);
            std::mem::swap(&mut c1, &mut c2);
        }
        let (t1, _) = component_anchor_tree(g, k, c1, a1, tr)?;
        let (t2, _) = component_anchor_tree(g, k, c2, a2, tr)?;

        if d2 >= k {
            // Both anchors reach k-deep into their components; the star
            // at u finishes the tree.
            tr.enter("Case1");
            require(tr, "d_C2(u2) >= k", d2 as i128, Cmp::Ge, kk)?;
            tr.step("star term read as E(u, N(u))");
            let mut edges = t1.edges().to_vec();
            edges.extend_from_slice(t2.edges());
            edges.extend(star(u, &nu));
            let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
            require(tr, "d_T(u1) >= k+1", cert.degree_of(a1) as i128, Cmp::Ge, kk + 1)?;
            require(tr, "d_T(u2) >= k+1", cert.degree_of(a2) as i128, Cmp::Ge, kk + 1)?;
            Ok(cert)
        } else if d1 <= k - 1 {
            // Both anchors are shallow; every neighbor of u then sees at
            // most k−1 of W, N(u) is a clique, and the star at u is
            // replaced by a chain u → u1 → u2 splitting N(u) between the
            // anchors.
            tr.enter("Case2");
            require(tr, "d_C1(u1) <= k-1", d1 as i128, Cmp::Le, kk - 1)?;
            require(tr, "2*delta < n-4k+4", 2 * delta as i128, Cmp::Lt, n - 4 * kk + 4)?;
            if !g.is_clique(&nu) {
                return Err(InvariantError(
                    "neighborhood of u is not a clique despite the degree bound".into(),
                ));
            }
            let rest: Vec<usize> = nu.iter().filter(|&x| x != a1 && x != a2).collect();
            // N(u) ordered as u1, u2, rest: u1 takes positions 2..=k,
            // u2 takes positions k+1..=delta.
            let mut edges = vec![(u, a1), (a1, a2)];
            edges.extend(rest[..k - 2].iter().map(|&x| (a1, x)));
            edges.extend(rest[k - 2..].iter().map(|&x| (a2, x)));
            edges.extend_from_slice(t1.edges());
            edges.extend_from_slice(t2.edges());
            let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
            require(tr, "d_T'(u1) >= k+1", cert.degree_of(a1) as i128, Cmp::Ge, kk + 1)?;
            require(tr, "d_T'(u2) >= k+1", cert.degree_of(a2) as i128, Cmp::Ge, kk + 1)?;
            Ok(cert)
        } else {
            // Deep first anchor, shallow second: re-parent k−1 of u's
            // neighbors onto u2 to lift its degree past k.
            tr.enter("Case3");
            require(tr, "d_C1(u1) >= k", d1 as i128, Cmp::Ge, kk)?;
            require(tr, "d_C2(u2) <= k-1", d2 as i128, Cmp::Le, kk - 1)?;
            let in_nu = g.neighbors_in(a2, &nu);
            require(
                tr,
                "d_N(u)(u2) >= delta-d_C2(u2)-1",
                in_nu.len() as i128,
                Cmp::Ge,
                delta as i128 - d2 as i128 - 1,
            )?;
            let s_prime = smallest_ids(&in_nu, k - 1, "S' (neighbors of u2 in N(u))")?;
            let mut edges = t1.edges().to_vec();
            edges.extend_from_slice(t2.edges());
            edges.extend(star(u, &nu.difference(&s_prime)));
            edges.extend(star(a2, &s_prime));
            let cert = TreeCertificate::new(k, VertexSet::all(g.n()), edges);
            require(tr, "d_T''(u) >= k+1", cert.degree_of(u) as i128, Cmp::Ge, kk + 1)?;
            require(tr, "d_T''(u2) >= k+1", cert.degree_of(a2) as i128, Cmp::Ge, kk + 1)?;
            Ok(cert)
        }
    }
}

/// Builds a [2,k]-ST of `g` by explicit construction, with a trace.
///
/// Requires: `g` connected, n ≥ n₁(k), δ(g) ≥ 2k, and 2·NC(g) ≥ n−2
/// (complete graphs pass vacuously). Violations are reported as
/// [`ConstructError::Hypothesis`] before any work; failures of internally
/// guaranteed inequalities come back as [`ConstructError::Invariant`]
/// with the partial trace. The returned certificate always classifies as
/// a full [2,k]-ST — this is re-checked, never assumed.
pub fn construct_2k_st(g: &Graph, k: usize) -> Result<(TreeCertificate, ProofTrace), ConstructError> {
    if k < 2 {
        return Err(ConstructError::Hypothesis(format!("class bound k = {k} must be at least 2")));
    }
    if g.n() == 0 {
        return Err(ConstructError::Hypothesis("empty graph".into()));
    }
    let report = hypothesis_report(g, k);
    if !report.connected {
        return Err(ConstructError::Hypothesis("input graph is disconnected".into()));
    }
    if let Some(reason) = report.nc_condition_failure() {
        return Err(ConstructError::Hypothesis(reason));
    }

    let mut tr = ProofTrace::new(k);
    tr.record("n >= n1(k)", g.n() as f64, Cmp::Ge, thresholds(k).n1 as f64, true);
    finish(g, k, tr)
}

/// [`construct_2k_st`] minus the upfront hypothesis gate: the caller
/// vouches for connectivity, n ≥ n₁(k), δ ≥ 2k and 2·NC ≥ n−2, saving
/// the quadratic neighborhood-union scan on large inputs.
///
/// Every internal inequality is still checked, so a corrupt input does
/// not produce a wrong tree — it surfaces as
/// [`ConstructError::Invariant`] carrying the ledger with the failed
/// comparison (or, if every branch happens to go through, a correct
/// certificate: the final classification is always re-checked).
pub fn construct_2k_st_assuming(
    g: &Graph,
    k: usize,
) -> Result<(TreeCertificate, ProofTrace), ConstructError> {
    if k < 2 {
        return Err(ConstructError::Hypothesis(format!("class bound k = {k} must be at least 2")));
    }
    if g.n() == 0 {
        return Err(ConstructError::Hypothesis("empty graph".into()));
    }
    let mut tr = ProofTrace::new(k);
    tr.step(format!(
        "hypothesis gate skipped (caller vouches): n = {}, n1({k}) = {}, delta = {}",
        g.n(),
        thresholds(k).n1,
        g.min_degree()
    ));
    finish(g, k, tr)
}

/// Shared tail of the two entry points: run the case analysis, then
/// re-classify whatever came out before handing it to the caller.
fn finish(
    g: &Graph,
    k: usize,
    mut tr: ProofTrace,
) -> Result<(TreeCertificate, ProofTrace), ConstructError> {
    match drive(g, k, &mut tr) {
        Ok(cert) => {
            let kind = classify(g, &cert, k);
            if !kind.is_full() {
                return Err(ConstructError::Invariant {
                    message: format!("construction produced a defective certificate: {kind}"),
                    trace: Box::new(tr),
                });
            }
            tr.certificate = Some(cert.clone());
            debug_assert!(tr.all_hold());
            Ok((cert, tr))
        }
        Err(e) => Err(ConstructError::Invariant { message: e.0, trace: Box::new(tr) }),
    }
}

/// Branch selection for [`construct_2k_st`] after the hypothesis gate.
fn drive(g: &Graph, k: usize, tr: &mut ProofTrace) -> Result<TreeCertificate, InvariantError> {
    let delta = g.min_degree();
    let bound = ck(k) * (g.n() as f64).sqrt();
    if min_degree_is_dense(delta, g.n(), k) {
        tr.enter("dense");
        tr.record("delta >= c_k*sqrt(n)", delta as f64, Cmp::Ge, bound, true);
        tr.oracle(g.n(), delta, true);
        return solve_dense(g, k)
            .map_err(|e| InvariantError(format!("dense solver failed on dense input: {e}")));
    }
    tr.step(format!("density branch: delta {delta} below c_k*sqrt(n) ~ {bound:.2}, case analysis"));

    let u = (0..g.n()).find(|&x| g.degree(x) == delta).expect("nonempty graph");
    tr.u = Some(u);
    let w = VertexSet::all(g.n()).difference(&g.closed_neighborhood(u));
    tr.w = Some(w.clone());
    require(tr, "|W| > 3k", w.len() as i128, Cmp::Gt, 3 * k as i128)?;

    if g.is_connected_within(&w) {
        tr.enter("W-connected");
        case_w_connected(g, k, u, &w, tr)
    } else {
        tr.enter("W-disconnected");
        let comps = g.components(&w);
        case_w_disconnected(g, k, u, &comps, tr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_h, ExtremalParams};

    /// u = 0 joined to a clique 1..=d; W = the rest, one clique or two
    /// (split floor/ceil); `links` are extra edges (neighbor id, W offset).
    fn blob(n: usize, d: usize, links: &[(usize, usize)], split_w: bool) -> Graph {
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
        Graph::new(n, &edges).unwrap()
    }

    fn check_full(g: &Graph, k: usize, label: &str) -> (TreeCertificate, ProofTrace) {
        let (cert, tr) = construct_2k_st(g, k).unwrap();
        assert_eq!(tr.case_label(), label);
        assert!(classify(g, &cert, k).is_full());
        assert!(tr.all_hold());
        assert_eq!(tr.certificate.as_ref(), Some(&cert));
        (cert, tr)
    }

    #[test]
    fn rejects_bad_hypotheses() {
        // Small complete graph: delta is fine, the order threshold is not.
        match construct_2k_st(&Graph::complete(100), 2) {
            Err(ConstructError::Hypothesis(msg)) => assert!(msg.contains("n1"), "{msg}"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
        match construct_2k_st(&Graph::path(4), 2) {
            Err(ConstructError::Hypothesis(msg)) => assert!(msg.contains("delta 1 <"), "{msg}"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }

        // Min degree one short of 2k.
        let h = build_h(ExtremalParams { k: 2, n: 276 }).unwrap();
        match construct_2k_st(&h, 2) {
            Err(ConstructError::Hypothesis(msg)) => assert!(msg.contains("delta 3 < 2k"), "{msg}"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }

        // Circulant ring: connected, delta = 4, but far pairs have tiny
        // neighborhood unions.
        let n = 280;
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((i, (i + 1) % n));
            edges.push((i, (i + 2) % n));
        }
        edges.iter_mut().for_each(|e| {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        });
        let ring = Graph::new(n, &edges).unwrap();
        match construct_2k_st(&ring, 2) {
            Err(ConstructError::Hypothesis(msg)) => assert!(msg.contains("2*NC"), "{msg}"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }

        let two_cliques = blob(300, 149, &[], false); // W unreachable => disconnected
        match construct_2k_st(&two_cliques, 2) {
            Err(ConstructError::Hypothesis(msg)) => assert!(msg.contains("disconnected"), "{msg}"),
            other => panic!("expected hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn dense_complete_graph_is_a_star() {
        let g = Graph::complete(280);
        let (cert, tr) = check_full(&g, 2, "dense");
        assert_eq!(cert.degree_of(0), 279);
        assert_eq!(tr.oracle_calls.len(), 1);
        assert!(tr.oracle_calls[0].dense);
        assert_eq!(tr.u, None);
    }

    #[test]
    fn w_connected_case1_two_center_tree() {
        // Neighbor 1 of u sees all of W.
        let links: Vec<(usize, usize)> = (0..271).map(|j| (1, j)).collect();
        let g = blob(276, 4, &links, false);
        let (cert, tr) = check_full(&g, 2, "W-connected/Case1");
        assert_eq!(tr.u, Some(0));
        assert_eq!(cert.degree_of(0), 4);
        assert_eq!(cert.degree_of(1), 272); // all of W plus u
        assert!(tr.oracle_calls.is_empty()); // direct construction
    }

    #[test]
    fn w_connected_subcase21_single_link() {
        let g = blob(276, 4, &[(1, 0)], false);
        let (_, tr) = check_full(&g, 2, "W-connected/Case2/Subcase2.1");
        // The extension solved W minus one reserved vertex densely.
        assert_eq!(tr.oracle_calls.len(), 1);
        assert_eq!(tr.oracle_calls[0].vertices, 270);
        assert!(tr.steps.iter().any(|s| s.contains("is connected")));
    }

    #[test]
    fn w_connected_subcase22_k_links() {
        let g = blob(276, 4, &[(1, 0), (1, 1)], false);
        let (cert, tr) = check_full(&g, 2, "W-connected/Case2/Subcase2.2");
        assert!(tr.ledger.iter().any(|e| e.name == "d_T'(u1) == k+1" && e.holds));
        assert!(cert.degree_of(1) >= 3);
    }

    #[test]
    fn w_disconnected_overlap_case1() {
        let g = blob(276, 4, &[(1, 0), (1, 135)], true);
        let (cert, tr) = check_full(&g, 2, "W-disconnected/overlap/Case1");
        assert_eq!(cert.degree_of(0), 4);
        assert!(cert.degree_of(1) >= 3);
        assert_eq!(tr.oracle_calls.len(), 2); // one per component
    }

    #[test]
    fn w_disconnected_disjoint_cases() {
        let case1 = blob(276, 4, &[(1, 0), (1, 1), (2, 135), (2, 136)], true);
        check_full(&case1, 2, "W-disconnected/disjoint/Case1");

        let case2 = blob(276, 4, &[(1, 0), (2, 135)], true);
        let (cert, _) = check_full(&case2, 2, "W-disconnected/disjoint/Case2");
        assert_eq!(cert.degree_of(0), 1); // u ends up a leaf on the chain

        let case3 = blob(276, 4, &[(1, 0), (1, 1), (2, 135)], true);
        check_full(&case3, 2, "W-disconnected/disjoint/Case3");
    }

    #[test]
    fn component_solver_rejects_oversized_removal() {
        let g = blob(276, 4, &[(1, 0)], false);
        let w: VertexSet = (5..276).collect();
        let mut tr = ProofTrace::new(2);
        let removed: VertexSet = (5..8).collect(); // 2k-1 = 3 removals
        let err = component_solver(&g, 2, &w, &removed, 0, &mut tr).unwrap_err();
        assert!(err.0.contains("removed"), "{}", err.0);
        // One fewer removal is fine.
        let removed: VertexSet = (5..7).collect();
        let cert = component_solver(&g, 2, &w, &removed, 0, &mut tr).unwrap();
        assert_eq!(cert.vertices().len(), 271 - 2);
    }

    #[test]
    fn extend_rejects_undersized_s() {
        let g = blob(276, 4, &[(1, 0)], false);
        // Tree = N[u] plus the single linked vertex: |S| = 1 < 2.
        let nu_closed = g.closed_neighborhood(0);
        let edges: Vec<(usize, usize)> =
            star(1, &nu_closed.without(1).with(5)).collect();
        let tree = TreeCertificate::new(2, nu_closed.with(5), edges);
        let mut tr = ProofTrace::new(2);
        let err = extend_semi_tree(&g, 2, &tree, 5, &mut tr).unwrap_err();
        assert!(err.0.contains("at least 2"), "{}", err.0);
    }

    #[test]
    fn anchor_tree_shapes() {
        // Overlap fixture: vertex 1 has exactly one edge into each
        // component, so anchors attach as leaves.
        let g = blob(276, 4, &[(1, 0), (1, 135)], true);
        let c1: VertexSet = (5..140).collect();
        let mut tr = ProofTrace::new(2);
        let (t1, kind) = component_anchor_tree(&g, 2, &c1, 1, &mut tr).unwrap();
        assert_eq!(t1.degree_of(1), 1);
        assert!(matches!(kind, TreeKind::Semi { ref witnesses } if witnesses.is_empty()));
        assert_eq!(t1.vertices().len(), 136);

        // Full-degree anchor: star.
        let links: Vec<(usize, usize)> = (0..135).map(|j| (1, j)).collect();
        let g = blob(276, 4, &links, true);
        let mut tr = ProofTrace::new(2);
        let c1: VertexSet = (5..140).collect();
        let (t1, _) = component_anchor_tree(&g, 2, &c1, 1, &mut tr).unwrap();
        assert_eq!(t1.degree_of(1), 135);

        // Partial anchor with degree exactly k.
        let g = blob(276, 4, &[(1, 0), (1, 1), (1, 135)], true);
        let mut tr = ProofTrace::new(2);
        let (t1, kind) = component_anchor_tree(&g, 2, &c1, 1, &mut tr).unwrap();
        assert_eq!(t1.degree_of(1), 2);
        assert!(matches!(kind, TreeKind::Semi { ref witnesses } if witnesses.as_slice() == [1]));
    }

    #[test]
    fn assuming_mode_catches_corrupt_input_via_the_ledger() {
        // δ(H) = 2k−1 violates the hypotheses; with the gate skipped the
        // construction must fail on a recorded inequality, not produce a
        // defective tree.
        let h = build_h(ExtremalParams { k: 2, n: 276 }).unwrap();
        match construct_2k_st_assuming(&h, 2) {
            Err(ConstructError::Invariant { trace, .. }) => {
                assert!(!trace.all_hold());
                let failed: Vec<_> =
                    trace.ledger.iter().filter(|e| !e.holds).map(|e| e.name.as_str()).collect();
                assert!(!failed.is_empty(), "no failed ledger entry recorded");
            }
            other => panic!("expected invariant failure, got {other:?}"),
        }
        // On honest input both entry points agree.
        let g = blob(276, 4, &[(1, 0)], false);
        let (c1, _) = construct_2k_st(&g, 2).unwrap();
        let (c2, _) = construct_2k_st_assuming(&g, 2).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn deterministic_output() {
        let g = blob(276, 4, &[(1, 0), (1, 1)], false);
        let (c1, t1) = construct_2k_st(&g, 2).unwrap();
        let (c2, t2) = construct_2k_st(&g, 2).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(serde_json::to_string(&t1).unwrap(), serde_json::to_string(&t2).unwrap());
    }
}
