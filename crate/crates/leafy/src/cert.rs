//! Tree certificates and their classification.
//!
//! A [`TreeCertificate`] is an explicit vertex set plus edge list claimed
//! to form a tree inside some host graph. [`classify`] re-validates every
//! structural claim (edges exist in the host, the edge set is a tree) and
//! then sorts the certificate into one of four kinds by its degree
//! multiset and spanning flag. [`glue`] composes a tree that has some
//! vertices of degree exactly `k` with clean trees covering those
//! vertices, producing a tree with no degrees in `[2,k]` at all.

use crate::dsu::Dsu;
use crate::graph::{Graph, VertexSet};
use std::collections::BTreeMap;
use std::fmt;

/// An edge set claimed to be a tree on `vertices` inside a host graph,
/// targeting the degree-class bound `k`. Nothing is validated at
/// construction; [`classify`] checks every claim against a host graph.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TreeCertificate {
    k: usize,
    vertices: VertexSet,
    edges: Vec<(usize, usize)>, // normalized: u < v, lexicographically sorted
}

impl TreeCertificate {
    /// Normalizes edges to `u < v` in lexicographic order. Duplicate edges
    /// are kept (classification rejects them as a cycle).
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(
        k: usize,
        vertices: VertexSet,
        edges: I,
    ) -> TreeCertificate {
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        TreeCertificate { k, vertices, edges }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree of every vertex in the certificate's edge set. Vertices
    /// without incident edges are present with degree 0.
    pub fn degrees(&self) -> BTreeMap<usize, usize> {
        let mut d: BTreeMap<usize, usize> = self.vertices.iter().map(|v| (v, 0)).collect();
        for &(u, v) in &self.edges {
            *d.entry(u).or_insert(0) += 1;
            *d.entry(v).or_insert(0) += 1;
        }
        d
    }

    /// Degree of one vertex in the edge set.
    pub fn degree_of(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Text serialization: `cert k=<k>`, a `vertices:` line, one `edge u v`
    /// line per edge. Parsing it back gives an equal certificate, and
    /// serializing that gives identical text.
    pub fn to_text(&self) -> String {
        let mut out = format!("cert k={}\n", self.k);
        out.push_str("vertices:");
        for v in self.vertices.iter() {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
        for &(u, v) in &self.edges {
            out.push_str(&format!("edge {u} {v}\n"));
        }
        out
    }

    /// Parses the `to_text` format.
    pub fn parse_text(text: &str) -> Result<TreeCertificate, crate::graph::ParseError> {
        use crate::graph::ParseError;
        let err = |line: usize, msg: String| ParseError { line, msg };
        let mut lines = text.lines().enumerate();
        let (_, head) = lines
            .next()
            .ok_or_else(|| err(1, "empty certificate".into()))?;
        let k = head
            .strip_prefix("cert k=")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or_else(|| err(1, format!("expected `cert k=<k>`, got `{head}`")))?;
        let (_, vline) = lines
            .next()
            .ok_or_else(|| err(2, "missing `vertices:` line".into()))?;
        let body = vline
            .strip_prefix("vertices:")
            .ok_or_else(|| err(2, format!("expected `vertices: ...`, got `{vline}`")))?;
        let mut vertices = Vec::new();
        for tok in body.split_whitespace() {
            let v = tok
                .parse::<usize>()
                .map_err(|_| err(2, format!("`{tok}` is not a vertex id")))?;
            vertices.push(v);
        }
        let mut edges = Vec::new();
        for (idx, raw) in lines {
            if raw.trim().is_empty() {
                continue;
            }
            let rest = raw
                .strip_prefix("edge ")
                .ok_or_else(|| err(idx + 1, format!("expected `edge u v`, got `{raw}`")))?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(err(idx + 1, format!("expected `edge u v`, got `{raw}`")));
            }
            let u = toks[0]
                .parse::<usize>()
                .map_err(|_| err(idx + 1, format!("`{}` is not a vertex id", toks[0])))?;
            let v = toks[1]
                .parse::<usize>()
                .map_err(|_| err(idx + 1, format!("`{}` is not a vertex id", toks[1])))?;
            edges.push((u, v));
        }
        Ok(TreeCertificate::new(k, VertexSet::new(vertices), edges))
    }
}

/// Classification of a certificate against a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeKind {
    /// Spanning tree of the host with no vertex of degree in [2,k].
    Full,
    /// Tree with no vertex of degree in [2,k−1]; `witnesses` are exactly
    /// its vertices of degree k (the attachment points for gluing).
    /// An empty witness set is a clean non-spanning subtree.
    Semi { witnesses: VertexSet },
    /// Tree whose `witnesses` are exactly the vertices of degree in [2,k].
    Quasi { witnesses: VertexSet },
    /// Not a tree inside the host graph at all.
    Invalid { reason: String },
}

impl TreeKind {
    pub fn is_full(&self) -> bool {
        matches!(self, TreeKind::Full)
    }
}

impl fmt::Display for TreeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeKind::Full => write!(f, "full [2,k]-ST"),
            TreeKind::Semi { witnesses } => {
                write!(f, "{}-semi tree, degree-k vertices {}", witnesses.len(), witnesses)
            }
            TreeKind::Quasi { witnesses } => {
                write!(f, "{}-quasi tree, degree-[2,k] vertices {}", witnesses.len(), witnesses)
            }
            TreeKind::Invalid { reason } => write!(f, "invalid: {reason}"),
        }
    }
}

/// Validates `t` against the host graph and classifies it.
///
/// Structural checks first: all vertices inside the host, all edges with
/// both endpoints in the certificate's vertex set, all edges present in
/// the host, and the edge set forming a tree (|E| = |V|−1, acyclic, hence
/// connected). A failure yields [`TreeKind::Invalid`].
///
/// The kind is then a pure function of the degree multiset plus the
/// spanning flag. Let bad = vertices with tree degree in [2,k]:
/// no bad vertices → `Full` when spanning, clean `Semi {}` otherwise;
/// a non-spanning tree whose bad vertices all have degree exactly k →
/// `Semi` with those witnesses; anything else → `Quasi`.
pub fn classify(g: &Graph, t: &TreeCertificate, k: usize) -> TreeKind {
    assert!(k >= 2, "class bound k must be at least 2");
    let invalid = |reason: String| TreeKind::Invalid { reason };
    if t.vertices.is_empty() {
        return invalid("empty vertex set".into());
    }
    for v in t.vertices.iter() {
        if v >= g.n() {
            return invalid(format!("vertex {v} outside host graph (n={})", g.n()));
        }
    }
    for &(u, v) in &t.edges {
        if !t.vertices.contains(u) || !t.vertices.contains(v) {
            return invalid(format!("edge {u}-{v} has an endpoint outside the vertex set"));
        }
        if !g.has_edge(u, v) {
            return invalid(format!("edge {u}-{v} is not an edge of the host graph"));
        }
    }
    if t.edges.len() != t.vertices.len() - 1 {
        return invalid(format!(
            "{} edges on {} vertices is not a tree",
            t.edges.len(),
            t.vertices.len()
        ));
    }
    let index: BTreeMap<usize, usize> =
        t.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut dsu = Dsu::new(t.vertices.len());
    for &(u, v) in &t.edges {
        if !dsu.union(index[&u], index[&v]) {
            return invalid(format!("edges contain a cycle through {u}-{v}"));
        }
    }
    // |V|−1 edges and no cycle: the edge set is a spanning tree of the
    // certificate's vertex set.
    let spanning = t.vertices.len() == g.n();
    let degrees = t.degrees();
    let bad: VertexSet = degrees
        .iter()
        .filter(|&(_, &d)| d >= 2 && d <= k)
        .map(|(&v, _)| v)
        .collect();
    if bad.is_empty() {
        if spanning {
            TreeKind::Full
        } else {
            TreeKind::Semi { witnesses: bad }
        }
    } else if !spanning && bad.iter().all(|v| degrees[&v] == k) {
        TreeKind::Semi { witnesses: bad }
    } else {
        TreeKind::Quasi { witnesses: bad }
    }
}

/// Violation of an operation's stated preconditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractError(pub String);

impl fmt::Display for ContractError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ContractError {}

/// Glues clean trees onto the degree-k vertices of `t`.
///
/// `t` must classify as a semi tree whose degree-k witnesses are exactly
/// covered by `parts`: each part `(S_j, T_j)` supplies a tree `T_j` that
/// spans `S_j` with no degree in [2,k], where `S_j` meets `V(t)` in
/// exactly one vertex `v_j`, a distinct degree-k vertex of `t`, and the
/// `S_j` are pairwise disjoint. The union of `t` with all parts is then a
/// tree in which every former witness gained at least one edge (degree ≥
/// k+1) and no new degree in [2,k] appeared.
///
/// All preconditions are checked eagerly; violations name the failing
/// part.
pub fn glue(
    g: &Graph,
    t: &TreeCertificate,
    parts: &[(VertexSet, TreeCertificate)],
) -> Result<TreeCertificate, ContractError> {
    let k = t.k;
    let witnesses = match classify(g, t, k) {
        TreeKind::Semi { witnesses } => witnesses,
        TreeKind::Full => VertexSet::new([]),
        other => {
            return Err(ContractError(format!(
                "base tree is not a semi tree: classified as {other}"
            )))
        }
    };
    let mut anchors = Vec::new();
    for (j, (s, part)) in parts.iter().enumerate() {
        let inter = s.intersection(t.vertices());
        if inter.len() != 1 {
            return Err(ContractError(format!(
                "part {j}: S ∩ V(t) = {inter}, expected exactly one vertex"
            )));
        }
        let v_j = inter.min().unwrap();
        if !witnesses.contains(v_j) {
            return Err(ContractError(format!(
                "part {j}: attachment vertex {v_j} does not have degree k={k} in the base tree"
            )));
        }
        if part.vertices() != s {
            return Err(ContractError(format!(
                "part {j}: tree vertex set {} differs from S = {s}",
                part.vertices()
            )));
        }
        match classify(g, part, k) {
            TreeKind::Full => {}
            TreeKind::Semi { ref witnesses } if witnesses.is_empty() => {}
            other => {
                return Err(ContractError(format!(
                    "part {j}: tree on S is not a clean [2,k] tree: {other}"
                )));
            }
        }
        for (jj, (s2, _)) in parts.iter().enumerate().take(j) {
            if !s.is_disjoint_from(s2) {
                return Err(ContractError(format!(
                    "parts {jj} and {j} overlap: {}",
                    s.intersection(s2)
                )));
            }
        }
        anchors.push(v_j);
    }
    let anchor_set = VertexSet::new(anchors);
    if anchor_set != witnesses {
        let missing = witnesses.difference(&anchor_set);
        return Err(ContractError(format!(
            "degree-k vertices {missing} of the base tree have no part covering them"
        )));
    }
    let mut vertices = t.vertices().clone();
    let mut edges = t.edges.clone();
    for (s, part) in parts {
        vertices = vertices.union(s);
        edges.extend_from_slice(part.edges());
    }
    Ok(TreeCertificate::new(k, vertices, edges))
}

/// Finds an induced path z–x–y: `x` adjacent to `z` inside `x_set`, `y`
/// in `x_set` adjacent to `x` but not to `z`.
///
/// Requires: `G[x_set]` connected, `z ∉ x_set`, and `z` adjacent to at
/// least one but not all of `x_set`. Such a pair always exists under
/// these hypotheses (some edge of the connected set crosses from the
/// neighbors of `z` to the non-neighbors). The lexicographically smallest
/// `(x, y)` is returned.
pub fn induced_path(
    g: &Graph,
    x_set: &VertexSet,
    z: usize,
) -> Result<(usize, usize), ContractError> {
    if x_set.contains(z) {
        return Err(ContractError(format!("z = {z} must lie outside the set")));
    }
    if !g.is_connected_within(x_set) {
        return Err(ContractError("the set does not induce a connected subgraph".into()));
    }
    let nz = g.neighbors_in(z, x_set);
    if nz.is_empty() || nz.len() == x_set.len() {
        return Err(ContractError(format!(
            "z = {z} is adjacent to {} of {} set vertices; need at least one and not all",
            nz.len(),
            x_set.len()
        )));
    }
    for x in nz.iter() {
        for y in g.neighbors_in(x, x_set).iter() {
            if !g.has_edge(z, y) {
                return Ok((x, y));
            }
        }
    }
    unreachable!("a connected set with a proper nonempty neighborhood of z always has an induced path");
}
