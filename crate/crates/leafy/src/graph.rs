//! Immutable simple-graph representation and structural quantities.
//!
//! Vertices are `0..n-1`. The graph stores sorted adjacency lists plus a
//! bitset adjacency matrix, so edge queries are O(1) and neighborhood
//! unions are word-parallel. All operations are pure; a `Graph` is never
//! mutated after construction.

use std::collections::BTreeSet;
use std::fmt;

/// Sorted, duplicate-free set of vertex ids.
///
/// Used for induced subgraphs, components, neighborhoods and tree vertex
/// sets. Membership in `0..n-1` of a concrete graph is checked at use
/// sites, not here.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    members: Vec<usize>, // strictly increasing
}

impl VertexSet {
    /// Builds a set from arbitrary ids (sorts and deduplicates).
    pub fn new<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut members: Vec<usize> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    /// The full vertex set `{0, .., n-1}`.
    pub fn all(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        self.members.first().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| other.contains(v)).collect(),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&v| !other.contains(v)).collect(),
        }
    }

    /// Set with one extra member.
    pub fn with(&self, v: usize) -> VertexSet {
        if self.contains(v) {
            self.clone()
        } else {
            VertexSet::new(self.iter().chain(std::iter::once(v)))
        }
    }

    /// Set with one member removed.
    pub fn without(&self, v: usize) -> VertexSet {
        VertexSet {
            members: self.iter().filter(|&x| x != v).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint_from(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

impl serde::Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Minimum of a quantity taken over nonadjacent vertex pairs.
///
/// `NC(G)` and `σ(G)` are defined only for non-complete graphs; complete
/// graphs get an explicit marker instead of a sentinel value so that
/// callers must branch on the case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMin {
    /// No nonadjacent pair exists: the quantity is undefined.
    Complete,
    Min(usize),
}

impl PairMin {
    pub fn value(self) -> Option<usize> {
        match self {
            PairMin::Complete => None,
            PairMin::Min(v) => Some(v),
        }
    }

    /// `min ≥ bound`, with complete graphs counting as satisfying any bound.
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            PairMin::Complete => true,
            PairMin::Min(v) => v >= bound,
        }
    }

    /// `2·min ≥ bound` (integer form of `min ≥ bound/2`), complete passes.
    pub fn twice_at_least(self, bound: usize) -> bool {
        match self {
            PairMin::Complete => true,
            PairMin::Min(v) => 2 * v >= bound,
        }
    }
}

impl fmt::Display for PairMin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairMin::Complete => write!(f, "complete"),
            PairMin::Min(v) => write!(f, "{v}"),
        }
    }
}

impl serde::Serialize for PairMin {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PairMin::Complete => s.serialize_str("complete"),
            PairMin::Min(v) => s.serialize_u64(*v as u64),
        }
    }
}

/// Error from [`Graph::new`]: the edge list is not a simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeError(pub String);

impl fmt::Display for EdgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for EdgeError {}

/// Error from [`Graph::parse_edge_list`], with the 1-based offending line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Immutable simple undirected graph on vertices `0..n-1`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>, // sorted neighbor lists
    rows: Vec<Vec<u64>>,  // bitset rows, (n+63)/64 words each
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Builds a graph from an edge list. Rejects self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, EdgeError> {
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let words = n.div_ceil(64);
        let mut adj = vec![Vec::new(); n];
        let mut rows = vec![vec![0u64; words]; n];
        for &(u, v) in edges {
            if u == v {
                return Err(EdgeError(format!("self-loop {u}-{v}")));
            }
            if u >= n || v >= n {
                return Err(EdgeError(format!("edge {u}-{v} out of range (n={n})")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(EdgeError(format!("duplicate edge {}-{}", key.0, key.1)));
            }
            adj[u].push(v);
            adj[v].push(u);
            rows[u][v / 64] |= 1 << (v % 64);
            rows[v][u / 64] |= 1 << (u % 64);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj, rows })
    }

    /// Edgeless graph.
    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).unwrap()
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    /// Path 0-1-…-(n-1).
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// Cycle 0-1-…-(n-1)-0. Requires n ≥ 3.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        Graph::new(n, &edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    /// All edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        u != v && self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        assert!(v < self.n, "vertex {v} out of range (n={})", self.n);
        &self.adj[v]
    }

    /// d_G(v).
    pub fn degree(&self, v: usize) -> usize {
        assert!(v < self.n, "vertex {v} out of range (n={})", self.n);
        self.adj[v].len()
    }

    /// Number of neighbors of `v` inside `s` (d_S(v)).
    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.adj[v].iter().filter(|&&w| s.contains(w)).count()
    }

    /// Neighbors of `v` inside `s`, sorted.
    pub fn neighbors_in(&self, v: usize, s: &VertexSet) -> VertexSet {
        VertexSet {
            members: self.adj[v].iter().copied().filter(|&w| s.contains(w)).collect(),
        }
    }

    /// N(v) as a set.
    pub fn neighborhood(&self, v: usize) -> VertexSet {
        VertexSet {
            members: self.adj[v].clone(),
        }
    }

    /// N[v] = N(v) ∪ {v}.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        self.neighborhood(v).with(v)
    }

    /// δ(G). Requires n ≥ 1.
    pub fn min_degree(&self) -> usize {
        assert!(self.n >= 1, "minimum degree of the empty graph is undefined");
        (0..self.n).map(|v| self.adj[v].len()).min().unwrap()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.adj[v].len()).max().unwrap_or(0)
    }

    /// N(u) ∪ N(v) for distinct u, v (may contain u or v when adjacent).
    pub fn neighborhood_union(&self, u: usize, v: usize) -> VertexSet {
        assert!(u != v, "neighborhood_union needs two distinct vertices");
        self.neighborhood(u).union(&self.neighborhood(v))
    }

    /// |N(u) ∪ N(v)| via word-parallel OR; u ≠ v assumed.
    fn union_size(&self, u: usize, v: usize) -> usize {
        self.rows[u]
            .iter()
            .zip(&self.rows[v])
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// NC(G) = min |N(u) ∪ N(v)| over nonadjacent pairs.
    pub fn nc_value(&self) -> PairMin {
        let mut best: Option<usize> = None;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    let s = self.union_size(u, v);
                    best = Some(best.map_or(s, |b| b.min(s)));
                }
            }
        }
        best.map_or(PairMin::Complete, PairMin::Min)
    }

    /// σ(G) = min d(u)+d(v) over nonadjacent pairs.
    pub fn sigma_value(&self) -> PairMin {
        let mut best: Option<usize> = None;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    let s = self.adj[u].len() + self.adj[v].len();
                    best = Some(best.map_or(s, |b| b.min(s)));
                }
            }
        }
        best.map_or(PairMin::Complete, PairMin::Min)
    }

    /// Connected components of the subgraph induced by `within`, each
    /// sorted, ordered by smallest member. Empty input gives an empty list.
    pub fn components(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut in_set = vec![false; self.n];
        for v in within.iter() {
            assert!(v < self.n, "vertex {v} out of range (n={})", self.n);
            in_set[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in within.iter() {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if in_set[w] && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(VertexSet { members: comp });
        }
        out
    }

    /// Whether the whole graph is connected (vacuously true for n ≤ 1).
    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components(&VertexSet::all(self.n)).len() == 1
    }

    /// Whether the subgraph induced by `within` is connected
    /// (vacuously true when `within` is empty or a single vertex).
    pub fn is_connected_within(&self, within: &VertexSet) -> bool {
        within.len() <= 1 || self.components(within).len() == 1
    }

    /// True iff every pair in `s` is adjacent (vacuously for |s| ≤ 1).
    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let m = s.as_slice();
        for (i, &u) in m.iter().enumerate() {
            for &v in &m[i + 1..] {
                if !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// Subgraph induced by `s`. Vertex `i` of the result corresponds to
    /// `s.as_slice()[i]`; the returned vector is that correspondence.
    pub fn induced(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.as_slice().to_vec();
        let mut back = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            assert!(v < self.n, "vertex {v} out of range (n={})", self.n);
            back[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in map.iter().enumerate() {
            for &w in &self.adj[v] {
                if w > v && back[w] != usize::MAX {
                    edges.push((i, back[w]));
                }
            }
        }
        (Graph::new(map.len(), &edges).unwrap(), map)
    }

    /// Parses the canonical edge-list format: first line `n m`, then `m`
    /// lines `u v` with `0 ≤ u < v < n`. Duplicate or loop lines, bad
    /// counts and trailing garbage are rejected with a 1-based line number.
    pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
        let mut lines = text.lines().enumerate();
        let (idx, header) = lines
            .next()
            .ok_or_else(|| ParseError { line: 1, msg: "empty input".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(ParseError {
                line: idx + 1,
                msg: format!("expected header `n m`, got `{}`", header.trim()),
            });
        }
        let parse_num = |tok: &str, line: usize| -> Result<usize, ParseError> {
            tok.parse::<usize>().map_err(|_| ParseError {
                line,
                msg: format!("`{tok}` is not a nonnegative integer"),
            })
        };
        let n = parse_num(head[0], idx + 1)?;
        let m = parse_num(head[1], idx + 1)?;
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (idx, raw) = lines.next().ok_or_else(|| ParseError {
                line: text.lines().count() + 1,
                msg: format!("expected {m} edge lines, found {}", edges.len()),
            })?;
            let line = idx + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(ParseError {
                    line,
                    msg: format!("expected `u v`, got `{}`", raw.trim()),
                });
            }
            let u = parse_num(toks[0], line)?;
            let v = parse_num(toks[1], line)?;
            if u == v {
                return Err(ParseError { line, msg: format!("self-loop {u} {v}") });
            }
            if u > v {
                return Err(ParseError {
                    line,
                    msg: format!("edge endpoints must satisfy u < v, got {u} {v}"),
                });
            }
            if v >= n {
                return Err(ParseError {
                    line,
                    msg: format!("vertex {v} out of range (n={n})"),
                });
            }
            if !seen.insert((u, v)) {
                return Err(ParseError { line, msg: format!("duplicate edge {u} {v}") });
            }
            edges.push((u, v));
        }
        for (idx, raw) in lines {
            if !raw.trim().is_empty() {
                return Err(ParseError {
                    line: idx + 1,
                    msg: format!("unexpected extra line `{}`", raw.trim()),
                });
            }
        }
        // Every rejection Graph::new performs was already checked per line.
        Graph::new(n, &edges).map_err(|e| ParseError { line: 1, msg: e.0 })
    }

    /// Canonical edge-list serialization (inverse of `parse_edge_list`).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Graphviz DOT serialization (undirected; isolated vertices listed).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph g {\n");
        for v in 0..self.n {
            if self.adj[v].is_empty() {
                out.push_str(&format!("  {v};\n"));
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The structural quantities of a graph together with flags for the known
/// sufficient conditions for [2,k]-ST existence.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HypothesisReport {
    pub n: usize,
    pub k: usize,
    /// δ(G).
    pub delta: usize,
    /// σ(G), minimum degree sum over nonadjacent pairs.
    pub sigma: PairMin,
    /// NC(G), minimum neighborhood-union size over nonadjacent pairs.
    pub nc: PairMin,
    pub connected: bool,
    pub flags: ConditionFlags,
}

/// One flag per known sufficient condition. A complete graph counts as
/// satisfying any σ/NC lower bound (both quantities are defined only for
/// non-complete graphs).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ConditionFlags {
    /// δ(G) ≥ 4√(2n): minimum-degree condition for a HIST.
    pub hist_min_degree: bool,
    /// n ≥ 8 and σ(G) ≥ n−1: degree-sum condition for a HIST.
    pub hist_degree_sum: bool,
    /// δ(G) ≥ c_k√n: minimum-degree condition for a [2,k]-ST.
    pub dense_min_degree: bool,
    /// n ≥ n₀(k) and σ(G) ≥ n−2: degree-sum condition for a [2,k]-ST
    /// (holds up to one exceptional family, which this flag does not test).
    pub degree_sum: bool,
    /// n ≥ n₁(k), δ(G) ≥ 2k and 2·NC(G) ≥ n−2: the neighborhood-union
    /// condition under which [`crate::construct`] certifies a [2,k]-ST.
    pub nc_condition: bool,
}

impl HypothesisReport {
    /// Why `flags.nc_condition` is false, or `None` if it holds. The first
    /// failing requirement (n, then δ, then NC) is reported.
    pub fn nc_condition_failure(&self) -> Option<String> {
        let t = crate::thresholds::thresholds(self.k);
        if self.delta < 2 * self.k {
            return Some(format!("delta {} < 2k = {}", self.delta, 2 * self.k));
        }
        if self.n < t.n1 {
            return Some(format!("n {} < n1({}) = {}", self.n, self.k, t.n1));
        }
        if !self.nc.twice_at_least(self.n - 2) {
            return Some(format!(
                "2*NC = {} < n-2 = {}",
                2 * self.nc.value().unwrap(),
                self.n - 2
            ));
        }
        None
    }
}

/// Measures δ, σ, NC and connectivity of `g` and evaluates each known
/// sufficient condition for the existence of a [2,k]-ST. Requires n ≥ 1
/// and k ≥ 2.
pub fn hypothesis_report(g: &Graph, k: usize) -> HypothesisReport {
    assert!(k >= 2, "class bound k must be at least 2");
    assert!(g.n() >= 1, "hypothesis report needs a nonempty graph");
    let n = g.n();
    let delta = g.min_degree();
    let sigma = g.sigma_value();
    let nc = g.nc_value();
    let connected = g.is_connected();
    let t = crate::thresholds::thresholds(k);
    let flags = ConditionFlags {
        // δ ≥ 4√(2n) ⇔ δ² ≥ 32n (both sides nonnegative).
        hist_min_degree: (delta as u128) * (delta as u128) >= 32 * n as u128,
        hist_degree_sum: n >= 8 && sigma.at_least(n - 1),
        dense_min_degree: crate::thresholds::min_degree_is_dense(delta, n, k),
        degree_sum: n >= t.n0 && sigma.at_least(n - 2),
        nc_condition: n >= t.n1 && delta >= 2 * k && nc.twice_at_least(n.saturating_sub(2)),
    };
    HypothesisReport { n, k, delta, sigma, nc, connected, flags }
}
