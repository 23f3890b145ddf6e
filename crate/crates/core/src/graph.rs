//! Finite simple graphs on the vertex set `{1..n}`.
//!
//! Vertices are 1-based everywhere in the public API. Internally every
//! graph also keeps one adjacency bitmask per vertex, which is what the
//! clique and connectivity routines work on.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported vertex count. The polynomial ring has two variables
/// per vertex and exterior subsets are stored in a `u32`.
pub const MAX_VERTICES: usize = 16;

/// An undirected edge `{u, v}` with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds the edge `{a, b}`; the endpoints may be given in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::input(format!("loop at vertex {a}")));
        }
        if a == 0 || b == 0 {
            return Err(Error::input("vertices are numbered from 1"));
        }
        Ok(Edge { u: a.min(b), v: a.max(b) })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    pub fn contains(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint that is not `w`.
    pub fn other(&self, w: usize) -> Option<usize> {
        if w == self.u {
            Some(self.v)
        } else if w == self.v {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

/// Face counts of the clique complex: `f[k]` is the number of `(k+1)`-cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    /// `f_k`, zero past the top dimension.
    pub fn get(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

/// A finite simple graph on `{1..n}` with a canonically sorted edge set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<u32>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (k, e) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}-{}", e.u, e.v)?;
        }
        write!(f, "])")
    }
}

/// Result of deleting a vertex: the smaller graph on `{1..n-1}` plus the
/// map from its labels back to the original ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexDeletion {
    pub graph: Graph,
    /// `labels[k - 1]` is the original label of new vertex `k`.
    pub labels: Vec<usize>,
}

impl VertexDeletion {
    pub fn original_label(&self, new: usize) -> usize {
        self.labels[new - 1]
    }

    /// Edges of the smaller graph written in the original labels.
    pub fn original_edges(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .iter()
            .map(|e| (self.original_label(e.u), self.original_label(e.v)))
            .collect()
    }
}

/// Answers to the structural questions the splitting theorems ask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    pub is_tree: bool,
    pub is_triangle_free: bool,
    pub connected_components: usize,
    pub cut_edges: BTreeSet<Edge>,
    pub free_vertices: BTreeSet<usize>,
}

/// A decomposition `G = G1 ∪_v G2` with `v` free in both parts.
///
/// Both parts are returned on the full vertex set `{1..n}`; vertices
/// outside a part are isolated in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub first: Graph,
    pub second: Graph,
    pub vertex: usize,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::input("a graph needs at least one vertex"));
        }
        if n > MAX_VERTICES {
            return Err(Error::input(format!(
                "{n} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            if e.v > n {
                return Err(Error::input(format!("edge {e} leaves the vertex range 1..={n}")));
            }
            if !set.insert(e) {
                return Err(Error::input(format!("duplicate edge {e}")));
            }
        }
        Ok(Self::from_edge_set(n, set))
    }

    fn from_edge_set(n: usize, set: BTreeSet<Edge>) -> Self {
        let mut adj = vec![0u32; n];
        for e in &set {
            adj[e.u - 1] |= 1 << (e.v - 1);
            adj[e.v - 1] |= 1 << (e.u - 1);
        }
        Graph { n, edges: set.into_iter().collect(), adj }
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
    }

    /// The star `S_n`: center 1 joined to `2..=n`.
    pub fn star(n: usize) -> Result<Self> {
        Self::new(n, (2..=n).map(|v| (1, v)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (v, v + 1)))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::input("a cycle needs at least 3 vertices"));
        }
        Self::new(n, (1..n).map(|v| (v, v + 1)).chain(std::iter::once((1, n))))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && a >= 1 && b >= 1 && a <= self.n && b <= self.n && self.adj[a - 1] & (1 << (b - 1)) != 0
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.has_edge(e.u, e.v)
    }

    fn check_vertex(&self, s: usize) -> Result<()> {
        if s == 0 || s > self.n {
            Err(Error::input(format!("vertex {s} is outside 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    /// Neighbourhood bitmask (bit `k-1` set for neighbour `k`).
    pub fn neighbor_mask(&self, v: usize) -> u32 {
        self.adj[v - 1]
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        mask_vertices(self.adj[v - 1])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices().map(|v| self.degree(v)).collect()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.adj[v - 1] == 0
    }

    /// Whether the vertices in `mask` are pairwise adjacent.
    pub fn is_clique_mask(&self, mask: u32) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & !(1 << k) & !self.adj[k] != 0 {
                return false;
            }
        }
        true
    }

    /// `G ∖ e`, same vertex set.
    pub fn delete_edge(&self, e: &Edge) -> Result<Graph> {
        if !self.contains_edge(e) {
            return Err(Error::input(format!("edge {e} is not in the graph")));
        }
        let set: BTreeSet<Edge> = self.edges.iter().copied().filter(|f| f != e).collect();
        Ok(Self::from_edge_set(self.n, set))
    }

    /// `G ∪ {e}`.
    pub fn add_edge(&self, e: &Edge) -> Result<Graph> {
        if e.v > self.n {
            return Err(Error::input(format!("edge {e} leaves the vertex range")));
        }
        if self.contains_edge(e) {
            return Err(Error::input(format!("edge {e} is already present")));
        }
        let mut set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        set.insert(*e);
        Ok(Self::from_edge_set(self.n, set))
    }

    /// `G ∖ {s}` on `n - 1` vertices, relabelled densely in increasing order.
    pub fn delete_vertex(&self, s: usize) -> Result<VertexDeletion> {
        self.check_vertex(s)?;
        if self.n == 1 {
            return Err(Error::input("cannot delete the only vertex"));
        }
        let labels: Vec<usize> = self.vertices().filter(|&v| v != s).collect();
        let relabel = |v: usize| if v < s { v } else { v - 1 };
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.contains(s))
            .map(|e| (relabel(e.u), relabel(e.v)));
        Ok(VertexDeletion { graph: Graph::new(self.n - 1, edges)?, labels })
    }

    /// Removes every edge at `s` but keeps `s` as an isolated vertex, so the
    /// labels (and the ambient polynomial ring) stay the same.
    pub fn isolate_vertex(&self, s: usize) -> Result<Graph> {
        self.check_vertex(s)?;
        let set: BTreeSet<Edge> = self.edges.iter().copied().filter(|e| !e.contains(s)).collect();
        Ok(Self::from_edge_set(self.n, set))
    }

    /// The completion `G_e` along a non-edge `e = {i, j}`: all pairs inside
    /// `N(i)` and all pairs inside `N(j)` become edges.
    pub fn completion_along_edge(&self, e: &Edge) -> Result<Graph> {
        if e.v > self.n {
            return Err(Error::input(format!("edge {e} leaves the vertex range")));
        }
        if self.contains_edge(e) {
            return Err(Error::input(format!("completion needs a non-edge, but {e} is an edge")));
        }
        let mut set: BTreeSet<Edge> = self.edges.iter().copied().collect();
        for end in [e.u, e.v] {
            let nbrs = self.neighbors(end);
            for (k, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[k + 1..] {
                    set.insert(Edge { u: a, v: b });
                }
            }
        }
        Ok(Self::from_edge_set(self.n, set))
    }

    /// Induced subgraph on the vertices in `mask`, kept on the full vertex set.
    pub fn induced_on_mask(&self, mask: u32) -> Graph {
        let set: BTreeSet<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| mask & (1 << (e.u - 1)) != 0 && mask & (1 << (e.v - 1)) != 0)
            .collect();
        Self::from_edge_set(self.n, set)
    }

    /// Connected components as vertex bitmasks, ordered by smallest vertex.
    pub fn component_masks(&self) -> Vec<u32> {
        let mut seen = 0u32;
        let mut comps = Vec::new();
        for v in 0..self.n {
            if seen & (1 << v) != 0 {
                continue;
            }
            let comp = self.reach(1 << v, u32::MAX);
            seen |= comp;
            comps.push(comp);
        }
        comps
    }

    /// Vertices reachable from `start` using only vertices in `allowed`.
    fn reach(&self, start: u32, allowed: u32) -> u32 {
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let k = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[k] & allowed & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.component_masks().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.n
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.component_count() == self.n
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges.iter().all(|e| self.adj[e.u - 1] & self.adj[e.v - 1] == 0)
    }

    /// `e` is a cut edge when deleting it increases the component count.
    pub fn is_cut_edge(&self, e: &Edge) -> bool {
        if !self.contains_edge(e) {
            return false;
        }
        // Deleting e disconnects u from v exactly when no other path exists.
        let mut without = self.adj.clone();
        without[e.u - 1] &= !(1 << (e.v - 1));
        without[e.v - 1] &= !(1 << (e.u - 1));
        let g = Graph { n: self.n, edges: Vec::new(), adj: without };
        g.reach(1 << (e.u - 1), u32::MAX) & (1 << (e.v - 1)) == 0
    }

    pub fn cut_edges(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().filter(|e| self.is_cut_edge(e)).collect()
    }

    /// `v` is free when the induced graph on `N(v)` is complete.
    pub fn is_free_vertex(&self, v: usize) -> bool {
        self.is_clique_mask(self.adj[v - 1])
    }

    /// Free-vertex test through the other characterisation: `v` lies in
    /// exactly one maximal clique.
    pub fn is_free_vertex_by_cliques(&self, v: usize) -> bool {
        let bit = 1u32 << (v - 1);
        self.maximal_cliques().iter().filter(|&&c| c & bit != 0).count() == 1
    }

    pub fn free_vertices(&self) -> BTreeSet<usize> {
        self.vertices().filter(|&v| self.is_free_vertex(v)).collect()
    }

    pub fn structural_predicates(&self) -> StructuralReport {
        StructuralReport {
            is_tree: self.is_tree(),
            is_triangle_free: self.is_triangle_free(),
            connected_components: self.component_count(),
            cut_edges: self.cut_edges(),
            free_vertices: self.free_vertices(),
        }
    }

    /// Maximal cliques as bitmasks, found by Bron–Kerbosch with pivoting.
    pub fn maximal_cliques(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        self.bron_kerbosch(0, all, 0, &mut out);
        out.sort_unstable();
        out
    }

    fn bron_kerbosch(&self, r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        // pivot: vertex of P ∪ X with the most neighbours in P
        let px = p | x;
        let mut pivot = px.trailing_zeros() as usize;
        let mut best = 0;
        let mut rest = px;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let c = (self.adj[k] & p).count_ones();
            if c > best {
                best = c;
                pivot = k;
            }
        }
        let mut todo = p & !self.adj[pivot];
        while todo != 0 {
            let k = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            let bit = 1u32 << k;
            self.bron_kerbosch(r | bit, p & self.adj[k], x & self.adj[k], out);
            p &= !bit;
            x |= bit;
        }
    }

    /// Clique complex f-vector, counted by extending cliques one vertex at a
    /// time through common neighbourhoods of larger-labelled vertices.
    pub fn clique_f_vector(&self) -> FVector {
        let mut f = vec![0u64; 1];
        for v in 0..self.n {
            let higher = self.adj[v] & !((2u32 << v) - 1);
            self.extend_cliques(1, higher, &mut f);
        }
        FVector(f)
    }

    fn extend_cliques(&self, size: usize, candidates: u32, f: &mut Vec<u64>) {
        if f.len() < size {
            f.push(0);
        }
        f[size - 1] += 1;
        let mut rest = candidates;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.extend_cliques(size + 1, rest & self.adj[k], f);
        }
    }

    /// `c(s)`: the size of the largest clique containing `s`.
    pub fn largest_clique_containing(&self, s: usize) -> Result<usize> {
        self.check_vertex(s)?;
        let bit = 1u32 << (s - 1);
        Ok(self
            .maximal_cliques()
            .into_iter()
            .filter(|c| c & bit != 0)
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap_or(1))
    }

    /// A vertex `a` with `deg a > 1` having at most one neighbour of degree
    /// greater than one; the smallest such label is returned.
    pub fn find_reduction_vertex(&self) -> Result<usize> {
        if !self.is_tree() {
            return Err(Error::input("reduction vertex requires a tree"));
        }
        if self.n <= 2 {
            return Err(Error::input("reduction vertex requires a tree that is not a single edge"));
        }
        self.vertices()
            .find(|&a| {
                self.degree(a) > 1 && self.neighbors(a).iter().filter(|&&u| self.degree(u) > 1).count() <= 1
            })
            .ok_or_else(|| Error::input("no reduction vertex found"))
    }

    /// Number of subgraphs isomorphic to the six-vertex caterpillar with two
    /// adjacent spine vertices, each carrying two further neighbours.
    pub fn count_caterpillars(&self) -> Result<u64> {
        if !self.is_tree() {
            return Err(Error::input("caterpillar count requires a tree"));
        }
        Ok(self
            .edges
            .iter()
            .map(|e| {
                crate::binomial(self.degree(e.u) as i64 - 1, 2) * crate::binomial(self.degree(e.v) as i64 - 1, 2)
            })
            .sum())
    }

    /// The two graphs of an `s`-partition: the star of edges at `s`, and
    /// `G ∖ s` (with `s` kept as an isolated vertex).
    pub fn s_partition_subgraphs(&self, s: usize) -> Result<(Graph, Graph)> {
        self.check_vertex(s)?;
        if self.degree(s) == 0 {
            return Err(Error::input(format!("vertex {s} is isolated, the star side would be empty")));
        }
        let star: BTreeSet<Edge> = self.edges.iter().copied().filter(|e| e.contains(s)).collect();
        Ok((Self::from_edge_set(self.n, star), self.isolate_vertex(s)?))
    }

    /// Finds `G = G1 ∪_v G2` with `v` free in both parts, choosing the
    /// smallest admissible `v`. `G1` is the component side containing the
    /// smaller neighbour of `v`.
    pub fn decompose_at_free_vertex(&self) -> Option<Decomposition> {
        for v in self.vertices() {
            let bit = 1u32 << (v - 1);
            let nbrs = self.adj[v - 1];
            let allowed = !bit;
            // group the neighbours of v by component of G - v
            let mut sides: Vec<u32> = Vec::new();
            let mut covered = 0u32;
            let mut rest = nbrs;
            while rest != 0 {
                let k = rest.trailing_zeros();
                rest &= rest - 1;
                if covered & (1 << k) != 0 {
                    continue;
                }
                let comp = self.reach(1 << k, allowed & self.all_mask());
                covered |= comp;
                sides.push(comp);
            }
            if sides.len() != 2 {
                continue;
            }
            if !sides.iter().all(|&c| self.is_clique_mask(c & nbrs)) {
                continue;
            }
            let first_mask = sides[0] | bit;
            let second_mask = self.all_mask() & !sides[0];
            let first = self.induced_on_mask(first_mask);
            let second = self.induced_on_mask(second_mask);
            return Some(Decomposition { first, second, vertex: v });
        }
        None
    }

    pub(crate) fn all_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Vertices that carry at least one edge.
    pub fn support_mask(&self) -> u32 {
        self.adj.iter().enumerate().filter(|(_, &a)| a != 0).fold(0, |m, (k, _)| m | (1 << k))
    }

    /// Drops isolated vertices and relabels the rest densely in increasing
    /// order. Returns `None` for an edgeless graph.
    pub fn strip_isolated(&self) -> Option<Graph> {
        let support = self.support_mask();
        if support == 0 {
            return None;
        }
        let keep = mask_vertices(support);
        let mut index = vec![0usize; self.n + 1];
        for (k, &v) in keep.iter().enumerate() {
            index[v] = k + 1;
        }
        let edges = self.edges.iter().map(|e| (index[e.u], index[e.v]));
        Graph::new(keep.len(), edges).ok()
    }

    /// Relabels by `perm`, where vertex `v` becomes `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::input("permutation length differs from the vertex count"));
        }
        Graph::new(self.n, self.edges.iter().map(|e| (perm[e.u - 1], perm[e.v - 1])))
    }

    /// The same edges on a larger vertex set.
    pub fn with_vertex_count(&self, n: usize) -> Result<Graph> {
        if n < self.n {
            return Err(Error::input("cannot shrink the vertex set"));
        }
        Graph::new(n, self.edges.iter().map(|e| (e.u, e.v)))
    }

    /// Parses the text format: first line `n`, then one `u v` per line.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (first_no, first) = lines.next().ok_or(Error::Parse { line: 1, message: "missing vertex count".into() })?;
        let n: usize = first
            .parse()
            .map_err(|_| Error::Parse { line: first_no, message: format!("expected a vertex count, found {first:?}") })?;
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::Parse {
                line: first_no,
                message: format!("vertex count must be in 1..={MAX_VERTICES}"),
            });
        }
        let mut set = BTreeSet::new();
        for (no, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |message: String| Error::Parse { line: no, message };
            if parts.len() != 2 {
                return Err(bad(format!("expected \"u v\", found {line:?}")));
            }
            let u: usize = parts[0].parse().map_err(|_| bad(format!("bad vertex {:?}", parts[0])))?;
            let v: usize = parts[1].parse().map_err(|_| bad(format!("bad vertex {:?}", parts[1])))?;
            if !(1 <= u && u < v && v <= n) {
                return Err(bad(format!("edge must satisfy 1 <= u < v <= {n}, found {u} {v}")));
            }
            if !set.insert(Edge { u, v }) {
                return Err(bad(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(Self::from_edge_set(n, set))
    }

    /// Writes the text format read by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {}\n", e.u, e.v));
        }
        s
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

/// 1-based vertex labels of the bits set in `mask`.
pub fn mask_vertices(mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        out.push(rest.trailing_zeros() as usize + 1);
        rest &= rest - 1;
    }
    out
}
