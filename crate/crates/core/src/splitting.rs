//! Generator partitions `I = J + K` of binomial edge ideals and the
//! comparison of `beta(I)` with `beta(J) + beta(K) + beta_{i-1}(J ∩ K)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::betti::{BettiTable, Window};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::{Edge, Graph};
use crate::ideal::IdealSpec;
use crate::koszul::{betti_table_multigraded, DegreeKey, Grading, MultigradedBetti, OracleOptions};
use crate::linalg::GradedSubspace;
use crate::monomial::{fine_basis, fine_degrees_of_degree, Monomial, Polynomial};

/// How a partition was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PartitionKind {
    /// `J = J_{G∖e}`, `K = <f_e>`.
    Edge(Edge),
    /// `J` is generated by the edges at `s`, `K = J_{G∖s}`.
    Vertex(usize),
    Custom,
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionKind::Edge(e) => write!(f, "edge splitting at {e}"),
            PartitionKind::Vertex(s) => write!(f, "{s}-partition"),
            PartitionKind::Custom => f.write_str("custom partition"),
        }
    }
}

/// A split of the edge binomials of `G` into two disjoint lists.
#[derive(Clone, Debug)]
pub struct GeneratorPartition {
    graph: Graph,
    kind: PartitionKind,
    j_edges: Vec<Edge>,
    k_edges: Vec<Edge>,
    ideal: IdealSpec,
    j: IdealSpec,
    k: IdealSpec,
    intersection: IdealSpec,
}

impl GeneratorPartition {
    /// Partition with `J` generated by `j_edges` and `K` by the remaining edges.
    pub fn new(g: &Graph, j_edges: Vec<Edge>, kind: PartitionKind) -> Result<Self> {
        let j_set: BTreeSet<Edge> = j_edges.iter().copied().collect();
        if j_set.len() != j_edges.len() {
            return Err(Error::input("an edge is listed twice"));
        }
        if let Some(e) = j_set.iter().find(|e| !g.contains_edge(e)) {
            return Err(Error::input(format!("{e} is not an edge of the graph")));
        }
        let j_edges: Vec<Edge> = j_set.into_iter().collect();
        let k_edges: Vec<Edge> = g.edges().iter().copied().filter(|e| !j_edges.contains(e)).collect();
        let n = g.vertex_count();
        let ideal = IdealSpec::edge_ideal(g);
        let j = IdealSpec::edge_ideal_of(n, &j_edges);
        let k = IdealSpec::edge_ideal_of(n, &k_edges);
        let intersection = IdealSpec::intersection(&j, &k)?;
        Ok(GeneratorPartition { graph: g.clone(), kind, j_edges, k_edges, ideal, j, k, intersection })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> &PartitionKind {
        &self.kind
    }

    pub fn j_edges(&self) -> &[Edge] {
        &self.j_edges
    }

    pub fn k_edges(&self) -> &[Edge] {
        &self.k_edges
    }

    pub fn ideal(&self) -> &IdealSpec {
        &self.ideal
    }

    pub fn j(&self) -> &IdealSpec {
        &self.j
    }

    pub fn k(&self) -> &IdealSpec {
        &self.k
    }

    pub fn intersection(&self) -> &IdealSpec {
        &self.intersection
    }
}

/// `J_G = J_{G∖e} + <f_e>`.
pub fn edge_splitting(g: &Graph, e: &Edge) -> Result<GeneratorPartition> {
    if !g.contains_edge(e) {
        return Err(Error::input(format!("{e} is not an edge of the graph")));
    }
    let j = g.edges().iter().copied().filter(|f| f != e).collect();
    GeneratorPartition::new(g, j, PartitionKind::Edge(*e))
}

/// `J_G = J_{G_1} + J_{G_2}` with `G_1` the star of edges at `s` and
/// `G_2 = G ∖ s`.
pub fn s_partition(g: &Graph, s: usize) -> Result<GeneratorPartition> {
    let (star, _) = g.s_partition_subgraphs(s)?;
    GeneratorPartition::new(g, star.edges().to_vec(), PartitionKind::Vertex(s))
}

/// A custom partition read from text: one `u v` pair per line naming an
/// edge of `J`; `K` receives every other edge. Blank lines and lines
/// starting with `#` are ignored.
pub fn custom_partition(g: &Graph, text: &str) -> Result<GeneratorPartition> {
    let mut j = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse { line: k + 1, message: format!("bad vertex {t:?}") });
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(Error::Parse { line: k + 1, message: "expected two vertices".into() });
        }
        let e = Edge::new(parse(parts[0])?, parse(parts[1])?).map_err(|e| Error::Parse { line: k + 1, message: e.to_string() })?;
        j.push(e);
    }
    GeneratorPartition::new(g, j, PartitionKind::Custom)
}

/// Multigraded Betti numbers of `I`, `J`, `K` and `J ∩ K`.
#[derive(Clone, Debug)]
pub struct SplittingTables {
    pub i: MultigradedBetti,
    pub j: MultigradedBetti,
    pub k: MultigradedBetti,
    pub jk: MultigradedBetti,
}

impl SplittingTables {
    pub fn compute(p: &GeneratorPartition, options: &OracleOptions) -> Self {
        let ((i, j), (k, jk)) = rayon::join(
            || rayon::join(|| betti_table_multigraded(&p.ideal, options), || betti_table_multigraded(&p.j, options)),
            || {
                rayon::join(
                    || betti_table_multigraded(&p.k, options),
                    || betti_table_multigraded(&p.intersection, options),
                )
            },
        );
        SplittingTables { i, j, k, jk }
    }

    /// Standard-graded tables in the order `I`, `J`, `K`, `J ∩ K`.
    pub fn graded(&self) -> [BettiTable; 4] {
        [self.i.graded(), self.j.graded(), self.k.graded(), self.jk.graded()]
    }

    pub fn is_truncated(&self) -> bool {
        self.i.is_truncated() || self.j.is_truncated() || self.k.is_truncated() || self.jk.is_truncated()
    }
}

/// A splitting predicted by a theorem, and whether the window agrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Guarantee {
    pub r: u32,
    pub s: u32,
    pub reason: String,
    /// `delta = 0` wherever `i >= r` or `j >= i + s` inside the window.
    pub holds_on_window: bool,
}

/// Comparison of the four Betti tables of a partition.
#[derive(Clone, Debug)]
pub struct SplittingReport {
    pub kind: PartitionKind,
    pub window: Window,
    pub table_i: BettiTable,
    pub table_j: BettiTable,
    pub table_k: BettiTable,
    pub table_jk: BettiTable,
    /// `delta(i,j) = beta_{i,j}(J) + beta_{i,j}(K) + beta_{i-1,j}(J ∩ K) - beta_{i,j}(I)`
    /// at every cell inside the window where some term is nonzero.
    pub residual: BTreeMap<(u32, u32), i64>,
    pub complete: bool,
    /// Componentwise minimal `(r, s)` with `delta = 0` on `i >= r or j >= i + s`.
    /// Validity is witnessed on the window only. The set is a single pair
    /// because every nonzero cell must satisfy `i < r` and `j - i < s`.
    pub minimal_pairs: Vec<(u32, u32)>,
    pub guarantee: Option<Guarantee>,
    /// Set when some table was cut off by the window.
    pub window_limited: bool,
}

impl SplittingReport {
    pub fn delta(&self, i: u32, j: u32) -> i64 {
        self.residual.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Cells with `delta != 0`, ordered by row `j - i` and then by `i`.
    pub fn failing_cells(&self) -> Vec<(u32, u32)> {
        let mut cells: Vec<(u32, u32)> = self.residual.iter().filter(|(_, &d)| d != 0).map(|(&c, _)| c).collect();
        cells.sort_by_key(|&(i, j)| (j - i, i));
        cells
    }

    /// Cells where the inequality `delta >= 0` fails; always empty for a
    /// correct computation.
    pub fn negative_cells(&self) -> Vec<(u32, u32)> {
        self.residual.iter().filter(|(_, &d)| d < 0).map(|(&c, _)| c).collect()
    }

    /// `delta = 0` on `{i >= r} ∪ {j >= i + s}` inside the window.
    pub fn holds_on_region(&self, r: u32, s: u32) -> bool {
        self.residual.iter().all(|(&(i, j), &d)| d == 0 || (i < r && j < i + s))
    }

    /// One-line verdict, e.g. `complete; guaranteed (0,0)` or
    /// `not complete; counterexample (2,4): 3 ≠ 0+0+9; guaranteed (4,4)`.
    pub fn summary(&self) -> String {
        let mut out = if self.complete {
            "complete".to_string()
        } else {
            let (i, j) = self.failing_cells()[0];
            format!(
                "not complete; counterexample ({i},{j}): {} ≠ {}+{}+{}",
                self.table_i.get(i, j),
                self.table_j.get(i, j),
                self.table_k.get(i, j),
                if i == 0 { 0 } else { self.table_jk.get(i - 1, j) }
            )
        };
        if let Some(g) = &self.guarantee {
            let _ = write!(out, "; guaranteed ({},{})", g.r, g.s);
        }
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.kind);
        for (name, t) in [("I", &self.table_i), ("J", &self.table_j), ("K", &self.table_k), ("J ∩ K", &self.table_jk)] {
            let _ = writeln!(out, "\n{name}:\n{}", t.render_text());
        }
        let _ = writeln!(out, "\nresidual delta(i,j):");
        let cells = self.failing_cells();
        if cells.is_empty() {
            let _ = writeln!(out, "  zero everywhere in the window");
        }
        for (i, j) in cells {
            let _ = writeln!(out, "  ({i},{j}): {}", self.delta(i, j));
        }
        let (r, s) = self.minimal_pairs[0];
        let _ = writeln!(out, "minimal (r,s) within window: ({r},{s})");
        match &self.guarantee {
            Some(g) => {
                let verdict = if g.holds_on_window { "holds on the window" } else { "VIOLATED on the window" };
                let _ = writeln!(out, "guarantee: ({},{}) from {}; {verdict}", g.r, g.s, g.reason);
            }
            None => {
                let _ = writeln!(out, "guarantee: none applies");
            }
        }
        if self.window_limited {
            let _ = writeln!(out, "note: some table is truncated by the window");
        }
        let _ = writeln!(out, "{}", self.summary());
        out
    }

    pub fn to_json(&self, n: usize, field: u32) -> serde_json::Value {
        let residual: Vec<_> = self
            .residual
            .iter()
            .filter(|(_, &d)| d != 0)
            .map(|(&(i, j), &d)| serde_json::json!({"i": i, "j": j, "delta": d}))
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "tables": {
                "I": self.table_i.to_json(n, field),
                "J": self.table_j.to_json(n, field),
                "K": self.table_k.to_json(n, field),
                "J∩K": self.table_jk.to_json(n, field),
            },
            "residual": residual,
            "complete": self.complete,
            "minimal_pairs": self.minimal_pairs,
            "guarantee": self.guarantee,
            "window_limited": self.window_limited,
            "summary": self.summary(),
        })
    }
}

/// The theorem-backed splitting for a partition, if one applies.
pub fn theorem_guarantee(p: &GeneratorPartition) -> Result<Option<(u32, u32, String)>> {
    let g = &p.graph;
    Ok(match &p.kind {
        PartitionKind::Edge(e) => {
            if !g.is_cut_edge(e) {
                None
            } else if g.degree(e.u()) == 1 || g.degree(e.v()) == 1 {
                Some((0, 0, "pendant edge".into()))
            } else {
                let h = g.delete_edge(e)?;
                (h.is_free_vertex(e.u()) || h.is_free_vertex(e.v()))
                    .then(|| (0, 0, "cut edge with an endpoint free after deletion".into()))
            }
        }
        PartitionKind::Vertex(s) => {
            if g.is_triangle_free() {
                Some((0, 0, "s-partition of a triangle-free graph".into()))
            } else {
                let c = g.largest_clique_containing(*s)? as u32;
                Some((c, 4, format!("s-partition with c({s}) = {c}")))
            }
        }
        PartitionKind::Custom => None,
    })
}

/// The residual field and classification for precomputed tables.
pub fn classify_tables(p: &GeneratorPartition, tables: &SplittingTables) -> Result<SplittingReport> {
    let [ti, tj, tk, tjk] = tables.graded();
    let window = ti.window();
    let mut cells: BTreeSet<(u32, u32)> = BTreeSet::new();
    cells.extend(ti.entries().map(|(c, _)| c));
    cells.extend(tj.entries().map(|(c, _)| c));
    cells.extend(tk.entries().map(|(c, _)| c));
    cells.extend(tjk.entries().map(|((i, j), _)| (i + 1, j)));
    let residual: BTreeMap<(u32, u32), i64> = cells
        .into_iter()
        .filter(|&(i, j)| window.contains(i, j))
        .map(|(i, j)| {
            let rhs = tj.get(i, j) + tk.get(i, j) + if i == 0 { 0 } else { tjk.get(i - 1, j) };
            ((i, j), rhs as i64 - ti.get(i, j) as i64)
        })
        .collect();
    let bad = || residual.iter().filter(|(_, &d)| d != 0).map(|(&c, _)| c);
    let complete = bad().next().is_none();
    let r = bad().map(|(i, _)| i + 1).max().unwrap_or(0);
    let s = bad().map(|(i, j)| j - i + 1).max().unwrap_or(0);
    let mut report = SplittingReport {
        kind: p.kind.clone(),
        window,
        table_i: ti,
        table_j: tj,
        table_k: tk,
        table_jk: tjk,
        residual,
        complete,
        minimal_pairs: vec![(r, s)],
        guarantee: None,
        window_limited: tables.is_truncated(),
    };
    if let Some((r, s, reason)) = theorem_guarantee(p)? {
        let holds_on_window = report.holds_on_region(r, s);
        report.guarantee = Some(Guarantee { r, s, reason, holds_on_window });
    }
    Ok(report)
}

/// Computes the four tables with the oracle and classifies the splitting.
/// `window` defaults to the one for the ring size.
pub fn classify(p: &GeneratorPartition, window: Option<Window>, field: PrimeField) -> Result<SplittingReport> {
    let mut options = OracleOptions::with_field(field);
    options.window = window;
    classify_tables(p, &SplittingTables::compute(p, &options))
}

/// A degree at which `beta_i(J ∩ K)` and `beta_i(J)` or `beta_i(K)` are
/// both nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisFailure {
    pub i: u32,
    pub degree: DegreeKey,
    pub beta_jk: u64,
    pub beta_j: u64,
    pub beta_k: u64,
}

/// Where the vanishing conditions certify the splitting identity.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub grading: Grading,
    /// Degrees violating "`beta_{i,D}(J ∩ K) > 0` forces
    /// `beta_{i,D}(J) = beta_{i,D}(K) = 0`".
    pub failures: Vec<HypothesisFailure>,
    /// Standard cells `(i, j)` where the identity is certified: the
    /// condition holds at homological degrees `i` and `i - 1` for every
    /// degree of total `j`. Row `i = 0` is certified by disjointness of
    /// the generator lists.
    pub certified_cells: BTreeSet<(u32, u32)>,
    /// Minimal `(r, s)` such that every window cell with `i >= r` or
    /// `j >= i + s` is certified.
    pub certified_region: (u32, u32),
    /// Minimal `(r, s)` such that the condition on index `i - 1` holds for
    /// every `(i, j)` with `i >= r` or `j >= i + s`, the region-level
    /// hypothesis form.
    pub region_hypothesis: (u32, u32),
    /// Minimal `(r, s)` with `delta = 0` observed on the region.
    pub observed_region: (u32, u32),
    pub window_limited: bool,
}

/// Evaluates the vanishing conditions from precomputed tables in `grading`.
pub fn vanishing_from_tables(
    p: &GeneratorPartition,
    tables: &SplittingTables,
    grading: Grading,
) -> Result<VanishingReport> {
    let report = classify_tables(p, tables)?;
    let window = report.window;
    let jk = tables.jk.project(grading);
    let j = tables.j.project(grading);
    let k = tables.k.project(grading);
    let mut failures = Vec::new();
    for ((i, d), &b) in &jk {
        let bj = j.get(&(*i, d.clone())).copied().unwrap_or(0);
        let bk = k.get(&(*i, d.clone())).copied().unwrap_or(0);
        if bj > 0 || bk > 0 {
            failures.push(HypothesisFailure { i: *i, degree: d.clone(), beta_jk: b, beta_j: bj, beta_k: bk });
        }
    }
    // standard cells touched by a failure at index i (as itself or as i - 1)
    let mut uncertified = BTreeSet::new();
    let mut hypothesis_bad = BTreeSet::new();
    for f in &failures {
        let t = f.degree.total();
        if f.i > 0 {
            uncertified.insert((f.i, t));
        }
        uncertified.insert((f.i + 1, t));
        hypothesis_bad.insert((f.i + 1, t));
    }
    let certified_cells: BTreeSet<(u32, u32)> = (0..=window.i_max)
        .flat_map(|i| (0..=window.j_max).map(move |j| (i, j)))
        .filter(|c| !uncertified.contains(c))
        .collect();
    let region = |cells: &BTreeSet<(u32, u32)>| {
        let inside = cells.iter().filter(|&&(i, j)| window.contains(i, j) && j >= i);
        let r = inside.clone().map(|&(i, _)| i + 1).max().unwrap_or(0);
        let s = inside.map(|&(i, j)| j - i + 1).max().unwrap_or(0);
        (r, s)
    };
    Ok(VanishingReport {
        grading,
        certified_region: region(&uncertified),
        region_hypothesis: region(&hypothesis_bad),
        observed_region: report.minimal_pairs[0],
        failures,
        certified_cells,
        window_limited: report.window_limited,
    })
}

/// Computes the tables in the fine grading and evaluates the vanishing
/// conditions in `grading`.
pub fn check_vanishing_hypotheses(
    p: &GeneratorPartition,
    window: Option<Window>,
    field: PrimeField,
    grading: Grading,
) -> Result<VanishingReport> {
    let mut options = OracleOptions::with_field(field);
    options.window = window;
    vanishing_from_tables(p, &SplittingTables::compute(p, &options), grading)
}

/// A polynomial with a human-readable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledElement {
    pub label: String,
    pub poly: Polynomial,
}

/// `{x_s f_{a,b}, y_s f_{a,b} : a, b ∈ N(s), {a,b} ∈ E(G)}`, the claimed
/// basis of the cubic part of `J_{G_1} ∩ J_{G_2}` for the `s`-partition.
pub fn intersection_degree3_basis(g: &Graph, s: usize) -> Result<Vec<LabelledElement>> {
    let nbrs = g.neighbors(s);
    let mut out = Vec::new();
    for e in g.edges() {
        if nbrs.contains(&e.u()) && nbrs.contains(&e.v()) {
            let f = Polynomial::edge_binomial(e.u(), e.v());
            for (var, m) in [("x", Monomial::x(s)), ("y", Monomial::y(s))] {
                out.push(LabelledElement {
                    label: format!("{var}{s}*f_{{{},{}}}", e.u(), e.v()),
                    poly: f.times_monomial(&m),
                });
            }
        }
    }
    Ok(out)
}

/// Dimensions behind the degree-3 basis claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Degree3Check {
    pub listed: usize,
    pub rank: usize,
    pub slice_dim: usize,
    pub contained: bool,
}

impl Degree3Check {
    pub fn is_basis(&self) -> bool {
        self.contained && self.listed == self.rank && self.rank == self.slice_dim
    }
}

/// Compares [`intersection_degree3_basis`] with the cubic slice of the
/// intersection computed by linear algebra.
pub fn verify_degree3_basis(g: &Graph, s: usize, field: PrimeField) -> Result<Degree3Check> {
    let p = s_partition(g, s)?;
    let slice = p.intersection.slice(field, 3);
    let elems = intersection_degree3_basis(g, s)?;
    let polys: Vec<Polynomial> = elems.iter().map(|e| e.poly.clone()).collect();
    let span = GradedSubspace::span_polynomials(field, slice.basis().clone(), &polys)?;
    Ok(Degree3Check { listed: elems.len(), rank: span.dim(), slice_dim: slice.dim(), contained: slice.contains_subspace(&span)? })
}

/// `beta_{i,i+3}(J_{G_1} ∩ J_{G_2}) = 2 beta_{i,i+2}(J_{G'}) + beta_{i-1,i+1}(J_{G'})`
/// with `G'` induced on `N(s)`. Entry `i` is `beta_{i,i+3}`; trailing zeros
/// are dropped.
pub fn intersection_linear_strand(g: &Graph, s: usize) -> Result<Vec<u64>> {
    if s == 0 || s > g.vertex_count() {
        return Err(Error::input(format!("vertex {s} is out of range")));
    }
    let local = g.induced_on_mask(g.neighbor_mask(s));
    let b = crate::formulas::betti_linear_strand(&local);
    let at = |i: usize| b.get(i).copied().unwrap_or(0);
    let mut row: Vec<u64> = (0..=b.len()).map(|i| 2 * at(i) + if i == 0 { 0 } else { at(i - 1) }).collect();
    while row.last() == Some(&0) {
        row.pop();
    }
    Ok(row)
}

/// Checks `J_{G∖e} ∩ <f_e> = f_e · J_{(G∖e)_e}` block by block in every
/// degree up to `d_max`, for a cut edge `e`.
pub fn verify_intersection_shift(g: &Graph, e: &Edge, d_max: u32, field: PrimeField) -> Result<bool> {
    if !g.contains_edge(e) {
        return Err(Error::input(format!("{e} is not an edge of the graph")));
    }
    if !g.is_cut_edge(e) {
        return Err(Error::hypothesis(format!("{e} is not a cut edge")));
    }
    let n = g.vertex_count();
    let h = g.delete_edge(e)?;
    let f = Polynomial::edge_binomial(e.u(), e.v());
    let inter = IdealSpec::intersection(&IdealSpec::edge_ideal(&h), &IdealSpec::generators(n, vec![f.clone()])?)?;
    let completed = IdealSpec::edge_ideal(&h.completion_along_edge(e)?);
    let fd = f.fine_degree().expect("edge binomials are fine-homogeneous");
    let (a, b) = (Monomial::x(e.u()).mul(&Monomial::y(e.v())), Monomial::x(e.v()).mul(&Monomial::y(e.u())));
    for d in 0..=d_max {
        for dd in fine_degrees_of_degree((1 << n) - 1, d) {
            let lhs = inter.block(field, &dd);
            let Some(lower) = dd.checked_sub(&fd) else {
                if !lhs.is_zero() {
                    return Ok(false);
                }
                continue;
            };
            let src = completed.block(field, &lower);
            let polys: Vec<Polynomial> = src
                .rows()
                .iter()
                .map(|r| {
                    let p = Polynomial::from_terms(
                        r.entries().iter().map(|&(c, v)| (src.basis().get(c as usize), field.to_signed(v))),
                    );
                    Polynomial::from_terms(
                        p.times_monomial(&a).terms().map(|(m, c)| (*m, *c)).chain(p.times_monomial(&b).terms().map(|(m, c)| (*m, -c))),
                    )
                })
                .collect();
            let rhs = GradedSubspace::span_polynomials(field, fine_basis(&dd), &polys)?;
            if *lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example() -> Graph {
        Graph::new(7, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 4), (2, 5), (2, 7), (3, 7), (4, 5), (6, 7)]).unwrap()
    }

    #[test]
    fn partitions_split_the_generators() {
        let p3 = Graph::path(3).unwrap();
        let p = edge_splitting(&p3, &Edge::new(2, 3).unwrap()).unwrap();
        assert_eq!((p.j_edges().len(), p.k_edges().len()), (1, 1));
        let g = running_example();
        let q = s_partition(&g, 1).unwrap();
        assert_eq!((q.j_edges().len(), q.k_edges().len()), (5, 6));
        let c4 = Graph::cycle(4).unwrap();
        let r = s_partition(&c4, 1).unwrap();
        assert_eq!((r.j_edges().len(), r.k_edges().len()), (2, 2));
        assert!(edge_splitting(&p3, &Edge::new(1, 3).unwrap()).is_err());
        assert!(s_partition(&Graph::new(3, [(1, 2)]).unwrap(), 3).is_err());
    }

    #[test]
    fn custom_partition_parsing() {
        let c4 = Graph::cycle(4).unwrap();
        let p = custom_partition(&c4, "# J edges\n1 2\n\n3 4\n").unwrap();
        assert_eq!(p.j_edges().len(), 2);
        assert_eq!(p.k_edges().len(), 2);
        assert!(custom_partition(&c4, "1 3\n").is_err());
        assert!(matches!(custom_partition(&c4, "1 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(custom_partition(&c4, "1 2\n2 1\n").is_err());
    }

    #[test]
    fn star_center_partition_is_trivially_complete() {
        let s = Graph::star(4).unwrap();
        let rep = classify(&s_partition(&s, 1).unwrap(), None, PrimeField::default()).unwrap();
        assert!(rep.table_k.is_empty() && rep.table_jk.is_empty());
        assert!(rep.complete);
        assert_eq!(rep.minimal_pairs, vec![(0, 0)]);
    }

    #[test]
    fn pendant_edge_of_path_is_complete() {
        let p4 = Graph::path(4).unwrap();
        let rep = classify(&edge_splitting(&p4, &Edge::new(3, 4).unwrap()).unwrap(), None, PrimeField::default()).unwrap();
        assert!(rep.complete, "{}", rep.render_text());
        assert!(rep.summary().starts_with("complete"));
        let g = rep.guarantee.unwrap();
        assert_eq!((g.r, g.s), (0, 0));
        assert!(g.holds_on_window);
    }

    #[test]
    fn triangle_edge_has_no_guarantee() {
        let c3 = Graph::cycle(3).unwrap();
        let p = edge_splitting(&c3, &Edge::new(1, 2).unwrap()).unwrap();
        assert_eq!(theorem_guarantee(&p).unwrap(), None);
    }

    #[test]
    fn principal_side_satisfies_its_half() {
        let p4 = Graph::path(4).unwrap();
        let p = edge_splitting(&p4, &Edge::new(1, 2).unwrap()).unwrap();
        let tables = SplittingTables::compute(&p, &OracleOptions::default());
        let [_, _, tk, _] = tables.graded();
        assert!(tk.entries().all(|((i, _), _)| i == 0));
    }

    #[test]
    fn degree3_basis_small_cases() {
        let k3 = Graph::complete(3).unwrap();
        let b = intersection_degree3_basis(&k3, 1).unwrap();
        assert_eq!(b.iter().map(|e| e.label.as_str()).collect::<Vec<_>>(), vec!["x1*f_{2,3}", "y1*f_{2,3}"]);
        assert!(verify_degree3_basis(&k3, 1, PrimeField::default()).unwrap().is_basis());
        let c4 = Graph::cycle(4).unwrap();
        assert!(intersection_degree3_basis(&c4, 1).unwrap().is_empty());
        assert!(verify_degree3_basis(&c4, 1, PrimeField::default()).unwrap().is_basis());
    }

    #[test]
    fn intersection_strand_of_running_example() {
        let g = running_example();
        assert_eq!(intersection_linear_strand(&g, 1).unwrap(), vec![10, 9, 2]);
        assert_eq!(intersection_degree3_basis(&g, 1).unwrap().len(), 10);
        assert!(intersection_linear_strand(&Graph::cycle(5).unwrap(), 2).unwrap().is_empty());
    }

    #[test]
    fn shift_on_a_path() {
        let p4 = Graph::path(4).unwrap();
        assert!(verify_intersection_shift(&p4, &Edge::new(2, 3).unwrap(), 6, PrimeField::default()).unwrap());
        let c3 = Graph::cycle(3).unwrap();
        assert!(verify_intersection_shift(&c3, &Edge::new(1, 2).unwrap(), 4, PrimeField::default()).is_err());
    }
}
