//! Closed forms, recursions and bounds for Betti numbers of binomial edge
//! ideals, independent of the Koszul oracle except where a recursion
//! bottoms out in a graph no formula covers.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use dashmap::DashMap;
use serde::Serialize;

use crate::betti::{BettiTable, Window};
use crate::binomial;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::{mask_vertices, Edge, Graph};
use crate::ideal::IdealSpec;
use crate::koszul::{betti_table, OracleOptions};

/// Which result produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Provenance {
    Edgeless,
    CompleteGraph,
    Star,
    LinearStrand,
    ComponentProduct,
    DecomposableProduct,
    CutEdgeRecursion,
    TreeCliqueSum,
    TreeBeta1,
    TreeBeta2,
    TreeThirdRow,
    RegPdBounds,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Edgeless => "edgeless graph",
            Provenance::CompleteGraph => "complete graph closed form",
            Provenance::Star => "star closed form",
            Provenance::LinearStrand => "linear strand from clique counts",
            Provenance::ComponentProduct => "product over connected components",
            Provenance::DecomposableProduct => "Betti polynomial product at a free vertex",
            Provenance::CutEdgeRecursion => "cut-edge recursion",
            Provenance::TreeCliqueSum => "beta_1 of a tree clique-summed with K_m",
            Provenance::TreeBeta1 => "beta_1 of a tree",
            Provenance::TreeBeta2 => "beta_2 of a tree",
            Provenance::TreeThirdRow => "third row of a tree",
            Provenance::RegPdBounds => "reg/pd from a splitting",
            Provenance::Oracle => "Koszul oracle",
        };
        f.write_str(s)
    }
}

/// A value together with the result that produced it and the
/// preconditions that were checked on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaResult<T> {
    pub value: T,
    pub provenance: Provenance,
    pub hypotheses_checked: Vec<String>,
}

impl<T> FormulaResult<T> {
    fn new(value: T, provenance: Provenance, hypotheses_checked: Vec<String>) -> Self {
        FormulaResult { value, provenance, hypotheses_checked }
    }
}

/// `beta_{i,i+2}(J_{K_n}) = (i+1) C(n, i+2)`; the resolution is linear.
pub fn betti_complete_graph(n: usize) -> Result<BettiTable> {
    if n < 2 {
        return Err(Error::input("complete graph formula needs n >= 2"));
    }
    let mut t = BettiTable::new(Window::for_vertices(n));
    for i in 0..=(n as u32 - 2) {
        t.set(i, i + 2, (i as u64 + 1) * binomial(n as i64, i as i64 + 2));
    }
    Ok(t)
}

/// `beta_{i,i+2}(J_G) = (i+1) f_{i+1}`, where `f_k` counts cliques on
/// `k + 1` vertices. Entry `i` of the result is `beta_{i,i+2}`; trailing
/// zeros are dropped.
pub fn betti_linear_strand(g: &Graph) -> Vec<u64> {
    let f = g.clique_f_vector();
    let mut row: Vec<u64> = (0..f.as_slice().len()).map(|i| (i as u64 + 1) * f.get(i + 1)).collect();
    while row.last() == Some(&0) {
        row.pop();
    }
    row
}

/// `beta_{0,2}(J_{S_n}) = n - 1` and `beta_{i,i+3} = i C(n, i+2)` for `i >= 1`.
pub fn betti_star(n: usize) -> Result<BettiTable> {
    if n < 2 {
        return Err(Error::input("star formula needs n >= 2"));
    }
    let mut t = BettiTable::new(Window::for_vertices(n));
    t.set(0, 2, n as u64 - 1);
    for i in 1..=(n as u32) {
        t.set(i, i + 3, i as u64 * binomial(n as i64, i as i64 + 2));
    }
    Ok(t)
}

/// Betti polynomial product of two quotient tables `R/J_{G1}`, `R/J_{G2}`;
/// the result is the quotient table of the glued graph.
pub fn betti_product_decomposable(q1: &BettiTable, q2: &BettiTable) -> Result<BettiTable> {
    if q1.get(0, 0) != 1 || q2.get(0, 0) != 1 {
        return Err(Error::input("product expects quotient tables with beta_{0,0} = 1"));
    }
    q1.polynomial_product(q2)
}

/// Ideal-indexed wrapper of [`betti_product_decomposable`].
pub fn product_of_ideal_tables(t1: &BettiTable, t2: &BettiTable) -> Result<BettiTable> {
    let q = betti_product_decomposable(&t1.to_quotient(), &t2.to_quotient())?;
    Ok(BettiTable::from_quotient(&q))
}

/// Source of Betti tables for the sub-graphs a recursion produces.
pub trait BettiProvider: Sync {
    fn betti(&self, g: &Graph) -> Result<BettiTable>;
}

/// Always asks the Koszul oracle.
#[derive(Clone, Debug, Default)]
pub struct OracleProvider {
    pub options: OracleOptions,
}

impl BettiProvider for OracleProvider {
    fn betti(&self, g: &Graph) -> Result<BettiTable> {
        oracle_table(g, &self.options)
    }
}

fn oracle_table(g: &Graph, options: &OracleOptions) -> Result<BettiTable> {
    let t = betti_table(&IdealSpec::edge_ideal(g), options);
    if t.is_truncated() {
        return Err(Error::Truncated(format!("oracle window too small for {g:?}")));
    }
    Ok(t)
}

/// The cut-edge recursion
/// `beta_{i,j}(J_G) = beta_{i,j}(J_{G∖e}) + beta_{i-1,j-2}(J_{(G∖e)_e})`
/// for `i >= 1`, with `beta_{0,2}(J_G) = |E(G)|`. Requires `e` to be a cut
/// edge with an endpoint free in `G ∖ e`.
pub fn cut_edge_recursion(g: &Graph, e: &Edge, base: &dyn BettiProvider) -> Result<FormulaResult<BettiTable>> {
    if !g.contains_edge(e) {
        return Err(Error::input(format!("{e} is not an edge of the graph")));
    }
    if !g.is_cut_edge(e) {
        return Err(Error::hypothesis(format!("{e} is not a cut edge")));
    }
    let h = g.delete_edge(e)?;
    let free = [e.v(), e.u()].into_iter().find(|&w| h.is_free_vertex(w));
    let Some(free) = free else {
        return Err(Error::hypothesis(format!("neither endpoint of {e} is free after deleting it")));
    };
    let completed = h.completion_along_edge(e)?;
    let mut t = base.betti(&h)?;
    for ((i, j), b) in base.betti(&completed)?.entries() {
        t.add(i + 1, j + 2, b);
    }
    t.set(0, 2, g.edge_count() as u64);
    t.set_window(Window::for_vertices(g.vertex_count()));
    t.set_truncated(false);
    let checked = vec![format!("{e} is a cut edge"), format!("vertex {free} is free in G minus {e}")];
    Ok(FormulaResult::new(t, Provenance::CutEdgeRecursion, checked))
}

/// Graph families with a formula route for the whole table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    Edgeless,
    Complete,
    Star,
    Tree,
    Decomposable,
}

/// The first family `g` belongs to after isolated vertices are dropped.
pub fn formula_family(g: &Graph) -> Option<Family> {
    let Some(c) = g.strip_isolated() else {
        return Some(Family::Edgeless);
    };
    if is_complete(&c) {
        Some(Family::Complete)
    } else if star_center(&c).is_some() {
        Some(Family::Star)
    } else if c.is_tree() {
        Some(Family::Tree)
    } else if c.decompose_at_free_vertex().is_some() {
        Some(Family::Decomposable)
    } else {
        None
    }
}

fn is_complete(g: &Graph) -> bool {
    let n = g.vertex_count();
    g.edge_count() == n * (n - 1) / 2
}

fn star_center(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != n - 1 {
        return None;
    }
    g.vertices().find(|&v| g.degree(v) == n - 1)
}

/// Memoised dispatcher over the formula routes, in order: edgeless,
/// complete, star, disconnected, decomposable, pendant-edge recursion,
/// oracle. Graphs are stripped of isolated vertices and densely relabelled
/// before lookup.
pub struct DispatchProvider {
    options: OracleOptions,
    memo: DashMap<Graph, (BettiTable, Provenance)>,
    oracle_calls: AtomicUsize,
}

impl DispatchProvider {
    pub fn new(field: PrimeField) -> Self {
        DispatchProvider {
            options: OracleOptions::with_field(field),
            memo: DashMap::new(),
            oracle_calls: AtomicUsize::new(0),
        }
    }

    /// Number of graphs handed to the oracle so far.
    pub fn oracle_calls(&self) -> usize {
        self.oracle_calls.load(Ordering::Relaxed)
    }

    /// The table of `g` and the route taken at the top level.
    pub fn resolve(&self, g: &Graph) -> Result<(BettiTable, Provenance)> {
        let window = Window::for_vertices(g.vertex_count());
        let Some(c) = g.strip_isolated() else {
            return Ok((BettiTable::new(window), Provenance::Edgeless));
        };
        if let Some(hit) = self.memo.get(&c) {
            let (mut t, p) = hit.clone();
            t.set_window(window);
            return Ok((t, p));
        }
        let (mut t, p) = self.compute(&c)?;
        self.memo.insert(c, (t.clone(), p));
        t.set_window(window);
        Ok((t, p))
    }

    fn compute(&self, c: &Graph) -> Result<(BettiTable, Provenance)> {
        let n = c.vertex_count();
        if is_complete(c) {
            return Ok((betti_complete_graph(n)?, Provenance::CompleteGraph));
        }
        if star_center(c).is_some() {
            return Ok((betti_star(n)?, Provenance::Star));
        }
        let comps = c.component_masks();
        if comps.len() > 1 {
            let mut acc = BettiTable::new(Window::for_vertices(n));
            for (k, &m) in comps.iter().enumerate() {
                let (t, _) = self.resolve(&c.induced_on_mask(m))?;
                acc = if k == 0 { t } else { product_of_ideal_tables(&acc, &t)? };
            }
            return Ok((acc, Provenance::ComponentProduct));
        }
        if let Some(d) = c.decompose_at_free_vertex() {
            let (t1, _) = self.resolve(&d.first)?;
            let (t2, _) = self.resolve(&d.second)?;
            return Ok((product_of_ideal_tables(&t1, &t2)?, Provenance::DecomposableProduct));
        }
        if let Some(e) = pendant_edge(c) {
            let r = cut_edge_recursion(c, &e, self)?;
            return Ok((r.value, Provenance::CutEdgeRecursion));
        }
        self.oracle_calls.fetch_add(1, Ordering::Relaxed);
        Ok((oracle_table(c, &self.options)?, Provenance::Oracle))
    }
}

impl BettiProvider for DispatchProvider {
    fn betti(&self, g: &Graph) -> Result<BettiTable> {
        self.resolve(g).map(|(t, _)| t)
    }
}

fn pendant_edge(g: &Graph) -> Option<Edge> {
    let leaf = g.vertices().find(|&v| g.degree(v) == 1)?;
    Edge::new(leaf, g.neighbors(leaf)[0]).ok()
}

/// The table of `J_G` by formulas alone at the top level. Errors unless
/// `g` is edgeless, complete, a star, a tree or decomposable; sub-graphs
/// produced along the way may still reach the oracle.
pub fn betti_by_formula(g: &Graph, provider: &DispatchProvider) -> Result<FormulaResult<BettiTable>> {
    let Some(family) = formula_family(g) else {
        return Err(Error::input("graph is not complete, a star, a tree or decomposable; no formula applies"));
    };
    let (t, p) = provider.resolve(g)?;
    Ok(FormulaResult::new(t, p, vec![format!("graph belongs to the {family:?} family")]))
}

/// `beta_1(J_G)` for `G = T ∪_a K_m`:
/// `C(n-1,2) + 2C(m,3) + sum_{w not in K_m} C(deg w,3) + C(deg a-m+1,3) +
/// (n-m-1) C(m-1,2) + (m-1) C(deg a-m+1,2)`.
/// The clique is located and the decomposition checked before evaluating.
pub fn beta1_tree_clique_sum(g: &Graph, a: usize, m: usize) -> Result<FormulaResult<u64>> {
    let n = g.vertex_count();
    if a == 0 || a > n {
        return Err(Error::input(format!("vertex {a} is out of range")));
    }
    if m == 0 || m > n {
        return Err(Error::input("clique size must satisfy 1 <= m <= n"));
    }
    let clique = find_attached_clique(g, a, m)
        .ok_or_else(|| Error::input(format!("graph is not a tree clique-summed with K_{m} at vertex {a}")))?;
    let (ni, mi) = (n as i64, m as i64);
    let da = g.degree(a) as i64;
    let others: i64 = g
        .vertices()
        .filter(|&w| clique & (1 << (w - 1)) == 0)
        .map(|w| binomial(g.degree(w) as i64, 3) as i64)
        .sum();
    let b = |x: i64, y: i64| binomial(x, y) as i64;
    let value = b(ni - 1, 2)
        + 2 * b(mi, 3)
        + others
        + b(da - mi + 1, 3)
        + (ni - mi - 1) * b(mi - 1, 2)
        + (mi - 1) * b(da - mi + 1, 2);
    let checked = vec![
        format!("vertices {:?} induce K_{m} containing {a}", mask_vertices(clique)),
        format!("clique vertices other than {a} have no neighbours outside the clique"),
        "deleting them leaves a tree".into(),
    ];
    Ok(FormulaResult::new(value as u64, Provenance::TreeCliqueSum, checked))
}

fn find_attached_clique(g: &Graph, a: usize, m: usize) -> Option<u32> {
    let a_bit = 1u32 << (a - 1);
    let nbrs = mask_vertices(g.neighbor_mask(a));
    let mut found = None;
    for_each_subset(&nbrs, m - 1, &mut |s: u32| {
        if found.is_some() {
            return;
        }
        let c = s | a_bit;
        if !g.is_clique_mask(c) {
            return;
        }
        if mask_vertices(s).iter().any(|&v| g.neighbor_mask(v) & !c != 0) {
            return;
        }
        let rest = g.induced_on_mask(g.all_mask() & !s);
        let tree = match rest.strip_isolated() {
            Some(t) => t.is_tree() && rest.support_mask() == g.all_mask() & !s,
            None => g.all_mask() & !s == a_bit,
        };
        if tree {
            found = Some(c);
        }
    });
    found
}

fn for_each_subset(items: &[usize], k: usize, f: &mut dyn FnMut(u32)) {
    fn go(items: &[usize], k: usize, start: usize, acc: u32, f: &mut dyn FnMut(u32)) {
        if k == 0 {
            f(acc);
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < k {
                break;
            }
            go(items, k - 1, idx + 1, acc | 1 << (items[idx] - 1), f);
        }
    }
    go(items, k, 0, 0, f);
}

fn require_tree(t: &Graph) -> Result<()> {
    if t.is_tree() {
        Ok(())
    } else {
        Err(Error::input("graph is not a tree"))
    }
}

/// `beta_1(J_T) = C(n-1,2) + sum_w C(deg w, 3)`.
pub fn beta1_tree(t: &Graph) -> Result<FormulaResult<u64>> {
    require_tree(t)?;
    let n = t.vertex_count() as i64;
    let value = binomial(n - 1, 2) + t.degrees().iter().map(|&d| binomial(d as i64, 3)).sum::<u64>();
    Ok(FormulaResult::new(value, Provenance::TreeBeta1, vec!["graph is a tree".into()]))
}

/// `beta_2(J_T) = C(n-1,3) + 2 sum_w C(deg w,4) +
/// sum_w C(deg w,3)(1 + |E(T∖w)|) + P(T)`, where `P(T)` counts
/// double-fork caterpillars.
pub fn beta2_tree(t: &Graph) -> Result<FormulaResult<u64>> {
    require_tree(t)?;
    let n = t.vertex_count() as i64;
    let degs = t.degrees();
    let fours: u64 = degs.iter().map(|&d| binomial(d as i64, 4)).sum();
    let threes: u64 = degs.iter().map(|&d| binomial(d as i64, 3) * (n - d as i64) as u64).sum();
    let value = binomial(n - 1, 3) + 2 * fours + threes + t.count_caterpillars()?;
    Ok(FormulaResult::new(value, Provenance::TreeBeta2, vec!["graph is a tree".into()]))
}

/// `beta_{k,k+3}(J_T) = sum_w k C(deg w + 1, k + 2)` for `k >= 2`.
pub fn betti_third_row_tree(t: &Graph, k: u32) -> Result<FormulaResult<u64>> {
    if k < 2 {
        return Err(Error::input("third-row formula holds for k >= 2"));
    }
    require_tree(t)?;
    let value = t.degrees().iter().map(|&d| k as u64 * binomial(d as i64 + 1, k as i64 + 2)).sum();
    Ok(FormulaResult::new(value, Provenance::TreeThirdRow, vec!["graph is a tree".into(), format!("k = {k} >= 2")]))
}

/// Regularity and projective dimension read off an `(r,s)`-splitting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegPdBounds {
    /// `max { reg J, reg K, reg(J ∩ K) - 1 }`.
    pub m: u32,
    /// `max { pd J, pd K, pd(J ∩ K) + 1 }`.
    pub p: u32,
    /// `max { pd I, pd J, pd(J ∩ K) + 1 }`, when the table of `I` is given.
    pub p_with_pd_i: Option<u32>,
    /// Set when both `p` variants are available and differ.
    pub p_variants_disagree: bool,
    /// `reg I = m`, asserted only when `m >= s`.
    pub reg_conclusion: Option<u32>,
    /// `pd I = p`, asserted only when `p >= r`.
    pub pd_conclusion: Option<u32>,
}

/// Applies the `(r,s)`-splitting bounds. Zero ideals contribute nothing
/// to the maxima.
pub fn splitting_reg_pd_bounds(
    tj: &BettiTable,
    tk: &BettiTable,
    tjk: &BettiTable,
    ti: Option<&BettiTable>,
    r: u32,
    s: u32,
) -> Result<FormulaResult<RegPdBounds>> {
    for (name, t) in [("J", tj), ("K", tk), ("J ∩ K", tjk)].into_iter().chain(ti.map(|t| ("I", t))) {
        if t.is_truncated() {
            return Err(Error::Truncated(format!("table of {name}")));
        }
    }
    let m = [tj.reg(), tk.reg(), tjk.reg().map(|x| x.saturating_sub(1))].into_iter().flatten().max().unwrap_or(0);
    let p = [tj.pd(), tk.pd(), tjk.pd().map(|x| x + 1)].into_iter().flatten().max().unwrap_or(0);
    let p_with_pd_i = ti.map(|t| [t.pd(), tj.pd(), tjk.pd().map(|x| x + 1)].into_iter().flatten().max().unwrap_or(0));
    let bounds = RegPdBounds {
        m,
        p,
        p_with_pd_i,
        p_variants_disagree: p_with_pd_i.is_some_and(|q| q != p),
        reg_conclusion: (m >= s).then_some(m),
        pd_conclusion: (p >= r).then_some(p),
    };
    let checked = vec![format!("splitting valid for i >= {r} or j >= i + {s}"), "tables untruncated".into()];
    Ok(FormulaResult::new(bounds, Provenance::RegPdBounds, checked))
}
