//! Betti numbers through Koszul homology.
//!
//! `beta_{k,D}(R/I)` is the homology at `K_k` of the complex
//! `Λ^k(k^{2n}) ⊗ R/I` in fine degree `D`. The complex splits into fine
//! blocks, so every rank computed here is the rank of one small block of
//! a Koszul differential.
//!
//! Rows of the table are filled bottom-up. A block `(k, D)` is only
//! evaluated when column `k - 1` has a nonzero entry in some fine degree
//! strictly below `D`: a minimal syzygy in degree `D` maps into the maximal
//! ideal times the previous free module, so it needs a generator of
//! smaller degree there. Blocks involving a vertex whose variables occur
//! in no generator are skipped as well, since the Koszul complex on those
//! two variables is exact in positive degree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use dashmap::DashMap;
use rayon::prelude::*;

use crate::betti::{BettiTable, Window};
use crate::field::PrimeField;
use crate::ideal::{IdealSpec, QuotientBlock};
use crate::linalg::{Echelon, SparseVec};
use crate::monomial::{x_slot, y_slot, FineDegree};

/// How multigraded Betti numbers are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// `N`: every variable has degree one.
    Standard,
    /// `N^n`: `deg x_i = deg y_i = e_i`.
    Multidegree,
    /// `N^2`: `deg x_i = (1, 0)`, `deg y_i = (0, 1)`.
    Bidegree,
    /// Both at once: the `N^n` degree together with the x-degree.
    Fine,
}

/// A multidegree key in one of the gradings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegreeKey {
    Standard(u32),
    Multidegree(Vec<u32>),
    Bidegree(u32, u32),
    Fine(FineDegree),
}

impl DegreeKey {
    pub fn total(&self) -> u32 {
        match self {
            DegreeKey::Standard(d) => *d,
            DegreeKey::Multidegree(a) => a.iter().sum(),
            DegreeKey::Bidegree(x, y) => x + y,
            DegreeKey::Fine(d) => d.total(),
        }
    }
}

/// Settings for the Koszul computation.
#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub field: PrimeField,
    /// `None` selects [`Window::for_vertices`].
    pub window: Option<Window>,
    /// Reuse ranks across `x <-> y` mirrored blocks when the ideal allows it.
    pub use_symmetry: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { field: PrimeField::default(), window: None, use_symmetry: true }
    }
}

impl OracleOptions {
    pub fn with_field(field: PrimeField) -> Self {
        OracleOptions { field, ..Self::default() }
    }

    pub fn window(mut self, window: Window) -> Self {
        self.window = Some(window);
        self
    }

    pub fn symmetry(mut self, on: bool) -> Self {
        self.use_symmetry = on;
        self
    }
}

/// Fine-graded Betti numbers of an ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultigradedBetti {
    n: usize,
    window: Window,
    truncated: bool,
    /// `(i, D) -> beta_{i,D}(I)`, nonzero entries only.
    entries: BTreeMap<(u32, FineDegree), u64>,
}

impl MultigradedBetti {
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn fine_entries(&self) -> &BTreeMap<(u32, FineDegree), u64> {
        &self.entries
    }

    /// Betti numbers collected in the requested grading.
    pub fn project(&self, grading: Grading) -> BTreeMap<(u32, DegreeKey), u64> {
        let mut out = BTreeMap::new();
        for (&(i, d), &b) in &self.entries {
            let key = match grading {
                Grading::Standard => DegreeKey::Standard(d.total()),
                Grading::Multidegree => DegreeKey::Multidegree(d.multidegree(self.n)),
                Grading::Bidegree => {
                    let (x, y) = d.bidegree();
                    DegreeKey::Bidegree(x, y)
                }
                Grading::Fine => DegreeKey::Fine(d),
            };
            *out.entry((i, key)).or_insert(0) += b;
        }
        out
    }

    /// The standard-graded table obtained by summing multidegrees.
    pub fn graded(&self) -> BettiTable {
        let mut t = BettiTable::new(self.window);
        for (&(i, d), &b) in &self.entries {
            t.add(i, d.total(), b);
        }
        t.set_truncated(self.truncated);
        t
    }
}

/// The graded Betti table of `spec` (of the ideal, not the quotient).
pub fn betti_table(spec: &IdealSpec, options: &OracleOptions) -> BettiTable {
    betti_table_multigraded(spec, options).graded()
}

/// Fine-graded Betti numbers of `spec`; project with [`MultigradedBetti::project`].
pub fn betti_table_multigraded(spec: &IdealSpec, options: &OracleOptions) -> MultigradedBetti {
    let window = options.window.unwrap_or_else(|| Window::for_vertices(spec.n()));
    let engine = Engine::new(spec, options.field, options.use_symmetry && spec.is_swap_invariant());
    let (entries, truncated) = engine.run(window);
    MultigradedBetti { n: spec.n(), window, truncated, entries }
}

/// The basis of one block `K_k(D)`: pairs `(S, u)` with `S` a `k`-set of
/// variable slots and `u` a standard monomial of degree `D - deg S`.
pub struct KoszulBlock {
    parts: Vec<(u32, Arc<QuotientBlock>, usize)>,
    lookup: HashMap<u32, usize>,
    dim: usize,
}

impl KoszulBlock {
    pub fn new(spec: &IdealSpec, field: PrimeField, k: usize, d: &FineDegree) -> Self {
        let slots: Vec<usize> =
            (1..=spec.n()).filter(|&v| d.a[v - 1] > 0).flat_map(|v| [x_slot(v), y_slot(v)]).collect();
        let mut sets = Vec::new();
        choose_slots(&slots, k, d, 0, FineDegree::zero(), &mut sets);
        let mut parts = Vec::new();
        let mut lookup = HashMap::new();
        let mut dim = 0;
        for (s, ds) in sets {
            let rest = d.checked_sub(&ds).expect("subset degree divides the block degree");
            let q = spec.quotient(field, &rest);
            if q.dim() == 0 {
                continue;
            }
            lookup.insert(s, parts.len());
            let size = q.dim();
            parts.push((s, q, dim));
            dim += size;
        }
        KoszulBlock { parts, lookup, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rows of the differential `K_k(D) -> K_{k-1}(D)` in the basis of
    /// `target`, `e_S ⊗ u ↦ Σ_{t∈S} (-1)^{#{s∈S : s<t}} e_{S∖t} ⊗ NF(z_t u)`.
    pub fn differential(&self, target: &KoszulBlock, field: PrimeField) -> Vec<SparseVec> {
        let mut rows = Vec::with_capacity(self.dim);
        for (s, q, _) in &self.parts {
            let basis = q.basis();
            for &c in q.standard() {
                let u = basis.get(c as usize);
                let mut entries = Vec::new();
                let mut rest = *s;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let smaller = s & ((1u32 << t) - 1);
                    let negative = smaller.count_ones() % 2 == 1;
                    let Some(&part) = target.lookup.get(&(s ^ (1 << t))) else { continue };
                    let (_, tq, offset) = &target.parts[part];
                    let col = tq.basis().index_of(&u.times_slot(t)).expect("product lies in the target block");
                    for &(pos, v) in tq.normal_form(col).entries() {
                        let v = if negative { field.neg(v) } else { v };
                        entries.push(((offset + pos as usize) as u32, v));
                    }
                }
                rows.push(SparseVec::from_unsorted(entries, &field));
            }
        }
        rows
    }
}

/// `k`-subsets of `slots` whose exterior degree divides `d`, as bitmasks
/// with their degrees.
fn choose_slots(slots: &[usize], k: usize, d: &FineDegree, start: usize, deg: FineDegree, out: &mut Vec<(u32, FineDegree)>) {
    choose_from(slots, k, d, start, 0, deg, out);
}

fn choose_from(
    slots: &[usize],
    k: usize,
    d: &FineDegree,
    start: usize,
    mask: u32,
    deg: FineDegree,
    out: &mut Vec<(u32, FineDegree)>,
) {
    if k == 0 {
        out.push((mask, deg));
        return;
    }
    for idx in start..slots.len() {
        if slots.len() - idx < k {
            break;
        }
        let slot = slots[idx];
        let next = deg.add(&FineDegree::of_slot(slot));
        if d.checked_sub(&next).is_none() {
            continue;
        }
        choose_from(slots, k - 1, d, idx + 1, mask | (1 << slot), next, out);
    }
}

/// Rank of the block differential `K_k(D) -> K_{k-1}(D)`.
pub fn differential_rank(spec: &IdealSpec, field: PrimeField, k: usize, d: &FineDegree) -> usize {
    if k == 0 {
        return 0;
    }
    let source = KoszulBlock::new(spec, field, k, d);
    if source.dim() == 0 {
        return 0;
    }
    let target = KoszulBlock::new(spec, field, k - 1, d);
    if target.dim() == 0 {
        return 0;
    }
    let rows = source.differential(&target, field);
    let mut e = Echelon::new(field, target.dim());
    for r in &rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Dimension, differential rank and homology of every `K_k(D)` in one block,
/// for `k = 0..=2n`. Used to audit the oracle.
pub fn block_homology(spec: &IdealSpec, field: PrimeField, d: &FineDegree) -> Vec<(usize, usize, usize)> {
    let top = 2 * spec.n();
    let dims: Vec<usize> = (0..=top + 1).map(|k| KoszulBlock::new(spec, field, k, d).dim()).collect();
    let ranks: Vec<usize> = (0..=top + 1).map(|k| differential_rank(spec, field, k, d)).collect();
    (0..=top).map(|k| (dims[k], ranks[k], dims[k] - ranks[k] - ranks[k + 1])).collect()
}

struct Engine<'a> {
    spec: &'a IdealSpec,
    field: PrimeField,
    symmetric: bool,
    ranks: DashMap<(usize, FineDegree), usize>,
    dims: DashMap<(usize, FineDegree), usize>,
}

impl<'a> Engine<'a> {
    fn new(spec: &'a IdealSpec, field: PrimeField, symmetric: bool) -> Self {
        Engine { spec, field, symmetric, ranks: DashMap::new(), dims: DashMap::new() }
    }

    fn canonical(&self, d: &FineDegree) -> FineDegree {
        if self.symmetric && 2 * d.b as u32 > d.total() {
            d.swapped()
        } else {
            *d
        }
    }

    fn rank(&self, k: usize, d: &FineDegree) -> usize {
        let key = (k, self.canonical(d));
        if let Some(r) = self.ranks.get(&key) {
            return *r;
        }
        let r = differential_rank(self.spec, self.field, k, &key.1);
        self.ranks.insert(key, r);
        r
    }

    fn dim(&self, k: usize, d: &FineDegree) -> usize {
        let key = (k, self.canonical(d));
        if let Some(r) = self.dims.get(&key) {
            return *r;
        }
        let r = KoszulBlock::new(self.spec, self.field, k, &key.1).dim();
        self.dims.insert(key, r);
        r
    }

    /// `beta_{k,D}(R/I)`.
    fn beta(&self, k: usize, d: &FineDegree) -> usize {
        let dim = self.dim(k, d);
        if dim == 0 {
            return 0;
        }
        let out = self.rank(k, d);
        if out == dim {
            return 0;
        }
        dim - out - self.rank(k + 1, d)
    }

    /// Blocks of degree `j` lying strictly above a nonzero block of the previous column.
    fn candidates(&self, below: &[FineDegree], j: u32) -> Vec<FineDegree> {
        let mask = self.spec.vertex_mask();
        let vertices: Vec<usize> = (0..self.spec.n()).filter(|&v| mask & (1 << v) != 0).collect();
        let mut set = HashSet::new();
        for base in below {
            let t = base.total();
            if t >= j || base.support() & !mask != 0 {
                continue;
            }
            let extra = j - t;
            let mut current = *base;
            spread_into(&vertices, extra, &mut current, &mut |a| {
                for db in 0..=extra {
                    set.insert(FineDegree { a: a.a, b: base.b + db as u8 });
                }
            });
        }
        let mut out: Vec<FineDegree> = set.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Fills rows of the quotient table until a zero row follows a nonzero
    /// one (beyond the generator degrees, when these are known) or the
    /// window runs out. Returns ideal-indexed entries and the truncation flag.
    fn run(&self, window: Window) -> (BTreeMap<(u32, FineDegree), u64>, bool) {
        let mut entries = BTreeMap::new();
        if self.spec.is_zero() {
            return (entries, false);
        }
        let max_gen = self.spec.max_generator_degree().unwrap_or(0);
        // supports[k]: fine degrees with beta_{k,D}(R/I) != 0 found so far
        let mut supports: Vec<Vec<FineDegree>> = vec![vec![FineDegree::zero()]];
        let mut truncated = false;
        let mut seen_nonzero_row = false;
        let mut r: u32 = 0;
        loop {
            let mut row_nonzero = false;
            let mut k = 1usize;
            while k <= supports.len() {
                let j = k as u32 + r;
                let cands = self.candidates(&supports[k - 1], j);
                if !cands.is_empty() {
                    if k as u32 > window.i_max + 1 || j > window.j_max {
                        truncated = true;
                    } else {
                        let mut canon: Vec<FineDegree> = cands.iter().map(|d| self.canonical(d)).collect();
                        canon.sort_unstable();
                        canon.dedup();
                        let values: HashMap<FineDegree, usize> =
                            canon.par_iter().map(|d| (*d, self.beta(k, d))).collect();
                        for d in cands {
                            let b = values[&self.canonical(&d)];
                            if b > 0 {
                                if supports.len() == k {
                                    supports.push(Vec::new());
                                }
                                supports[k].push(d);
                                entries.insert((k as u32 - 1, d), b as u64);
                                row_nonzero = true;
                            }
                        }
                    }
                }
                k += 1;
            }
            if row_nonzero {
                seen_nonzero_row = true;
            } else if seen_nonzero_row && r >= max_gen {
                break;
            }
            r += 1;
            if r + 1 > window.j_max {
                // rows beyond the window were never examined
                truncated = true;
                break;
            }
        }
        (entries, truncated)
    }
}

fn spread_into(vertices: &[usize], left: u32, current: &mut FineDegree, emit: &mut dyn FnMut(&FineDegree)) {
    match vertices.split_first() {
        None => {
            if left == 0 {
                emit(current);
            }
        }
        Some((&v, rest)) => {
            let base = current.a[v];
            for e in 0..=left {
                current.a[v] = base + e as u8;
                spread_into(rest, left - e, current, emit);
            }
            current.a[v] = base;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::monomial::{fine_degrees_of_degree, Monomial, Polynomial};

    fn table(g: &Graph) -> BettiTable {
        betti_table(&IdealSpec::edge_ideal(g), &OracleOptions::default())
    }

    #[test]
    fn single_edge_is_principal() {
        let t = table(&Graph::path(2).unwrap());
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 2), 1)]);
        assert!(!t.is_truncated());
    }

    #[test]
    fn triangle() {
        let t = table(&Graph::complete(3).unwrap());
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 2), 3), ((1, 3), 2)]);
    }

    #[test]
    fn edgeless_graph_gives_empty_table() {
        let t = table(&Graph::edgeless(4).unwrap());
        assert!(t.is_empty());
        assert!(!t.is_truncated());
    }

    #[test]
    fn small_window_reports_truncation() {
        let spec = IdealSpec::edge_ideal(&Graph::complete(4).unwrap());
        let t = betti_table(&spec, &OracleOptions::default().window(Window::new(1, 8)));
        assert!(t.is_truncated());
        assert_eq!(t.get(0, 2), 6);
        assert_eq!(t.get(1, 3), 8);
        assert_eq!(t.get(2, 4), 0);
    }

    #[test]
    fn monomial_ideal_without_symmetry() {
        // <x1*y2> is a principal ideal that is not swap invariant
        let m = Polynomial::monomial(Monomial::x(1).mul(&Monomial::y(2)));
        let spec = IdealSpec::generators(2, vec![m]).unwrap();
        let t = betti_table(&spec, &OracleOptions::default());
        assert_eq!(t.entries().collect::<Vec<_>>(), vec![((0, 2), 1)]);
    }

    #[test]
    fn triangle_multigraded() {
        let spec = IdealSpec::edge_ideal(&Graph::complete(3).unwrap());
        let m = betti_table_multigraded(&spec, &OracleOptions::default());
        let nn = m.project(Grading::Multidegree);
        assert_eq!(nn.get(&(1, DegreeKey::Multidegree(vec![1, 1, 1]))), Some(&2));
        assert_eq!(nn.keys().filter(|k| k.0 == 1).count(), 1);
        let edge = betti_table_multigraded(&IdealSpec::edge_ideal(&Graph::path(2).unwrap()), &OracleOptions::default());
        let proj = edge.project(Grading::Multidegree);
        assert_eq!(proj.into_iter().collect::<Vec<_>>(), vec![((0, DegreeKey::Multidegree(vec![1, 1])), 1)]);
    }

    #[test]
    fn differentials_compose_to_zero() {
        let field = PrimeField::default();
        let g = Graph::new(4, [(1, 2), (2, 3), (1, 3), (3, 4)]).unwrap();
        let spec = IdealSpec::edge_ideal(&g);
        for total in 2..=5 {
            for d in fine_degrees_of_degree(0b1111, total) {
                for k in 2..=6usize {
                    let top = KoszulBlock::new(&spec, field, k, &d);
                    let mid = KoszulBlock::new(&spec, field, k - 1, &d);
                    let low = KoszulBlock::new(&spec, field, k - 2, &d);
                    if top.dim() == 0 || mid.dim() == 0 || low.dim() == 0 {
                        continue;
                    }
                    let d1 = top.differential(&mid, field);
                    let d2 = mid.differential(&low, field);
                    for row in &d1 {
                        let mut acc = SparseVec::new();
                        for &(c, v) in row.entries() {
                            acc = acc.add_scaled(v, &d2[c as usize], &field);
                        }
                        assert!(acc.is_zero(), "d∘d != 0 at k={k}, D={d:?}");
                    }
                }
            }
        }
    }
}
