//! Homogeneous ideals of `R = k[x_1..x_n, y_1..y_n]` presented piece by piece.
//!
//! Every ideal handled here is homogeneous for the fine grading (the `N^n`
//! multidegree together with the x-degree), so `I_d` is the direct sum of
//! its fine blocks `I_D`, and all computation happens block by block.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::{Edge, Graph, MAX_VERTICES};
use crate::linalg::{left_kernel, GradedSubspace, SparseVec};
use crate::monomial::{degree_basis, fine_basis, fine_degrees_of_degree, FineDegree, MonomialBasis, Polynomial, SLOTS};

const NOT_STANDARD: u32 = u32::MAX;

#[derive(Debug)]
enum Kind {
    Generators(Vec<Polynomial>),
    Intersection(IdealSpec, IdealSpec),
    Colon(IdealSpec, Polynomial),
}

#[derive(Debug)]
struct Node {
    n: usize,
    kind: Kind,
    vertex_mask: u32,
    swap_invariant: bool,
    is_zero: bool,
    generator_degrees: Vec<FineDegree>,
    blocks: DashMap<(u32, FineDegree), Arc<GradedSubspace>>,
    quotients: DashMap<(u32, FineDegree), Arc<QuotientBlock>>,
}

/// A homogeneous ideal given by generators, as an intersection of two
/// ideals, or as a colon ideal `I : f`. Cloning shares the block memo.
#[derive(Clone, Debug)]
pub struct IdealSpec(Arc<Node>);

/// The quotient `(R/I)_D` of one fine block: its standard monomials and
/// the normal form of every monomial of the block in terms of them.
#[derive(Debug)]
pub struct QuotientBlock {
    basis: Arc<MonomialBasis>,
    standard: Vec<u32>,
    position: Vec<u32>,
    forms: Vec<SparseVec>,
}

impl QuotientBlock {
    fn new(ideal: &GradedSubspace) -> Self {
        let basis = ideal.basis().clone();
        let m = basis.len();
        let mut is_pivot = vec![false; m];
        for &p in ideal.pivots() {
            is_pivot[p as usize] = true;
        }
        let mut position = vec![NOT_STANDARD; m];
        let mut standard = Vec::new();
        for c in 0..m {
            if !is_pivot[c] {
                position[c] = standard.len() as u32;
                standard.push(c as u32);
            }
        }
        let field = ideal.field();
        let mut forms: Vec<SparseVec> =
            (0..m).map(|c| if is_pivot[c] { SparseVec::new() } else { SparseVec::from_sorted(vec![(position[c], 1)]) }).collect();
        for (row, &p) in ideal.rows().iter().zip(ideal.pivots()) {
            // basis[p] = -(rest of the row) modulo I
            let entries = row.entries()[1..].iter().map(|&(c, v)| (position[c as usize], field.neg(v))).collect();
            forms[p as usize] = SparseVec::from_sorted(entries);
        }
        QuotientBlock { basis, standard, position, forms }
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    /// `dim (R/I)_D`.
    pub fn dim(&self) -> usize {
        self.standard.len()
    }

    /// Basis indices of the standard monomials, in basis order.
    pub fn standard(&self) -> &[u32] {
        &self.standard
    }

    /// Position among the standard monomials of basis index `c`, if standard.
    pub fn standard_position(&self, c: usize) -> Option<usize> {
        let p = self.position[c];
        (p != NOT_STANDARD).then_some(p as usize)
    }

    /// Normal form of the basis monomial with index `c`, in standard coordinates.
    pub fn normal_form(&self, c: usize) -> &SparseVec {
        &self.forms[c]
    }
}

impl IdealSpec {
    fn build(n: usize, kind: Kind) -> Self {
        let (vertex_mask, swap_invariant, is_zero, generator_degrees) = match &kind {
            Kind::Generators(gens) => {
                let mask = gens.iter().fold(0, |m, g| m | g.vertex_mask());
                let inv = gens.iter().all(|g| {
                    let s = g.swap_xy();
                    gens.iter().any(|h| *h == s || *h == s.scale(-1))
                });
                let mut degs: Vec<FineDegree> = gens.iter().filter_map(Polynomial::fine_degree).collect();
                degs.sort_unstable();
                degs.dedup();
                (mask, inv, gens.is_empty(), degs)
            }
            Kind::Intersection(a, b) => (
                a.0.vertex_mask | b.0.vertex_mask,
                a.0.swap_invariant && b.0.swap_invariant,
                a.0.is_zero || b.0.is_zero,
                Vec::new(),
            ),
            Kind::Colon(i, f) => {
                let s = f.swap_xy();
                (i.0.vertex_mask | f.vertex_mask(), i.0.swap_invariant && (s == *f || s == f.scale(-1)), i.0.is_zero, Vec::new())
            }
        };
        IdealSpec(Arc::new(Node {
            n,
            kind,
            vertex_mask,
            swap_invariant,
            is_zero,
            generator_degrees,
            blocks: DashMap::new(),
            quotients: DashMap::new(),
        }))
    }

    fn check_ring(n: usize) -> Result<()> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::input(format!("ring size must be in 1..={MAX_VERTICES}")));
        }
        Ok(())
    }

    /// The ideal generated by `gens`. Each generator must be nonzero and
    /// homogeneous for the fine grading, and only use vertices `1..=n`.
    pub fn generators(n: usize, gens: Vec<Polynomial>) -> Result<Self> {
        Self::check_ring(n)?;
        let outside = !((1u32 << n) - 1);
        for g in &gens {
            if g.fine_degree().is_none() {
                return Err(Error::input(format!("generator {g} is not homogeneous in the N^n x N grading")));
            }
            if g.degree() == Some(0) {
                return Err(Error::input("constant generators are not supported"));
            }
            if g.vertex_mask() & outside != 0 {
                return Err(Error::input(format!("generator {g} uses variables beyond vertex {n}")));
            }
        }
        Ok(Self::build(n, Kind::Generators(gens)))
    }

    /// `J_G`, generated by the edge binomials in edge order.
    pub fn edge_ideal(g: &Graph) -> Self {
        Self::edge_ideal_of(g.vertex_count(), g.edges())
    }

    /// The ideal generated by the binomials of `edges` inside the ring for `n` vertices.
    pub fn edge_ideal_of(n: usize, edges: &[Edge]) -> Self {
        let gens = edges.iter().map(|e| Polynomial::edge_binomial(e.u(), e.v())).collect();
        Self::build(n, Kind::Generators(gens))
    }

    pub fn intersection(a: &IdealSpec, b: &IdealSpec) -> Result<Self> {
        if a.n() != b.n() {
            return Err(Error::input("intersected ideals live in different rings"));
        }
        Ok(Self::build(a.n(), Kind::Intersection(a.clone(), b.clone())))
    }

    /// `I : <f>` for a fine-homogeneous quadric `f`.
    pub fn colon(i: &IdealSpec, f: Polynomial) -> Result<Self> {
        if f.fine_degree().is_none() || f.degree() != Some(2) {
            return Err(Error::input("colon ideals are supported for homogeneous quadrics only"));
        }
        if f.vertex_mask() & !((1u32 << i.n()) - 1) != 0 {
            return Err(Error::input("divisor uses variables outside the ring"));
        }
        Ok(Self::build(i.n(), Kind::Colon(i.clone(), f)))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Vertices whose variables occur in some generator of a constituent.
    pub fn vertex_mask(&self) -> u32 {
        self.0.vertex_mask
    }

    /// Whether exchanging every `x_v` with `y_v` maps the ideal to itself.
    pub fn is_swap_invariant(&self) -> bool {
        self.0.swap_invariant
    }

    /// Whether the ideal is the zero ideal by construction.
    pub fn is_zero(&self) -> bool {
        self.0.is_zero
    }

    /// The generator list, for ideals given by generators.
    pub fn generator_list(&self) -> Option<&[Polynomial]> {
        match &self.0.kind {
            Kind::Generators(g) => Some(g),
            _ => None,
        }
    }

    /// Largest standard degree of a listed generator.
    pub fn max_generator_degree(&self) -> Option<u32> {
        match &self.0.kind {
            Kind::Generators(_) => self.0.generator_degrees.iter().map(FineDegree::total).max(),
            _ => None,
        }
    }

    pub fn ptr_eq(&self, other: &IdealSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// The fine block `I_D`.
    pub fn block(&self, field: PrimeField, d: &FineDegree) -> Arc<GradedSubspace> {
        let key = (field.modulus(), *d);
        if let Some(b) = self.0.blocks.get(&key) {
            return b.clone();
        }
        let computed = Arc::new(self.compute_block(field, d));
        self.0.blocks.entry(key).or_insert(computed).clone()
    }

    fn compute_block(&self, field: PrimeField, d: &FineDegree) -> GradedSubspace {
        let basis = fine_basis(d);
        if self.0.is_zero || d.support() & !self.0.vertex_mask == d.support() {
            return GradedSubspace::zero(field, basis);
        }
        match &self.0.kind {
            Kind::Generators(gens) => {
                if !self.0.generator_degrees.iter().any(|g| d.checked_sub(g).is_some()) {
                    return GradedSubspace::zero(field, basis);
                }
                let mut rows = self.multiple_rows(field, d, &basis);
                for g in gens {
                    if g.fine_degree() == Some(*d) {
                        rows.push(g.to_row(&basis, &field).expect("generator lies in its own block"));
                    }
                }
                GradedSubspace::span_reduce(field, basis, &rows)
            }
            Kind::Intersection(a, b) => {
                a.block(field, d).intersect(&b.block(field, d)).expect("blocks share a basis")
            }
            Kind::Colon(i, f) => {
                let fd = f.fine_degree().expect("checked on construction");
                let target = i.quotient(field, &d.add(&fd));
                let rows: Vec<SparseVec> = basis
                    .monomials()
                    .iter()
                    .map(|m| {
                        let mut acc = Vec::new();
                        for (t, c) in f.terms() {
                            let col = target.basis().index_of(&m.mul(t)).expect("product lies in the shifted block");
                            let c = field.from_i64(*c);
                            for &(s, v) in target.normal_form(col).entries() {
                                acc.push((s, field.mul(c, v)));
                            }
                        }
                        SparseVec::from_unsorted(acc, &field)
                    })
                    .collect();
                let kernel = left_kernel(field, target.dim(), &rows);
                GradedSubspace::span_reduce(field, basis, &kernel)
            }
        }
    }

    /// Rows of `z_t * I_{D - deg z_t}` over all variables `z_t`, in the basis of block `D`.
    fn multiple_rows(&self, field: PrimeField, d: &FineDegree, basis: &MonomialBasis) -> Vec<SparseVec> {
        let mut rows = Vec::new();
        for slot in 0..SLOTS {
            let Some(lower) = d.checked_sub(&FineDegree::of_slot(slot)) else { continue };
            let block = self.block(field, &lower);
            let lb = block.basis();
            for r in block.rows() {
                let entries = r
                    .entries()
                    .iter()
                    .map(|&(c, v)| (basis.index_of(&lb.get(c as usize).times_slot(slot)).unwrap() as u32, v))
                    .collect();
                rows.push(SparseVec::from_unsorted(entries, &field));
            }
        }
        rows
    }

    /// `(R/I)_D` with normal forms.
    pub fn quotient(&self, field: PrimeField, d: &FineDegree) -> Arc<QuotientBlock> {
        let key = (field.modulus(), *d);
        if let Some(q) = self.0.quotients.get(&key) {
            return q.clone();
        }
        let computed = Arc::new(QuotientBlock::new(&self.block(field, d)));
        self.0.quotients.entry(key).or_insert(computed).clone()
    }

    /// The degree-`d` piece `I_d` over the full monomial basis of `R_d`.
    pub fn slice(&self, field: PrimeField, d: u32) -> GradedSubspace {
        let n = self.n();
        let basis = degree_basis(n, d);
        let mut rows = Vec::new();
        for fd in fine_degrees_of_degree((1 << n) - 1, d) {
            let block = self.block(field, &fd);
            let bb = block.basis();
            for r in block.rows() {
                let entries =
                    r.entries().iter().map(|&(c, v)| (basis.index_of(&bb.get(c as usize)).unwrap() as u32, v)).collect();
                rows.push(SparseVec::from_unsorted(entries, &field));
            }
        }
        // blocks occupy disjoint columns, so sorting by pivot keeps the form reduced
        rows.sort_unstable_by_key(|r| r.leading());
        GradedSubspace::from_rref(field, basis, rows)
    }

    /// Number of minimal generators of `I` in each degree `<= d_max`,
    /// computed as `dim I_d - dim (R_1 I_{d-1})` block by block.
    pub fn minimal_generator_profile(&self, field: PrimeField, d_max: u32) -> BTreeMap<u32, usize> {
        let mut profile = BTreeMap::new();
        for d in 1..=d_max {
            let mut count = 0;
            for fd in fine_degrees_of_degree(self.vertex_mask(), d) {
                let block = self.block(field, &fd);
                if block.is_zero() {
                    continue;
                }
                let rows = self.multiple_rows(field, &fd, block.basis());
                let below = crate::linalg::rank(field, block.ambient_dim(), &rows);
                count += block.dim() - below;
            }
            if count > 0 {
                profile.insert(d, count);
            }
        }
        profile
    }
}

/// Checks, block by block in every degree up to `d_max`, that
/// `J_G : <f_e> = J_{G_e}` for a non-edge `e` that is a cut edge of `G ∪ {e}`.
pub fn verify_colon_completion(g: &Graph, e: &Edge, d_max: u32, field: PrimeField) -> Result<bool> {
    if g.contains_edge(e) {
        return Err(Error::input(format!("{e} is already an edge")));
    }
    let with = g.add_edge(e)?;
    if !with.is_cut_edge(e) {
        return Err(Error::hypothesis(format!("{e} is not a cut edge of G with the edge added")));
    }
    let colon = IdealSpec::colon(&IdealSpec::edge_ideal(g), Polynomial::edge_binomial(e.u(), e.v()))?;
    let completion = IdealSpec::edge_ideal(&g.completion_along_edge(e)?);
    let all = (1u32 << g.vertex_count()) - 1;
    for d in 0..=d_max {
        for fd in fine_degrees_of_degree(all, d) {
            if colon.block(field, &fd) != completion.block(field, &fd) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use proptest::prelude::*;

    fn field() -> PrimeField {
        PrimeField::default()
    }

    fn running_example() -> Graph {
        Graph::new(7, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 4), (2, 5), (2, 7), (3, 7), (4, 5), (6, 7)]).unwrap()
    }

    #[test]
    fn single_edge_slices() {
        let j = IdealSpec::edge_ideal(&Graph::path(2).unwrap());
        assert_eq!(j.slice(field(), 2).dim(), 1);
        assert_eq!(j.slice(field(), 3).dim(), 4);
        assert_eq!(j.slice(field(), 1).dim(), 0);
    }

    #[test]
    fn running_example_generators() {
        let j = IdealSpec::edge_ideal(&running_example());
        assert_eq!(j.generator_list().unwrap().len(), 11);
        assert_eq!(j.slice(field(), 2).dim(), 11);
        assert_eq!(j.minimal_generator_profile(field(), 4), BTreeMap::from([(2, 11)]));
    }

    #[test]
    fn zero_ideal() {
        let z = IdealSpec::edge_ideal(&Graph::edgeless(3).unwrap());
        assert!(z.is_zero());
        for d in 0..4 {
            assert_eq!(z.slice(field(), d).dim(), 0);
        }
        assert!(z.minimal_generator_profile(field(), 4).is_empty());
    }

    #[test]
    fn running_example_intersection() {
        let g = running_example();
        let (g1, g2) = g.s_partition_subgraphs(1).unwrap();
        let meet = IdealSpec::intersection(&IdealSpec::edge_ideal(&g1), &IdealSpec::edge_ideal(&g2)).unwrap();
        assert_eq!(meet.slice(field(), 2).dim(), 0);
        assert_eq!(meet.slice(field(), 3).dim(), 10);
        assert_eq!(meet.minimal_generator_profile(field(), 4), BTreeMap::from([(3, 10), (4, 5)]));
    }

    #[test]
    fn colon_of_star_minus_edge() {
        let e = Edge::new(1, 4).unwrap();
        let h = Graph::star(4).unwrap().delete_edge(&e).unwrap();
        let colon = IdealSpec::colon(&IdealSpec::edge_ideal(&h), Polynomial::edge_binomial(1, 4)).unwrap();
        assert_eq!(colon.slice(field(), 2).dim(), 3);
        assert!(verify_colon_completion(&h, &e, 4, field()).unwrap());
    }

    #[test]
    fn colon_completion_on_path() {
        // path 1-2-3 viewed as a tree minus the pendant edge {3,4}
        let h = Graph::new(4, [(1, 2), (2, 3)]).unwrap();
        assert!(verify_colon_completion(&h, &Edge::new(3, 4).unwrap(), 6, field()).unwrap());
        let c4_minus = Graph::path(4).unwrap();
        assert!(matches!(
            verify_colon_completion(&c4_minus, &Edge::new(1, 4).unwrap(), 3, field()),
            Err(Error::Hypothesis(_))
        ));
        assert!(verify_colon_completion(&c4_minus, &Edge::new(1, 2).unwrap(), 3, field()).is_err());
    }

    #[test]
    fn rejects_inhomogeneous_generators() {
        let bad = Polynomial::from_terms([(Monomial::x(1).mul(&Monomial::y(2)), 1), (Monomial::x(1).mul(&Monomial::x(2)), 1)]);
        assert!(IdealSpec::generators(2, vec![bad]).is_err());
        assert!(IdealSpec::generators(2, vec![Polynomial::edge_binomial(1, 3)]).is_err());
    }

    #[test]
    fn swap_invariance_flags() {
        let j = IdealSpec::edge_ideal(&running_example());
        assert!(j.is_swap_invariant());
        let m = IdealSpec::generators(2, vec![Polynomial::monomial(Monomial::x(1).mul(&Monomial::y(2)))]).unwrap();
        assert!(!m.is_swap_invariant());
    }

    fn small_graph() -> impl Strategy<Value = Graph> {
        (2usize..=5).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
            proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |es| Graph::new(n, es).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ideal_property_holds(g in small_graph(), s in 1usize..=5) {
            let j = IdealSpec::edge_ideal(&g);
            let s = s.min(g.vertex_count());
            let specs = if g.degree(s) > 0 {
                let (g1, g2) = g.s_partition_subgraphs(s).unwrap();
                vec![j.clone(), IdealSpec::intersection(&IdealSpec::edge_ideal(&g1), &IdealSpec::edge_ideal(&g2)).unwrap()]
            } else {
                vec![j]
            };
            for spec in specs {
                for d in 1..=3u32 {
                    let lower = spec.slice(field(), d);
                    let upper = spec.slice(field(), d + 1);
                    let basis = upper.basis().clone();
                    for row in lower.rows() {
                        for slot in (1..=g.vertex_count()).flat_map(|v| [crate::monomial::x_slot(v), crate::monomial::y_slot(v)]) {
                            let entries = row.entries().iter()
                                .map(|&(c, v)| (basis.index_of(&lower.basis().get(c as usize).times_slot(slot)).unwrap() as u32, v))
                                .collect();
                            let moved = SparseVec::from_unsorted(entries, &field());
                            prop_assert!(upper.contains(&moved).unwrap());
                        }
                    }
                }
            }
        }

        #[test]
        fn edge_ideal_slices_are_swap_invariant(g in small_graph()) {
            let j = IdealSpec::edge_ideal(&g);
            for d in 2..=3u32 {
                let s = j.slice(field(), d);
                let basis = s.basis().clone();
                let swapped: Vec<SparseVec> = s.rows().iter().map(|r| {
                    let entries = r.entries().iter()
                        .map(|&(c, v)| (basis.index_of(&basis.get(c as usize).swap_xy()).unwrap() as u32, v))
                        .collect();
                    SparseVec::from_unsorted(entries, &field())
                }).collect();
                prop_assert_eq!(GradedSubspace::span_reduce(field(), basis.clone(), &swapped), s);
            }
        }

        #[test]
        fn intersections_commute(g in small_graph(), s in 1usize..=5) {
            let s = s.min(g.vertex_count());
            prop_assume!(g.degree(s) > 0);
            let (g1, g2) = g.s_partition_subgraphs(s).unwrap();
            let (a, b) = (IdealSpec::edge_ideal(&g1), IdealSpec::edge_ideal(&g2));
            let ab = IdealSpec::intersection(&a, &b).unwrap();
            let ba = IdealSpec::intersection(&b, &a).unwrap();
            for d in 2..=4u32 {
                prop_assert_eq!(ab.slice(field(), d), ba.slice(field(), d));
            }
        }
    }
}
