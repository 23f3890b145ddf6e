//! Exact linear algebra over a prime field: sparse rows, incremental
//! echelon forms, reduced bases of subspaces, intersections and kernels.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{MonomialBasis, Polynomial};

const NO_PIVOT: u32 = u32::MAX;

/// A sparse row: `(column, value)` pairs with strictly increasing columns
/// and nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(u32, u32)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    /// Wraps entries already sorted by column with nonzero values.
    pub fn from_sorted(entries: Vec<(u32, u32)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| e.1 != 0));
        SparseVec(entries)
    }

    /// Sorts, merges repeated columns and drops zeros.
    pub fn from_unsorted(mut entries: Vec<(u32, u32)>, field: &PrimeField) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = field.add(last.1, v),
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        SparseVec(out)
    }

    pub fn from_dense(values: &[u32]) -> Self {
        SparseVec(values.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect())
    }

    pub fn to_dense(&self, ncols: usize) -> Vec<u32> {
        let mut out = vec![0; ncols];
        for &(c, v) in &self.0 {
            out[c as usize] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> Option<u32> {
        self.0.first().map(|e| e.0)
    }

    pub fn get(&self, col: u32) -> u32 {
        match self.0.binary_search_by_key(&col, |e| e.0) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn scale(&self, c: u32, field: &PrimeField) -> SparseVec {
        if c == 0 {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|&(col, v)| (col, field.mul(v, c))).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: u32, other: &SparseVec, field: &PrimeField) -> SparseVec {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let a = self.0.get(i).copied();
            let b = other.0.get(j).copied();
            match (a, b) {
                (Some(a), Some(b)) if a.0 == b.0 => {
                    let v = field.add(a.1, field.mul(c, b.1));
                    if v != 0 {
                        out.push((a.0, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a.0 < b.0 => {
                    out.push(a);
                    i += 1;
                }
                (Some(a), None) => {
                    out.push(a);
                    i += 1;
                }
                (_, Some(b)) => {
                    let v = field.mul(c, b.1);
                    if v != 0 {
                        out.push((b.0, v));
                    }
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        SparseVec(out)
    }

    pub fn sub(&self, other: &SparseVec, field: &PrimeField) -> SparseVec {
        self.add_scaled(field.neg(1), other, field)
    }

    /// Entries with column in `range`, shifted down by `range.start`.
    pub fn restrict(&self, start: u32, end: u32) -> SparseVec {
        SparseVec(self.0.iter().filter(|e| e.0 >= start && e.0 < end).map(|&(c, v)| (c - start, v)).collect())
    }

    /// Concatenates `self` (columns `0..offset`) with `other` shifted by `offset`.
    pub fn concat(&self, offset: u32, other: &SparseVec) -> SparseVec {
        let mut out = self.0.clone();
        out.extend(other.0.iter().map(|&(c, v)| (c + offset, v)));
        SparseVec(out)
    }

    /// Inner product.
    pub fn dot(&self, other: &SparseVec, field: &PrimeField) -> u32 {
        let (mut i, mut j, mut acc) = (0, 0, 0u32);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = field.add(acc, field.mul(self.0[i].1, other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Incremental row echelon form. Inserted rows are reduced against the
/// current pivots with a dense accumulator; stored rows have leading
/// coefficient 1 and are zero in every earlier pivot column they met.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: PrimeField,
    ncols: usize,
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
    scratch: Vec<u32>,
}

impl Echelon {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Echelon { field, ncols, rows: Vec::new(), pivot_row: vec![NO_PIVOT; ncols], scratch: vec![0; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Reduces `v` against the stored pivots without inserting it.
    pub fn reduce(&mut self, v: &SparseVec) -> SparseVec {
        let Some(first) = v.leading() else {
            return SparseVec::new();
        };
        let f = self.field;
        let p = f.modulus();
        for &(c, val) in v.entries() {
            self.scratch[c as usize] = val;
        }
        let last = v.entries().last().unwrap().0 as usize;
        let mut hi = last;
        let mut out = Vec::new();
        let mut c = first as usize;
        while c <= hi {
            let val = self.scratch[c];
            if val != 0 {
                let r = self.pivot_row[c];
                if r == NO_PIVOT {
                    out.push((c as u32, val));
                } else {
                    let factor = p - val;
                    let row = &self.rows[r as usize];
                    for &(cc, vv) in &row.0[1..] {
                        let cc = cc as usize;
                        let s = &mut self.scratch[cc];
                        *s = ((*s as u64 + factor as u64 * vv as u64) % p as u64) as u32;
                        if cc > hi {
                            hi = cc;
                        }
                    }
                }
                self.scratch[c] = 0;
            }
            c += 1;
        }
        SparseVec(out)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        if self.is_full() {
            return false;
        }
        let r = self.reduce(v);
        self.push_reduced(r)
    }

    fn push_reduced(&mut self, r: SparseVec) -> bool {
        let Some(lead) = r.leading() else {
            return false;
        };
        let inv = self.field.inv(r.0[0].1);
        let r = r.scale(inv, &self.field);
        self.pivot_row[lead as usize] = self.rows.len() as u32;
        self.rows.push(r);
        true
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.rows.iter().map(|r| r.0[0].0).collect();
        p.sort_unstable();
        p
    }

    /// Finishes to reduced row echelon form, rows sorted by pivot.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let field = self.field;
        let mut rows = self.rows;
        rows.sort_unstable_by_key(|r| r.0[0].0);
        let mut pivot_index = vec![NO_PIVOT; self.ncols];
        for (k, r) in rows.iter().enumerate() {
            pivot_index[r.0[0].0 as usize] = k as u32;
        }
        // back-substitution from the bottom row up: later rows are already reduced
        for k in (0..rows.len()).rev() {
            let mut row = rows[k].clone();
            loop {
                let hit = row.0[1..].iter().find(|e| pivot_index[e.0 as usize] != NO_PIVOT).copied();
                match hit {
                    Some((c, v)) => {
                        let other = &rows[pivot_index[c as usize] as usize];
                        row = row.add_scaled(field.neg(v), other, &field);
                    }
                    None => break,
                }
            }
            rows[k] = row;
        }
        rows
    }
}

/// Rank of a list of rows with `ncols` columns.
pub fn rank(field: PrimeField, ncols: usize, rows: &[SparseVec]) -> usize {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

/// Reduced row echelon basis of the span of `rows`.
pub fn rref(field: PrimeField, ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

/// Basis of the left kernel `{c : sum_k c_k rows[k] = 0}`.
pub fn left_kernel(field: PrimeField, ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    let m = rows.len() as u32;
    let mut e = Echelon::new(field, ncols + rows.len());
    let mut kernel = Vec::new();
    for (k, r) in rows.iter().enumerate() {
        let aug = r.concat(ncols as u32, &SparseVec(vec![(k as u32, 1)]));
        let red = e.reduce(&aug);
        match red.leading() {
            Some(c) if (c as usize) < ncols => {
                e.push_reduced(red);
            }
            Some(_) => kernel.push(red.restrict(ncols as u32, ncols as u32 + m)),
            None => unreachable!("identity block keeps augmented rows independent"),
        }
    }
    kernel
}

/// A subspace of the span of a monomial basis, held in reduced row echelon
/// form. Columns follow the basis order, so pivots are leading monomials.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    field: PrimeField,
    basis: Arc<MonomialBasis>,
    rows: Vec<SparseVec>,
    pivots: Vec<u32>,
}

impl PartialEq for GradedSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.basis.key() == other.basis.key() && self.rows == other.rows
    }
}

impl Eq for GradedSubspace {}

impl GradedSubspace {
    pub fn zero(field: PrimeField, basis: Arc<MonomialBasis>) -> Self {
        GradedSubspace { field, basis, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Wraps rows already in reduced row echelon form.
    pub(crate) fn from_rref(field: PrimeField, basis: Arc<MonomialBasis>, rows: Vec<SparseVec>) -> Self {
        let pivots = rows.iter().map(|r| r.0[0].0).collect();
        GradedSubspace { field, basis, rows, pivots }
    }

    /// Reduced basis of the span of `vectors`, all indexed by `basis`.
    pub fn span_reduce(field: PrimeField, basis: Arc<MonomialBasis>, vectors: &[SparseVec]) -> Self {
        let rows = rref(field, basis.len(), vectors);
        Self::from_rref(field, basis, rows)
    }

    /// Span of polynomials whose terms all lie in `basis`.
    pub fn span_polynomials(field: PrimeField, basis: Arc<MonomialBasis>, polys: &[Polynomial]) -> Result<Self> {
        let rows = polys
            .iter()
            .map(|p| p.to_row(&basis, &field).ok_or(Error::BasisMismatch))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::span_reduce(field, basis, &rows))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[u32] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn check_compatible(&self, other: &GradedSubspace) -> Result<()> {
        if self.basis.key() != other.basis.key() || self.field != other.field {
            Err(Error::BasisMismatch)
        } else {
            Ok(())
        }
    }

    /// The unique representative of `v + W` vanishing on every pivot column.
    pub fn normal_form(&self, v: &SparseVec) -> Result<SparseVec> {
        if v.entries().last().is_some_and(|e| e.0 as usize >= self.basis.len()) {
            return Err(Error::BasisMismatch);
        }
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out.get(p);
            if c != 0 {
                out = out.add_scaled(self.field.neg(c), row, &self.field);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    pub fn contains_subspace(&self, other: &GradedSubspace) -> Result<bool> {
        self.check_compatible(other)?;
        for r in &other.rows {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &GradedSubspace) -> Result<GradedSubspace> {
        self.check_compatible(other)?;
        let rows: Vec<SparseVec> = self.rows.iter().chain(other.rows.iter()).cloned().collect();
        Ok(Self::span_reduce(self.field, self.basis.clone(), &rows))
    }

    /// `A ∩ B` by the Zassenhaus construction: reduce the rows `[a | a]`
    /// and `[b | 0]`; rows whose left half vanishes span the intersection.
    pub fn intersect(&self, other: &GradedSubspace) -> Result<GradedSubspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field, self.basis.clone()));
        }
        let m = self.basis.len() as u32;
        let mut e = Echelon::new(self.field, 2 * m as usize);
        for a in &self.rows {
            e.insert(&a.concat(m, a));
        }
        let mut meet = Vec::new();
        for b in &other.rows {
            let red = e.reduce(b);
            match red.leading() {
                Some(c) if c < m => {
                    e.push_reduced(red);
                }
                Some(_) => meet.push(red.restrict(m, 2 * m)),
                None => {}
            }
        }
        Ok(Self::span_reduce(self.field, self.basis.clone(), &meet))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{degree_basis, Monomial, Polynomial};
    use proptest::prelude::*;

    fn f() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn span_reduce_examples() {
        let basis = degree_basis(2, 2);
        let g = Polynomial::edge_binomial(1, 2);
        let row = g.to_row(&basis, &f()).unwrap();
        let s = GradedSubspace::span_reduce(f(), basis.clone(), &[row.clone(), row.clone()]);
        assert_eq!(s.dim(), 1);

        let basis3 = degree_basis(2, 3);
        let vars = [Monomial::x(1), Monomial::x(2), Monomial::y(1), Monomial::y(2)];
        let polys: Vec<Polynomial> = vars.iter().map(|m| g.times_monomial(m)).collect();
        let s = GradedSubspace::span_polynomials(f(), basis3.clone(), &polys).unwrap();
        assert_eq!(basis3.len(), 20);
        assert_eq!(s.dim(), 4);
    }

    #[test]
    fn normal_form_examples() {
        let basis = degree_basis(2, 2);
        let g = Polynomial::edge_binomial(1, 2);
        let w = GradedSubspace::span_polynomials(f(), basis.clone(), std::slice::from_ref(&g)).unwrap();
        let x1y2 = Monomial::x(1).mul(&Monomial::y(2));
        let x2y1 = Monomial::x(2).mul(&Monomial::y(1));
        // x2*y1 leads, so it is the pivot and x1*y2 is standard
        let v = Polynomial::monomial(x2y1).to_row(&basis, &f()).unwrap();
        let nf = w.normal_form(&v).unwrap();
        assert_eq!(nf, Polynomial::monomial(x1y2).to_row(&basis, &f()).unwrap());
        let u = Polynomial::monomial(x1y2).to_row(&basis, &f()).unwrap();
        assert_eq!(w.normal_form(&u).unwrap(), u);
        assert!(w.normal_form(&g.to_row(&basis, &f()).unwrap()).unwrap().is_zero());
        let zero = GradedSubspace::zero(f(), basis.clone());
        assert_eq!(zero.normal_form(&v).unwrap(), v);
    }

    #[test]
    fn intersection_examples() {
        let basis = degree_basis(1, 2);
        let e = |k: usize| SparseVec::from_dense(&(0..3).map(|c| (c == k) as u32).collect::<Vec<_>>());
        let a = GradedSubspace::span_reduce(f(), basis.clone(), &[e(0), e(1)]);
        let b = GradedSubspace::span_reduce(f(), basis.clone(), &[e(2)]);
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert!(a.intersect(&b).unwrap().is_zero());
        let other = GradedSubspace::zero(f(), degree_basis(2, 2));
        assert_eq!(a.intersect(&other), Err(Error::BasisMismatch));
        assert_eq!(a.normal_form(&SparseVec::from_sorted(vec![(7, 1)])), Err(Error::BasisMismatch));
    }

    #[test]
    fn left_kernel_finds_dependencies() {
        let field = f();
        let r0 = SparseVec::from_dense(&[1, 2, 0]);
        let r1 = SparseVec::from_dense(&[0, 1, 1]);
        let r2 = r0.add_scaled(3, &r1, &field);
        let k = left_kernel(field, 3, &[r0.clone(), r1.clone(), r2.clone()]);
        assert_eq!(k.len(), 1);
        let c = &k[0];
        let combo = r0.scale(c.get(0), &field).add_scaled(c.get(1), &r1, &field).add_scaled(c.get(2), &r2, &field);
        assert!(combo.is_zero());
    }

    fn dense_rank(field: PrimeField, mut m: Vec<Vec<u32>>) -> usize {
        let mut r = 0;
        let cols = m.first().map_or(0, |row| row.len());
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&k| m[k][c] != 0) else { continue };
            m.swap(r, p);
            let inv = field.inv(m[r][c]);
            let pivot = m[r].clone();
            for (k, row) in m.iter_mut().enumerate() {
                if k != r && row[c] != 0 {
                    let factor = field.mul(row[c], inv);
                    for (x, &pv) in row.iter_mut().zip(&pivot) {
                        *x = field.sub(*x, field.mul(factor, pv));
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
        // small entries with many zeros keep ranks interesting
        proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(0u32), 1 => 1u32..5, 1 => 32000u32..32003], cols), rows)
    }

    fn subspace(rows: &[Vec<u32>]) -> GradedSubspace {
        let basis = degree_basis(2, 2);
        let ncols = basis.len();
        let sparse: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_dense(&r[..ncols])).collect();
        GradedSubspace::span_reduce(f(), basis, &sparse)
    }

    proptest! {
        #[test]
        fn rank_matches_dense_elimination(m in matrix(7, 6)) {
            let sparse: Vec<SparseVec> = m.iter().map(|r| SparseVec::from_dense(r)).collect();
            prop_assert_eq!(rank(f(), 6, &sparse), dense_rank(f(), m));
        }

        #[test]
        fn rref_is_idempotent_and_canonical(m in matrix(6, 10)) {
            let s = subspace(&m);
            let again = GradedSubspace::span_reduce(f(), s.basis().clone(), s.rows());
            prop_assert_eq!(&again, &s);
            // a different insertion order gives the same reduced basis
            let mut rev = m.clone();
            rev.reverse();
            prop_assert_eq!(subspace(&rev), s.clone());
            for (k, row) in s.rows().iter().enumerate() {
                prop_assert_eq!(row.entries()[0].1, 1);
                for (j, other) in s.rows().iter().enumerate() {
                    if j != k {
                        prop_assert_eq!(other.get(s.pivots()[k]), 0);
                    }
                }
            }
            prop_assert!(s.pivots().windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn intersection_dimension_formula(a in matrix(5, 10), b in matrix(5, 10)) {
            let (sa, sb) = (subspace(&a), subspace(&b));
            let meet = sa.intersect(&sb).unwrap();
            let sum = sa.sum(&sb).unwrap();
            prop_assert_eq!(meet.dim() + sum.dim(), sa.dim() + sb.dim());
            prop_assert!(sa.contains_subspace(&meet).unwrap());
            prop_assert!(sb.contains_subspace(&meet).unwrap());
            prop_assert_eq!(sb.intersect(&sa).unwrap(), meet);
        }

        #[test]
        fn normal_form_splits_vectors(a in matrix(4, 10), v in proptest::collection::vec(0u32..32003, 10)) {
            let s = subspace(&a);
            let v = SparseVec::from_dense(&v);
            let nf = s.normal_form(&v).unwrap();
            prop_assert!(s.contains(&v.sub(&nf, &f())).unwrap());
            for &p in s.pivots() {
                prop_assert_eq!(nf.get(p), 0);
            }
            prop_assert_eq!(s.normal_form(&nf).unwrap(), nf);
        }
    }
}
