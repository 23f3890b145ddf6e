//! Monomials of `k[x_1..x_n, y_1..y_n]`, their gradings, and the monomial
//! bases of graded pieces.
//!
//! Exponents live in a fixed 32-slot array: `x_v` at slot `v - 1` and `y_v`
//! at slot `16 + v - 1`. Slots of vertices beyond `n` stay zero, so the
//! layout (and hence the order) does not depend on `n`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::graph::MAX_VERTICES;

/// Number of exponent slots.
pub const SLOTS: usize = 2 * MAX_VERTICES;

/// Slot of `x_v` (1-based vertex).
pub fn x_slot(v: usize) -> usize {
    v - 1
}

/// Slot of `y_v` (1-based vertex).
pub fn y_slot(v: usize) -> usize {
    MAX_VERTICES + v - 1
}

/// Vertex (1-based) owning an exponent slot.
pub fn slot_vertex(slot: usize) -> usize {
    slot % MAX_VERTICES + 1
}

pub fn is_x_slot(slot: usize) -> bool {
    slot < MAX_VERTICES
}

/// A monomial, ordered by graded reverse-lexicographic order with
/// `x_1 > ... > x_n > y_1 > ... > y_n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exp: [u8; SLOTS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exp: [0; SLOTS] }
    }

    pub fn from_slot(slot: usize) -> Self {
        let mut m = Self::one();
        m.exp[slot] = 1;
        m
    }

    pub fn x(v: usize) -> Self {
        Self::from_slot(x_slot(v))
    }

    pub fn y(v: usize) -> Self {
        Self::from_slot(y_slot(v))
    }

    /// Builds `x^xs y^ys` from per-vertex exponent slices (index 0 is vertex 1).
    pub fn from_exponents(xs: &[u8], ys: &[u8]) -> Result<Self> {
        if xs.len() > MAX_VERTICES || ys.len() > MAX_VERTICES {
            return Err(Error::input("too many exponents"));
        }
        let mut m = Self::one();
        m.exp[..xs.len()].copy_from_slice(xs);
        m.exp[MAX_VERTICES..MAX_VERTICES + ys.len()].copy_from_slice(ys);
        Ok(m)
    }

    pub fn exponent(&self, slot: usize) -> u8 {
        self.exp[slot]
    }

    pub fn exponents(&self) -> &[u8; SLOTS] {
        &self.exp
    }

    pub fn degree(&self) -> u32 {
        self.exp.iter().map(|&e| e as u32).sum()
    }

    /// Total x-degree and total y-degree.
    pub fn bidegree(&self) -> (u32, u32) {
        let x = self.exp[..MAX_VERTICES].iter().map(|&e| e as u32).sum();
        let y = self.exp[MAX_VERTICES..].iter().map(|&e| e as u32).sum();
        (x, y)
    }

    /// `a_v = exp(x_v) + exp(y_v)` for `v = 1..=n`.
    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        (1..=n).map(|v| self.exp[x_slot(v)] as u32 + self.exp[y_slot(v)] as u32).collect()
    }

    pub fn fine_degree(&self) -> FineDegree {
        let mut a = [0u8; MAX_VERTICES];
        for (v, slot) in a.iter_mut().enumerate() {
            *slot = self.exp[v] + self.exp[MAX_VERTICES + v];
        }
        FineDegree { a, b: self.bidegree().0 as u8 }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (e, o) in m.exp.iter_mut().zip(other.exp.iter()) {
            *e += o;
        }
        m
    }

    pub fn times_slot(&self, slot: usize) -> Monomial {
        let mut m = *self;
        m.exp[slot] += 1;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exp.iter().zip(other.exp.iter()).all(|(a, b)| a <= b)
    }

    /// The image under `x_v <-> y_v` for every vertex.
    pub fn swap_xy(&self) -> Monomial {
        let mut m = Self::one();
        m.exp[..MAX_VERTICES].copy_from_slice(&self.exp[MAX_VERTICES..]);
        m.exp[MAX_VERTICES..].copy_from_slice(&self.exp[..MAX_VERTICES]);
        m
    }

    /// Bitmask of vertices whose variables occur.
    pub fn vertex_mask(&self) -> u32 {
        let mut mask = 0;
        for v in 0..MAX_VERTICES {
            if self.exp[v] + self.exp[MAX_VERTICES + v] > 0 {
                mask |= 1 << v;
            }
        }
        mask
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for k in (0..SLOTS).rev() {
            match self.exp[k].cmp(&other.exp[k]) {
                Ordering::Equal => continue,
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for slot in 0..SLOTS {
            let e = self.exp[slot];
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = if is_x_slot(slot) { 'x' } else { 'y' };
            write!(f, "{name}{}", slot_vertex(slot))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// The finest grading the ideals here respect: the `N^n` multidegree `a`
/// together with the total x-degree `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FineDegree {
    pub a: [u8; MAX_VERTICES],
    pub b: u8,
}

impl FineDegree {
    pub fn zero() -> Self {
        FineDegree { a: [0; MAX_VERTICES], b: 0 }
    }

    pub fn total(&self) -> u32 {
        self.a.iter().map(|&e| e as u32).sum()
    }

    /// `(x-degree, y-degree)`.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.b as u32, self.total() - self.b as u32)
    }

    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        self.a[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn support(&self) -> u32 {
        self.a.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |m, (k, _)| m | (1 << k))
    }

    pub fn add(&self, other: &FineDegree) -> FineDegree {
        let mut d = *self;
        for (x, y) in d.a.iter_mut().zip(other.a.iter()) {
            *x += y;
        }
        d.b += other.b;
        d
    }

    /// `self - other` when `other` is the degree of a monomial dividing a
    /// monomial of degree `self`.
    pub fn checked_sub(&self, other: &FineDegree) -> Option<FineDegree> {
        let mut d = FineDegree::zero();
        for v in 0..MAX_VERTICES {
            d.a[v] = self.a[v].checked_sub(other.a[v])?;
        }
        d.b = self.b.checked_sub(other.b)?;
        if d.b as u32 > d.total() {
            return None;
        }
        Some(d)
    }

    /// Whether some monomial of degree `other` divides a monomial of this
    /// degree with a quotient of positive degree.
    pub fn strictly_above(&self, other: &FineDegree) -> bool {
        self != other && self.checked_sub(other).is_some()
    }

    /// Degree of the single variable in `slot`.
    pub fn of_slot(slot: usize) -> FineDegree {
        Monomial::from_slot(slot).fine_degree()
    }

    /// The degree reached by exchanging all x and y variables.
    pub fn swapped(&self) -> FineDegree {
        FineDegree { a: self.a, b: (self.total() - self.b as u32) as u8 }
    }

    /// Exterior degree of a set of variable slots.
    pub fn of_slot_set(mask: u32) -> FineDegree {
        let mut d = FineDegree::zero();
        let mut rest = mask;
        while rest != 0 {
            let slot = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            d.a[slot % MAX_VERTICES] += 1;
            if is_x_slot(slot) {
                d.b += 1;
            }
        }
        d
    }
}

/// Which piece of the ring a basis spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKey {
    /// All monomials of standard degree `d` in `2n` variables.
    Degree { n: usize, d: u32 },
    /// All monomials of one fine degree.
    Fine(FineDegree),
}

/// A monomial basis listed in decreasing monomial order, with a reverse index.
#[derive(Debug)]
pub struct MonomialBasis {
    key: BasisKey,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
}

impl MonomialBasis {
    fn from_monomials(key: BasisKey, mut monomials: Vec<Monomial>) -> Self {
        monomials.sort_unstable_by(|a, b| b.cmp(a));
        let index = monomials.iter().enumerate().map(|(k, m)| (*m, k as u32)).collect();
        MonomialBasis { key, monomials, index }
    }

    pub fn key(&self) -> BasisKey {
        self.key
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn get(&self, k: usize) -> Monomial {
        self.monomials[k]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).map(|&k| k as usize)
    }
}

/// All monomials of degree `d` in `2n` variables, decreasing.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    degree_basis(n, d).monomials.clone()
}

/// Shared basis of `R_d` for `2n` variables.
pub fn degree_basis(n: usize, d: u32) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<DashMap<(usize, u32), Arc<MonomialBasis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(b) = cache.get(&(n, d)) {
        return b.clone();
    }
    let slots: Vec<usize> = (1..=n).map(x_slot).chain((1..=n).map(y_slot)).collect();
    let mut out = Vec::new();
    let mut current = Monomial::one();
    distribute(&slots, d, &mut current, &mut out);
    let basis = Arc::new(MonomialBasis::from_monomials(BasisKey::Degree { n, d }, out));
    cache.entry((n, d)).or_insert(basis).clone()
}

fn distribute(slots: &[usize], left: u32, current: &mut Monomial, out: &mut Vec<Monomial>) {
    match slots.split_first() {
        None => {
            if left == 0 {
                out.push(*current);
            }
        }
        Some((&slot, rest)) => {
            for e in 0..=left {
                current.exp[slot] = e as u8;
                distribute(rest, left - e, current, out);
            }
            current.exp[slot] = 0;
        }
    }
}

/// Shared basis of the monomials of fine degree `d`, decreasing.
pub fn fine_basis(d: &FineDegree) -> Arc<MonomialBasis> {
    static CACHE: OnceLock<DashMap<FineDegree, Arc<MonomialBasis>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(b) = cache.get(d) {
        return b.clone();
    }
    let mut out = Vec::new();
    let mut current = Monomial::one();
    split_fine(d, 0, d.b as u32, &mut current, &mut out);
    let basis = Arc::new(MonomialBasis::from_monomials(BasisKey::Fine(*d), out));
    cache.entry(*d).or_insert(basis).clone()
}

fn split_fine(d: &FineDegree, v: usize, x_left: u32, current: &mut Monomial, out: &mut Vec<Monomial>) {
    if v == MAX_VERTICES {
        if x_left == 0 {
            out.push(*current);
        }
        return;
    }
    let a = d.a[v] as u32;
    let room: u32 = d.a[v + 1..].iter().map(|&e| e as u32).sum();
    let lo = x_left.saturating_sub(room);
    let hi = a.min(x_left);
    for c in lo..=hi {
        current.exp[v] = c as u8;
        current.exp[MAX_VERTICES + v] = (a - c) as u8;
        split_fine(d, v + 1, x_left - c, current, out);
    }
    current.exp[v] = 0;
    current.exp[MAX_VERTICES + v] = 0;
}

/// All fine degrees of standard degree `d` supported on the vertices of `mask`.
pub fn fine_degrees_of_degree(mask: u32, d: u32) -> Vec<FineDegree> {
    let vertices: Vec<usize> = (0..MAX_VERTICES).filter(|&v| mask & (1 << v) != 0).collect();
    let mut out = Vec::new();
    let mut current = FineDegree::zero();
    spread(&vertices, d, &mut current, &mut |a| {
        for b in 0..=d {
            out.push(FineDegree { a: a.a, b: b as u8 });
        }
    });
    out
}

fn spread(vertices: &[usize], left: u32, current: &mut FineDegree, emit: &mut dyn FnMut(&FineDegree)) {
    match vertices.split_first() {
        None => {
            if left == 0 {
                emit(current);
            }
        }
        Some((&v, rest)) => {
            for e in 0..=left {
                current.a[v] = e as u8;
                spread(rest, left - e, current, emit);
            }
            current.a[v] = 0;
        }
    }
}

/// A polynomial with integer coefficients, reduced into a field on use.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn from_terms<I: IntoIterator<Item = (Monomial, i64)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        Polynomial { terms: map }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_terms([(m, 1)])
    }

    /// The edge binomial `x_u y_v - x_v y_u`.
    pub fn edge_binomial(u: usize, v: usize) -> Self {
        Self::from_terms([(Monomial::x(u).mul(&Monomial::y(v)), 1), (Monomial::x(v).mul(&Monomial::y(u)), -1)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &i64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common fine degree of all terms, or `None` if the polynomial is
    /// zero or not fine-homogeneous.
    pub fn fine_degree(&self) -> Option<FineDegree> {
        let mut it = self.terms.keys().map(Monomial::fine_degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn times_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(t, c)| (t.mul(m), *c)).collect() }
    }

    pub fn swap_xy(&self) -> Polynomial {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.swap_xy(), *c)))
    }

    pub fn scale(&self, c: i64) -> Polynomial {
        Self::from_terms(self.terms.iter().map(|(m, d)| (*m, d * c)))
    }

    pub fn vertex_mask(&self) -> u32 {
        self.terms.keys().fold(0, |acc, m| acc | m.vertex_mask())
    }

    /// Coefficient row over `basis`; `None` if some term is outside it.
    pub fn to_row(&self, basis: &MonomialBasis, field: &PrimeField) -> Option<crate::linalg::SparseVec> {
        let mut entries = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let col = basis.index_of(m)? as u32;
            let v = field.from_i64(*c);
            if v != 0 {
                entries.push((col, v));
            }
        }
        entries.sort_unstable();
        Some(crate::linalg::SparseVec::from_sorted(entries))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            match (k, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
