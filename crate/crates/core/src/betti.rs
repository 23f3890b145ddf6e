//! Betti tables, their invariants, and their text and JSON renderings.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// The range of `(i, j)` a computation is asked to cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub i_max: u32,
    pub j_max: u32,
}

impl Window {
    pub fn new(i_max: u32, j_max: u32) -> Self {
        Window { i_max, j_max }
    }

    /// Default window for a ring on `n` vertices: `i <= 2n`, `j <= 2n + 2`.
    pub fn for_vertices(n: usize) -> Self {
        Window { i_max: 2 * n as u32, j_max: 2 * n as u32 + 2 }
    }

    pub fn contains(&self, i: u32, j: u32) -> bool {
        i <= self.i_max && j <= self.j_max
    }
}

/// Graded Betti numbers `beta_{i,j}`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    window: Window,
    entries: BTreeMap<(u32, u32), u64>,
    truncated: bool,
}

/// Invariants read off a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableStats {
    /// `max { j - i : beta_{i,j} != 0 }`, `None` for the empty table.
    pub reg: Option<u32>,
    /// `max { i : beta_{i,j} != 0 }`, `None` for the empty table.
    pub pd: Option<u32>,
    /// Coefficients of `sum beta_{i,j} s^i t^j` as `(i, j, beta)`.
    pub betti_polynomial: Vec<(u32, u32, u64)>,
    /// `beta_i = sum_j beta_{i,j}` for `i = 0..=pd`.
    pub total_betti: Vec<u64>,
    /// Set when the table is truncated, so `reg`, `pd` and totals are
    /// only lower bounds.
    pub lower_bound: bool,
}

impl BettiTable {
    pub fn new(window: Window) -> Self {
        BettiTable { window, entries: BTreeMap::new(), truncated: false }
    }

    pub fn from_entries<I: IntoIterator<Item = ((u32, u32), u64)>>(window: Window, entries: I) -> Self {
        let mut t = Self::new(window);
        for ((i, j), b) in entries {
            t.add(i, j, b);
        }
        t
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn set_window(&mut self, window: Window) {
        self.window = window;
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn set_truncated(&mut self, truncated: bool) {
        self.truncated = truncated;
    }

    pub fn get(&self, i: u32, j: u32) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `beta_{i,j}` with `beta` of negative indices taken as zero.
    pub fn get_signed(&self, i: i64, j: i64) -> u64 {
        if i < 0 || j < 0 {
            0
        } else {
            self.get(i as u32, j as u32)
        }
    }

    pub fn set(&mut self, i: u32, j: u32, beta: u64) {
        if beta == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), beta);
        }
    }

    pub fn add(&mut self, i: u32, j: u32, beta: u64) {
        if beta > 0 {
            *self.entries.entry((i, j)).or_insert(0) += beta;
        }
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn reg(&self) -> Option<u32> {
        self.entries.keys().map(|&(i, j)| j - i).max()
    }

    pub fn pd(&self) -> Option<u32> {
        self.entries.keys().map(|&(i, _)| i).max()
    }

    /// `beta_i = sum_j beta_{i,j}`.
    pub fn total(&self, i: u32) -> u64 {
        self.entries.range((i, 0)..=(i, u32::MAX)).map(|(_, &v)| v).sum()
    }

    pub fn totals(&self) -> Vec<u64> {
        match self.pd() {
            None => Vec::new(),
            Some(pd) => (0..=pd).map(|i| self.total(i)).collect(),
        }
    }

    /// `beta_{i,i+r}` for `i = 0..=pd`.
    pub fn row(&self, r: u32) -> Vec<u64> {
        match self.pd() {
            None => Vec::new(),
            Some(pd) => (0..=pd).map(|i| self.get(i, i + r)).collect(),
        }
    }

    pub fn stats(&self) -> TableStats {
        TableStats {
            reg: self.reg(),
            pd: self.pd(),
            betti_polynomial: self.entries().map(|((i, j), b)| (i, j, b)).collect(),
            total_betti: self.totals(),
            lower_bound: self.truncated,
        }
    }

    /// Table of `R/I` from the table of `I`: `beta_{i+1,j}(R/I) = beta_{i,j}(I)`
    /// and `beta_{0,0}(R/I) = 1`.
    pub fn to_quotient(&self) -> BettiTable {
        let mut q = BettiTable::new(Window::new(self.window.i_max + 1, self.window.j_max));
        q.set(0, 0, 1);
        for ((i, j), b) in self.entries() {
            q.set(i + 1, j, b);
        }
        q.truncated = self.truncated;
        q
    }

    /// Inverse of [`BettiTable::to_quotient`]; the `(0, 0)` entry is dropped.
    pub fn from_quotient(q: &BettiTable) -> BettiTable {
        let mut t = BettiTable::new(Window::new(q.window.i_max.saturating_sub(1), q.window.j_max));
        for ((i, j), b) in q.entries() {
            if i > 0 {
                t.set(i - 1, j, b);
            }
        }
        t.truncated = q.truncated;
        t
    }

    /// Coefficientwise product of the Betti polynomials of two quotient tables.
    pub fn polynomial_product(&self, other: &BettiTable) -> Result<BettiTable> {
        if self.truncated || other.truncated {
            return Err(Error::Truncated("cannot multiply truncated Betti polynomials".into()));
        }
        let window = Window::new(self.window.i_max + other.window.i_max, self.window.j_max + other.window.j_max);
        let mut out = BettiTable::new(window);
        for ((i1, j1), b1) in self.entries() {
            for ((i2, j2), b2) in other.entries() {
                out.add(i1 + i2, j1 + j2, b1 * b2);
            }
        }
        Ok(out)
    }

    /// Entries with `(i, j)` inside `window`; the result is truncated if
    /// anything was dropped or the input already was.
    pub fn clipped(&self, window: Window) -> BettiTable {
        let mut t = BettiTable::new(window);
        let mut dropped = false;
        for ((i, j), b) in self.entries() {
            if window.contains(i, j) {
                t.set(i, j, b);
            } else {
                dropped = true;
            }
        }
        t.truncated = self.truncated || dropped;
        t
    }

    /// Same nonzero entries, ignoring windows and truncation flags.
    pub fn same_entries(&self, other: &BettiTable) -> bool {
        self.entries == other.entries
    }

    /// Text layout: a header of homological indices, a `total:` row, then
    /// one row `r:` per value of `j - i` holding `beta_{i,i+r}`. Zeros are
    /// printed as `.` and columns are right-aligned.
    pub fn render_text(&self) -> String {
        let Some(pd) = self.pd() else {
            return "zero ideal: all Betti numbers vanish\n".to_string();
        };
        let reg = self.reg().unwrap();
        let low = self.entries.keys().map(|&(i, j)| j - i).min().unwrap();
        let mut lines: Vec<(String, Vec<String>)> = Vec::new();
        lines.push((String::new(), (0..=pd).map(|i| i.to_string()).collect()));
        lines.push(("total:".into(), self.totals().iter().map(u64::to_string).collect()));
        for r in low..=reg {
            let cells = self.row(r).iter().map(|&b| if b == 0 { ".".to_string() } else { b.to_string() }).collect();
            lines.push((format!("{r}:"), cells));
        }
        let label = lines.iter().map(|l| l.0.len()).max().unwrap().max(6);
        let widths: Vec<usize> = (0..=pd as usize).map(|c| lines.iter().map(|l| l.1[c].len()).max().unwrap()).collect();
        let mut out = String::new();
        for (name, cells) in &lines {
            out.push_str(&format!("{name:>label$}"));
            for (cell, w) in cells.iter().zip(&widths) {
                out.push_str(&format!(" {cell:>w$}"));
            }
            out.push('\n');
        }
        if self.truncated {
            out.push_str("(truncated: entries beyond the window may be nonzero)\n");
        }
        out
    }

    /// JSON document describing the table of an ideal in a ring on `n` vertices.
    pub fn to_json(&self, n: usize, field: u32) -> serde_json::Value {
        #[derive(Serialize)]
        struct EntryJson {
            i: u32,
            j: u32,
            beta: u64,
        }
        #[derive(Serialize)]
        struct TableJson {
            n: usize,
            field: u32,
            window: Window,
            truncated: bool,
            entries: Vec<EntryJson>,
            reg: Option<u32>,
            pd: Option<u32>,
        }
        let doc = TableJson {
            n,
            field,
            window: self.window,
            truncated: self.truncated,
            entries: self.entries().map(|((i, j), beta)| EntryJson { i, j, beta }).collect(),
            reg: self.reg(),
            pd: self.pd(),
        };
        serde_json::to_value(doc).expect("table serializes")
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running_example_table() -> BettiTable {
        let rows: [(u32, [u64; 7]); 3] =
            [(2, [11, 12, 3, 0, 0, 0, 0]), (3, [0, 32, 62, 39, 8, 0, 0]), (4, [0, 0, 24, 64, 62, 26, 4])];
        let mut t = BettiTable::new(Window::for_vertices(7));
        for (r, row) in rows {
            for (i, &b) in row.iter().enumerate() {
                t.set(i as u32, i as u32 + r, b);
            }
        }
        t
    }

    #[test]
    fn stats_of_running_example() {
        let t = running_example_table();
        let s = t.stats();
        assert_eq!(s.reg, Some(4));
        assert_eq!(s.pd, Some(6));
        assert_eq!(s.total_betti, vec![11, 44, 89, 103, 70, 26, 4]);
        assert!(!s.lower_bound);
    }

    #[test]
    fn empty_table_stats() {
        let t = BettiTable::new(Window::new(4, 6));
        assert_eq!(t.reg(), None);
        assert_eq!(t.pd(), None);
        assert!(t.totals().is_empty());
    }

    #[test]
    fn renders_like_the_printed_table() {
        let text = running_example_table().render_text();
        let expected = [
            "        0  1  2   3  4  5 6",
            "total: 11 44 89 103 70 26 4",
            "    2: 11 12  3   .  .  . .",
            "    3:  . 32 62  39  8  . .",
            "    4:  .  . 24  64 62 26 4",
        ]
        .map(|l| format!("{l}\n"))
        .concat();
        assert_eq!(text, expected);
    }

    #[test]
    fn quotient_round_trip_and_products() {
        let mut edge = BettiTable::new(Window::new(2, 4));
        edge.set(0, 2, 1);
        let q = edge.to_quotient();
        assert_eq!(q.get(0, 0), 1);
        assert_eq!(q.get(1, 2), 1);
        assert_eq!(BettiTable::from_quotient(&q), edge);
        // (1 + s t^2)^2 is the table of the path on three vertices
        let p3 = BettiTable::from_quotient(&q.polynomial_product(&q).unwrap());
        assert_eq!(p3.get(0, 2), 2);
        assert_eq!(p3.get(1, 4), 1);
        assert_eq!(p3.entries().count(), 2);
        let unit = BettiTable::new(Window::new(0, 0)).to_quotient();
        assert!(q.polynomial_product(&unit).unwrap().same_entries(&q));
        let mut bad = q.clone();
        bad.set_truncated(true);
        assert!(q.polynomial_product(&bad).is_err());
    }

    #[test]
    fn json_schema() {
        let mut t = BettiTable::new(Window::new(2, 4));
        t.set(1, 4, 1);
        t.set(0, 2, 2);
        let v = t.to_json(3, 32003);
        assert_eq!(v["n"], 3);
        assert_eq!(v["field"], 32003);
        assert_eq!(v["window"]["i_max"], 2);
        assert_eq!(v["truncated"], false);
        assert_eq!(v["entries"][0]["i"], 0);
        assert_eq!(v["entries"][1]["beta"], 1);
        assert_eq!(v["reg"], 3);
        assert_eq!(v["pd"], 1);
    }
}
