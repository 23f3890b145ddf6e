//! Graded Betti numbers of binomial edge ideals.
//!
//! Two independent engines compute the Betti table of `J_G`: an exact
//! Koszul-homology computation over a prime field ([`koszul`]) and the
//! closed forms and recursions of [`formulas`]. The [`splitting`] module
//! compares Betti tables of `I = J + K` against `J`, `K` and `J ∩ K`.

pub mod betti;
pub mod error;
pub mod families;
pub mod field;
pub mod formulas;
pub mod graph;
pub mod ideal;
pub mod koszul;
pub mod linalg;
pub mod monomial;
pub mod splitting;
pub mod verify;

pub use betti::{BettiTable, TableStats, Window};
pub use error::{Error, Result};
pub use field::{PrimeField, DEFAULT_PRIME};
pub use graph::{Edge, FVector, Graph};
pub use ideal::IdealSpec;
pub use koszul::{betti_table, betti_table_multigraded, Grading, OracleOptions};

/// `C(a, b)`, taken to be zero when `a < b` or either argument is negative.
pub fn binomial(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 || a < b {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for k in 0..b {
        acc = acc * (a - k) as u128 / (k + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 2), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(17, 4), 2380);
    }
}
