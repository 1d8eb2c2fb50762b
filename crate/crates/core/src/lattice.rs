//! Lattice parameter arithmetic for finite Gabor systems.

use num_integer::gcd;

use crate::error::{GaborError, Result};

/// Integer parameters of the Gabor system (g, a, b) on C^L.
///
/// `m` modulations of step `b`, `n` translations of step `a`;
/// `c = gcd(a, m)`, `d = gcd(b, n)`, `p = a/c = b/d`, `q = m/c = n/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaborLattice {
    pub len: usize,
    pub a: usize,
    pub b: usize,
    pub m: usize,
    pub n: usize,
    pub c: usize,
    pub d: usize,
    pub p: usize,
    pub q: usize,
}

impl GaborLattice {
    pub fn new(len: usize, a: usize, b: usize) -> Result<Self> {
        if len == 0 || a == 0 || b == 0 {
            return Err(GaborError::InvalidLattice("parameters must be positive".into()));
        }
        if len % a != 0 || len % b != 0 {
            return Err(GaborError::InvalidLattice(format!(
                "a = {a} and b = {b} must divide L = {len}"
            )));
        }
        let m = len / b;
        let n = len / a;
        let c = gcd(a, m);
        let d = gcd(b, n);
        let p = a / c;
        let q = m / c;
        debug_assert_eq!(p, b / d);
        debug_assert_eq!(q, n / d);
        if p > q {
            return Err(GaborError::Undersampled { p, q });
        }
        Ok(Self { len, a, b, m, n, c, d, p, q })
    }

    /// Number of Zak blocks, c·d.
    pub fn blocks(&self) -> usize {
        self.c * self.d
    }

    /// Redundancy MN/L = q/p.
    pub fn redundancy(&self) -> f64 {
        self.q as f64 / self.p as f64
    }

    /// Diagonal constant of the Wexler–Raz relation, L/(MN).
    pub fn wexler_raz_constant(&self) -> f64 {
        self.len as f64 / (self.m * self.n) as f64
    }

    /// Scale factor cdq linking block Gram matrices to the frame operator.
    pub fn gram_factor(&self) -> f64 {
        (self.c * self.d * self.q) as f64
    }
}

/// Convenience wrapper matching the free-function form used in the CLI.
pub fn derive_lattice(len: usize, a: usize, b: usize) -> Result<GaborLattice> {
    GaborLattice::new(len, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standard_lattices() {
        let l = GaborLattice::new(432, 18, 18).unwrap();
        assert_eq!((l.m, l.n, l.c, l.d, l.p, l.q), (24, 24, 6, 6, 3, 4));
        assert_eq!(l.c * l.d * l.p * l.q, 432);
        let l = GaborLattice::new(600, 20, 20).unwrap();
        assert_eq!((l.m, l.n, l.c, l.d, l.p, l.q), (30, 30, 10, 10, 2, 3));
        let l = GaborLattice::new(16, 4, 4).unwrap();
        assert_eq!((l.m, l.n, l.c, l.d, l.p, l.q), (4, 4, 4, 4, 1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(GaborLattice::new(100, 7, 10), Err(GaborError::InvalidLattice(_))));
        assert!(matches!(GaborLattice::new(24, 6, 8), Err(GaborError::Undersampled { .. })));
        assert!(GaborLattice::new(0, 1, 1).is_err());
    }

    proptest! {
        #[test]
        fn invariants_hold(a in 1usize..24, b in 1usize..24, k in 1usize..12) {
            let len = num_integer::lcm(a, b) * k;
            if let Ok(l) = GaborLattice::new(len, a, b) {
                prop_assert_eq!(l.n * l.a, len);
                prop_assert_eq!(l.m * l.b, len);
                prop_assert_eq!(gcd(l.p, l.q), 1);
                prop_assert_eq!(l.c * l.d * l.p * l.q, len);
                prop_assert_eq!(l.b / l.d, l.p);
                prop_assert_eq!(l.n / l.d, l.q);
                prop_assert!(l.p <= l.q);
                // p/q is ab/L reduced
                let g = gcd(a * b, len);
                prop_assert_eq!((a * b / g, len / g), (l.p, l.q));
            }
        }
    }
}
