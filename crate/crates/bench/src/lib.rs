//! Fixtures shared by the benchmarks.

use gabiter_core::{factorize, gaussian_window, GaborLattice, Signal, ZakFactorization};

/// Gaussian window on the given lattice together with its factorization.
pub fn gaussian_fixture(len: usize, a: usize, b: usize, w: f64) -> (GaborLattice, Signal, ZakFactorization) {
    let lattice = GaborLattice::new(len, a, b).expect("valid lattice");
    let g = gaussian_window(len, w);
    let phi = factorize(&g, &lattice).expect("length matches");
    (lattice, g, phi)
}
