//! Direct canonical-window methods on the block factorization.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::linalg::thin_svd;
use crate::zak::{block_gram, CMatrix, ZakFactorization, NOT_A_FRAME_TOL};

fn check_spectrum(min: f64, max: f64) -> Result<()> {
    if min > NOT_A_FRAME_TOL * max {
        Ok(())
    } else {
        Err(GaborError::NotAFrame { min, max })
    }
}

/// Φ^{g^t} = U D^{-1/2} U^* Φ^g with A^{gg} = U D U^* per block.
pub fn eig_tight(phi: &ZakFactorization) -> Result<ZakFactorization> {
    let a = block_gram(phi, phi)?.symmetrized();
    let eig: Vec<SymmetricEigen<Complex64, nalgebra::Dyn>> =
        a.blocks().par_iter().map(|b| b.clone().symmetric_eigen()).collect();
    let all = eig.iter().flat_map(|e| e.eigenvalues.iter().cloned());
    let (min, max) = all.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    check_spectrum(min, max)?;
    let blocks = eig
        .par_iter()
        .zip(phi.blocks())
        .map(|(e, x)| {
            let u = &e.eigenvectors;
            let d = CMatrix::from_diagonal(&e.eigenvalues.map(|v| Complex64::new(v.powf(-0.5), 0.0)));
            u * d * (u.adjoint() * x)
        })
        .collect();
    ZakFactorization::from_blocks(*phi.lattice(), blocks)
}

/// Φ^{g^t} = U V^* / √(cdq) per block from Φ^g = U Σ V^*.
pub fn svd_tight(phi: &ZakFactorization) -> Result<ZakFactorization> {
    let svds = phi.blocks().par_iter().map(thin_svd).collect::<Result<Vec<_>>>()?;
    let all = svds.iter().flat_map(|s| s.sigma.iter().map(|v| v * v));
    let (min, max) = all.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    check_spectrum(min, max)?;
    let k = Complex64::new(1.0 / phi.lattice().gram_factor().sqrt(), 0.0);
    let blocks = svds
        .into_iter()
        .map(|s| s.u * s.v_t * k)
        .collect();
    ZakFactorization::from_blocks(*phi.lattice(), blocks)
}

/// Φ^{g^d} = (A^{gg})^{-1} Φ^g via blockwise Cholesky.
pub fn inv_dual(phi: &ZakFactorization) -> Result<ZakFactorization> {
    let a = block_gram(phi, phi)?.symmetrized();
    let max = a.blocks().iter().map(|b| b.norm()).fold(0.0, f64::max);
    let blocks = a
        .blocks()
        .par_iter()
        .zip(phi.blocks())
        .map(|(b, x)| {
            let chol = b.clone().cholesky().ok_or(GaborError::NotAFrame { min: 0.0, max })?;
            // diagonal of L bounds the conditioning from below
            let l = chol.l_dirty();
            let dmin = (0..b.nrows()).map(|i| l[(i, i)].re.powi(2)).fold(f64::INFINITY, f64::min);
            check_spectrum(dmin, max)?;
            Ok(chol.solve(x))
        })
        .collect::<Result<Vec<_>>>()?;
    ZakFactorization::from_blocks(*phi.lattice(), blocks)
}

/// Direct methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectMethod {
    Eig,
    Svd,
    Inv,
}

/// Approximate real flop counts for the direct methods and for one step of
/// the iterations, excluding the transforms in and out of the Zak domain.
pub fn flop_estimate_direct(method: DirectMethod, lattice: &GaborLattice) -> f64 {
    let (l, p, cd) = (lattice.len as f64, lattice.p as f64, lattice.blocks() as f64);
    match method {
        DirectMethod::Inv => 16.0 * l * p + 4.0 / 3.0 * cd * p.powi(3),
        DirectMethod::Eig => 24.0 * l * p + 14.0 * cd * p.powi(3),
        DirectMethod::Svd => 64.0 * l * p + 32.0 * cd * p.powi(3),
    }
}

/// Per-step flop estimate for an iteration of the given order.
pub fn flop_estimate_step(algorithm: crate::iterations::Algorithm, lattice: &GaborLattice) -> f64 {
    use crate::iterations::Algorithm;
    let (l, p, cd) = (lattice.len as f64, lattice.p as f64, lattice.blocks() as f64);
    match algorithm {
        Algorithm::FrameInverse => 16.0 * l * p + 4.0 / 3.0 * cd * p.powi(3),
        Algorithm::Tight(m) => 8.0 * m as f64 * l * p,
        Algorithm::Dual(2) => 16.0 * l * p,
        Algorithm::Dual(m) => 8.0 * m as f64 * l * p + 8.0 * (m as f64 - 2.0) * cd * p.powi(3),
    }
}
