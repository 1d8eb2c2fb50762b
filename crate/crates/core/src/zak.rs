//! Finite discrete Zak transform and the block factorization of signals
//! and frame operators.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::signal::Signal;

pub type CMatrix = DMatrix<Complex64>;

/// Z_K h on the fundamental domain [0, K) × [0, L/K), row-major in r.
#[derive(Debug, Clone, PartialEq)]
pub struct ZakGrid {
    k: usize,
    len: usize,
    values: Vec<Complex64>,
}

impl ZakGrid {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of columns, L/K.
    pub fn cols(&self) -> usize {
        self.len / self.k
    }

    pub fn get(&self, r: usize, s: usize) -> Complex64 {
        self.values[r * self.cols() + s]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// (Z_K h)(r,s) = √(K/L) Σ_{l<L/K} h(r − lK) e^{2πi s l K / L}, via K FFTs of length L/K.
pub fn dzt(h: &Signal, k: usize) -> Result<ZakGrid> {
    let len = h.len();
    if k == 0 || len % k != 0 {
        return Err(GaborError::InvalidArgument(format!("K = {k} does not divide L = {len}")));
    }
    let n = len / k;
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let scale = (k as f64 / len as f64).sqrt();
    let mut values = Vec::with_capacity(len);
    for r in 0..k as i64 {
        values.extend((0..n as i64).map(|l| h.at(r - l * k as i64)));
    }
    fft.process(&mut values);
    values.iter_mut().for_each(|z| *z *= scale);
    Ok(ZakGrid { k, len, values })
}

/// Inverse of [`dzt`].
pub fn idzt(grid: &ZakGrid) -> Signal {
    let (k, len, n) = (grid.k, grid.len, grid.cols());
    let mut rows = grid.values.clone();
    FftPlanner::new().plan_fft_forward(n).process(&mut rows);
    let scale = 1.0 / (n as f64 * (k as f64 / len as f64).sqrt());
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for r in 0..k as i64 {
        for l in 0..n as i64 {
            let idx = (r - l * k as i64).rem_euclid(len as i64) as usize;
            out[idx] = rows[r as usize * n + l as usize] * scale;
        }
    }
    Signal::new(out)
}

/// Value of the Zak transform at any (r, s): quasi-periodic in r, periodic in s.
pub fn zak_extend(grid: &ZakGrid, r: i64, s: i64) -> Complex64 {
    let k = grid.k as i64;
    let n = grid.cols() as i64;
    let wraps = r.div_euclid(k);
    let r0 = r.rem_euclid(k) as usize;
    let s0 = s.rem_euclid(n);
    // e^{2πi·wraps·s·K/L} = e^{2πi·wraps·s/n}
    let phase = 2.0 * PI * ((wraps.rem_euclid(n) * s0) % n) as f64 / n as f64;
    Complex64::from_polar(1.0, phase) * grid.get(r0, s0 as usize)
}

/// c×d grid of p×q blocks Φ_{r,s}(k,l) = (Z_a f)(r + kM, s + ld).
///
/// The map f ↦ Φ^f is unitary (no extra constant).
#[derive(Debug, Clone, PartialEq)]
pub struct ZakFactorization {
    lattice: GaborLattice,
    blocks: Vec<CMatrix>,
}

/// c×d grid of p×p blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    lattice: GaborLattice,
    blocks: Vec<CMatrix>,
}

fn check_same(a: &GaborLattice, b: &GaborLattice) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(GaborError::LatticeMismatch)
    }
}

pub fn factorize(f: &Signal, lattice: &GaborLattice) -> Result<ZakFactorization> {
    if f.len() != lattice.len {
        return Err(GaborError::LengthMismatch { expected: lattice.len, got: f.len() });
    }
    let z = dzt(f, lattice.a)?;
    let GaborLattice { m, d, p, q, c, .. } = *lattice;
    let blocks = (0..c * d)
        .map(|idx| {
            let (r, s) = (idx / d, idx % d);
            CMatrix::from_fn(p, q, |k, l| zak_extend(&z, (r + k * m) as i64, (s + l * d) as i64))
        })
        .collect();
    Ok(ZakFactorization { lattice: *lattice, blocks })
}

pub fn unfactorize(phi: &ZakFactorization) -> Signal {
    let lat = &phi.lattice;
    let GaborLattice { len, a, m, n, c, d, p, q, .. } = *lat;
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    for r in 0..c {
        for s in 0..d {
            let blk = &phi.blocks[r * d + s];
            for k in 0..p {
                for l in 0..q {
                    let rr = r + k * m;
                    let ss = s + l * d;
                    let wraps = rr / a;
                    let phase = -2.0 * PI * ((wraps * ss) % n) as f64 / n as f64;
                    values[(rr % a) * n + ss] = blk[(k, l)] * Complex64::from_polar(1.0, phase);
                }
            }
        }
    }
    idzt(&ZakGrid { k: a, len, values })
}

impl ZakFactorization {
    pub fn from_blocks(lattice: GaborLattice, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != lattice.blocks()
            || blocks.iter().any(|b| b.nrows() != lattice.p || b.ncols() != lattice.q)
        {
            return Err(GaborError::InvalidArgument("block grid does not match lattice".into()));
        }
        Ok(Self { lattice, blocks })
    }

    pub fn zeros(lattice: &GaborLattice) -> Self {
        Self {
            lattice: *lattice,
            blocks: vec![CMatrix::zeros(lattice.p, lattice.q); lattice.blocks()],
        }
    }

    pub fn lattice(&self) -> &GaborLattice {
        &self.lattice
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// Block (r, s), row-major over the c×d grid.
    pub fn block(&self, r: usize, s: usize) -> &CMatrix {
        &self.blocks[r * self.lattice.d + s]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    /// Flattened Frobenius norm, equal to the ℓ² norm of the signal.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        self.map_blocks(|b| b * Complex64::new(t, 0.0))
    }

    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.norm())
    }

    /// α·self + β·other.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        check_same(&self.lattice, &other.lattice)?;
        let (ca, cb) = (Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0));
        let blocks = self
            .blocks
            .par_iter()
            .zip(&other.blocks)
            .map(|(x, y)| x * ca + y * cb)
            .collect();
        Ok(Self { lattice: self.lattice, blocks })
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(x, y)| (x - y).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    pub fn map_blocks(&self, f: impl Fn(&CMatrix) -> CMatrix + Sync + Send) -> Self {
        Self { lattice: self.lattice, blocks: self.blocks.par_iter().map(f).collect() }
    }

    pub fn try_map_blocks(&self, f: impl Fn(&CMatrix) -> Result<CMatrix> + Sync + Send) -> Result<Self> {
        let blocks = self.blocks.par_iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self { lattice: self.lattice, blocks })
    }

    pub fn to_signal(&self) -> Signal {
        unfactorize(self)
    }
}

impl BlockOperator {
    pub fn from_blocks(lattice: GaborLattice, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != lattice.blocks()
            || blocks.iter().any(|b| b.nrows() != lattice.p || b.ncols() != lattice.p)
        {
            return Err(GaborError::InvalidArgument("block grid does not match lattice".into()));
        }
        Ok(Self { lattice, blocks })
    }

    pub fn identity(lattice: &GaborLattice) -> Self {
        Self {
            lattice: *lattice,
            blocks: vec![CMatrix::identity(lattice.p, lattice.p); lattice.blocks()],
        }
    }

    pub fn lattice(&self) -> &GaborLattice {
        &self.lattice
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, r: usize, s: usize) -> &CMatrix {
        &self.blocks[r * self.lattice.d + s]
    }

    /// Blockwise product self·other.
    pub fn compose(&self, other: &BlockOperator) -> Result<BlockOperator> {
        check_same(&self.lattice, &other.lattice)?;
        let blocks = self.blocks.par_iter().zip(&other.blocks).map(|(x, y)| x * y).collect();
        Ok(BlockOperator { lattice: self.lattice, blocks })
    }

    /// Largest ‖A − A^*‖_F / ‖A‖_F over blocks.
    pub fn asymmetry(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let n = b.norm();
                if n == 0.0 {
                    0.0
                } else {
                    (b - b.adjoint()).norm() / n
                }
            })
            .fold(0.0, f64::max)
    }

    /// (A + A^*)/2 per block.
    pub fn symmetrized(&self) -> BlockOperator {
        let half = Complex64::new(0.5, 0.0);
        BlockOperator {
            lattice: self.lattice,
            blocks: self.blocks.par_iter().map(|b| (b + b.adjoint()) * half).collect(),
        }
    }

    /// Eigenvalues of the symmetrized blocks, concatenated in block order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.symmetrized()
            .blocks
            .par_iter()
            .flat_map_iter(|b| b.clone().symmetric_eigenvalues().iter().cloned().collect::<Vec<_>>())
            .collect()
    }

    /// Eigenvalues of the (generally non-Hermitian) blocks.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.blocks
            .par_iter()
            .flat_map_iter(block_eigenvalues)
            .collect()
    }
}

/// Complex Schur with a bounded iteration count; the default stopping rule
/// (ε = machine epsilon, unbounded) can cycle forever on Hermitian blocks.
fn block_eigenvalues(b: &CMatrix) -> Vec<Complex64> {
    [4.0 * f64::EPSILON, 1e-13, 1e-10]
        .iter()
        .find_map(|&eps| b.clone().try_schur(eps, 10_000))
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().cloned().collect())
        .unwrap_or_default()
}

/// A^{f,h}_{r,s} = cdq · Φ^f_{r,s} (Φ^h_{r,s})^*, so that A^{g,g} represents S_g.
pub fn block_gram(phi_f: &ZakFactorization, phi_h: &ZakFactorization) -> Result<BlockOperator> {
    check_same(&phi_f.lattice, &phi_h.lattice)?;
    let k = Complex64::new(phi_f.lattice.gram_factor(), 0.0);
    let blocks = phi_f
        .blocks
        .par_iter()
        .zip(&phi_h.blocks)
        .map(|(f, h)| (f * h.adjoint()) * k)
        .collect();
    Ok(BlockOperator { lattice: phi_f.lattice, blocks })
}

pub fn apply_block_operator(op: &BlockOperator, phi: &ZakFactorization) -> Result<ZakFactorization> {
    check_same(&op.lattice, &phi.lattice)?;
    let blocks = op.blocks.par_iter().zip(&phi.blocks).map(|(a, f)| a * f).collect();
    Ok(ZakFactorization { lattice: phi.lattice, blocks })
}

/// Lower/upper spectral bounds with their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub lower: f64,
    pub upper: f64,
    /// Lower bound not positive relative to the upper one (frame_bounds), or
    /// some eigenvalue with nonpositive real part (z_bounds).
    pub degenerate: bool,
    /// Some eigenvalue had |Im λ| / |Re λ| > 1e−6 (z_bounds only).
    pub complex_warning: bool,
}

impl SpectralSummary {
    /// lower/upper (Q for frame bounds, R for Z-bounds).
    pub fn ratio(&self) -> f64 {
        self.lower / self.upper
    }

    /// upper/lower, the condition number B/A.
    pub fn condition(&self) -> f64 {
        self.upper / self.lower
    }

    /// 1 − lower/upper.
    pub fn flatness_defect(&self) -> f64 {
        1.0 - self.ratio()
    }
}

/// Relative tolerance below which the lower bound counts as zero.
pub const NOT_A_FRAME_TOL: f64 = 1e-13;

/// Best frame bounds from the Hermitian block operator A^{g,g}.
pub fn frame_bounds(op: &BlockOperator) -> SpectralSummary {
    let ev = op.hermitian_eigenvalues();
    let lower = ev.iter().cloned().fold(f64::INFINITY, f64::min);
    let upper = ev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    SpectralSummary {
        lower,
        upper,
        degenerate: !(lower > NOT_A_FRAME_TOL * upper),
        complex_warning: false,
    }
}

/// Frame bounds of (g, a, b) computed through the factorization.
pub fn frame_bounds_of(g: &Signal, lattice: &GaborLattice) -> Result<SpectralSummary> {
    let phi = factorize(g, lattice)?;
    Ok(frame_bounds(&block_gram(&phi, &phi)?))
}
