//! Dense synthesis operator: the full L × MN matrix, SVD-based reference
//! windows, and the singular-value view of the iterations.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{GaborError, Result};
use crate::iterations::{optimal_scaling_constant, taylor_coeffs_dual, taylor_coeffs_tight, Algorithm, Scaling};
use crate::lattice::GaborLattice;
use crate::linalg::{singular_values, thin_svd};
use crate::signal::Signal;
use crate::zak::CMatrix;

/// Largest L accepted by the dense path.
pub const DENSE_LIMIT: usize = 2048;
/// Singular values below this fraction of σ_max count as zero.
pub const RANK_TOL: f64 = 1e-13;

fn guard(lattice: &GaborLattice, g: &Signal) -> Result<()> {
    if lattice.len > DENSE_LIMIT {
        return Err(GaborError::TooLarge { limit: DENSE_LIMIT, got: lattice.len });
    }
    if g.len() != lattice.len {
        return Err(GaborError::LengthMismatch { expected: lattice.len, got: g.len() });
    }
    Ok(())
}

/// O_g with column m + n·M equal to g shifted by n·a in time and m·b in frequency.
#[derive(Debug, Clone)]
pub struct SynthesisMatrix {
    lattice: GaborLattice,
    entries: CMatrix,
}

pub fn synthesis_matrix(g: &Signal, lattice: &GaborLattice) -> Result<SynthesisMatrix> {
    guard(lattice, g)?;
    let GaborLattice { len, a, b, m, n, .. } = *lattice;
    let mut entries = CMatrix::zeros(len, m * n);
    for nn in 0..n {
        for mm in 0..m {
            let atom = g.tf_shift((nn * a) as i64, (mm * b) as i64);
            entries.column_mut(mm + nn * m).copy_from_slice(atom.values());
        }
    }
    Ok(SynthesisMatrix { lattice: *lattice, entries })
}

impl SynthesisMatrix {
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn lattice(&self) -> &GaborLattice {
        &self.lattice
    }

    /// The window itself: column (m = 0, n = 0).
    pub fn window(&self) -> Signal {
        Signal::new(self.entries.column(0).iter().cloned().collect())
    }

    /// O O^*.
    pub fn frame_operator(&self) -> CMatrix {
        &self.entries * self.entries.adjoint()
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.entries).expect("dense SVD")
    }

    /// Number of singular values above `tol · σ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let s = self.singular_values();
        s.iter().filter(|&&x| x > tol * s[0]).count()
    }
}

/// Frame operator assembled directly: S(x, y) = M·[x ≡ y mod M]·Σ_n g(x − na)·conj(g(y − na)).
pub fn dense_frame_operator(g: &Signal, lattice: &GaborLattice) -> Result<CMatrix> {
    guard(lattice, g)?;
    let GaborLattice { len, a, m, n, .. } = *lattice;
    let mut s = CMatrix::zeros(len, len);
    let mf = Complex64::new(m as f64, 0.0);
    for x in 0..len {
        for y in (x % m..len).step_by(m) {
            let v: Complex64 = (0..n as i64)
                .map(|k| g.at(x as i64 - k * a as i64) * g.at(y as i64 - k * a as i64).conj())
                .sum();
            s[(x, y)] = v * mf;
        }
    }
    Ok(s)
}

/// Eigen-decomposition of a Hermitian matrix (symmetrized first). Uses the
/// real solver when the imaginary part is negligible.
pub fn hermitian_eigen(s: &CMatrix) -> (Vec<f64>, CMatrix) {
    let half = Complex64::new(0.5, 0.0);
    let h = (s + s.adjoint()) * half;
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let imag = h.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag <= 1e-12 * scale {
        let re = DMatrix::from_fn(h.nrows(), h.ncols(), |i, j| h[(i, j)].re);
        let eig = SymmetricEigen::new(re);
        let vecs = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues.iter().cloned().collect(), vecs)
    } else {
        let eig = SymmetricEigen::new(h);
        (eig.eigenvalues.iter().cloned().collect(), eig.eigenvectors)
    }
}

fn synthesis_svd(g: &Signal, lattice: &GaborLattice) -> Result<(CMatrix, Vec<f64>, CMatrix)> {
    let o = synthesis_matrix(g, lattice)?;
    let svd = thin_svd(&o.entries)?;
    let sv = svd.sigma;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > RANK_TOL * max) {
        return Err(GaborError::NotAFrame { min: min * min, max: max * max });
    }
    Ok((svd.u, sv, svd.v_t))
}

/// g^t = U V^* e₀ from the thin SVD O_g = U Σ V^*.
pub fn reference_tight(g: &Signal, lattice: &GaborLattice) -> Result<Signal> {
    let (u, _, vt) = synthesis_svd(g, lattice)?;
    let col = u * vt.column(0);
    Ok(Signal::new(col.iter().cloned().collect()))
}

/// g^d = U Σ^{-1} V^* e₀ = S^{-1} g.
pub fn reference_dual(g: &Signal, lattice: &GaborLattice) -> Result<Signal> {
    let (u, sv, vt) = synthesis_svd(g, lattice)?;
    let mut w = vt.column(0).clone_owned();
    for (i, s) in sv.iter().enumerate() {
        w[i] /= Complex64::new(*s, 0.0);
    }
    let col = u * w;
    Ok(Signal::new(col.iter().cloned().collect()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn tight_terms(sig: &[f64], m: usize, norm: bool) -> Vec<f64> {
    let a = taylor_coeffs_tight(m);
    let mut out = vec![0.0; sig.len()];
    for (j, aj) in a.iter().enumerate() {
        let term: Vec<f64> = sig.iter().map(|s| s.powi(2 * j as i32 + 1)).collect();
        let w = if norm { aj / norm2(&term) } else { *aj };
        out.iter_mut().zip(&term).for_each(|(o, t)| *o += w * t);
    }
    out
}

fn dual_terms(orig: &[f64], tau: &[f64], m: usize, norm: bool) -> Vec<f64> {
    let b = taylor_coeffs_dual(m);
    let mut out = vec![0.0; tau.len()];
    for (j, bj) in b.iter().enumerate() {
        let term: Vec<f64> = orig.iter().zip(tau).map(|(s, t)| (s * t).powi(j as i32) * t).collect();
        let w = if norm { bj / norm2(&term) } else { *bj };
        out.iter_mut().zip(&term).for_each(|(o, t)| *o += w * t);
    }
    out
}

fn bounds(sig: &[f64]) -> (f64, f64) {
    let sq = sig.iter().map(|s| s * s);
    (sq.clone().fold(f64::INFINITY, f64::min), sq.fold(0.0, f64::max))
}

fn z_bounds(orig: &[f64], tau: &[f64]) -> (f64, f64) {
    let z = orig.iter().zip(tau).map(|(s, t)| (s * t).abs());
    (z.clone().fold(f64::INFINITY, f64::min), z.fold(0.0, f64::max))
}

/// The iterations as scalar recursions on singular values.
///
/// For algorithm II with norm scaling this is
/// σ' = (3/2)σ/‖σ‖ − (1/2)σ³/‖σ³‖ with plain Euclidean norms of the vectors;
/// dual algorithms act on τ (singular values of the iterand) with the
/// original σ held fixed. Returns `steps + 1` vectors, the first being the
/// (possibly prescaled) input.
pub fn scalar_iteration(
    sigmas: &[f64],
    algorithm: Algorithm,
    scaling: Scaling,
    steps: usize,
) -> Result<Vec<Vec<f64>>> {
    if sigmas.iter().any(|&s| !(s > 0.0)) {
        return Err(GaborError::InvalidArgument("singular values must be positive".into()));
    }
    let (lo, hi) = bounds(sigmas);
    let prescale = match scaling {
        Scaling::Norm | Scaling::ConstantOptimal => 1.0,
        Scaling::Initial(bhat) => bhat,
        Scaling::InitialOptimal => optimal_scaling_constant(lo, hi, algorithm)?,
    };
    if matches!(algorithm, Algorithm::FrameInverse) && !matches!(scaling, Scaling::Norm) {
        return Err(GaborError::InvalidConfig("algorithm I supports norm scaling only".into()));
    }
    let orig: Vec<f64> = sigmas.iter().map(|s| s / prescale.sqrt()).collect();
    let norm = matches!(scaling, Scaling::Norm);
    let mut cur = orig.clone();
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        let next = match algorithm {
            Algorithm::FrameInverse => {
                let inv: Vec<f64> = cur.iter().map(|s| 1.0 / s).collect();
                let (n1, n2) = (norm2(&cur), norm2(&inv));
                cur.iter().zip(&inv).map(|(s, i)| 0.5 * s / n1 + 0.5 * i / n2).collect()
            }
            Algorithm::Tight(m) => {
                if matches!(scaling, Scaling::ConstantOptimal) {
                    let (a, b) = bounds(&cur);
                    let k = optimal_scaling_constant(a, b, algorithm)?.sqrt();
                    cur.iter_mut().for_each(|s| *s /= k);
                }
                tight_terms(&cur, m, norm)
            }
            Algorithm::Dual(m) => {
                if matches!(scaling, Scaling::ConstantOptimal) {
                    let (e, f) = z_bounds(&orig, &cur);
                    let k = optimal_scaling_constant(e, f, algorithm)?;
                    cur.iter_mut().for_each(|s| *s /= k);
                }
                dual_terms(&orig, &cur, m, norm)
            }
        };
        cur = next;
        out.push(cur.clone());
    }
    Ok(out)
}
