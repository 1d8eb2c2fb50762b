//! Test windows: periodized Gaussians, periodized hyperbolic secants and
//! the MONSTER perturbation of a Gaussian.

use crate::synthesis::{dense_frame_operator, hermitian_eigen};
use crate::error::{GaborError, Result};
use crate::lattice::GaborLattice;
use crate::signal::Signal;
use num_complex::Complex64;

const DROP_BELOW: f64 = 1e-20;

/// Σ_k h((l − kL)/√L) with the k-sum truncated once terms fall below 1e−20.
fn periodize(len: usize, h: impl Fn(f64) -> f64) -> Vec<f64> {
    let sl = (len as f64).sqrt();
    (0..len)
        .map(|l| {
            let at = |k: i64| h((l as f64 - (k * len as i64) as f64) / sl);
            let mut sum = at(0);
            // terms decrease monotonically for k ≥ 1 and k ≤ −1
            let mut k = 1;
            loop {
                let t = at(k);
                sum += t;
                if t < DROP_BELOW {
                    break;
                }
                k += 1;
            }
            let mut k = -1;
            loop {
                let t = at(k);
                sum += t;
                if t < DROP_BELOW {
                    break;
                }
                k -= 1;
            }
            sum
        })
        .collect()
}

fn unit(values: Vec<f64>) -> Signal {
    Signal::from_real(&values).normalized()
}

/// Periodized, sampled Gaussian φ_w^D, unit norm, centered at 0.
pub fn gaussian_window(len: usize, w: f64) -> Signal {
    assert!(w > 0.0, "width must be positive");
    unit(periodize(len, |x| (-std::f64::consts::PI * x * x / w).exp()))
}

/// Periodized, sampled hyperbolic secant ψ_w^D, normalized to unit norm.
pub fn sech_window(len: usize, w: f64) -> Signal {
    assert!(w > 0.0, "width must be positive");
    let s = std::f64::consts::PI / w.sqrt();
    unit(periodize(len, |x| 1.0 / (s * x).cosh()))
}

/// Eigenvalue clusters closer than this (relative to the largest) are merged.
const CLUSTER_TOL: f64 = 1e-10;
const SYMMETRY_THRESHOLD: f64 = 0.99;

/// 1 − (‖u − Ru‖ + ‖Im u‖)/‖u‖ after removing a global phase.
pub fn symmetry_score(u: &Signal) -> f64 {
    let nrm = u.norm();
    if nrm == 0.0 {
        return 0.0;
    }
    let s: Complex64 = u.values().iter().map(|z| z * z).sum();
    let phase = Complex64::from_polar(1.0, -s.arg() / 2.0);
    let v = u.scale(phase);
    let odd = v.distance(&v.reflect());
    let imag: f64 = v.values().iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    1.0 - (odd + imag) / nrm
}

/// φ_1^D with one singular value of its synthesis operator set to `sigma_real`.
///
/// Walks the eigenvalue clusters of the dense frame operator from the top and
/// uses the first whose projection of g is real and even. The whole cluster is
/// modified so the result stays a function of S applied to g.
pub fn monster_window(lattice: &GaborLattice, sigma_real: f64) -> Result<Signal> {
    if !(sigma_real > 0.0) {
        return Err(GaborError::InvalidArgument("sigma_real must be positive".into()));
    }
    let g = gaussian_window(lattice.len, 1.0);
    let s = dense_frame_operator(&g, lattice)?;
    let (vals, vecs) = hermitian_eigen(&s);
    let len = lattice.len;
    let top = vals.iter().cloned().fold(0.0, f64::max);
    if vals.iter().cloned().fold(f64::INFINITY, f64::min) <= 1e-13 * top {
        return Err(GaborError::NotAFrame { min: vals.iter().cloned().fold(f64::INFINITY, f64::min), max: top });
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());

    let mut best = 0.0f64;
    let mut start = 0;
    while start < len {
        let lambda = vals[order[start]];
        let mut end = start + 1;
        while end < len && (lambda - vals[order[end]]).abs() <= CLUSTER_TOL * top {
            end += 1;
        }
        // P_E g
        let mut proj = vec![Complex64::new(0.0, 0.0); len];
        for &idx in &order[start..end] {
            let col = vecs.column(idx);
            let coef: Complex64 = (0..len).map(|l| col[l].conj() * g.values()[l]).sum();
            for l in 0..len {
                proj[l] += col[l] * coef;
            }
        }
        let pg = Signal::new(proj);
        if pg.norm() > 1e-8 * g.norm() {
            let score = symmetry_score(&pg);
            best = best.max(score);
            if score > SYMMETRY_THRESHOLD {
                let sigma = lambda.sqrt();
                let t = sigma_real / sigma - 1.0;
                return Ok(&g + &pg.scale_real(t));
            }
        }
        start = end;
    }
    Err(GaborError::NoSymmetricEigenvector { score: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustfft::FftPlanner;

    fn unitary_dft(s: &Signal) -> Signal {
        let mut v = s.values().to_vec();
        FftPlanner::new().plan_fft_forward(v.len()).process(&mut v);
        let k = 1.0 / (v.len() as f64).sqrt();
        Signal::new(v.into_iter().map(|z| z * k).collect())
    }

    #[test]
    fn unit_norm_even_positive() {
        for len in [120, 432, 600, 97] {
            for w in [0.2, 1.0, 5.0] {
                for g in [gaussian_window(len, w), sech_window(len, w)] {
                    assert!((g.norm() - 1.0).abs() < 1e-10);
                    assert!(g.distance(&g.reflect()) < 1e-14);
                    assert!(g.values().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
                }
                assert!(sech_window(len, w).values().iter().all(|z| z.re > 0.0));
            }
        }
    }

    #[test]
    fn fourier_maps_w_to_inverse() {
        for len in [120, 144] {
            for w in [0.5, 1.0, 3.0] {
                let d = unitary_dft(&gaussian_window(len, w));
                assert!(d.distance(&gaussian_window(len, 1.0 / w)) < 1e-10);
                let d = unitary_dft(&sech_window(len, w));
                assert!(d.distance(&sech_window(len, 1.0 / w)) < 1e-10);
            }
        }
    }

    #[test]
    fn width_one_gaussian_is_fourier_invariant() {
        let g = gaussian_window(120, 1.0);
        assert!(unitary_dft(&g).distance(&g) < 1e-12);
    }

    #[test]
    fn symmetry_score_extremes() {
        let g = gaussian_window(64, 1.0);
        assert!(symmetry_score(&g.scale(Complex64::new(0.0, 1.0))) > 1.0 - 1e-12);
        let odd = Signal::from_real(
            &(0..64).map(|l| (std::f64::consts::PI * l as f64 / 32.0).sin()).collect::<Vec<_>>(),
        );
        assert!(symmetry_score(&odd) < 0.0);
    }
}
